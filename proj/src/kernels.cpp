#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace pald::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(PALD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  const KernelTable* best = avx2_table();
  if (const char* env = std::getenv("PALD_SIMD")) {
    if (std::string_view(env) == "scalar") return &scalar_table();
  }
  return best != nullptr ? best : &scalar_table();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_table() noexcept { return detail::scalar_kernels(); }

const KernelTable* avx2_table() noexcept {
#if defined(PALD_HAVE_AVX2)
  if (cpu_has_avx2()) return &detail::avx2_kernels();
#endif
  return nullptr;
}

Isa detected_isa() noexcept { return avx2_table() != nullptr ? Isa::avx2 : Isa::scalar; }

const KernelTable& active() noexcept { return *active_slot().load(std::memory_order_acquire); }

void force_isa(Isa isa) noexcept {
  const KernelTable* table = &scalar_table();
  if (isa == Isa::avx2 && avx2_table() != nullptr) table = avx2_table();
  active_slot().store(table, std::memory_order_release);
}

}  // namespace pald::kernels
