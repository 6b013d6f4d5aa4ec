#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and, on x86-64,
// an AVX2 version; the active table is chosen once at startup from CPUID and can be
// pinned with PALD_SIMD=scalar|avx2 or force_isa(). Integer kernels and the element-wise
// double kernels are bit-identical across variants; reductions agree to rounding.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace pald::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;

  /// #{z < n : at_x[z] < limit && x_at[z] < y_at[z]}.
  /// With at_x = ranks in x's table, x_at[z] = rank of x at z, y_at[z] = rank of y at z
  /// and limit = rank of y at x, this is the left conflict focus size |U_{x||y}|.
  std::size_t (*count_left_focus)(const std::int32_t* at_x, std::int32_t limit,
                                  const std::int32_t* x_at, const std::int32_t* y_at,
                                  std::size_t n);

  /// row[z] += weight for every z selected by the same predicate.
  void (*add_left_focus)(const std::int32_t* at_x, std::int32_t limit, const std::int32_t* x_at,
                         const std::int32_t* y_at, double weight, double* row, std::size_t n);

  /// out[i] = sum_d (columns[d * n + i] - q[d])^2, columns stored dimension-major.
  void (*squared_distances)(const double* columns, std::size_t n, std::size_t dim,
                            const double* q, double* out);

  /// sum_j w[j] / (base - j) for j < len; base - j must stay positive.
  double (*weighted_reciprocal_sum)(const double* w, std::size_t len, double base);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

Isa detected_isa() noexcept;

/// The table used by the library.
const KernelTable& active() noexcept;

/// Pins the active table; falls back to scalar when the requested ISA is unavailable.
void force_isa(Isa isa) noexcept;

}  // namespace pald::kernels
