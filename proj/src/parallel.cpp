#include "pald/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace pald {

namespace {
std::atomic<std::size_t> g_budget{0};

std::size_t resolve(std::size_t threads) noexcept {
  if (threads == 0) threads = g_budget.load(std::memory_order_relaxed);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return threads;
}
}  // namespace

void set_thread_budget(std::size_t threads) noexcept {
  g_budget.store(threads, std::memory_order_relaxed);
}

std::size_t thread_budget() noexcept { return resolve(0); }

std::size_t chunk_count(std::size_t count, std::size_t threads) noexcept {
  if (count == 0) return 0;
  return std::min(count, resolve(threads));
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                  std::size_t threads) {
  const std::size_t chunks = chunk_count(count, threads);
  if (chunks == 0) return;
  if (chunks == 1) {
    body(0, count, 0);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> workers;
  workers.reserve(chunks - 1);
  auto run = [&](std::size_t c) {
    const std::size_t begin = count * c / chunks;
    const std::size_t end = count * (c + 1) / chunks;
    try {
      body(begin, end, c);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  for (std::size_t c = 1; c < chunks; ++c) workers.emplace_back(run, c);
  run(0);
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace pald
