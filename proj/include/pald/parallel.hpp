#pragma once

#include <cstddef>
#include <functional>

namespace pald {

/// Worker budget shared by the library; 0 means hardware concurrency.
void set_thread_budget(std::size_t threads) noexcept;
std::size_t thread_budget() noexcept;

/// Splits [0, count) into contiguous chunks, one per worker, and runs
/// body(begin, end, chunk) on each. Chunk boundaries depend only on count and the
/// worker count, so per-chunk results merged in chunk order are deterministic.
/// Exceptions from workers are rethrown (first chunk wins).
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                  std::size_t threads = 0);

/// Number of chunks parallel_for will use for this count and budget.
std::size_t chunk_count(std::size_t count, std::size_t threads = 0) noexcept;

}  // namespace pald
