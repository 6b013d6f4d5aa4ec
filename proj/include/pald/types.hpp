#pragma once

#include <cstdint>
#include <utility>

namespace pald {

/// Dense point index in 0..n-1. External string ids live alongside the data set.
using PointId = std::uint32_t;

/// Canonical key of an unordered pair {a, b}: smaller id in the high word.
constexpr std::uint64_t pair_key(PointId a, PointId b) noexcept {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

/// Key of the ordered pair (a, b).
constexpr std::uint64_t ordered_key(PointId a, PointId b) noexcept {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

constexpr PointId key_first(std::uint64_t key) noexcept { return static_cast<PointId>(key >> 32); }
constexpr PointId key_second(std::uint64_t key) noexcept {
  return static_cast<PointId>(key & 0xffffffffu);
}

}  // namespace pald
