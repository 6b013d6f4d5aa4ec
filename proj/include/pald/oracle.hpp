#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pald/types.hpp"

namespace pald {

/// Triplet comparison oracle: compare(x; y, z) < 0 when y is more similar to x than z is.
///
/// Implementations answer through raw_compare(); the public compare() validates ids,
/// normalizes the answer to a sign and counts the call. Concurrent read-only queries are
/// allowed. Hot loops should go through a Session, which counts locally and merges into
/// the shared counter once.
class TripletOracle {
 public:
  class Session;

  virtual ~TripletOracle() = default;

  virtual std::size_t size() const = 0;

  int compare(PointId x, PointId y, PointId z) const;

  /// Total number of answered queries so far; never decreases.
  std::uint64_t calls() const noexcept { return calls_.load(std::memory_order_relaxed); }

  /// Fills out[z] with a dissimilarity from x whose ascending order (ties by index)
  /// reproduces compare(x; ., .). Returns false for oracles without a numeric form.
  /// Not counted as oracle calls.
  virtual bool dissimilarities_from(PointId x, std::span<double> out) const;

  virtual std::string describe() const = 0;

 protected:
  virtual int raw_compare(PointId x, PointId y, PointId z) const = 0;

 private:
  void check_ids(PointId x, PointId y, PointId z) const;

  mutable std::atomic<std::uint64_t> calls_{0};
};

class TripletOracle::Session {
 public:
  explicit Session(const TripletOracle& oracle) : oracle_(oracle) {}
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;
  ~Session() { flush(); }

  int compare(PointId x, PointId y, PointId z);

  std::uint64_t local_calls() const noexcept { return local_; }
  std::uint64_t merged_calls() const noexcept { return merged_; }
  void flush() noexcept;

 private:
  const TripletOracle& oracle_;
  std::uint64_t local_ = 0;
  std::uint64_t merged_ = 0;
};

/// Euclidean points; ties broken by ascending point index.
class EuclideanOracle final : public TripletOracle {
 public:
  /// coords is row-major n x dim.
  EuclideanOracle(std::vector<double> coords, std::size_t dim);

  std::size_t size() const override { return n_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<double>& coords() const noexcept { return coords_; }
  double squared_distance(PointId a, PointId b) const;

  bool dissimilarities_from(PointId x, std::span<double> out) const override;
  std::string describe() const override;

 protected:
  int raw_compare(PointId x, PointId y, PointId z) const override;

 private:
  std::size_t n_;
  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<double> columns_;  // dim x n, for the vectorized distance kernel
};

/// Row i of the matrix is the dissimilarity-from-i view; need not be symmetric.
class DistanceMatrixOracle final : public TripletOracle {
 public:
  DistanceMatrixOracle(std::vector<double> values, std::size_t n);

  std::size_t size() const override { return n_; }
  double at(PointId x, PointId y) const { return values_[static_cast<std::size_t>(x) * n_ + y]; }

  bool dissimilarities_from(PointId x, std::span<double> out) const override;
  std::string describe() const override;

 protected:
  int raw_compare(PointId x, PointId y, PointId z) const override;

 private:
  std::size_t n_;
  std::vector<double> values_;
};

/// Answers from an n x n rank matrix: rank(x, x) = 0, others a permutation of 1..n-1.
class RankMatrixOracle final : public TripletOracle {
 public:
  RankMatrixOracle(std::vector<std::int32_t> ranks, std::size_t n);

  std::size_t size() const override { return n_; }
  std::int32_t rank(PointId x, PointId y) const {
    return ranks_[static_cast<std::size_t>(x) * n_ + y];
  }
  const std::vector<std::int32_t>& ranks() const noexcept { return ranks_; }

  bool dissimilarities_from(PointId x, std::span<double> out) const override;
  std::string describe() const override;

 protected:
  int raw_compare(PointId x, PointId y, PointId z) const override;

 private:
  std::size_t n_;
  std::vector<std::int32_t> ranks_;
};

}  // namespace pald
