#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pald {

/// Welford accumulator.
class RunningStats {
 public:
  void add(double v) noexcept;
  void merge(const RunningStats& other) noexcept;

  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance (0 for fewer than two samples).
  double variance() const noexcept;
  double standard_error() const noexcept;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Adjusted Rand index of two labelings of the same points.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;  // after pooling
};

/// Pearson goodness of fit. Adjacent bins are pooled until each expected count reaches
/// min_expected; degrees of freedom = pooled bins - 1.
ChiSquareResult chi_square_gof(std::span<const double> observed, std::span<const double> expected,
                               double min_expected = 5.0);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace pald
