#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pald {

enum class PhiMode { exact, quadrature, asymptotic };

std::string to_string(PhiMode mode);
PhiMode phi_mode_from_string(const std::string& s);

/// phi_n(m) = E[1 / (m + Y)], Y | t ~ Binomial(n - m, 1 - t^2), t ~ Uniform(0, 1).
/// The expected reciprocal size of a relegated conflict focus with range of influence m.
/// Requires 2 <= m <= n.
double phi(std::size_t n, std::size_t m, PhiMode mode = PhiMode::exact);

/// Limit of (n - m) phi_n(m) for n / (n - m) -> c: arccoth(sqrt c) / sqrt c.
double phi_limit(double c);

/// Memoized phi_n(.) for one n. Not thread-safe while filling; fill first, then share.
class PhiTable {
 public:
  PhiTable(std::size_t n, PhiMode mode);

  std::size_t n() const noexcept { return n_; }
  PhiMode mode() const noexcept { return mode_; }

  double operator()(std::size_t m);
  /// Number of distinct m evaluated so far.
  std::size_t evaluated() const noexcept { return evaluated_; }

 private:
  std::size_t n_;
  PhiMode mode_;
  std::vector<double> memo_;
  std::size_t evaluated_ = 0;
};

}  // namespace pald
