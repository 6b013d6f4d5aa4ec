#include "pald/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "pald/errors.hpp"
#include "pald/kernels.hpp"

namespace pald {

std::string to_string(PhiMode mode) {
  switch (mode) {
    case PhiMode::exact:
      return "exact";
    case PhiMode::quadrature:
      return "quadrature";
    case PhiMode::asymptotic:
      return "asymptotic";
  }
  return "exact";
}

PhiMode phi_mode_from_string(const std::string& s) {
  if (s == "exact") return PhiMode::exact;
  if (s == "quadrature") return PhiMode::quadrature;
  if (s == "asymptotic") return PhiMode::asymptotic;
  throw InputError("unknown phi mode '" + s + "' (expected exact, quadrature or asymptotic)");
}

double phi_limit(double c) {
  if (!(c > 1.0)) throw InputError("phi_limit needs c > 1");
  const double s = std::sqrt(c);
  return std::atanh(1.0 / s) / s;
}

namespace {

// P(Y = k) = C(N,k) * B(k+1, N-k+1/2) / 2. With j = N - k the weight is
// (1/2) N!/Gamma(N+3/2) * Gamma(j+1/2)/j!, and m + k = n - j.
double phi_exact(std::size_t n, std::size_t m) {
  const std::size_t big_n = n - m;
  const double pre = 0.5 * std::exp(std::lgamma(static_cast<double>(big_n) + 1.0) -
                                    std::lgamma(static_cast<double>(big_n) + 1.5));
  std::vector<double> w(big_n + 1);
  double r = std::sqrt(std::acos(-1.0));  // Gamma(1/2)
  w[0] = pre * r;
  for (std::size_t j = 1; j <= big_n; ++j) {
    r *= (static_cast<double>(j) - 0.5) / static_cast<double>(j);
    w[j] = pre * r;
  }
  return kernels::active().weighted_reciprocal_sum(w.data(), w.size(), static_cast<double>(n));
}

double phi_quadrature(std::size_t n, std::size_t m) {
  const std::size_t big_n = n - m;
  const double nn = static_cast<double>(big_n);
  // E[1/(m+Y)] at one node: pmf from the mode outwards by the ratio recurrence,
  // stopping once terms no longer register.
  auto inner = [&](double t) {
    const double p = 1.0 - t * t, q = t * t;
    boost::math::binomial_distribution<double> dist(nn, p);
    const std::size_t mode =
        std::min(big_n, static_cast<std::size_t>(std::floor((nn + 1.0) * p)));
    const double peak = boost::math::pdf(dist, static_cast<double>(mode));
    const double cutoff = peak * 1e-20;
    double s = peak / static_cast<double>(m + mode);
    double f = peak;
    for (std::size_t k = mode; k < big_n && f > cutoff; ++k) {
      f *= (nn - static_cast<double>(k)) / static_cast<double>(k + 1) * (p / q);
      s += f / static_cast<double>(m + k + 1);
    }
    f = peak;
    for (std::size_t k = mode; k > 0 && f > cutoff; --k) {
      f *= static_cast<double>(k) / (nn - static_cast<double>(k) + 1.0) * (q / p);
      s += f / static_cast<double>(m + k - 1);
    }
    return s;
  };
  return boost::math::quadrature::gauss<double, 64>::integrate(inner, 0.0, 1.0);
}

double phi_asymptotic(std::size_t n, std::size_t m) {
  const double c = static_cast<double>(n) / static_cast<double>(n - m);
  return std::sqrt(c) * std::atanh(1.0 / std::sqrt(c)) / static_cast<double>(n);
}

}  // namespace

double phi(std::size_t n, std::size_t m, PhiMode mode) {
  if (m < 2 || m > n) {
    std::ostringstream os;
    os << "phi_n(m) needs 2 <= m <= n (got n = " << n << ", m = " << m << ")";
    throw InputError(os.str());
  }
  if (m == n) return 1.0 / static_cast<double>(n);
  switch (mode) {
    case PhiMode::exact:
      return phi_exact(n, m);
    case PhiMode::quadrature:
      return phi_quadrature(n, m);
    case PhiMode::asymptotic:
      return phi_asymptotic(n, m);
  }
  return phi_exact(n, m);
}

PhiTable::PhiTable(std::size_t n, PhiMode mode)
    : n_(n), mode_(mode), memo_(n + 1, std::numeric_limits<double>::quiet_NaN()) {}

double PhiTable::operator()(std::size_t m) {
  if (m >= memo_.size()) return phi(n_, m, mode_);  // throws
  double& v = memo_[m];
  if (std::isnan(v)) {
    v = phi(n_, m, mode_);
    ++evaluated_;
  }
  return v;
}

}  // namespace pald
