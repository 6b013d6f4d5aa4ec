#include <cmath>
#include <vector>

#include "doctest.h"
#include "pald/stats.hpp"

using namespace pald;

TEST_SUITE("stats") {

TEST_CASE("running stats and merge") {
  RunningStats a, b, all;
  for (int i = 1; i <= 10; ++i) {
    (i <= 4 ? a : b).add(i);
    all.add(i);
  }
  a.merge(b);
  CHECK(a.count() == 10);
  CHECK(a.mean() == doctest::Approx(5.5));
  CHECK(a.variance() == doctest::Approx(all.variance()));
  CHECK(all.variance() == doctest::Approx(55.0 / 6.0));
  CHECK(all.standard_error() == doctest::Approx(std::sqrt(55.0 / 60.0)));
  RunningStats one;
  one.add(3);
  CHECK(one.variance() == 0.0);
}

TEST_CASE("adjusted rand index") {
  std::vector<int> a{0, 0, 0, 1, 1, 1}, b{5, 5, 5, 2, 2, 2}, c{0, 1, 0, 1, 0, 1};
  CHECK(adjusted_rand_index(a, b) == doctest::Approx(1.0));
  CHECK(adjusted_rand_index(a, c) < 0.1);
  // sklearn: adjusted_rand_score([0,0,1,1],[0,0,1,2]) = 0.5714285714
  std::vector<int> d{0, 0, 1, 1}, e{0, 0, 1, 2};
  CHECK(adjusted_rand_index(d, e) == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("chi-square goodness of fit") {
  std::vector<double> e{25, 25, 25, 25}, o{25, 25, 25, 25};
  auto r = chi_square_gof(o, e);
  CHECK(r.statistic == 0.0);
  CHECK(r.dof == 3);
  CHECK(r.p_value == doctest::Approx(1.0));
  std::vector<double> o2{40, 20, 20, 20};
  auto r2 = chi_square_gof(o2, e);
  CHECK(r2.statistic == doctest::Approx(12.0));
  // scipy.stats.chi2.sf(12, 3)
  CHECK(r2.p_value == doctest::Approx(0.0073832).epsilon(1e-4));
  // pooling: tiny tail bins merge into their neighbor
  std::vector<double> e3{50, 45, 3, 2}, o3{50, 45, 4, 1};
  auto r3 = chi_square_gof(o3, e3);
  CHECK(r3.bins == 3);
  CHECK(r3.dof == 2);
}

TEST_CASE("log-log slope") {
  std::vector<double> x{10, 100, 1000}, y{3, 300, 30000};
  CHECK(log_log_slope(x, y) == doctest::Approx(2.0));
}

}
