#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "pald/errors.hpp"
#include "pald/lab.hpp"
#include "pald/pald.hpp"

using namespace pald;

namespace {

PannldRun small_run(const RankingSystem& rs, std::size_t k) {
  PannldOptions o;
  o.k = k;
  return run_pannld(rs, o);
}

std::pair<PointId, PointId> some_relegated(const NeighborGraph& g) {
  for (PointId a = 0; a < g.size(); ++a)
    for (PointId b = a + 1; b < g.size(); ++b)
      if (!g.is_promoted(a, b)) return {a, b};
  return {0, 0};
}

double simpson(double (*f)(double, double), double c, int steps) {
  const double h = 1.0 / steps;
  double s = f(0.0, c) + f(1.0, c);
  for (int i = 1; i < steps; ++i) s += f(i * h, c) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

}  // namespace

TEST_SUITE("lab") {

TEST_CASE("eta is keyed, symmetric and pinnable") {
  EtaSample a(5), b(5), c(6);
  CHECK(a(3, 9) == a(9, 3));
  CHECK(a(3, 9) == b(3, 9));
  CHECK(a(3, 9) != c(3, 9));
  a.pin(9, 3, 0.25);
  CHECK(a(3, 9) == 0.25);
  CHECK(a(3, 8) == b(3, 8));
  CHECK_THROWS_AS(a.pin(1, 1, 0.5), InputError);
  CHECK_THROWS_AS(a.pin(1, 2, 1.0), InputError);

  // neighboring pairs are uncorrelated
  RunningStats sx, sy;
  double sxy = 0.0;
  for (PointId i = 0; i < 10000; ++i) {
    const double u = b(i, i + 1), v = b(i + 1, i + 2);
    sx.add(u);
    sy.add(v);
    sxy += u * v;
  }
  const double cov = sxy / 10000 - sx.mean() * sy.mean();
  CHECK(std::abs(cov / std::sqrt(sx.variance() * sy.variance())) < 0.05);
}

TEST_CASE("relegated focus structure") {
  auto rs = gen_euclidean(25, 2, 3);
  auto run = small_run(rs, 4);
  const auto& g = run.graph;
  auto [x, y] = some_relegated(g);
  EtaSample eta(1);
  auto left = relegated_left_focus_direct(rs, g, eta, x, y);
  auto right = relegated_left_focus_direct(rs, g, eta, y, x);
  auto both = relegated_focus_direct(rs, g, eta, x, y);
  std::vector<PointId> merged;
  std::merge(left.begin(), left.end(), right.begin(), right.end(), std::back_inserter(merged));
  CHECK(merged == both);
  const auto m = range_of_influence(g, run.promoted.foci, x, y);
  CHECK(both.size() >= m);
  eta.pin(x, y, 1e-12);
  CHECK(relegated_focus_direct(rs, g, eta, x, y).size() == m);
  const PointId a = g.neighbors(x)[0];
  CHECK_THROWS_AS(relegated_focus_direct(rs, g, eta, x, a), InputError);
}

TEST_CASE("per-sample diagonal and off-diagonal identities") {
  auto rs = gen_euclidean(18, 2, 8);
  auto run = small_run(rs, 3);
  const auto& g = run.graph;
  const std::size_t n = 18;
  for (std::uint64_t s = 0; s < 5; ++s) {
    EtaSample eta(s);
    auto cr = random_cohesion_direct(rs, g, eta);
    for (PointId x = 0; x < n; ++x) {
      double diag = 0.0;
      std::vector<double> miss(n, 0.0);
      for (PointId y = 0; y < n; ++y) {
        if (y == x || g.is_promoted(x, y)) continue;
        const double w = 1.0 / static_cast<double>(relegated_focus_direct(rs, g, eta, x, y).size());
        diag += w;
        auto left = relegated_left_focus_direct(rs, g, eta, x, y);
        for (PointId v : g.neighbors(x))
          if (!std::binary_search(left.begin(), left.end(), v)) miss[v] += w;
      }
      CHECK(std::abs(cr.at(x, x) - diag / (n - 1)) < 1e-14);
      for (PointId v : g.neighbors(x))
        CHECK(std::abs(cr.at(x, v) - (diag - miss[v]) / (n - 1)) < 1e-14);
    }
  }
}

TEST_CASE("randomized system reproduces promoted plus random cohesion") {
  auto rs = gen_euclidean(16, 2, 4);
  auto run = small_run(rs, 3);
  const auto& g = run.graph;
  for (std::uint64_t s : {1u, 2u, 3u}) {
    EtaSample eta(s);
    auto sys = randomized_system(rs, g, eta);
    const auto& r = sys.ranks();
    for (PointId x = 0; x < 16; ++x)
      for (PointId y = 0; y < 16; ++y)
        for (PointId z = 0; z < 16; ++z) {
          if (y == z) continue;
          CHECK((r.precedes(x, y, z) ? -1 : 1) == randomized_compare(rs, g, eta, x, y, z));
        }
    auto ex = cohesion_matrix_exact(sys);
    auto cr = random_cohesion_direct(rs, g, eta);
    for (PointId x = 0; x < 16; ++x) {
      CHECK(std::abs(ex.cohesion.at(x, x) - run.promoted.matrix.at(x, x) - cr.at(x, x)) < 1e-13);
      for (PointId v : g.neighbors(x))
        CHECK(std::abs(ex.cohesion.at(x, v) - run.promoted.matrix.at(x, v) - cr.at(x, v)) < 1e-13);
    }
  }
}

TEST_CASE("limiting variance by quadrature") {
  auto a = [](double u, double c) { return 1.0 / ((c - u * u) * (c - u * u)); };
  auto b = [](double t, double c) { return 1.0 / (c - t * t); };
  for (double c : {1.5, 2.0, 4.0}) {
    const double i1 = simpson(a, c, 2000), i2 = simpson(b, c, 2000);
    CHECK(limit_variance(c) == doctest::Approx(i1 - i2 * i2).epsilon(1e-9));
    CHECK(phi_limit(c) == doctest::Approx(i2).epsilon(1e-9));
  }
}

TEST_CASE("small Monte Carlo suites pass") {
  auto rs = gen_euclidean(12, 2, 21);
  auto run = small_run(rs, 3);
  auto means = mc_relegated_means(rs, run, 3000, 7);
  CHECK(means.reports.size() > 10);
  const auto v = family_verdict(means);
  CHECK(v.tests == means.reports.size());
  CHECK(v.pass);
  CHECK(family_sigma(1) == 3.0);
  CHECK(family_sigma(264) == doctest::Approx(4.37).epsilon(0.01));
  auto bin = mc_binomial(rs, run, 2000, 7);
  CHECK(bin.pass());
  auto lim = mc_limit(400, 200, 20000, 3);
  CHECK(lim.pass());
}

TEST_CASE("three-point semantics diagnostics") {
  auto rs = from_points({0.0, 1.0, 3.0}, 1);
  auto d = semantics_diagnostics(rs);
  CHECK(std::abs(d.depth_ratio - 6.0 / 7.0) < 1e-12);
  CHECK(std::abs(d.display_ratio - 0.5) < 1e-12);
  CHECK(std::abs(d.tau - 7.0 / 36.0) < 1e-12);
  CHECK(d.max_form_gap < 1e-14);
  auto suite = mc_pald_semantics(rs, 4000, 1);
  CHECK(suite.pass());
}

TEST_CASE("guards") {
  auto rs = gen_euclidean(12, 2, 21);
  auto run = small_run(rs, 3);
  CHECK_THROWS_AS(mc_binomial(rs, run, 10, 1), InputError);
  CHECK_THROWS_AS(mc_concentration(rs, run, 10, 0.5, 1), InputError);
  CHECK_THROWS_AS(mc_pald_semantics(gen_euclidean(41, 2, 1), 100, 1), InputError);
}

}
