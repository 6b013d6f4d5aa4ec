#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pald/errors.hpp"
#include "pald/pald.hpp"
#include "pald/pannld.hpp"

using namespace pald;

namespace {

PannldOptions with_k(std::size_t k) {
  PannldOptions o;
  o.k = k;
  return o;
}

void check_promoted_against_oracle(const RankingSystem& rs, const PannldRun& run) {
  const auto& g = run.graph;
  const auto& r = rs.ranks();
  const auto& foci = run.promoted.foci;
  const std::size_t n = g.size();
  for (PointId x = 0; x < n; ++x) {
    for (PointId y : g.neighbors(x)) {
      const auto s = g.slot(x, y);
      const auto want = oracle::promoted_left(r, g, x, y);
      auto got = foci.left(s);
      CHECK(std::vector<PointId>(got.begin(), got.end()) == want);
    }
  }
  std::size_t expected_connectors = 0;
  for (PointId a = 0; a < n; ++a)
    for (PointId b = a + 1; b < n; ++b) {
      if (g.is_promoted(a, b)) {
        CHECK(foci.find_connector(a, b) == nullptr);
        continue;
      }
      const auto lo = oracle::connector(r, g, a, b), hi = oracle::connector(r, g, b, a);
      const auto* c = foci.find_connector(a, b);
      if (lo.empty() && hi.empty()) {
        CHECK(c == nullptr);
        continue;
      }
      ++expected_connectors;
      REQUIRE(c != nullptr);
      CHECK(c->lo_first == lo);
      CHECK(c->hi_first == hi);
      CHECK(range_of_influence(g, foci, a, b) == oracle::range_of_influence(g, a, b));
    }
  CHECK(foci.connectors().size() == expected_connectors);

  const auto cp = oracle::promoted_cohesion(rs, g);
  for (const auto& [key, value] : cp)
    CHECK(std::abs(run.promoted.matrix.at(key.first, key.second) - value) < 1e-14);
}

}  // namespace

TEST_SUITE("pannld") {

TEST_CASE("promoted traversal equals the naive triple loop") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 6; ++i) {
    const std::size_t n = 10 + rng() % 40, k = 3 + rng() % 5;
    auto rs = (i % 2) ? gen_euclidean(n, 2, rng()) : gen_random_tournament(n, rng());
    check_promoted_against_oracle(rs, run_pannld(rs, with_k(k)));
  }
}

TEST_CASE("relegated sums equal brute force") {
  for (std::uint64_t seed : {3u, 4u}) {
    auto rs = gen_euclidean(45, 2, seed);
    for (auto mode : {PhiMode::exact, PhiMode::quadrature}) {
      PannldOptions o = with_k(4);
      o.phi_mode = mode;
      auto run = run_pannld(rs, o);
      PhiTable phi(rs.size(), mode);
      const auto gx = oracle::g_diagonal(run.graph, phi);
      const auto h = oracle::h_direct(run.graph, phi);
      for (PointId x = 0; x < rs.size(); ++x) {
        CHECK(run.g_x[x] == doctest::Approx(gx[x]).epsilon(1e-12));
        CHECK(run.partial.h[x] == doctest::Approx(h[x]).epsilon(1e-12));
        for (PointId v : run.graph.neighbors(x)) {
          const double want = oracle::g_pair(rs, run.graph, phi, gx, x, v);
          CHECK(std::abs(run.g_pair[run.graph.slot(x, v)] - want) < 1e-12);
        }
      }
      CHECK(run.tau.tau_r == doctest::Approx(oracle::tau_r_histogram(run.graph, phi)).epsilon(1e-12));
    }
  }
}

TEST_CASE("assembled cohesion is promoted plus relegated averages") {
  auto rs = gen_euclidean(30, 3, 5);
  auto run = run_pannld(rs, with_k(5));
  const double s = 1.0 / 29.0;
  for (PointId x = 0; x < 30; ++x) {
    CHECK(run.cohesion.at(x, x) == doctest::Approx(run.promoted.matrix.at(x, x) + s * run.g_x[x]));
    for (PointId v : run.graph.neighbors(x))
      CHECK(run.cohesion.at(x, v) ==
            doctest::Approx(run.promoted.matrix.at(x, v) + s * run.g_pair[run.graph.slot(x, v)]));
  }
  PointId far = 0;
  while (run.graph.is_promoted(0, far) || far == 0) ++far;
  CHECK_THROWS_AS(run.cohesion.at(0, far), DomainError);
  CHECK(run.tau.tau == doctest::Approx(run.cohesion.trace() / 60.0).epsilon(1e-12));
  CHECK(run.tau.tau == doctest::Approx(run.tau.tau_p + run.tau.tau_r).epsilon(1e-12));
}

TEST_CASE("G_x vanishes for a vertex promoted to everyone") {
  auto rs = gen_star(30);
  PannldOptions o = with_k(2);
  o.degree_cap = 100;
  auto run = run_pannld(rs, o);
  CHECK(run.g_x[0] == 0.0);
  CHECK(run.g_x[1] == 0.0);
  CHECK(run.g_x[5] > 0.0);
}

TEST_CASE("budgets hold and are reported") {
  for (std::size_t n : {100u, 400u}) {
    auto rs = gen_euclidean(n, 2, n);
    auto run = run_pannld(rs, with_k(8));
    const auto& d = run.diagnostics;
    CHECK(static_cast<double>(d.table_oracle_calls) <= d.call_budget);
    CHECK(static_cast<double>(d.algorithm_steps) <= d.step_budget);
    CHECK(d.table_oracle_calls == run.tables.oracle_calls());
  }
}

TEST_CASE("restricted tables agree with full ranks") {
  auto rs = gen_euclidean(40, 2, 6);
  auto run = run_pannld(rs, with_k(4));
  const auto& r = rs.ranks();
  for (PointId x = 0; x < 40; ++x) {
    auto row = run.graph.neighbors(x);
    for (PointId y : row)
      for (PointId z : row) {
        if (y == z) continue;
        CHECK((run.tables.rank(run.graph, x, y) < run.tables.rank(run.graph, x, z)) ==
              r.precedes(x, y, z));
      }
  }
  PointId far = 0;
  while (run.graph.is_promoted(0, far) || far == 0) ++far;
  CHECK_THROWS_AS(run.tables.rank(run.graph, 0, far), ConsistencyError);
}

TEST_CASE("no relegated pairs reproduces exact PaLD") {
  // K = n - 2 leaves each point one stranger; look for a tournament where those all
  // end up promoted from the other side
  bool found = false;
  for (std::uint64_t seed = 0; seed < 2000 && !found; ++seed) {
    auto rs = gen_random_tournament(12, seed);
    auto run = run_pannld(rs, with_k(10));
    if (run.graph.relegated_count() != 0) continue;
    found = true;
    auto ex = cohesion_matrix_exact(rs);
    for (PointId x = 0; x < 12; ++x)
      for (PointId v = 0; v < 12; ++v)
        CHECK(std::abs(run.cohesion.at(x, v) - ex.cohesion.at(x, v)) < 1e-12);
    CHECK(run.tau.tau_r == 0.0);
  }
  CHECK(found);
}

TEST_CASE("degree cap") {
  auto rs = gen_star(100);
  try {
    run_pannld(rs, with_k(2));
    FAIL("expected DegreeCapExceeded");
  } catch (const DegreeCapExceeded& e) {
    CHECK(e.cap() == 64);
    CHECK(e.vertices() == std::vector<std::uint32_t>{0, 1});
    CHECK(e.degrees() == std::vector<std::size_t>{100, 100});
  }
  CHECK(default_degree_cap(2) == 64);
  CHECK(default_degree_cap(10) == 160);
}

TEST_CASE("results do not depend on the thread count") {
  auto rs = gen_euclidean(200, 2, 77);
  PannldOptions a = with_k(6), b = with_k(6);
  a.threads = 1;
  b.threads = 5;
  auto r1 = run_pannld(rs, a), r2 = run_pannld(rs, b);
  auto v1 = r1.cohesion.sparse_values(), v2 = r2.cohesion.sparse_values();
  CHECK(std::equal(v1.begin(), v1.end(), v2.begin(), v2.end()));
  CHECK(r1.tau.tau == r2.tau.tau);
  CHECK(r1.clusters.labels == r2.clusters.labels);
  CHECK(r1.diagnostics.total_steps() == r2.diagnostics.total_steps());
}

}
