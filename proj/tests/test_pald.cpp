#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "pald/errors.hpp"
#include "pald/pald.hpp"

using namespace pald;

namespace {

RankingSystem three_point() { return from_points({0.0, 1.0, 3.0}, 1); }

void check_matches_brute(const RankingSystem& rs) {
  auto ex = cohesion_matrix_exact(rs);
  auto bf = oracle::cohesion(rs);
  const std::size_t n = rs.size();
  for (PointId x = 0; x < n; ++x)
    for (PointId v = 0; v < n; ++v) CHECK(ex.cohesion.at(x, v) == doctest::Approx(bf.at(x, v)).epsilon(1e-13));
  for (PointId x = 0; x < n; ++x)
    for (PointId y = 0; y < n; ++y) {
      if (x == y) continue;
      CHECK(ex.foci.left(x, y) == oracle::left_focus(rs.ranks(), x, y).size());
    }
}

}  // namespace

TEST_SUITE("pald") {

TEST_CASE("three-point line hand values") {
  auto run = run_pald(three_point());
  const auto& c = run.exact.cohesion;
  CHECK(std::abs(c.at(0, 0) - 5.0 / 12) < 1e-12);
  CHECK(std::abs(c.at(2, 2) - 1.0 / 3) < 1e-12);
  CHECK(std::abs(c.at(0, 1) - 1.0 / 6) < 1e-12);
  CHECK(std::abs(run.tau - 7.0 / 36) < 1e-12);
  CHECK(std::abs(run.depth[0] - 7.0 / 12) < 1e-12);
  CHECK(std::abs(run.depth[2] - 1.0 / 3) < 1e-12);
}

TEST_CASE("conflict focus on the line") {
  auto rs = three_point();
  auto f = conflict_focus(rs, 0, 2);
  CHECK(f.left == std::vector<PointId>{0, 1});
  CHECK(f.right == std::vector<PointId>{2});
  CHECK(f.size() == 3);
  CHECK_THROWS_AS(conflict_focus(rs, 1, 1), InputError);
}

TEST_CASE("exact cohesion equals the definition") {
  check_matches_brute(gen_euclidean(30, 2, 4));
  check_matches_brute(gen_star(12));
}

TEST_CASE("non-concordant input still matches the definition") {
  check_matches_brute(gen_random_tournament(25, 6));
}

TEST_CASE("local depth sums to n/2 and equals cohesion row sums") {
  auto rs = gen_random_tournament(20, 2);
  auto run = run_pald(rs);
  double s = std::accumulate(run.depth.begin(), run.depth.end(), 0.0);
  CHECK(s == doctest::Approx(10.0).epsilon(1e-12));
  for (PointId x = 0; x < 20; ++x) {
    double row = 0.0;
    for (PointId v = 0; v < 20; ++v) row += run.exact.cohesion.at(x, v);
    CHECK(row == doctest::Approx(run.depth[x]).epsilon(1e-12));
  }
}

TEST_CASE("threshold is half the mean diagonal") {
  auto rs = gen_euclidean(40, 2, 5);
  auto run = run_pald(rs);
  CHECK(run.tau == doctest::Approx(run.exact.cohesion.trace() / 80.0));
  CHECK(run.clusters.threshold == run.tau);
  for (const auto& e : run.clusters.edges) CHECK(e.weight >= run.tau);
}

TEST_CASE("step counter is cubic") {
  auto rs = gen_euclidean(50, 2, 1);
  auto ex = cohesion_matrix_exact(rs);
  CHECK(ex.inner_steps == 2ull * 50 * 49 * 50);
}

TEST_CASE("size guards") {
  CHECK_THROWS_AS(cohesion_matrix_exact(from_points({0.0, 1.0}, 1)), InputError);
  ExactOptions o;
  o.max_n = 10;
  auto rs = gen_euclidean(12, 2, 1);
  CHECK_THROWS_AS(cohesion_matrix_exact(rs, o), InputError);
  o.force = true;
  CHECK_NOTHROW(cohesion_matrix_exact(rs, o));
}

TEST_CASE("thread count does not change results") {
  auto rs = gen_euclidean(35, 3, 9);
  ExactOptions one, many;
  one.threads = 1;
  many.threads = 4;
  auto a = cohesion_matrix_exact(rs, one), b = cohesion_matrix_exact(rs, many);
  auto va = a.cohesion.dense_values(), vb = b.cohesion.dense_values();
  CHECK(std::equal(va.begin(), va.end(), vb.begin()));
}

}
