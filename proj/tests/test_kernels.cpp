#include <random>
#include <vector>

#include "doctest.h"
#include "pald/kernels.hpp"
#include "pald/pald.hpp"

using namespace pald;
namespace k = pald::kernels;

namespace {

std::vector<std::int32_t> random_ranks(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::int32_t> d(0, static_cast<std::int32_t>(n));
  std::vector<std::int32_t> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar reference on a hand input") {
  const auto& s = k::scalar_table();
  std::int32_t at_x[] = {0, 1, 2, 3};
  std::int32_t x_at[] = {0, 2, 1, 1};
  std::int32_t y_at[] = {1, 0, 2, 3};
  // z < limit 3 at x: z = 0, 1, 2; of those x_at < y_at: z = 0, 2
  CHECK(s.count_left_focus(at_x, 3, x_at, y_at, 4) == 2);
  double row[4] = {};
  s.add_left_focus(at_x, 3, x_at, y_at, 0.5, row, 4);
  CHECK(row[0] == 0.5);
  CHECK(row[1] == 0.0);
  CHECK(row[2] == 0.5);
  double w[] = {1.0, 2.0, 3.0};
  CHECK(s.weighted_reciprocal_sum(w, 3, 4.0) == doctest::Approx(1.0 / 4 + 2.0 / 3 + 3.0 / 2));
}

TEST_CASE("AVX2 kernels match scalar") {
  const auto* v = k::avx2_table();
  if (v == nullptr) {
    MESSAGE("AVX2 unavailable; skipping");
    return;
  }
  const auto& s = k::scalar_table();
  std::mt19937_64 rng(42);
  for (std::size_t n : {1u, 3u, 7u, 8u, 9u, 31u, 64u, 257u}) {
    auto a = random_ranks(rng, n), b = random_ranks(rng, n), c = random_ranks(rng, n);
    for (std::int32_t lim : {0, 1, static_cast<std::int32_t>(n / 2), static_cast<std::int32_t>(n)}) {
      CHECK(s.count_left_focus(a.data(), lim, b.data(), c.data(), n) ==
            v->count_left_focus(a.data(), lim, b.data(), c.data(), n));
      std::vector<double> r1(n, 0.25), r2(n, 0.25);
      s.add_left_focus(a.data(), lim, b.data(), c.data(), 1.0 / 3.0, r1.data(), n);
      v->add_left_focus(a.data(), lim, b.data(), c.data(), 1.0 / 3.0, r2.data(), n);
      CHECK(r1 == r2);
    }
    std::normal_distribution<double> g;
    for (std::size_t dim : {1u, 2u, 5u}) {
      std::vector<double> cols(n * dim), q(dim), o1(n), o2(n);
      for (auto& x : cols) x = g(rng);
      for (auto& x : q) x = g(rng);
      s.squared_distances(cols.data(), n, dim, q.data(), o1.data());
      v->squared_distances(cols.data(), n, dim, q.data(), o2.data());
      CHECK(o1 == o2);
    }
    std::vector<double> w(n);
    for (auto& x : w) x = std::abs(g(rng));
    const double base = static_cast<double>(n) + 0.5;
    CHECK(v->weighted_reciprocal_sum(w.data(), n, base) ==
          doctest::Approx(s.weighted_reciprocal_sum(w.data(), n, base)).epsilon(1e-13));
  }
}

TEST_CASE("exact cohesion is identical under both kernel tables") {
  if (k::avx2_table() == nullptr) return;
  auto rs = gen_euclidean(45, 3, 8);
  k::force_isa(k::Isa::scalar);
  auto a = cohesion_matrix_exact(rs);
  k::force_isa(k::Isa::avx2);
  auto b = cohesion_matrix_exact(rs);
  k::force_isa(k::detected_isa());
  auto va = a.cohesion.dense_values(), vb = b.cohesion.dense_values();
  CHECK(std::vector<double>(va.begin(), va.end()) == std::vector<double>(vb.begin(), vb.end()));
  CHECK(a.inner_steps == b.inner_steps);
}

}
