#pragma once

// Brute-force reference implementations, written straight from the set definitions.
// They share no code with the library beyond the rank matrix and the neighbor lists.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "pald/neighbors.hpp"
#include "pald/phi.hpp"
#include "pald/ranking.hpp"

namespace oracle {

using pald::PointId;

struct Dense {
  std::size_t n;
  std::vector<double> c;
  double at(PointId x, PointId v) const { return c[x * n + v]; }
};

inline bool before(const pald::FullRanks& r, PointId base, PointId a, PointId b) {
  return r.rank(base, a) < r.rank(base, b);
}

inline std::vector<PointId> left_focus(const pald::FullRanks& r, PointId x, PointId y) {
  std::vector<PointId> out;
  for (PointId z = 0; z < r.n; ++z) {
    if (before(r, x, z, y) && before(r, z, x, y)) out.push_back(z);
  }
  return out;
}

/// C[x][v] from the definition, summing 1/|U| over y in ascending order.
inline Dense cohesion(const pald::RankingSystem& rs) {
  const auto& r = rs.ranks();
  const std::size_t n = r.n;
  Dense d{n, std::vector<double>(n * n, 0.0)};
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = 0; y < n; ++y) {
      if (x == y) continue;
      const auto lx = left_focus(r, x, y), ly = left_focus(r, y, x);
      const double w = 1.0 / static_cast<double>(lx.size() + ly.size());
      for (PointId v : lx) d.c[x * n + v] += w;
    }
    for (PointId v = 0; v < n; ++v) d.c[x * n + v] /= static_cast<double>(n - 1);
  }
  return d;
}

inline std::set<PointId> neighbor_set(const pald::NeighborGraph& g, PointId x) {
  auto s = g.neighbors(x);
  return {s.begin(), s.end()};
}

/// Promoted left focus from its definition.
inline std::vector<PointId> promoted_left(const pald::FullRanks& r, const pald::NeighborGraph& g,
                                          PointId x, PointId y) {
  const auto px = neighbor_set(g, x), py = neighbor_set(g, y);
  std::vector<PointId> out{x};
  for (PointId z : px) {
    if (z == y || !before(r, x, z, y)) continue;
    if (py.count(z)) {
      if (before(r, z, x, y)) out.push_back(z);
    } else {
      out.push_back(z);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// D_{y||z} = {x in P_y cap P_z : y <_x z}.
inline std::vector<PointId> connector(const pald::FullRanks& r, const pald::NeighborGraph& g,
                                      PointId y, PointId z) {
  const auto py = neighbor_set(g, y), pz = neighbor_set(g, z);
  std::vector<PointId> out;
  for (PointId x : py) {
    if (pz.count(x) && before(r, x, y, z)) out.push_back(x);
  }
  return out;
}

/// Promoted cohesion, keyed (x, v) including the diagonal.
inline std::map<std::pair<PointId, PointId>, double> promoted_cohesion(
    const pald::RankingSystem& rs, const pald::NeighborGraph& g) {
  const auto& r = rs.ranks();
  const std::size_t n = r.n;
  std::map<std::pair<PointId, PointId>, double> c;
  for (PointId x = 0; x < n; ++x) {
    c[{x, x}] = 0.0;
    for (PointId v : g.neighbors(x)) c[{x, v}] = 0.0;
    for (PointId y : g.neighbors(x)) {
      const auto lx = promoted_left(r, g, x, y), ly = promoted_left(r, g, y, x);
      const double w = 1.0 / static_cast<double>(lx.size() + ly.size());
      for (PointId v : lx) c[{x, v}] += w;
    }
  }
  for (auto& [k, v] : c) v /= static_cast<double>(n - 1);
  return c;
}

inline std::size_t range_of_influence(const pald::NeighborGraph& g, PointId x, PointId y) {
  auto s = neighbor_set(g, x);
  const auto py = neighbor_set(g, y);
  s.insert(py.begin(), py.end());
  s.insert(x);
  s.insert(y);
  return s.size();
}

/// G_x = sum over R_x of phi(m_{x,y}).
inline std::vector<double> g_diagonal(const pald::NeighborGraph& g, pald::PhiTable& phi) {
  const std::size_t n = g.size();
  std::vector<double> out(n, 0.0);
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = 0; y < n; ++y) {
      if (y == x || g.is_promoted(x, y)) continue;
      out[x] += phi(range_of_influence(g, x, y));
    }
  }
  return out;
}

/// H_x = sum over R_x of phi(d_x + d_y + 2), skipping arguments above n.
inline std::vector<double> h_direct(const pald::NeighborGraph& g, pald::PhiTable& phi) {
  const std::size_t n = g.size();
  std::vector<double> out(n, 0.0);
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = 0; y < n; ++y) {
      if (y == x || g.is_promoted(x, y)) continue;
      const std::size_t a = g.degree(x) + g.degree(y) + 2;
      if (a <= n) out[x] += phi(a);
    }
  }
  return out;
}

/// G_{x,v} = G_x - sum over y in P_v cap R_x with y <_v x of phi(m_{x,y}).
inline double g_pair(const pald::RankingSystem& rs, const pald::NeighborGraph& g,
                     pald::PhiTable& phi, const std::vector<double>& gx, PointId x, PointId v) {
  const auto& r = rs.ranks();
  double out = gx[x];
  for (PointId y : g.neighbors(v)) {
    if (y == x || g.is_promoted(x, y)) continue;
    if (before(r, v, y, x)) out -= phi(range_of_influence(g, x, y));
  }
  return out;
}

/// tau_R from the histogram of ranges of influence over relegated pairs.
inline double tau_r_histogram(const pald::NeighborGraph& g, pald::PhiTable& phi) {
  const std::size_t n = g.size();
  std::map<std::size_t, std::size_t> hist;
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = x + 1; y < n; ++y) {
      if (!g.is_promoted(x, y)) ++hist[range_of_influence(g, x, y)];
    }
  }
  double s = 0.0;
  for (const auto& [m, c] : hist) s += phi(m) * static_cast<double>(c);
  return s / (static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace oracle
