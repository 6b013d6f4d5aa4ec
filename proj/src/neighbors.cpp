#include "pald/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pald/errors.hpp"
#include "pald/parallel.hpp"

namespace pald {

namespace {

void check_k(std::size_t k, std::size_t n, PointId x) {
  if (k < 2 || k + 1 >= n) {
    std::ostringstream os;
    os << "friend count " << k << " for point " << x << " must satisfy 1 < K < n - 1 (n = " << n
       << ")";
    throw InputError(os.str());
  }
}

// K smallest by (dissimilarity, id), excluding the base point.
std::vector<PointId> nearest_by_value(std::span<const double> d, PointId x, std::size_t k) {
  std::vector<PointId> ids;
  ids.reserve(d.size() - 1);
  for (PointId z = 0; z < d.size(); ++z) {
    if (z != x) ids.push_back(z);
  }
  auto less = [&](PointId a, PointId b) { return d[a] < d[b] || (d[a] == d[b] && a < b); };
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(), less);
  ids.resize(k);
  return ids;
}

// Top-K by comparisons only: keep a sorted buffer, reject quickly against its tail.
std::vector<PointId> nearest_by_oracle(TripletOracle::Session& s, std::size_t n, PointId x,
                                       std::size_t k) {
  std::vector<PointId> best;
  best.reserve(k + 1);
  for (PointId z = 0; z < n; ++z) {
    if (z == x) continue;
    if (best.size() == k && s.compare(x, best.back(), z) < 0) continue;
    std::size_t lo = 0, hi = best.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (s.compare(x, best[mid], z) < 0) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    best.insert(best.begin() + static_cast<std::ptrdiff_t>(lo), z);
    if (best.size() > k) best.pop_back();
  }
  return best;
}

}  // namespace

FriendSets build_friend_sets(const RankingSystem& rs, std::span<const std::size_t> k_per_point,
                             std::size_t threads) {
  const std::size_t n = rs.size();
  if (n < 4) throw InputError("friend sets need n >= 4 so that 1 < K < n - 1 is possible");
  if (k_per_point.size() != n) throw InputError("per-point K list must have one entry per point");
  for (PointId x = 0; x < n; ++x) check_k(k_per_point[x], n, x);

  FriendSets out;
  out.friends.resize(n);
  const std::size_t chunks = chunk_count(n, threads);
  std::vector<std::uint64_t> calls(chunks, 0), evals(chunks, 0);
  const bool full = rs.materialized();
  parallel_for(
      n,
      [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        TripletOracle::Session session(rs.oracle());
        std::vector<double> d(n);
        for (std::size_t xi = begin; xi < end; ++xi) {
          const PointId x = static_cast<PointId>(xi);
          const std::size_t k = k_per_point[x];
          if (full) {
            const FullRanks& r = rs.ranks();
            std::vector<PointId> f(k);
            for (PointId z = 0; z < n; ++z) {
              const auto rank = r.rank(x, z);
              if (z != x && static_cast<std::size_t>(rank) <= k) f[rank - 1] = z;
            }
            out.friends[x] = std::move(f);
          } else if (rs.oracle().dissimilarities_from(x, d)) {
            evals[chunk] += n;
            out.friends[x] = nearest_by_value(d, x, k);
          } else {
            out.friends[x] = nearest_by_oracle(session, n, x, k);
          }
        }
        session.flush();
        calls[chunk] = session.merged_calls();
      },
      threads);
  for (std::size_t c = 0; c < chunks; ++c) {
    out.oracle_calls += calls[c];
    out.evaluations += evals[c];
  }
  return out;
}

FriendSets build_friend_sets(const RankingSystem& rs, std::size_t k, std::size_t threads) {
  std::vector<std::size_t> ks(rs.size(), k);
  if (rs.size() >= 4) check_k(k, rs.size(), 0);
  return build_friend_sets(rs, ks, threads);
}

std::optional<std::tuple<PointId, PointId, PointId>> find_friend_violation(
    const TripletOracle& oracle, const FriendSets& friends) {
  const std::size_t n = oracle.size();
  TripletOracle::Session s(oracle);
  std::vector<char> is_friend(n);
  for (PointId x = 0; x < n; ++x) {
    std::fill(is_friend.begin(), is_friend.end(), 0);
    for (PointId y : friends.friends[x]) is_friend[y] = 1;
    for (PointId y : friends.friends[x]) {
      for (PointId z = 0; z < n; ++z) {
        if (z == x || is_friend[z]) continue;
        if (s.compare(x, y, z) != -1) return std::make_tuple(x, y, z);
      }
    }
  }
  return std::nullopt;
}

FriendSets external_friend_sets(const RankingSystem& rs,
                                std::vector<std::vector<PointId>> friends) {
  const std::size_t n = rs.size();
  if (friends.size() != n) throw InputError("external friend sets: one list per point required");
  for (PointId x = 0; x < n; ++x) {
    auto& f = friends[x];
    check_k(f.size(), n, x);
    std::vector<PointId> sorted = f;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.back() >= n ||
        std::binary_search(sorted.begin(), sorted.end(), x)) {
      std::ostringstream os;
      os << "external friend set of " << x << " has duplicates, bad ids or the point itself";
      throw InputError(os.str());
    }
  }
  FriendSets out;
  out.friends = std::move(friends);
  const auto before = rs.oracle().calls();
  if (auto bad = find_friend_violation(rs.oracle(), out)) {
    auto [x, y, z] = *bad;
    std::ostringstream os;
    os << "external friend set of " << x << ": friend " << y << " does not precede stranger " << z;
    throw InputError(os.str());
  }
  // Order each list nearest first, as the built-in path does.
  for (PointId x = 0; x < n; ++x) {
    TripletOracle::Session s(rs.oracle());
    auto& f = out.friends[x];
    std::stable_sort(f.begin(), f.end(), [&](PointId a, PointId b) { return s.compare(x, a, b) < 0; });
  }
  out.oracle_calls = rs.oracle().calls() - before;
  return out;
}

// ---------------------------------------------------------------------------

NeighborGraph::NeighborGraph(const FriendSets& fs) : n_(fs.friends.size()) {
  friend_offsets_.assign(n_ + 1, 0);
  for (std::size_t x = 0; x < n_; ++x) friend_offsets_[x + 1] = friend_offsets_[x] + fs.friends[x].size();
  friends_.reserve(friend_offsets_[n_]);
  for (const auto& f : fs.friends) friends_.insert(friends_.end(), f.begin(), f.end());
  friends_sorted_ = friends_;
  for (std::size_t x = 0; x < n_; ++x) {
    std::sort(friends_sorted_.begin() + static_cast<std::ptrdiff_t>(friend_offsets_[x]),
              friends_sorted_.begin() + static_cast<std::ptrdiff_t>(friend_offsets_[x + 1]));
  }

  // Arcs in both directions, then dedupe per row.
  std::vector<std::size_t> count(n_ + 1, 0);
  for (std::size_t x = 0; x < n_; ++x) {
    for (PointId y : fs.friends[x]) {
      if (y >= n_ || y == x) throw InputError("friend set contains an invalid id");
      ++count[x];
      ++count[y];
    }
  }
  std::vector<std::size_t> start(n_ + 1, 0);
  for (std::size_t x = 0; x < n_; ++x) start[x + 1] = start[x] + count[x];
  std::vector<PointId> arcs(start[n_]);
  std::vector<std::size_t> fill(start.begin(), start.end() - 1);
  for (std::size_t x = 0; x < n_; ++x) {
    for (PointId y : fs.friends[x]) {
      arcs[fill[x]++] = y;
      arcs[fill[y]++] = static_cast<PointId>(x);
    }
  }
  offsets_.assign(n_ + 1, 0);
  adjacency_.reserve(arcs.size());
  for (std::size_t x = 0; x < n_; ++x) {
    auto b = arcs.begin() + static_cast<std::ptrdiff_t>(start[x]);
    auto e = arcs.begin() + static_cast<std::ptrdiff_t>(start[x + 1]);
    std::sort(b, e);
    e = std::unique(b, e);
    adjacency_.insert(adjacency_.end(), b, e);
    offsets_[x + 1] = adjacency_.size();
  }

  if (n_ > 0) {
    k_min_ = fs.friends[0].size();
    std::size_t total = 0;
    for (const auto& f : fs.friends) {
      k_min_ = std::min(k_min_, f.size());
      k_max_ = std::max(k_max_, f.size());
      total += f.size();
    }
    k_bar_ = static_cast<double>(total) / static_cast<double>(n_);
  }
}

std::size_t NeighborGraph::slot(PointId x, PointId y) const {
  if (x >= n_ || y >= n_) throw InputError("neighbor graph: id out of range");
  auto row = neighbors(x);
  auto it = std::lower_bound(row.begin(), row.end(), y);
  if (it == row.end() || *it != y) return npos;
  return offsets_[x] + static_cast<std::size_t>(it - row.begin());
}

bool NeighborGraph::is_friend(PointId x, PointId y) const {
  auto b = friends_sorted_.begin() + static_cast<std::ptrdiff_t>(friend_offsets_[x]);
  auto e = friends_sorted_.begin() + static_cast<std::ptrdiff_t>(friend_offsets_[x + 1]);
  return std::binary_search(b, e, y);
}

std::size_t NeighborGraph::max_degree() const noexcept {
  std::size_t best = 0;
  for (std::size_t x = 0; x < n_; ++x) best = std::max(best, offsets_[x + 1] - offsets_[x]);
  return best;
}

std::uint64_t NeighborGraph::relegated_count() const noexcept {
  const std::uint64_t n = n_;
  return n * (n - 1) / 2 - promoted_count();
}

std::size_t NeighborGraph::common_neighbors(PointId x, PointId y) const {
  auto a = neighbors(x), b = neighbors(y);
  std::size_t i = 0, j = 0, c = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++c, ++i, ++j;
    }
  }
  return c;
}

PairClass pair_class(const NeighborGraph& g, PointId x, PointId y) {
  if (x == y) throw InputError("pair_class needs two distinct points");
  return g.is_promoted(x, y) ? PairClass::promoted : PairClass::relegated;
}

DegreeGroups degree_groups(const NeighborGraph& g) {
  const std::size_t n = g.size();
  DegreeGroups out;
  for (PointId x = 0; x < n; ++x) ++out.count_by_beta[g.degree(x) + 1];
  for (const auto& [beta, c] : out.count_by_beta) out.lambda1.push_back(beta);
  // Lambda_2 is taken over all pairs of occurring degrees.
  for (std::size_t i = 0; i < out.lambda1.size(); ++i) {
    for (std::size_t j = i; j < out.lambda1.size(); ++j) {
      if (i == j && out.count_by_beta.at(out.lambda1[i]) < 2) continue;
      out.lambda2.emplace_back(out.lambda1[i], out.lambda1[j]);
    }
  }
  const double nn = static_cast<double>(n);
  const double k = static_cast<double>(g.k_min());
  out.lambda = std::sqrt(std::max(0.0, 2.0 * nn * (2.0 * g.k_bar() - k))) + 1.0;
  const double m = static_cast<double>(g.promoted_count());
  out.distinct_bound = std::sqrt(std::max(0.0, 4.0 * m - 2.0 * nn * k)) + 1.0;
  const double t = static_cast<double>(out.lambda1.size());
  if (t > out.distinct_bound + 1e-9 || t > out.lambda + 1e-9) {
    std::ostringstream os;
    os << "promoted graph has " << out.lambda1.size() << " distinct degrees, above the bound "
       << out.distinct_bound;
    throw ConsistencyError(os.str());
  }
  return out;
}

}  // namespace pald
