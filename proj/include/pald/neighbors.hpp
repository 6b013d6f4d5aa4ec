#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <span>
#include <utility>
#include <vector>

#include "pald/ranking.hpp"

namespace pald {

/// Friend sets: friends[x] lists the K_x nearest points to x, nearest first.
struct FriendSets {
  std::vector<std::vector<PointId>> friends;
  std::uint64_t oracle_calls = 0;  // comparison path only
  std::uint64_t evaluations = 0;   // numeric path: dissimilarity evaluations
};

/// Uniform K for every point. Requires 1 < K < n - 1.
FriendSets build_friend_sets(const RankingSystem& rs, std::size_t k, std::size_t threads = 0);

/// Per-point K_x, each in [2, n - 2].
FriendSets build_friend_sets(const RankingSystem& rs, std::span<const std::size_t> k_per_point,
                             std::size_t threads = 0);

/// Accepts friend sets produced elsewhere (e.g. an approximate KNN) after checking that
/// every friend precedes every stranger at its base point. Throws InputError otherwise.
FriendSets external_friend_sets(const RankingSystem& rs, std::vector<std::vector<PointId>> friends);

/// Checks the friends-precede-strangers property with the oracle; returns the first
/// offending (x, friend, stranger) triple, if any.
std::optional<std::tuple<PointId, PointId, PointId>> find_friend_violation(
    const TripletOracle& oracle, const FriendSets& friends);

enum class PairClass { promoted, relegated };

/// Undirected promoted graph: y in P_x iff y is a friend of x or x is a friend of y.
/// Adjacency is CSR with each row sorted by id.
class NeighborGraph {
 public:
  NeighborGraph() = default;
  explicit NeighborGraph(const FriendSets& friends);

  std::size_t size() const noexcept { return n_; }
  std::span<const PointId> neighbors(PointId x) const {
    return {adjacency_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
  }
  std::span<const PointId> friends(PointId x) const {
    return {friends_.data() + friend_offsets_[x], friend_offsets_[x + 1] - friend_offsets_[x]};
  }
  std::size_t degree(PointId x) const { return offsets_[x + 1] - offsets_[x]; }
  std::size_t k_of(PointId x) const { return friend_offsets_[x + 1] - friend_offsets_[x]; }

  /// Global CSR slot of y in row x, or npos.
  std::size_t slot(PointId x, PointId y) const;
  bool is_promoted(PointId x, PointId y) const { return slot(x, y) != npos; }
  bool is_friend(PointId x, PointId y) const;

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const PointId> adjacency() const noexcept { return adjacency_; }

  std::size_t k_min() const noexcept { return k_min_; }
  std::size_t k_max() const noexcept { return k_max_; }
  double k_bar() const noexcept { return k_bar_; }
  std::size_t max_degree() const noexcept;
  /// |P|, the number of unordered promoted pairs.
  std::size_t promoted_count() const noexcept { return adjacency_.size() / 2; }
  /// |R| = C(n,2) - |P|; never materialized as a list.
  std::uint64_t relegated_count() const noexcept;
  /// |P_x cap P_y| by merging the sorted rows.
  std::size_t common_neighbors(PointId x, PointId y) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<PointId> adjacency_;
  std::vector<std::size_t> friend_offsets_;
  std::vector<PointId> friends_;
  std::vector<PointId> friends_sorted_;
  std::size_t k_min_ = 0, k_max_ = 0;
  double k_bar_ = 0.0;
};

inline NeighborGraph promoted_pairs(const FriendSets& friends) { return NeighborGraph(friends); }

PairClass pair_class(const NeighborGraph& g, PointId x, PointId y);

struct DegreeGroups {
  std::vector<std::size_t> lambda1;                           // distinct d_x + 1, ascending
  std::vector<std::pair<std::size_t, std::size_t>> lambda2;   // distinct {alpha, beta}, alpha <= beta
  std::map<std::size_t, std::size_t> count_by_beta;           // beta -> #{y : d_y = beta - 1}
  double lambda = 0.0;            // sqrt(2n(2 K_bar - K)) + 1
  double distinct_bound = 0.0;    // sqrt(4m - 2nK) + 1 over the promoted graph
};

/// Degree table. Throws ConsistencyError if the distinct-degree bound is broken.
DegreeGroups degree_groups(const NeighborGraph& g);

}  // namespace pald
