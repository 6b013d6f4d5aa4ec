#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pald/cohesion.hpp"
#include "pald/neighbors.hpp"
#include "pald/phi.hpp"
#include "pald/ranking.hpp"

namespace pald {

/// Rank tables T_x over P_x, stored aligned with the promoted graph's CSR slots.
class RestrictedTables {
 public:
  RestrictedTables() = default;
  RestrictedTables(std::vector<std::int32_t> ranks, std::uint64_t oracle_calls)
      : ranks_(std::move(ranks)), oracle_calls_(oracle_calls) {}

  std::int32_t rank_at_slot(std::size_t slot) const { return ranks_[slot]; }
  /// Rank of y in T_x; ConsistencyError if y is not in P_x.
  std::int32_t rank(const NeighborGraph& g, PointId x, PointId y) const;
  std::uint64_t oracle_calls() const noexcept { return oracle_calls_; }
  std::span<const std::int32_t> ranks() const noexcept { return ranks_; }

 private:
  std::vector<std::int32_t> ranks_;
  std::uint64_t oracle_calls_ = 0;
};

/// Sorts each P_x under compare(x; ., .).
RestrictedTables build_restricted_tables(const TripletOracle& oracle, const NeighborGraph& g,
                                         std::size_t threads = 0);

/// Wraps tables built elsewhere. Each table must rank exactly P_x.
RestrictedTables restricted_from_tables(const NeighborGraph& g, std::span<const RankTable> tables);

/// Connector sets of one relegated pair {lo, hi} (lo < hi) with common promoted neighbors.
struct Connector {
  PointId lo = 0, hi = 0;
  std::vector<PointId> lo_first;  // D_{lo||hi}: x in P_lo cap P_hi with lo <_x hi
  std::vector<PointId> hi_first;  // D_{hi||lo}
  std::size_t common() const noexcept { return lo_first.size() + hi_first.size(); }
};

/// Output of the promoted traversal: left promoted foci per slot, connector sets.
class PromotedFoci {
 public:
  PromotedFoci() = default;

  /// Members of U^P_{x||y} for slot (x, y), sorted by id; always contains x.
  std::span<const PointId> left(std::size_t slot) const {
    return {members_.data() + offsets_[slot], offsets_[slot + 1] - offsets_[slot]};
  }
  std::size_t left_size(std::size_t slot) const { return offsets_[slot + 1] - offsets_[slot]; }
  /// Slot of (y, x) given the slot of (x, y).
  std::size_t mirror(std::size_t slot) const { return mirror_[slot]; }
  /// |U^P_{x,y}|.
  std::size_t focus_size(std::size_t slot) const {
    return left_size(slot) + left_size(mirror_[slot]);
  }

  const std::vector<Connector>& connectors() const noexcept { return connectors_; }
  const Connector* find_connector(PointId a, PointId b) const;
  /// |P_a cap P_b| for a relegated pair, via its connector sets (0 when none).
  std::size_t common_neighbors(PointId a, PointId b) const;

  std::uint64_t inner_steps() const noexcept { return inner_steps_; }

 private:
  friend struct PromotedBuilder;
  std::vector<std::size_t> offsets_;
  std::vector<PointId> members_;
  std::vector<std::size_t> mirror_;
  std::vector<Connector> connectors_;
  std::uint64_t inner_steps_ = 0;
};

struct PromotedCohesion {
  PromotedFoci foci;
  CohesionMatrix matrix;  // C^P on P plus the diagonal
  std::uint64_t assembly_steps = 0;
};

/// The promoted traversal (one lookup per relegated {y,z} in P_x, three per triangle)
/// followed by C^P[x][v] = (1/(n-1)) sum_{y in P_x} 1{v in U^P_{x||y}} / |U^P_{x,y}|.
PromotedCohesion promoted_cohesion(const NeighborGraph& g, const RestrictedTables& tables,
                                   std::size_t threads = 0);

/// m_{x,y} = 2 + d_x + d_y - |P_x cap P_y| for a relegated pair.
std::size_t range_of_influence(const NeighborGraph& g, const PromotedFoci& foci, PointId x,
                               PointId y);

struct PartialSums {
  std::vector<std::size_t> lambda1;
  std::vector<double> g_alpha;  // aligned with lambda1
  std::vector<double> h;        // H_x
  std::uint64_t steps = 0;
};

/// g(alpha) over the degree table and H_x = sum over R_x of phi(d_x + d_y + 2), terms with
/// d_x + d_y + 2 > n skipped (those pairs necessarily share neighbors and are fixed later).
PartialSums partial_sums(const NeighborGraph& g, PhiTable& phi);

struct IntersectionResult {
  std::vector<double> g;  // G_x = sum over R_x of phi(m_{x,y})
  std::uint64_t steps = 0;
};

IntersectionResult intersection_correction(const NeighborGraph& g, const PromotedFoci& foci,
                                           std::span<const double> h, PhiTable& phi);

struct OffDiagonalResult {
  std::vector<double> g_pair;  // G_{x,v} aligned with the CSR slot of (x, v)
  std::uint64_t steps = 0;
};

OffDiagonalResult relegated_offdiagonal(const NeighborGraph& g, const RestrictedTables& tables,
                                        const PromotedFoci& foci, std::span<const double> g_x,
                                        PhiTable& phi);

/// C^F = C^P + G / (n - 1) on P and the diagonal.
CohesionMatrix assemble(const NeighborGraph& g, const CohesionMatrix& promoted,
                        std::span<const double> g_x, std::span<const double> g_pair);

struct ThresholdParts {
  double tau_p = 0.0;
  double tau_r = 0.0;
  double tau = 0.0;
};

/// tau_P from promoted focus sizes, tau_R = sum_x G_x / (2n(n-1)).
ThresholdParts pannld_threshold(const NeighborGraph& g, const PromotedFoci& foci,
                                std::span<const double> g_x);

/// Components of the promoted pairs whose mutual cohesion reaches tau.
ClusterResult pannld_cluster(const CohesionMatrix& c, double tau);

/// Degree cap used when none is configured.
std::size_t default_degree_cap(std::size_t k_max) noexcept;

/// Throws DegreeCapExceeded naming every vertex above the cap.
void check_degree_cap(const NeighborGraph& g, std::size_t cap);

struct PannldOptions {
  std::size_t k = 10;
  std::vector<std::size_t> k_per_point;  // overrides k when non-empty
  PhiMode phi_mode = PhiMode::exact;
  std::size_t degree_cap = 0;  // 0: default_degree_cap(K_max)
  std::size_t threads = 0;
  std::optional<FriendSets> friends;  // externally supplied, already validated
};

struct PannldDiagnostics {
  std::uint64_t knn_oracle_calls = 0;
  std::uint64_t knn_evaluations = 0;
  std::uint64_t table_oracle_calls = 0;
  double call_budget = 0.0;  // sum d log2 d + 3 sum C(d,2)
  std::uint64_t algorithm_steps = 0;
  double step_budget = 0.0;  // (3/2) sum d^2
  std::uint64_t assembly_steps = 0;
  std::uint64_t partial_sum_steps = 0;
  std::uint64_t intersection_steps = 0;
  std::uint64_t offdiagonal_steps = 0;
  std::size_t phi_evaluations = 0;
  std::size_t degree_cap = 0;
  std::uint64_t sum_degree_squares = 0;

  std::uint64_t total_steps() const noexcept {
    return algorithm_steps + assembly_steps + partial_sum_steps + intersection_steps +
           offdiagonal_steps;
  }
};

struct PannldRun {
  NeighborGraph graph;
  RestrictedTables tables;
  PromotedCohesion promoted;
  PartialSums partial;
  std::vector<double> g_x;
  std::vector<double> g_pair;
  CohesionMatrix cohesion;
  ThresholdParts tau;
  ClusterResult clusters;
  PannldDiagnostics diagnostics;
};

/// Friend sets, promoted graph, restricted tables, promoted cohesion, relegated averages,
/// assembly, threshold and clustering. Budgets and the threshold identity are asserted.
PannldRun run_pannld(const RankingSystem& rs, const PannldOptions& options = {});

}  // namespace pald
