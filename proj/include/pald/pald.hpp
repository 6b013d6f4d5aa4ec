#pragma once

#include <cstdint>
#include <vector>

#include "pald/cohesion.hpp"
#include "pald/ranking.hpp"

namespace pald {

/// Both halves of the conflict focus of {x, y}; disjoint, each sorted by id.
struct ConflictFocus {
  std::vector<PointId> left;   // U_{x||y}: x and every z with z <_x y and x <_z y
  std::vector<PointId> right;  // U_{y||x}
  std::size_t size() const noexcept { return left.size() + right.size(); }
};

ConflictFocus conflict_focus(const RankingSystem& rs, PointId x, PointId y);

/// Left focus sizes |U_{x||y}| for every ordered pair.
class ConflictFociStore {
 public:
  ConflictFociStore() = default;
  ConflictFociStore(std::size_t n, std::vector<std::uint32_t> left);

  std::size_t n() const noexcept { return n_; }
  std::uint32_t left(PointId x, PointId y) const { return left_[static_cast<std::size_t>(x) * n_ + y]; }
  /// |U_{x,y}| = |U_{x||y}| + |U_{y||x}|.
  std::uint32_t size(PointId x, PointId y) const { return left(x, y) + left(y, x); }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> left_;
};

struct ExactOptions {
  std::size_t threads = 0;
  std::size_t max_n = 5000;  // refuse larger inputs unless force is set
  bool force = false;
};

struct ExactCohesion {
  CohesionMatrix cohesion;
  ConflictFociStore foci;
  std::uint64_t inner_steps = 0;   // predicate evaluations in both passes
  std::uint64_t oracle_calls = 0;  // to materialize the full tables
};

/// C[x][v] = (1/(n-1)) sum_{y != x} 1{v in U_{x||y}} / |U_{x,y}|, in O(n^3) steps.
ExactCohesion cohesion_matrix_exact(const RankingSystem& rs, const ExactOptions& options = {});

/// l(x) = (1/(n-1)) sum_{y != x} |U_{x||y}| / |U_{x,y}|.
std::vector<double> local_depth(const ConflictFociStore& foci);
std::vector<double> local_depth(const RankingSystem& rs, const ExactOptions& options = {});

struct PaldRun {
  ExactCohesion exact;
  double tau = 0.0;
  std::vector<double> depth;
  ClusterResult clusters;
};

/// Cohesion, threshold, local depth and the cluster graph in one pass.
PaldRun run_pald(const RankingSystem& rs, const ExactOptions& options = {});

}  // namespace pald
