#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pald/oracle.hpp"
#include "pald/types.hpp"

namespace pald {

/// Ranks of a candidate set as seen from one base point. Rank 1 is the most similar.
class RankTable {
 public:
  RankTable() = default;
  RankTable(PointId base, std::vector<PointId> order);

  PointId base() const noexcept { return base_; }
  std::size_t size() const noexcept { return order_.size(); }

  /// Candidates, most similar first.
  const std::vector<PointId>& order() const noexcept { return order_; }

  /// 1-based rank; throws InputError if y is not a candidate.
  std::int32_t rank(PointId y) const;
  std::optional<std::int32_t> find_rank(PointId y) const;
  bool contains(PointId y) const { return find_rank(y).has_value(); }

  /// y precedes z in this table (both must be candidates).
  bool precedes(PointId y, PointId z) const { return rank(y) < rank(z); }

 private:
  PointId base_ = 0;
  std::vector<PointId> order_;
  std::vector<std::pair<PointId, std::int32_t>> by_id_;
};

/// Worst-case oracle calls of build_rank_table for m candidates: the merge sort
/// (at most m log2 m - m + 1) plus 2(m - 1) adjacent re-checks.
std::uint64_t rank_table_call_budget(std::size_t m) noexcept;

/// Sorts candidates under compare(x; ., .) with a counted top-down merge sort, then
/// re-queries every adjacent pair in both orientations. Throws AxiomViolation naming the
/// offending triple when the answers are inconsistent, InputError on bad candidates.
RankTable build_rank_table(const TripletOracle& oracle, PointId x,
                           std::span<const PointId> candidates);

/// Same, charging calls to a caller-owned session.
RankTable build_rank_table(TripletOracle::Session& session, PointId x,
                           std::span<const PointId> candidates);

enum class GeneratorKind { euclidean, blobs, star, random_tournament, external };

std::string to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(const std::string& s);

/// How a ranking system was produced. Fixed seed => identical system.
struct DatasetSpec {
  GeneratorKind kind = GeneratorKind::external;
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<double> weights;
  std::uint64_t seed = 0;
  std::string tie_break = "ascending-index";
  std::string source;
};

/// Full rank matrices: at[x * n + z] is the rank of z at x (0 for z = x, else 1..n-1);
/// at_transposed[x * n + z] is the rank of x at z.
struct FullRanks {
  std::size_t n = 0;
  std::vector<std::int32_t> at;
  std::vector<std::int32_t> at_transposed;
  std::uint64_t oracle_calls = 0;

  std::int32_t rank(PointId x, PointId z) const { return at[static_cast<std::size_t>(x) * n + z]; }
  /// y precedes z in x's order.
  bool precedes(PointId x, PointId y, PointId z) const { return rank(x, y) < rank(x, z); }
  const std::int32_t* row(PointId x) const { return at.data() + static_cast<std::size_t>(x) * n; }
  const std::int32_t* column(PointId x) const {
    return at_transposed.data() + static_cast<std::size_t>(x) * n;
  }
};

/// A family of per-point total orders, backed by an oracle. Full rank tables are
/// materialized on first request; the restricted pipeline never asks for them.
class RankingSystem {
 public:
  RankingSystem(std::shared_ptr<const TripletOracle> oracle, DatasetSpec provenance,
                std::vector<std::string> ids = {});

  std::size_t size() const noexcept { return oracle_->size(); }
  const TripletOracle& oracle() const noexcept { return *oracle_; }
  std::shared_ptr<const TripletOracle> shared_oracle() const noexcept { return oracle_; }
  const DatasetSpec& provenance() const noexcept { return provenance_; }

  /// External labels; defaults to "0".."n-1".
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  /// Builds every full table through build_rank_table (oracle calls are recorded).
  const FullRanks& ranks(std::size_t threads = 0) const;
  bool materialized() const;

  /// x's table over S \ {x}, from the materialized ranks.
  RankTable table(PointId x) const;

  /// Wraps precomputed ranks, e.g. imported tables; validates the permutation property.
  static RankingSystem from_rank_matrix(std::vector<std::int32_t> at, std::size_t n,
                                        DatasetSpec provenance, std::vector<std::string> ids = {});

 private:
  std::shared_ptr<const TripletOracle> oracle_;
  DatasetSpec provenance_;
  std::vector<std::string> ids_;
  struct Lazy {
    std::once_flag once;
    std::unique_ptr<FullRanks> ranks;
  };
  std::shared_ptr<Lazy> lazy_;
};

/// Validates an n x n rank matrix (zero diagonal, rows are permutations of 1..n-1).
void validate_rank_matrix(std::span<const std::int32_t> at, std::size_t n);

// --- axiom verification ----------------------------------------------------

struct AxiomWitness {
  std::string axiom;
  PointId x = 0, y = 0, z = 0, w = 0;
};

struct AxiomReport {
  std::size_t samples = 0;
  bool exhaustive = false;
  std::uint64_t checks = 0;
  std::uint64_t violation_count = 0;
  std::vector<AxiomWitness> witnesses;  // first few only

  bool ok() const noexcept { return violation_count == 0; }
};

/// Checks antisymmetry, transitivity, totality and autosimilarity on `samples` random
/// triples (chained to quadruples for transitivity). n <= 30 is checked exhaustively.
AxiomReport verify_axioms(const TripletOracle& oracle, std::size_t n, std::size_t samples,
                          std::uint64_t seed);

// --- generators ------------------------------------------------------------

/// n points i.i.d. uniform on [0,1]^dim, ordered by Euclidean distance.
RankingSystem gen_euclidean(std::size_t n, std::size_t dim, std::uint64_t seed);

/// Euclidean system over given row-major coordinates.
RankingSystem from_points(std::vector<double> coords, std::size_t dim,
                          std::vector<std::string> ids = {}, DatasetSpec provenance = {});

/// Path metric on a weighted star: vertex 0 is the center, leaf j has edge weight w_j.
RankingSystem gen_star(std::size_t n_leaves, std::span<const double> weights);
/// Star with weights 1, 2, ..., n_leaves.
RankingSystem gen_star(std::size_t n_leaves);

/// Independent uniform permutation per base point; generally non-concordant.
RankingSystem gen_random_tournament(std::size_t n, std::uint64_t seed);

struct LabeledPoints {
  RankingSystem system;
  std::vector<int> truth;
};

/// `clusters` isotropic Gaussian blobs of `per_cluster` points; centers `separation`
/// apart along the first axis, unit standard deviation.
LabeledPoints gen_blobs(std::size_t clusters, std::size_t per_cluster, std::size_t dim,
                        double separation, std::uint64_t seed);

}  // namespace pald
