#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pald/types.hpp"

namespace pald {

enum class CohesionLayout { dense, sparse_promoted };

/// Cohesion scores C[x][v]. Dense matrices define every entry; the sparse layout stores
/// the diagonal plus one row per point over its promoted neighbors (CSR, columns sorted).
class CohesionMatrix {
 public:
  CohesionMatrix() = default;

  static CohesionMatrix dense(std::size_t n, std::vector<double> values);
  static CohesionMatrix sparse(std::size_t n, std::vector<double> diagonal,
                               std::vector<std::size_t> offsets, std::vector<PointId> columns,
                               std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  CohesionLayout layout() const noexcept { return layout_; }

  /// Throws DomainError where the matrix is undefined (sparse, off the support).
  double at(PointId x, PointId v) const;
  std::optional<double> find(PointId x, PointId v) const;
  double diagonal(PointId x) const;
  double trace() const;
  bool defined(PointId x, PointId v) const { return find(x, v).has_value(); }

  /// Stored off-diagonal entries of row x: columns and values (dense rows list all v != x).
  std::size_t row_size(PointId x) const;
  PointId column(PointId x, std::size_t k) const;
  double value(PointId x, std::size_t k) const;

  /// Raw storage (dense: n*n row-major; sparse: CSR arrays + diagonal).
  std::span<const double> dense_values() const noexcept { return values_; }
  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const PointId> columns() const noexcept { return columns_; }
  std::span<const double> sparse_values() const noexcept { return values_; }

 private:
  std::size_t n_ = 0;
  CohesionLayout layout_ = CohesionLayout::dense;
  std::vector<double> diagonal_;
  std::vector<std::size_t> offsets_;
  std::vector<PointId> columns_;
  std::vector<double> values_;
};

struct ClusterEdge {
  PointId x = 0;
  PointId y = 0;
  double weight = 0.0;  // min(C[x][y], C[y][x])
};

struct ClusterDiagnostics {
  std::uint64_t oracle_calls = 0;
  std::uint64_t inner_steps = 0;
};

struct ClusterResult {
  double threshold = 0.0;
  std::vector<ClusterEdge> edges;
  /// labels[x] = component index; components numbered by their smallest member.
  std::vector<int> labels;
  std::vector<std::size_t> component_sizes;  // indexed by label
  ClusterDiagnostics diagnostics;

  std::size_t component_count() const noexcept { return component_sizes.size(); }
  std::size_t largest_component() const noexcept;
};

/// Mutual weights w = min(C[x][y], C[y][x]) over every pair defined in both directions,
/// with x < y.
std::vector<ClusterEdge> mutual_weights(const CohesionMatrix& c);

/// Keeps pairs with w >= tau and labels connected components (union-find).
ClusterResult cluster_graph(const CohesionMatrix& c, double tau);

/// tau = sum_x C[x][x] / (2n).
double cluster_threshold(const CohesionMatrix& c);

/// Component labels from an edge list, numbered by smallest member.
std::vector<int> component_labels(std::size_t n, std::span<const ClusterEdge> edges);

}  // namespace pald
