#include "pald/cohesion.hpp"

#include <algorithm>
#include <sstream>

#include "pald/errors.hpp"
#include "pald/union_find.hpp"

namespace pald {

CohesionMatrix CohesionMatrix::dense(std::size_t n, std::vector<double> values) {
  if (values.size() != n * n) throw InputError("dense cohesion matrix must be n x n");
  CohesionMatrix c;
  c.n_ = n;
  c.layout_ = CohesionLayout::dense;
  c.diagonal_.resize(n);
  for (std::size_t x = 0; x < n; ++x) c.diagonal_[x] = values[x * n + x];
  c.values_ = std::move(values);
  return c;
}

CohesionMatrix CohesionMatrix::sparse(std::size_t n, std::vector<double> diagonal,
                                      std::vector<std::size_t> offsets,
                                      std::vector<PointId> columns, std::vector<double> values) {
  if (diagonal.size() != n || offsets.size() != n + 1 || columns.size() != values.size() ||
      offsets.back() != columns.size()) {
    throw InputError("inconsistent sparse cohesion layout");
  }
  CohesionMatrix c;
  c.n_ = n;
  c.layout_ = CohesionLayout::sparse_promoted;
  c.diagonal_ = std::move(diagonal);
  c.offsets_ = std::move(offsets);
  c.columns_ = std::move(columns);
  c.values_ = std::move(values);
  return c;
}

std::optional<double> CohesionMatrix::find(PointId x, PointId v) const {
  if (x >= n_ || v >= n_) return std::nullopt;
  if (x == v) return diagonal_[x];
  if (layout_ == CohesionLayout::dense) return values_[static_cast<std::size_t>(x) * n_ + v];
  const auto first = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[x]);
  const auto last = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[x + 1]);
  const auto it = std::lower_bound(first, last, v);
  if (it == last || *it != v) return std::nullopt;
  return values_[static_cast<std::size_t>(it - columns_.begin())];
}

double CohesionMatrix::at(PointId x, PointId v) const {
  if (auto value = find(x, v)) return *value;
  std::ostringstream os;
  os << "cohesion C[" << x << "][" << v << "] is undefined: pair is not promoted";
  throw DomainError(os.str());
}

double CohesionMatrix::diagonal(PointId x) const {
  if (x >= n_) throw DomainError("diagonal(): id out of range");
  return diagonal_[x];
}

double CohesionMatrix::trace() const {
  double sum = 0.0;
  for (double d : diagonal_) sum += d;
  return sum;
}

std::size_t CohesionMatrix::row_size(PointId x) const {
  if (layout_ == CohesionLayout::dense) return n_ - 1;
  return offsets_[x + 1] - offsets_[x];
}

PointId CohesionMatrix::column(PointId x, std::size_t k) const {
  if (layout_ == CohesionLayout::dense) return static_cast<PointId>(k < x ? k : k + 1);
  return columns_[offsets_[x] + k];
}

double CohesionMatrix::value(PointId x, std::size_t k) const {
  if (layout_ == CohesionLayout::dense) return values_[static_cast<std::size_t>(x) * n_ + column(x, k)];
  return values_[offsets_[x] + k];
}

std::size_t ClusterResult::largest_component() const noexcept {
  std::size_t best = 0;
  for (auto s : component_sizes) best = std::max(best, s);
  return best;
}

std::vector<ClusterEdge> mutual_weights(const CohesionMatrix& c) {
  std::vector<ClusterEdge> edges;
  const std::size_t n = c.size();
  for (PointId x = 0; x < n; ++x) {
    const std::size_t row = c.row_size(x);
    for (std::size_t k = 0; k < row; ++k) {
      const PointId y = c.column(x, k);
      if (y <= x) continue;
      const auto back = c.find(y, x);
      if (!back) continue;
      edges.push_back({x, y, std::min(c.value(x, k), *back)});
    }
  }
  return edges;
}

double cluster_threshold(const CohesionMatrix& c) {
  if (c.size() == 0) throw InputError("cluster_threshold of an empty matrix");
  return c.trace() / (2.0 * static_cast<double>(c.size()));
}

std::vector<int> component_labels(std::size_t n, std::span<const ClusterEdge> edges) {
  UnionFind uf(n);
  for (const auto& e : edges) uf.unite(e.x, e.y);
  std::vector<int> root_label(n, -1);
  std::vector<int> labels(n, -1);
  int next = 0;
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t r = uf.find(x);
    if (root_label[r] < 0) root_label[r] = next++;
    labels[x] = root_label[r];
  }
  return labels;
}

ClusterResult cluster_graph(const CohesionMatrix& c, double tau) {
  if (tau < 0.0) throw InputError("cluster threshold must be non-negative");
  ClusterResult result;
  result.threshold = tau;
  for (const auto& e : mutual_weights(c)) {
    if (e.weight >= tau) result.edges.push_back(e);
  }
  result.labels = component_labels(c.size(), result.edges);
  int max_label = -1;
  for (int l : result.labels) max_label = std::max(max_label, l);
  result.component_sizes.assign(static_cast<std::size_t>(max_label + 1), 0);
  for (int l : result.labels) ++result.component_sizes[static_cast<std::size_t>(l)];
  return result;
}

}  // namespace pald
