#include "pald/oracle.hpp"

#include <sstream>

#include "pald/errors.hpp"
#include "pald/kernels.hpp"

namespace pald {

namespace {

int sign_of(int v) noexcept { return (v > 0) - (v < 0); }

// Ascending dissimilarity, ties by ascending index; x itself always first.
int order_by_value(PointId x, PointId y, PointId z, double dy, double dz) noexcept {
  if (y == z) return 0;
  if (y == x) return -1;
  if (z == x) return 1;
  if (dy < dz) return -1;
  if (dz < dy) return 1;
  return y < z ? -1 : 1;
}

}  // namespace

void TripletOracle::check_ids(PointId x, PointId y, PointId z) const {
  const std::size_t n = size();
  if (x >= n || y >= n || z >= n) {
    std::ostringstream os;
    os << "compare(" << x << "; " << y << ", " << z << "): id out of range for n = " << n;
    throw InputError(os.str());
  }
}

int TripletOracle::compare(PointId x, PointId y, PointId z) const {
  check_ids(x, y, z);
  calls_.fetch_add(1, std::memory_order_relaxed);
  return sign_of(raw_compare(x, y, z));
}

bool TripletOracle::dissimilarities_from(PointId, std::span<double>) const { return false; }

int TripletOracle::Session::compare(PointId x, PointId y, PointId z) {
  oracle_.check_ids(x, y, z);
  ++local_;
  return sign_of(oracle_.raw_compare(x, y, z));
}

void TripletOracle::Session::flush() noexcept {
  if (local_ == 0) return;
  oracle_.calls_.fetch_add(local_, std::memory_order_relaxed);
  merged_ += local_;
  local_ = 0;
}

// ---------------------------------------------------------------------------

EuclideanOracle::EuclideanOracle(std::vector<double> coords, std::size_t dim)
    : n_(dim == 0 ? 0 : coords.size() / dim), dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw InputError("points need at least one coordinate");
  if (coords_.size() != n_ * dim_) throw InputError("coordinate count is not a multiple of dim");
  columns_.resize(coords_.size());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t d = 0; d < dim_; ++d) columns_[d * n_ + i] = coords_[i * dim_ + d];
  }
}

double EuclideanOracle::squared_distance(PointId a, PointId b) const {
  double acc = 0.0;
  const double* pa = coords_.data() + static_cast<std::size_t>(a) * dim_;
  const double* pb = coords_.data() + static_cast<std::size_t>(b) * dim_;
  for (std::size_t d = 0; d < dim_; ++d) {
    const double diff = pb[d] - pa[d];
    acc += diff * diff;
  }
  return acc;
}

int EuclideanOracle::raw_compare(PointId x, PointId y, PointId z) const {
  if (y == z) return 0;
  return order_by_value(x, y, z, squared_distance(x, y), squared_distance(x, z));
}

bool EuclideanOracle::dissimilarities_from(PointId x, std::span<double> out) const {
  if (out.size() != n_) throw InputError("dissimilarity buffer has the wrong size");
  kernels::active().squared_distances(columns_.data(), n_, dim_,
                                      coords_.data() + static_cast<std::size_t>(x) * dim_,
                                      out.data());
  return true;
}

std::string EuclideanOracle::describe() const {
  std::ostringstream os;
  os << "euclidean(n=" << n_ << ", dim=" << dim_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

DistanceMatrixOracle::DistanceMatrixOracle(std::vector<double> values, std::size_t n)
    : n_(n), values_(std::move(values)) {
  if (values_.size() != n_ * n_) throw InputError("distance matrix must be n x n");
}

int DistanceMatrixOracle::raw_compare(PointId x, PointId y, PointId z) const {
  return order_by_value(x, y, z, at(x, y), at(x, z));
}

bool DistanceMatrixOracle::dissimilarities_from(PointId x, std::span<double> out) const {
  if (out.size() != n_) throw InputError("dissimilarity buffer has the wrong size");
  const double* row = values_.data() + static_cast<std::size_t>(x) * n_;
  std::copy(row, row + n_, out.begin());
  return true;
}

std::string DistanceMatrixOracle::describe() const {
  std::ostringstream os;
  os << "distance-matrix(n=" << n_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

RankMatrixOracle::RankMatrixOracle(std::vector<std::int32_t> ranks, std::size_t n)
    : n_(n), ranks_(std::move(ranks)) {
  if (ranks_.size() != n_ * n_) throw InputError("rank matrix must be n x n");
}

int RankMatrixOracle::raw_compare(PointId x, PointId y, PointId z) const {
  if (y == z) return 0;
  return rank(x, y) < rank(x, z) ? -1 : 1;
}

bool RankMatrixOracle::dissimilarities_from(PointId x, std::span<double> out) const {
  if (out.size() != n_) throw InputError("dissimilarity buffer has the wrong size");
  for (std::size_t z = 0; z < n_; ++z) out[z] = static_cast<double>(rank(x, static_cast<PointId>(z)));
  return true;
}

std::string RankMatrixOracle::describe() const {
  std::ostringstream os;
  os << "rank-tables(n=" << n_ << ")";
  return os.str();
}

}  // namespace pald
