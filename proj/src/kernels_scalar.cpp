#include "kernels_impl.hpp"

namespace pald::kernels::detail {
namespace {

std::size_t count_left_focus(const std::int32_t* at_x, std::int32_t limit,
                             const std::int32_t* x_at, const std::int32_t* y_at, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t z = 0; z < n; ++z) {
    count += static_cast<std::size_t>((at_x[z] < limit) & (x_at[z] < y_at[z]));
  }
  return count;
}

void add_left_focus(const std::int32_t* at_x, std::int32_t limit, const std::int32_t* x_at,
                    const std::int32_t* y_at, double weight, double* row, std::size_t n) {
  for (std::size_t z = 0; z < n; ++z) {
    if ((at_x[z] < limit) & (x_at[z] < y_at[z])) row[z] += weight;
  }
}

void squared_distances(const double* columns, std::size_t n, std::size_t dim, const double* q,
                       double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double* col = columns + d * n;
    const double qd = q[d];
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = col[i] - qd;
      out[i] += diff * diff;
    }
  }
}

double weighted_reciprocal_sum(const double* w, std::size_t len, double base) {
  double sum = 0.0;
  for (std::size_t j = 0; j < len; ++j) sum += w[j] / (base - static_cast<double>(j));
  return sum;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{Isa::scalar, count_left_focus, add_left_focus, squared_distances,
                                 weighted_reciprocal_sum};
  return table;
}

}  // namespace pald::kernels::detail
