#include <immintrin.h>

#include "kernels_impl.hpp"

namespace pald::kernels::detail {
namespace {

inline __m256i left_focus_mask(const std::int32_t* at_x, __m256i limit, const std::int32_t* x_at,
                               const std::int32_t* y_at, std::size_t z) {
  const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(at_x + z));
  const __m256i xa = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x_at + z));
  const __m256i ya = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(y_at + z));
  return _mm256_and_si256(_mm256_cmpgt_epi32(limit, a), _mm256_cmpgt_epi32(ya, xa));
}

std::size_t count_left_focus(const std::int32_t* at_x, std::int32_t limit,
                             const std::int32_t* x_at, const std::int32_t* y_at, std::size_t n) {
  const __m256i lim = _mm256_set1_epi32(limit);
  std::size_t count = 0;
  std::size_t z = 0;
  for (; z + 8 <= n; z += 8) {
    const __m256i m = left_focus_mask(at_x, lim, x_at, y_at, z);
    count += static_cast<std::size_t>(
        __builtin_popcount(static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(m)))));
  }
  for (; z < n; ++z) {
    count += static_cast<std::size_t>((at_x[z] < limit) & (x_at[z] < y_at[z]));
  }
  return count;
}

void add_left_focus(const std::int32_t* at_x, std::int32_t limit, const std::int32_t* x_at,
                    const std::int32_t* y_at, double weight, double* row, std::size_t n) {
  const __m256i lim = _mm256_set1_epi32(limit);
  const __m256d w = _mm256_set1_pd(weight);
  std::size_t z = 0;
  for (; z + 8 <= n; z += 8) {
    const __m256i m = left_focus_mask(at_x, lim, x_at, y_at, z);
    if (_mm256_testz_si256(m, m)) continue;
    const __m256d lo = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(_mm256_castsi256_si128(m)));
    const __m256d hi = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(_mm256_extracti128_si256(m, 1)));
    const __m256d r0 = _mm256_loadu_pd(row + z);
    const __m256d r1 = _mm256_loadu_pd(row + z + 4);
    _mm256_storeu_pd(row + z, _mm256_blendv_pd(r0, _mm256_add_pd(r0, w), lo));
    _mm256_storeu_pd(row + z + 4, _mm256_blendv_pd(r1, _mm256_add_pd(r1, w), hi));
  }
  for (; z < n; ++z) {
    if ((at_x[z] < limit) & (x_at[z] < y_at[z])) row[z] += weight;
  }
}

void squared_distances(const double* columns, std::size_t n, std::size_t dim, const double* q,
                       double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < dim; ++d) {
      const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(columns + d * n + i), _mm256_set1_pd(q[d]));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = columns[d * n + i] - q[d];
      acc += diff * diff;
    }
    out[i] = acc;
  }
}

double weighted_reciprocal_sum(const double* w, std::size_t len, double base) {
  const __m256d step = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= len; j += 4) {
    const __m256d denom =
        _mm256_sub_pd(_mm256_set1_pd(base - static_cast<double>(j)), step);
    acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_loadu_pd(w + j), denom));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; j < len; ++j) sum += w[j] / (base - static_cast<double>(j));
  return sum;
}

}  // namespace

const KernelTable& avx2_kernels() noexcept {
  static const KernelTable table{Isa::avx2, count_left_focus, add_left_focus, squared_distances,
                                 weighted_reciprocal_sum};
  return table;
}

}  // namespace pald::kernels::detail
