// Compiled with -mavx2 only; callers reach these through the dispatch table
// after the CPU check.

#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace bhtp::simd::detail {

void bit_plane_avx2(std::span<const Demand> demands, unsigned bit,
                    std::vector<BeamIndex>& out) {
  const __m256i mask = _mm256_set1_epi64x(Demand{1} << bit);
  const __m256i zero = _mm256_setzero_si256();
  const std::size_t n = demands.size();
  const std::size_t body = n / 4 * 4;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(demands.data() + i));
    const __m256i clear = _mm256_cmpeq_epi64(_mm256_and_si256(v, mask), zero);
    unsigned set = ~static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(clear))) & 0xFu;
    while (set) {
      const unsigned lane = static_cast<unsigned>(__builtin_ctz(set));
      out.push_back(static_cast<BeamIndex>(i + lane));
      set &= set - 1;
    }
  }
  const Demand bitmask = Demand{1} << bit;
  for (std::size_t b = body; b < n; ++b) {
    if (demands[b] & bitmask) out.push_back(static_cast<BeamIndex>(b));
  }
}

Demand max_value_avx2(std::span<const Demand> values) {
  const std::size_t body = values.size() / 4 * 4;
  __m256i best = _mm256_setzero_si256();
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values.data() + i));
    best = _mm256_blendv_epi8(best, v, _mm256_cmpgt_epi64(v, best));
  }
  alignas(32) Demand lane[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lane), best);
  Demand result = 0;
  for (Demand v : lane) result = v > result ? v : result;
  for (std::size_t i = body; i < values.size(); ++i) result = values[i] > result ? values[i] : result;
  return result;
}

double sum_avx2(std::span<const double> values) {
  const std::size_t body = values.size() / 4 * 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(values.data() + i));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double total = lane[0] + lane[1] + lane[2] + lane[3];
  for (std::size_t i = body; i < values.size(); ++i) total += values[i];
  return total;
}

double abs_diff_sum_avx2(std::span<const double> a, std::span<const double> b) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const std::size_t body = a.size() / 4 * 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, d));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double total = lane[0] + lane[1] + lane[2] + lane[3];
  for (std::size_t i = body; i < a.size(); ++i) total += std::fabs(a[i] - b[i]);
  return total;
}

NearestResult nearest_avx2(double x, double y, std::span<const double> cx,
                           std::span<const double> cy) {
  const std::size_t n = cx.size();
  const std::size_t body = n / 4 * 4;
  NearestResult best{0, HUGE_VAL};
  if (body > 0) {
    const __m256d px = _mm256_set1_pd(x);
    const __m256d py = _mm256_set1_pd(y);
    __m256d best_d = _mm256_set1_pd(HUGE_VAL);
    __m256d best_i = _mm256_setzero_pd();
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d step = _mm256_set1_pd(4.0);
    for (std::size_t i = 0; i < body; i += 4) {
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(cx.data() + i), px);
      const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(cy.data() + i), py);
      const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      const __m256d closer = _mm256_cmp_pd(d2, best_d, _CMP_LT_OQ);
      best_d = _mm256_blendv_pd(best_d, d2, closer);
      best_i = _mm256_blendv_pd(best_i, idx, closer);
      idx = _mm256_add_pd(idx, step);
    }
    alignas(32) double lane_d[4];
    alignas(32) double lane_i[4];
    _mm256_store_pd(lane_d, best_d);
    _mm256_store_pd(lane_i, best_i);
    for (int l = 0; l < 4; ++l) {
      const auto li = static_cast<std::size_t>(lane_i[l]);
      if (lane_d[l] < best.distance_sq || (lane_d[l] == best.distance_sq && li < best.index)) {
        best = {li, lane_d[l]};
      }
    }
  }
  for (std::size_t i = body; i < n; ++i) {
    const double dx = cx[i] - x;
    const double dy = cy[i] - y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best.distance_sq) best = {i, d2};
  }
  return best;
}

}  // namespace bhtp::simd::detail
