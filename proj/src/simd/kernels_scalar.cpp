#include "kernels_impl.hpp"

#include <cmath>

namespace bhtp::simd::detail {

void bit_plane_scalar(std::span<const Demand> demands, unsigned bit,
                      std::vector<BeamIndex>& out) {
  const Demand mask = Demand{1} << bit;
  for (std::size_t b = 0; b < demands.size(); ++b) {
    if (demands[b] & mask) out.push_back(static_cast<BeamIndex>(b));
  }
}

Demand max_value_scalar(std::span<const Demand> values) {
  Demand best = 0;
  for (Demand v : values) best = v > best ? v : best;
  return best;
}

// Four interleaved partial sums mirror one 256-bit accumulator.
double sum_scalar(std::span<const double> values) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = values.size() / 4 * 4;
  for (std::size_t i = 0; i < body; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) lane[l] += values[i + l];
  }
  double total = lane[0] + lane[1] + lane[2] + lane[3];
  for (std::size_t i = body; i < values.size(); ++i) total += values[i];
  return total;
}

double abs_diff_sum_scalar(std::span<const double> a, std::span<const double> b) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = a.size() / 4 * 4;
  for (std::size_t i = 0; i < body; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) lane[l] += std::fabs(a[i + l] - b[i + l]);
  }
  double total = lane[0] + lane[1] + lane[2] + lane[3];
  for (std::size_t i = body; i < a.size(); ++i) total += std::fabs(a[i] - b[i]);
  return total;
}

NearestResult nearest_scalar(double x, double y, std::span<const double> cx,
                             std::span<const double> cy) {
  NearestResult best{0, HUGE_VAL};
  for (std::size_t i = 0; i < cx.size(); ++i) {
    const double dx = cx[i] - x;
    const double dy = cy[i] - y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best.distance_sq) best = {i, d2};
  }
  return best;
}

}  // namespace bhtp::simd::detail
