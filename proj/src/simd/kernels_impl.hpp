#pragma once

#include "bhtp/simd.hpp"

namespace bhtp::simd::detail {

void bit_plane_scalar(std::span<const Demand> demands, unsigned bit,
                      std::vector<BeamIndex>& out);
Demand max_value_scalar(std::span<const Demand> values);
double sum_scalar(std::span<const double> values);
double abs_diff_sum_scalar(std::span<const double> a, std::span<const double> b);
NearestResult nearest_scalar(double x, double y, std::span<const double> cx,
                             std::span<const double> cy);

#if defined(BHTP_HAVE_AVX2)
void bit_plane_avx2(std::span<const Demand> demands, unsigned bit,
                    std::vector<BeamIndex>& out);
Demand max_value_avx2(std::span<const Demand> values);
double sum_avx2(std::span<const double> values);
double abs_diff_sum_avx2(std::span<const double> a, std::span<const double> b);
NearestResult nearest_avx2(double x, double y, std::span<const double> cx,
                           std::span<const double> cy);
#endif

}  // namespace bhtp::simd::detail
