#pragma once
// Data-parallel kernels used by the decomposition, the test-bed and the
// metrics code. Every kernel has a portable scalar reference; an AVX2
// variant is picked at runtime when the CPU supports it. Both variants use
// the same 4-lane reduction order, so results are bit-identical.

#include <cstddef>
#include <span>
#include <vector>

#include "bhtp/model.hpp"

namespace bhtp::simd {

struct NearestResult {
  std::size_t index = 0;
  double distance_sq = 0.0;
};

struct KernelTable {
  const char* name;
  /// Appends to `out` every index b with bit `bit` of demands[b] set.
  void (*bit_plane)(std::span<const Demand> demands, unsigned bit,
                    std::vector<BeamIndex>& out);
  /// Largest element; 0 for an empty span.
  Demand (*max_value)(std::span<const Demand> values);
  double (*sum)(std::span<const double> values);
  /// sum_i |a_i - b_i|; spans must have equal length.
  double (*abs_diff_sum)(std::span<const double> a, std::span<const double> b);
  /// Closest center to (x, y); lowest index wins ties. Centers must be non-empty.
  NearestResult (*nearest)(double x, double y, std::span<const double> cx,
                           std::span<const double> cy);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_kernels() noexcept;

/// Active table. Chosen once: the BHTP_SIMD environment variable
/// ("scalar" or "avx2") overrides CPU detection.
const KernelTable& kernels() noexcept;

}  // namespace bhtp::simd
