#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace bhtp::simd {

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar", detail::bit_plane_scalar, detail::max_value_scalar,
                                 detail::sum_scalar, detail::abs_diff_sum_scalar,
                                 detail::nearest_scalar};
  return table;
}

const KernelTable* avx2_kernels() noexcept {
#if defined(BHTP_HAVE_AVX2)
  static const KernelTable table{"avx2", detail::bit_plane_avx2, detail::max_value_avx2,
                                 detail::sum_avx2, detail::abs_diff_sum_avx2,
                                 detail::nearest_avx2};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() noexcept {
  const char* env = std::getenv("BHTP_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& kernels() noexcept {
  static const KernelTable& active = select();
  return active;
}

}  // namespace bhtp::simd
