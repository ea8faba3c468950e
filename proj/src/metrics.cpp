#include "bhtp/metrics.hpp"

#include "bhtp/simd.hpp"

namespace bhtp {

double capacity_error(std::span<const double> supplied, std::span<const double> requested) {
  if (supplied.size() != requested.size()) {
    throw ModelError("supplied and requested vectors differ in length");
  }
  const auto& k = simd::kernels();
  const double total = k.sum(requested);
  if (!(total > 0.0)) throw ModelError("total requested demand must be positive");
  return k.abs_diff_sum(supplied, requested) / total;
}

std::vector<double> supplied_from_plan(const Plan& plan, std::span<const double> requested) {
  if (plan.empty()) throw ModelError("cannot derive supply from an empty plan");
  const auto acc = accumulated_weights(plan, requested.size());
  Demand weight_total = 0;
  for (Demand a : acc) weight_total += a;
  if (weight_total <= 0) throw ModelError("plan carries no weight");
  const double scale = simd::kernels().sum(requested) / static_cast<double>(weight_total);
  std::vector<double> out(acc.size());
  for (std::size_t b = 0; b < acc.size(); ++b) out[b] = static_cast<double>(acc[b]) * scale;
  return out;
}

EvenBaseline even_baseline(std::span<const double> requested) {
  if (requested.empty()) throw ModelError("even baseline needs at least one beam");
  EvenBaseline out;
  const double share = simd::kernels().sum(requested) / static_cast<double>(requested.size());
  out.supplied.assign(requested.size(), share);
  out.error = capacity_error(out.supplied, requested);
  return out;
}

}  // namespace bhtp
