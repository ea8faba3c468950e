#pragma once
// Capacity error and the supply model shared by the benchmark and the CLI.

#include <span>
#include <vector>

#include "bhtp/model.hpp"

namespace bhtp {

/// sum_b |supplied_b - requested_b| / sum_b requested_b. Throws ModelError on
/// a length mismatch or a non-positive total request.
double capacity_error(std::span<const double> supplied, std::span<const double> requested);

/// Fairness-ratio supply: each beam receives its share of the accumulated
/// illumination weight times the total request. Throws ModelError when the
/// plan carries no weight or references a beam outside `requested`.
std::vector<double> supplied_from_plan(const Plan& plan, std::span<const double> requested);

struct EvenBaseline {
  std::vector<double> supplied;
  double error = 0.0;
};

/// Every beam gets the mean request.
EvenBaseline even_baseline(std::span<const double> requested);

}  // namespace bhtp
