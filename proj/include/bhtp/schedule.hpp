#pragma once
// Realizing an abstract plan on a fixed-length superframe cycle.

#include <cstddef>
#include <vector>

#include "bhtp/model.hpp"

namespace bhtp {

struct ScheduledPlan {
  /// Retained patterns with their slot weights h'.
  Plan plan;
  /// Original weight of each retained pattern, index-aligned with plan.patterns.
  std::vector<Demand> source_weights;
  Demand total_slots = 0;
  std::size_t dropped_patterns = 0;
  bool rescaled = false;
  double effective_illumination_fraction = 1.0;
};

struct PowerProfile {
  std::vector<std::size_t> multipliers;  // L_p = beams lit in pattern p
  Demand weighted_total = 0;             // H** = sum_p L_p * weight_p
};

struct TimingReport {
  double cycle_ms = 0.0;
  std::vector<double> dwell_ms;  // per retained pattern
  double switching_overhead_ms = 0.0;
  double effective_fraction = 1.0;
  bool degenerate = false;  // switching overhead swallows the whole cycle
};

/// round(numerator / denominator) with halves rounded away from zero, for
/// non-negative numerator and positive denominator.
Demand round_ratio(Demand numerator, Demand denominator);

/// Keeps the weights when T_H / H* >= m_d (one weight unit per slot of
/// T_H / H* ms); otherwise h' = round(h * W / H*) and zero-slot patterns are
/// dropped. Throws ModelError for an empty plan.
ScheduledPlan scale_to_cycle(const Plan& plan, const CycleConfig& cfg);

PowerProfile power_multipliers(const Plan& plan);

TimingReport plan_timing(const ScheduledPlan& s, const CycleConfig& cfg);

}  // namespace bhtp
