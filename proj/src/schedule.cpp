#include "bhtp/schedule.hpp"

#include <algorithm>

namespace bhtp {

Demand round_ratio(Demand numerator, Demand denominator) {
  return (2 * numerator + denominator) / (2 * denominator);
}

ScheduledPlan scale_to_cycle(const Plan& plan, const CycleConfig& cfg) {
  if (plan.empty()) throw ModelError("cannot schedule an empty plan");
  const Demand total = plan.total_weight();
  if (total <= 0) throw ModelError("plan has no weight");

  ScheduledPlan out;
  out.plan.cycle = cfg;
  const double cycle_ms = cfg.cycle_duration_ms();
  if (cycle_ms / static_cast<double>(total) >= cfg.min_granularity_ms) {
    out.plan.patterns = plan.patterns;
    for (const auto& p : plan.patterns) out.source_weights.push_back(p.weight());
    out.total_slots = total;
  } else {
    out.rescaled = true;
    for (const auto& p : plan.patterns) {
      const Demand slots = round_ratio(p.weight() * cfg.slots_per_cycle, total);
      if (slots == 0) {
        ++out.dropped_patterns;
        continue;
      }
      out.plan.patterns.emplace_back(std::vector<BeamIndex>(p.beams().begin(), p.beams().end()), slots);
      out.source_weights.push_back(p.weight());
      out.total_slots += slots;
    }
  }
  out.effective_illumination_fraction = plan_timing(out, cfg).effective_fraction;
  return out;
}

PowerProfile power_multipliers(const Plan& plan) {
  PowerProfile prof;
  for (const auto& p : plan.patterns) {
    prof.multipliers.push_back(p.size());
    prof.weighted_total += static_cast<Demand>(p.size()) * p.weight();
  }
  return prof;
}

TimingReport plan_timing(const ScheduledPlan& s, const CycleConfig& cfg) {
  TimingReport rep;
  rep.cycle_ms = cfg.cycle_duration_ms();
  const double slot_ms = s.total_slots > 0 ? rep.cycle_ms / static_cast<double>(s.total_slots) : 0.0;
  for (const auto& p : s.plan.patterns) rep.dwell_ms.push_back(static_cast<double>(p.weight()) * slot_ms);
  rep.switching_overhead_ms = static_cast<double>(s.plan.size()) * cfg.switching_time_ms;
  rep.degenerate = rep.cycle_ms > 0.0 && rep.switching_overhead_ms >= rep.cycle_ms;
  rep.effective_fraction =
      rep.cycle_ms > 0.0 ? std::max(0.0, 1.0 - rep.switching_overhead_ms / rep.cycle_ms) : 0.0;
  return rep;
}

}  // namespace bhtp
