#include "bhtp/model.hpp"

#include <algorithm>

namespace bhtp {

Demand Instance::max_demand() const noexcept {
  if (demands.empty()) return 0;
  return *std::max_element(demands.begin(), demands.end());
}

bool Instance::adjacent(BeamIndex a, BeamIndex b) const noexcept {
  if (a >= adjacency.size()) return false;
  const auto& row = adjacency[a];
  return std::binary_search(row.begin(), row.end(), b);
}

Instance make_instance(std::vector<Demand> demands,
                       const std::vector<std::vector<BeamIndex>>& neighbours,
                       CycleConfig cycle) {
  const std::size_t n = demands.size();
  if (neighbours.size() > n) {
    throw ModelError("neighbour lists (" + std::to_string(neighbours.size()) +
                     ") exceed beam count (" + std::to_string(n) + ")");
  }
  std::vector<std::vector<BeamIndex>> adj(n);
  for (std::size_t b = 0; b < neighbours.size(); ++b) {
    for (BeamIndex nb : neighbours[b]) {
      if (nb >= n) {
        throw ModelError("neighbour index " + std::to_string(nb) +
                         " of beam " + std::to_string(b) + " out of range");
      }
      if (nb == b) {
        throw ModelError("beam " + std::to_string(b) + " lists itself as neighbour");
      }
      adj[b].push_back(nb);
      adj[nb].push_back(static_cast<BeamIndex>(b));
    }
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return Instance{std::move(demands), std::move(adj), cycle};
}

Pattern::Pattern(std::vector<BeamIndex> beams, Demand weight)
    : beams_(std::move(beams)), weight_(weight) {
  if (beams_.empty()) throw ModelError("pattern has no beams");
  if (weight_ < 1) {
    throw ModelError("pattern weight must be >= 1, got " + std::to_string(weight_));
  }
  std::sort(beams_.begin(), beams_.end());
  auto dup = std::adjacent_find(beams_.begin(), beams_.end());
  if (dup != beams_.end()) {
    throw ModelError("duplicate beam " + std::to_string(*dup) + " in pattern");
  }
}

bool Pattern::contains(BeamIndex b) const noexcept {
  return std::binary_search(beams_.begin(), beams_.end(), b);
}

Demand Plan::total_weight() const noexcept {
  Demand total = 0;
  for (const auto& p : patterns) total += p.weight();
  return total;
}

Report validate_instance(const Instance& inst) {
  Report rep;
  const std::size_t n = inst.n_beams();
  if (n == 0) {
    rep.violations.push_back("instance has no beams");
    return rep;
  }
  bool any_positive = false;
  for (std::size_t b = 0; b < n; ++b) {
    if (inst.demands[b] < 0) {
      rep.violations.push_back("negative demand beam " + std::to_string(b) + ": " +
                               std::to_string(inst.demands[b]));
    }
    any_positive = any_positive || inst.demands[b] > 0;
  }
  if (!any_positive) rep.violations.push_back("no positive demand");

  if (inst.adjacency.size() != n) {
    rep.violations.push_back("adjacency has " + std::to_string(inst.adjacency.size()) +
                             " rows for " + std::to_string(n) + " beams");
    return rep;
  }
  for (std::size_t b = 0; b < n; ++b) {
    for (BeamIndex nb : inst.adjacency[b]) {
      if (nb >= n) {
        rep.violations.push_back("adjacency index out of range (" + std::to_string(b) +
                                 "," + std::to_string(nb) + ")");
      } else if (nb == b) {
        rep.violations.push_back("self adjacency " + std::to_string(b));
      } else {
        const auto& back = inst.adjacency[nb];
        if (std::find(back.begin(), back.end(), static_cast<BeamIndex>(b)) == back.end()) {
          rep.violations.push_back("asymmetric adjacency (" + std::to_string(b) + "," +
                                   std::to_string(nb) + ")");
        }
      }
    }
  }
  const double th = inst.cycle.cycle_duration_ms();
  if (!(inst.cycle.sf_duration_ms > 0.0) || inst.cycle.slots_per_cycle < 1 || !(th > 0.0)) {
    rep.violations.push_back("cycle duration must be positive");
  }
  if (!(inst.cycle.min_granularity_ms > 0.0)) {
    rep.violations.push_back("min granularity must be positive");
  }
  if (inst.cycle.switching_time_ms < 0.0) {
    rep.violations.push_back("switching time must be non-negative");
  }
  return rep;
}

Report validate_constraints(const ConstraintSet& cons) {
  Report rep;
  if (cons.n_max && *cons.n_max < 1) rep.violations.push_back("n_max must be >= 1");
  return rep;
}

std::vector<Demand> accumulated_weights(const Plan& plan, std::size_t n_beams) {
  std::vector<Demand> acc(n_beams, 0);
  for (const auto& p : plan.patterns) {
    for (BeamIndex b : p.beams()) {
      if (b >= n_beams) {
        throw ModelError("pattern beam " + std::to_string(b) + " out of range for " +
                         std::to_string(n_beams) + " beams");
      }
      acc[b] += p.weight();
    }
  }
  return acc;
}

Report check_feasible(const Plan& plan, const Instance& inst, const ConstraintSet& cons) {
  Report rep;
  const std::size_t n = inst.n_beams();
  std::vector<Demand> acc(n, 0);
  for (std::size_t i = 0; i < plan.patterns.size(); ++i) {
    const auto& p = plan.patterns[i];
    for (BeamIndex b : p.beams()) {
      if (b >= n) {
        rep.violations.push_back("pattern " + std::to_string(i) + " beam " +
                                 std::to_string(b) + " out of range");
      } else {
        acc[b] += p.weight();
      }
    }
    if (cons.n_max && p.size() > *cons.n_max) {
      rep.violations.push_back("pattern " + std::to_string(i) + " illuminates " +
                               std::to_string(p.size()) + " beams > n_max " +
                               std::to_string(*cons.n_max));
    }
    if (cons.interference) {
      const auto beams = p.beams();
      for (std::size_t x = 0; x < beams.size(); ++x) {
        for (std::size_t y = x + 1; y < beams.size(); ++y) {
          if (inst.adjacent(beams[x], beams[y])) {
            rep.violations.push_back("adjacent pair (" + std::to_string(beams[x]) + "," +
                                     std::to_string(beams[y]) + ") co-illuminated");
          }
        }
      }
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    if (acc[b] != inst.demands[b]) {
      rep.violations.push_back("demand mismatch beam " + std::to_string(b) + ": " +
                               std::to_string(acc[b]) + " != " +
                               std::to_string(inst.demands[b]));
    }
  }
  return rep;
}

}  // namespace bhtp
