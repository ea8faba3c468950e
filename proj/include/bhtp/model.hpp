#pragma once
// Core domain types for beam-hopping time plans: instances, patterns,
// plans, constraint sets, and the feasibility checks every solver shares.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bhtp {

using BeamIndex = std::uint32_t;
using Demand = std::int64_t;

/// Thrown for malformed inputs (bad indices, duplicate beams, bad weights).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Superframe timing for one hopping cycle. T_H = sf_duration_ms * slots_per_cycle.
struct CycleConfig {
  double sf_duration_ms = 1.5;
  std::int64_t slots_per_cycle = 256;
  double min_granularity_ms = 1.5;
  double switching_time_ms = 0.0;

  double cycle_duration_ms() const noexcept {
    return sf_duration_ms * static_cast<double>(slots_per_cycle);
  }

  bool operator==(const CycleConfig&) const = default;
};

/// A beam-hopping problem: per-cycle integer demand per beam plus the
/// (symmetric, irreflexive) neighbour relation between beams.
struct Instance {
  std::vector<Demand> demands;
  std::vector<std::vector<BeamIndex>> adjacency;
  CycleConfig cycle;

  std::size_t n_beams() const noexcept { return demands.size(); }
  Demand max_demand() const noexcept;
  bool adjacent(BeamIndex a, BeamIndex b) const noexcept;

  bool operator==(const Instance&) const = default;
};

/// Builds an instance from possibly one-directional neighbour lists; the
/// result has sorted, deduplicated, symmetric adjacency.
Instance make_instance(std::vector<Demand> demands,
                       const std::vector<std::vector<BeamIndex>>& neighbours,
                       CycleConfig cycle = {});

/// A beam illumination pattern: a set of beams lit together for `weight` units.
class Pattern {
 public:
  /// Beams are sorted on construction. Throws ModelError on an empty set,
  /// a duplicate beam, or a weight below 1.
  Pattern(std::vector<BeamIndex> beams, Demand weight);

  std::span<const BeamIndex> beams() const noexcept { return beams_; }
  Demand weight() const noexcept { return weight_; }
  std::size_t size() const noexcept { return beams_.size(); }
  bool contains(BeamIndex b) const noexcept;

  bool operator==(const Pattern&) const = default;

 private:
  std::vector<BeamIndex> beams_;
  Demand weight_;
};

struct Plan {
  std::vector<Pattern> patterns;
  CycleConfig cycle;

  std::size_t size() const noexcept { return patterns.size(); }
  bool empty() const noexcept { return patterns.empty(); }
  /// H*: the total weight over all patterns.
  Demand total_weight() const noexcept;

  bool operator==(const Plan&) const = default;
};

struct ConstraintSet {
  std::optional<std::size_t> n_max;
  bool interference = false;

  static ConstraintSet none() { return {}; }
};

struct Report {
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
  explicit operator bool() const noexcept { return ok(); }
};

Report validate_instance(const Instance& inst);
Report validate_constraints(const ConstraintSet& cons);

/// Per-beam sum of the weights of the patterns that contain the beam.
/// Throws ModelError if a pattern references a beam >= n_beams.
std::vector<Demand> accumulated_weights(const Plan& plan, std::size_t n_beams);

/// Checks demand equality, cardinality (when n_max is set) and adjacency
/// exclusion (when interference is on). Lists every violation found.
Report check_feasible(const Plan& plan, const Instance& inst,
                      const ConstraintSet& cons);

}  // namespace bhtp
