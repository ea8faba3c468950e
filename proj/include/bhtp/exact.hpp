#pragma once
// Exact minimum-pattern-count solver.
//
// A plan is a multiset of (beam set, integer dwell) pairs such that each
// beam's dwells sum to its demand. The solver runs iterative deepening on
// the pattern count k. For each k it enumerates dwell weights in
// nondecreasing order (permuting equal-count plans adds nothing) and, when
// interference or a binding cardinality limit is active, solves the beam
// assignment as a small constraint-satisfaction problem. Without those
// constraints the beam dimension drops out: k weights suffice iff every
// distinct demand is a subset sum of the weights.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bhtp/model.hpp"

namespace bhtp {

enum class SolveStatus { optimal, feasible, timeout_no_solution };

std::string to_string(SolveStatus s);

struct OptResult {
  std::optional<Plan> plan;
  SolveStatus status = SolveStatus::timeout_no_solution;
  std::size_t lower_bound = 1;
  std::optional<std::size_t> upper_bound;
  /// 100 * (UB - LB) / UB; 0 when optimal.
  double gap_percent = 0.0;
  std::uint64_t nodes_explored = 0;
  double runtime_ms = 0.0;
};

struct ExactOptions {
  /// Feasible plan seeding the incumbent (typically the DP2 output).
  std::optional<Plan> warm_start;
  /// Known feasible pattern count when no plan is supplied.
  std::optional<std::size_t> ub_hint;
  double time_limit_ms = 60'000.0;
};

/// Distinct positive demand values and the largest useful dwell.
struct WeightDomain {
  std::vector<Demand> distinct_demands;  // ascending
  std::size_t omega = 0;                 // distinct_demands.size()
  Demand max_weight = 0;                 // max demand; no dwell above it is ever used
};

WeightDomain weight_domain(const Instance& inst);

/// Valid lower bound on the optimum: max of 1, ceil(log2(omega + 1)), the
/// size of a greedily grown clique of positive-demand beams (interference
/// on), and ceil(active beams / n_max).
std::size_t lower_bound(const Instance& inst, const ConstraintSet& cons);

/// Throws ModelError on an invalid instance, or when constrained search is
/// asked for more than 64 positive-demand beams.
OptResult solve_exact(const Instance& inst, const ConstraintSet& cons,
                      const ExactOptions& opts = {});

/// Exhaustive oracle for tiny instances: tries every multiset of
/// (admissible beam subset, weight <= max demand) pairs of size 1..cap.
/// Returns std::nullopt when no plan of at most `cap` patterns exists.
/// Shares no search code with solve_exact.
std::optional<std::size_t> brute_force_min_patterns(const Instance& inst,
                                                    const ConstraintSet& cons,
                                                    std::size_t cap);

/// Same question answered over ordered sequences of patterns, with no
/// ordering restriction at all. Only for very small instances.
std::optional<std::size_t> brute_force_min_patterns_sequential(const Instance& inst,
                                                               const ConstraintSet& cons,
                                                               std::size_t cap);

}  // namespace bhtp
