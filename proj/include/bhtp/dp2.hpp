#pragma once
// Decomposition by powers of two: every beam joins the pattern of bit level
// k iff bit k of its demand is set, and that pattern dwells for 2^k units.
// Patterns are then split to honour the interference and cardinality
// constraints, and identical beam sets are merged.

#include <span>
#include <vector>

#include "bhtp/model.hpp"

namespace bhtp {

struct Dp2Report {
  std::size_t base_pattern_count = 0;   // non-empty bit levels
  std::size_t split_pattern_count = 0;  // after interference/cardinality splits
  std::size_t final_pattern_count = 0;  // after merging duplicates
  int k_max = 0;                        // floor(log2(max demand))
  double runtime_ms = 0.0;
};

struct Dp2Result {
  Plan plan;
  Dp2Report report;
};

/// Bit-level patterns from the highest level down; empty levels are skipped.
/// Throws ModelError for negative demands or an all-zero vector.
std::vector<Pattern> dp2_decompose(std::span<const Demand> demands);

/// Greedy colouring of the pattern's conflict subgraph, beams in ascending
/// order, each taking the lowest class without a conflicting neighbour.
/// Returns one pattern per colour class, all with the input weight.
std::vector<Pattern> split_interference(const Pattern& p,
                                        std::span<const std::vector<BeamIndex>> adjacency);

/// Chunks of at most n_max beams in ascending beam order.
std::vector<Pattern> split_cardinality(const Pattern& p, std::size_t n_max);

/// Sums the weights of patterns with identical beam sets, keeping the order
/// of first appearance.
Plan merge_duplicates(const Plan& plan);

Dp2Result dp2_full(const Instance& inst, const ConstraintSet& cons);

}  // namespace bhtp
