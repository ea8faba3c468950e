// Exhaustive reference solvers for tiny instances. Deliberately naive and
// independent of the search in exact.cpp.

#include <algorithm>

#include "bhtp/exact.hpp"

namespace bhtp {

namespace {

struct Move {
  std::vector<BeamIndex> beams;
  Demand weight;
};

std::vector<Move> all_moves(const Instance& inst, const ConstraintSet& cons) {
  const std::size_t n = inst.n_beams();
  if (n > 20) throw ModelError("brute force is limited to 20 beams");
  const Demand top = inst.max_demand();
  std::vector<Move> moves;
  for (std::uint32_t set = 1; set < (std::uint32_t{1} << n); ++set) {
    std::vector<BeamIndex> beams;
    for (std::size_t b = 0; b < n; ++b) {
      if ((set >> b) & 1u) beams.push_back(static_cast<BeamIndex>(b));
    }
    if (cons.n_max && beams.size() > *cons.n_max) continue;
    bool independent = true;
    if (cons.interference) {
      for (std::size_t i = 0; i < beams.size(); ++i) {
        for (std::size_t j = i + 1; j < beams.size(); ++j) {
          independent = independent && !inst.adjacent(beams[i], beams[j]);
        }
      }
    }
    if (!independent) continue;
    for (Demand w = 1; w <= top; ++w) moves.push_back({beams, w});
  }
  return moves;
}

bool apply(std::vector<Demand>& residual, const Move& m, Demand sign) {
  bool ok = true;
  for (BeamIndex b : m.beams) {
    residual[b] -= sign * m.weight;
    ok = ok && residual[b] >= 0;
  }
  return ok;
}

bool done(const std::vector<Demand>& residual) {
  return std::all_of(residual.begin(), residual.end(), [](Demand d) { return d == 0; });
}

// multisets: move indices nondecreasing
bool multiset_dfs(const std::vector<Move>& moves, std::vector<Demand>& residual, std::size_t from,
                  std::size_t left) {
  if (done(residual)) return true;
  if (left == 0) return false;
  for (std::size_t i = from; i < moves.size(); ++i) {
    const bool ok = apply(residual, moves[i], 1);
    const bool hit = ok && multiset_dfs(moves, residual, i, left - 1);
    apply(residual, moves[i], -1);
    if (hit) return true;
  }
  return false;
}

bool sequence_dfs(const std::vector<Move>& moves, std::vector<Demand>& residual, std::size_t left) {
  if (done(residual)) return true;
  if (left == 0) return false;
  for (const Move& m : moves) {
    const bool ok = apply(residual, m, 1);
    const bool hit = ok && sequence_dfs(moves, residual, left - 1);
    apply(residual, m, -1);
    if (hit) return true;
  }
  return false;
}

template <typename Search>
std::optional<std::size_t> deepen(const Instance& inst, std::size_t cap, Search&& search) {
  for (std::size_t k = 1; k <= cap; ++k) {
    std::vector<Demand> residual = inst.demands;
    if (search(residual, k)) return k;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::size_t> brute_force_min_patterns(const Instance& inst, const ConstraintSet& cons,
                                                    std::size_t cap) {
  const auto moves = all_moves(inst, cons);
  return deepen(inst, cap, [&](std::vector<Demand>& residual, std::size_t k) {
    return multiset_dfs(moves, residual, 0, k);
  });
}

std::optional<std::size_t> brute_force_min_patterns_sequential(const Instance& inst,
                                                               const ConstraintSet& cons,
                                                               std::size_t cap) {
  const auto moves = all_moves(inst, cons);
  return deepen(inst, cap, [&](std::vector<Demand>& residual, std::size_t k) {
    return sequence_dfs(moves, residual, k);
  });
}

}  // namespace bhtp
