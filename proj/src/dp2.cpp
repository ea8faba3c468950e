#include "bhtp/dp2.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <map>

#include "bhtp/simd.hpp"

namespace bhtp {

namespace {

int floor_log2(Demand v) { return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(v))) - 1; }

}  // namespace

std::vector<Pattern> dp2_decompose(std::span<const Demand> demands) {
  const auto& k = simd::kernels();
  for (std::size_t b = 0; b < demands.size(); ++b) {
    if (demands[b] < 0) throw ModelError("negative demand at beam " + std::to_string(b));
  }
  const Demand top = k.max_value(demands);
  if (top <= 0) throw ModelError("no positive demand to decompose");

  std::vector<Pattern> out;
  std::vector<BeamIndex> members;
  for (int level = floor_log2(top); level >= 0; --level) {
    members.clear();
    k.bit_plane(demands, static_cast<unsigned>(level), members);
    if (!members.empty()) out.emplace_back(members, Demand{1} << level);
  }
  return out;
}

std::vector<Pattern> split_interference(const Pattern& p,
                                        std::span<const std::vector<BeamIndex>> adjacency) {
  // colour of each beam already placed, looked up by binary search in the
  // (sorted) pattern beam list
  const auto beams = p.beams();
  std::vector<int> colour(beams.size(), -1);
  std::vector<std::vector<BeamIndex>> classes;
  std::vector<char> taken;
  for (std::size_t i = 0; i < beams.size(); ++i) {
    const BeamIndex b = beams[i];
    taken.assign(classes.size() + 1, 0);
    if (b < adjacency.size()) {
      for (BeamIndex nb : adjacency[b]) {
        auto it = std::lower_bound(beams.begin(), beams.begin() + static_cast<std::ptrdiff_t>(i), nb);
        if (it != beams.begin() + static_cast<std::ptrdiff_t>(i) && *it == nb) {
          taken[static_cast<std::size_t>(colour[static_cast<std::size_t>(it - beams.begin())])] = 1;
        }
      }
    }
    std::size_t c = 0;
    while (taken[c]) ++c;
    if (c == classes.size()) classes.emplace_back();
    classes[c].push_back(b);
    colour[i] = static_cast<int>(c);
  }
  std::vector<Pattern> out;
  out.reserve(classes.size());
  for (auto& cls : classes) out.emplace_back(std::move(cls), p.weight());
  return out;
}

std::vector<Pattern> split_cardinality(const Pattern& p, std::size_t n_max) {
  if (n_max < 1) throw ModelError("n_max must be >= 1");
  if (p.size() <= n_max) return {p};
  const auto beams = p.beams();
  std::vector<Pattern> out;
  for (std::size_t start = 0; start < beams.size(); start += n_max) {
    const std::size_t stop = std::min(beams.size(), start + n_max);
    out.emplace_back(std::vector<BeamIndex>(beams.begin() + static_cast<std::ptrdiff_t>(start),
                                            beams.begin() + static_cast<std::ptrdiff_t>(stop)),
                     p.weight());
  }
  return out;
}

Plan merge_duplicates(const Plan& plan) {
  std::map<std::vector<BeamIndex>, std::size_t> seen;
  std::vector<std::vector<BeamIndex>> sets;
  std::vector<Demand> weights;
  for (const auto& p : plan.patterns) {
    std::vector<BeamIndex> key(p.beams().begin(), p.beams().end());
    auto [it, fresh] = seen.try_emplace(key, sets.size());
    if (fresh) {
      sets.push_back(std::move(key));
      weights.push_back(p.weight());
    } else {
      weights[it->second] += p.weight();
    }
  }
  Plan out{{}, plan.cycle};
  out.patterns.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) out.patterns.emplace_back(std::move(sets[i]), weights[i]);
  return out;
}

Dp2Result dp2_full(const Instance& inst, const ConstraintSet& cons) {
  if (auto rep = validate_instance(inst); !rep) {
    throw ModelError("invalid instance: " + rep.violations.front());
  }
  if (auto rep = validate_constraints(cons); !rep) {
    throw ModelError("invalid constraints: " + rep.violations.front());
  }
  const auto start = std::chrono::steady_clock::now();

  Dp2Result result;
  result.plan.cycle = inst.cycle;
  const auto base = dp2_decompose(inst.demands);
  result.report.base_pattern_count = base.size();
  result.report.k_max = floor_log2(inst.max_demand());

  Plan split{{}, inst.cycle};
  for (const auto& p : base) {
    std::vector<Pattern> parts = cons.interference ? split_interference(p, inst.adjacency)
                                                   : std::vector<Pattern>{p};
    for (const auto& part : parts) {
      if (cons.n_max) {
        for (auto& piece : split_cardinality(part, *cons.n_max)) split.patterns.push_back(std::move(piece));
      } else {
        split.patterns.push_back(part);
      }
    }
  }
  result.report.split_pattern_count = split.size();
  result.plan = merge_duplicates(split);
  result.report.final_pattern_count = result.plan.size();

  result.report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace bhtp
