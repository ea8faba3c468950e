#include "bhtp/exact.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <set>

namespace bhtp {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible: return "feasible";
    case SolveStatus::timeout_no_solution: return "timeout-no-solution";
  }
  return "unknown";
}

WeightDomain weight_domain(const Instance& inst) {
  WeightDomain dom;
  std::set<Demand> values;
  for (Demand d : inst.demands) {
    if (d > 0) values.insert(d);
  }
  dom.distinct_demands.assign(values.begin(), values.end());
  dom.omega = dom.distinct_demands.size();
  dom.max_weight = dom.distinct_demands.empty() ? 0 : dom.distinct_demands.back();
  return dom;
}

std::size_t lower_bound(const Instance& inst, const ConstraintSet& cons) {
  const auto dom = weight_domain(inst);
  std::size_t bound = 1;
  // k weights have at most 2^k - 1 distinct non-empty subset sums
  bound = std::max<std::size_t>(bound, std::bit_width(dom.omega));

  std::vector<BeamIndex> active;
  for (std::size_t b = 0; b < inst.n_beams(); ++b) {
    if (inst.demands[b] > 0) active.push_back(static_cast<BeamIndex>(b));
  }
  if (cons.n_max && *cons.n_max > 0) {
    bound = std::max(bound, (active.size() + *cons.n_max - 1) / *cons.n_max);
  }
  if (cons.interference) {
    // grow a clique from every start beam, taking the lowest compatible index
    for (BeamIndex seed : active) {
      std::vector<BeamIndex> clique{seed};
      for (BeamIndex cand : active) {
        if (cand == seed) continue;
        bool ok = true;
        for (BeamIndex c : clique) ok = ok && inst.adjacent(c, cand);
        if (ok) clique.push_back(cand);
      }
      bound = std::max(bound, clique.size());
    }
  }
  return bound;
}

namespace {

using Clock = std::chrono::steady_clock;

/// Bitset of reachable subset sums in [0, limit], kept together with its
/// mirror image (bit limit - v) so that "is u - w a sum" can be answered for
/// a whole window of w at once.
class SumSet {
 public:
  explicit SumSet(Demand limit)
      : limit_(limit),
        words_(static_cast<std::size_t>(limit >> 6) + 1, 0),
        mirror_(words_.size(), 0) {
    words_[0] = 1;
    mirror_[static_cast<std::size_t>(limit >> 6)] = std::uint64_t{1} << (limit & 63);
  }

  Demand limit() const noexcept { return limit_; }

  bool test(Demand v) const noexcept {
    if (v < 0 || v > limit_) return false;
    return (words_[static_cast<std::size_t>(v >> 6)] >> (v & 63)) & 1u;
  }

  /// *this = src | (src + shift), truncated at the limit.
  void assign_shifted_union(const SumSet& src, Demand shift) {
    const std::size_t n = words_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto at = static_cast<Demand>(64 * i);
      words_[i] = src.words_[i] | bits_at(src.words_, at - shift);
      mirror_[i] = src.mirror_[i] | bits_at(src.mirror_, at + shift);
    }
    const unsigned tail = static_cast<unsigned>((limit_ & 63) + 1);
    if (tail < 64) words_.back() &= (std::uint64_t{1} << tail) - 1;
  }

  /// Bit i set iff u - (lo + i) is a subset sum, for the 64 values from lo.
  std::uint64_t differences(Demand u, Demand lo) const noexcept {
    return bits_at(mirror_, limit_ - u + lo);
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

 private:
  // 64 bits of v starting at bit position pos; positions outside are 0
  static std::uint64_t bits_at(const std::vector<std::uint64_t>& v, Demand pos) noexcept {
    if (pos <= -64) return 0;
    if (pos < 0) return v[0] << static_cast<unsigned>(-pos);
    const auto wi = static_cast<std::size_t>(pos >> 6);
    const auto b = static_cast<unsigned>(pos & 63);
    if (wi >= v.size()) return 0;
    std::uint64_t out = v[wi] >> b;
    if (b != 0 && wi + 1 < v.size()) out |= v[wi + 1] << (64 - b);
    return out;
  }

  Demand limit_;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint64_t> mirror_;
};

struct Problem {
  std::vector<BeamIndex> beams;       // original index of each active beam
  std::vector<Demand> demand;         // per active beam
  std::vector<std::uint64_t> adj;     // conflict masks over active beams
  std::size_t n_max = 0;              // >= beams.size() when non-binding
  bool constrained = false;
  // values every feasible weight multiset must produce as subset sums:
  // each demand and, under interference, each clique's demand total
  std::vector<Demand> required;
  Demand max_demand = 0;
};

struct Found {
  std::vector<Demand> weights;          // nondecreasing
  std::vector<std::uint32_t> membership;  // per active beam, bit i = uses weight i
};

// Beam-to-pattern assignment for a fixed weight prefix. With `remaining`
// weights still to come (all >= the last chosen one), each beam may leave a
// positive residual that the future weights must cover; the residual
// structure has to be realizable by that many weights.
class AssignmentSearch {
 public:
  AssignmentSearch(const Problem& prob, const std::vector<Demand>& weights, std::size_t remaining)
      : prob_(prob), w_(weights), remaining_(remaining), m_(prob.beams.size()) {}

  bool solve(std::uint64_t& nodes) {
    nodes_ = &nodes;
    const std::size_t j = w_.size();
    const Demand last = j ? w_.back() : 1;
    options_.assign(m_, {});
    for (std::size_t b = 0; b < m_; ++b) {
      collect(b, 0, 0, 0, last);
      if (options_[b].empty()) return false;
    }
    equal_next_ = 0;
    for (std::size_t i = 0; i + 1 < j; ++i) {
      if (w_[i] == w_[i + 1]) equal_next_ |= 1u << i;
    }
    order_.resize(m_);
    for (std::size_t b = 0; b < m_; ++b) order_[b] = b;
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (options_[a].size() != options_[b].size()) return options_[a].size() < options_[b].size();
      return std::popcount(prob_.adj[a]) > std::popcount(prob_.adj[b]);
    });
    choice_.assign(m_, 0);
    residual_.assign(m_, 0);
    load_.assign(j, 0);
    return assign(0, 0, 0);
  }

  const std::vector<std::uint32_t>& membership() const { return choice_; }

 private:
  struct Option {
    std::uint32_t mask;
    Demand residual;
  };

  // enumerate subsets of the prefix weights from index i upward
  void collect(std::size_t b, std::size_t i, std::uint32_t mask, Demand sum, Demand last) {
    const Demand d = prob_.demand[b];
    if (i == w_.size()) {
      const Demand rho = d - sum;
      if (rho == 0 || (remaining_ > 0 && rho >= last &&
                       rho <= static_cast<Demand>(remaining_) * prob_.max_demand)) {
        options_[b].push_back({mask, rho});
      }
      return;
    }
    collect(b, i + 1, mask, sum, last);
    if (sum + w_[i] <= d) collect(b, i + 1, mask | (1u << i), sum + w_[i], last);
  }

  bool assign(std::size_t pos, std::uint32_t used, std::size_t positive) {
    ++*nodes_;
    if (pos == m_) return finish(used);
    const std::size_t b = order_[pos];
    std::uint32_t forbidden = 0;
    bool neighbour_positive = false;
    for (std::size_t q = 0; q < pos; ++q) {
      const std::size_t o = order_[q];
      if ((prob_.adj[b] >> o) & 1u) {
        forbidden |= choice_[o];
        neighbour_positive = neighbour_positive || residual_[o] > 0;
      }
    }
    for (const Option& opt : options_[b]) {
      if (opt.mask & forbidden) continue;
      // equal weights are interchangeable: weight i+1 may only open after weight i
      const std::uint32_t opens = opt.mask & ~used;
      if ((opens >> 1) & equal_next_ & ~opt.mask & ~used) continue;
      bool over = false;
      for (std::uint32_t bits = opt.mask; bits; bits &= bits - 1) {
        over = over || load_[static_cast<std::size_t>(std::countr_zero(bits))] >= prob_.n_max;
      }
      if (over) continue;
      std::size_t pos_count = positive;
      if (opt.residual > 0) {
        if (remaining_ == 1 && neighbour_positive) continue;
        if (remaining_ == 1 && !residual_values_.empty() && residual_values_.front() != opt.residual) continue;
        if (++pos_count > remaining_ * prob_.n_max) continue;
        if (!fits_residual_count(opt.residual)) continue;
      }
      for (std::uint32_t bits = opt.mask; bits; bits &= bits - 1) ++load_[static_cast<std::size_t>(std::countr_zero(bits))];
      choice_[b] = opt.mask;
      residual_[b] = opt.residual;
      const bool pushed = opt.residual > 0 && push_residual(opt.residual);
      if (assign(pos + 1, used | opt.mask, pos_count)) return true;
      if (pushed) pop_residual(opt.residual);
      for (std::uint32_t bits = opt.mask; bits; bits &= bits - 1) --load_[static_cast<std::size_t>(std::countr_zero(bits))];
      choice_[b] = 0;
      residual_[b] = 0;
    }
    return false;
  }

  bool fits_residual_count(Demand rho) const {
    if (std::find(residual_values_.begin(), residual_values_.end(), rho) != residual_values_.end()) return true;
    if (remaining_ >= 20) return true;
    return residual_values_.size() + 1 <= (std::size_t{1} << remaining_) - 1;
  }

  bool push_residual(Demand rho) {
    if (std::find(residual_values_.begin(), residual_values_.end(), rho) != residual_values_.end()) return false;
    residual_values_.push_back(rho);
    return true;
  }

  void pop_residual(Demand rho) {
    auto it = std::find(residual_values_.begin(), residual_values_.end(), rho);
    residual_values_.erase(it);
  }

  bool finish(std::uint32_t used) const {
    const std::size_t j = w_.size();
    if (j < 32 && used != (std::uint32_t{1} << j) - 1) return false;
    if (remaining_ == 2) {
      // residual values must be {a, b, a + b} shaped and the positive-residual
      // conflict subgraph two-colourable
      if (residual_values_.size() == 3) {
        std::vector<Demand> v = residual_values_;
        std::sort(v.begin(), v.end());
        if (v[2] != v[0] + v[1]) return false;
      }
      if (!bipartite_positive()) return false;
    }
    return true;
  }

  bool bipartite_positive() const {
    std::vector<int> side(m_, -1);
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < m_; ++s) {
      if (residual_[s] == 0 || side[s] != -1) continue;
      side[s] = 0;
      stack.push_back(s);
      while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::uint64_t bits = prob_.adj[u]; bits; bits &= bits - 1) {
          const auto v = static_cast<std::size_t>(std::countr_zero(bits));
          if (residual_[v] == 0) continue;
          if (side[v] == -1) {
            side[v] = 1 - side[u];
            stack.push_back(v);
          } else if (side[v] == side[u]) {
            return false;
          }
        }
      }
    }
    return true;
  }

  const Problem& prob_;
  const std::vector<Demand>& w_;
  std::size_t remaining_;
  std::size_t m_;
  std::vector<std::vector<Option>> options_;
  std::vector<std::size_t> order_;
  std::vector<std::uint32_t> choice_;
  std::vector<Demand> residual_;
  std::vector<std::size_t> load_;
  std::vector<Demand> residual_values_;
  std::uint32_t equal_next_ = 0;
  std::uint64_t* nodes_ = nullptr;
};

class WeightSearch {
 public:
  WeightSearch(const Problem& prob, Clock::time_point deadline, std::uint64_t& nodes)
      : prob_(prob), deadline_(deadline), nodes_(nodes) {}

  /// Searches for a plan with at most k patterns.
  std::optional<Found> run(std::size_t k) {
    k_ = k;
    weights_.clear();
    found_.reset();
    sums_.assign(k + 1, SumSet(prob_.required.back()));
    uncovered_.assign(k + 1, {});
    uncovered_[0] = prob_.required;
    extend(0);
    return found_;
  }

  bool timed_out() const noexcept { return timed_out_; }

 private:
  bool out_of_time() {
    if ((++nodes_ & 0x3ff) == 0 && Clock::now() >= deadline_) timed_out_ = true;
    return timed_out_;
  }

  // returns true to stop (solution found or time out)
  bool extend(std::size_t j) {
    if (out_of_time()) return true;
    const SumSet& sums = sums_[j];
    const std::vector<Demand>& uncovered = uncovered_[j];
    const std::size_t r = k_ - j;
    if (!prob_.constrained && uncovered.empty()) return accept_unconstrained();
    if (r == 0) return prob_.constrained && uncovered.empty() && accept_constrained(0);
    if (!uncovered.empty() && r < 40) {
      const std::size_t reach = sums.count();
      const std::size_t per = (std::size_t{1} << r) - 1;
      if (uncovered.size() > reach * per) return false;
    }
    const Demand lo = j ? weights_.back() : 1;
    const Demand hi = uncovered.empty() ? prob_.max_demand : std::min(prob_.max_demand, uncovered.front());
    if (r == 1 && !uncovered.empty()) {
      // the last weight must close every uncovered value on its own
      std::vector<Demand> closing;
      for (Demand base = lo; base <= hi; base += 64) {
        std::uint64_t fit = window_mask(base, hi);
        for (Demand d : uncovered) {
          if (!fit) break;
          fit &= sums.differences(d, base);
        }
        for (; fit; fit &= fit - 1) closing.push_back(base + std::countr_zero(fit));
      }
      if (closing.empty()) return false;
      if (prob_.constrained && closing.size() > 1 && !check_prefix(r)) return false;
      for (auto it = closing.rbegin(); it != closing.rend(); ++it) {
        if (try_weight(j, *it)) return true;
      }
      return false;
    }
    if (prob_.constrained && j > 0 && r == 1 && !check_prefix(r)) return false;
    // most newly covered values first, larger weights breaking ties; the
    // order only affects how soon a plan turns up, not what is explored
    std::vector<std::pair<std::size_t, Demand>> order;
    if (hi < lo) return false;
    order.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (Demand w = lo; w <= hi; ++w) order.emplace_back(0, w);
    for (Demand base = lo; base <= hi; base += 64) {
      const std::uint64_t span = window_mask(base, hi);
      for (Demand d : uncovered) {
        for (std::uint64_t hit = sums.differences(d, base) & span; hit; hit &= hit - 1) {
          ++order[static_cast<std::size_t>(base - lo + std::countr_zero(hit))].first;
        }
      }
    }
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second > b.second;
    });
    for (const auto& [gain, w] : order) {
      if (try_weight(j, w)) return true;
    }
    return false;
  }

  // bits for base .. min(base + 63, hi)
  static std::uint64_t window_mask(Demand base, Demand hi) noexcept {
    const Demand len = hi - base + 1;
    return len >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << len) - 1;
  }

  bool try_weight(std::size_t j, Demand w) {
    weights_.push_back(w);
    sums_[j + 1].assign_shifted_union(sums_[j], w);
    // a value is newly covered iff it is w above an old subset sum
    auto& next = uncovered_[j + 1];
    next.clear();
    for (Demand d : uncovered_[j]) {
      if (!sums_[j].test(d - w)) next.push_back(d);
    }
    const bool stop = extend(j + 1);
    if (!stop) weights_.pop_back();
    return stop;
  }

  bool check_prefix(std::size_t remaining) {
    AssignmentSearch a(prob_, weights_, remaining);
    return a.solve(nodes_);
  }

  bool accept_unconstrained() {
    found_ = Found{weights_, {}};
    return true;
  }

  bool accept_constrained(std::size_t remaining) {
    AssignmentSearch a(prob_, weights_, remaining);
    if (!a.solve(nodes_)) return false;
    found_ = Found{weights_, a.membership()};
    return true;
  }

  const Problem& prob_;
  Clock::time_point deadline_;
  std::uint64_t& nodes_;
  std::size_t k_ = 0;
  std::vector<Demand> weights_;
  std::vector<SumSet> sums_;
  std::vector<std::vector<Demand>> uncovered_;  // per depth, ascending
  std::optional<Found> found_;
  bool timed_out_ = false;
};

// Picks, for one demand, the subset of weights (bit i = weight i) that sums
// to it, preferring the lexicographically smallest index set.
std::uint32_t decompose_demand(const std::vector<Demand>& weights, Demand target) {
  const std::size_t k = weights.size();
  // reach[i][s]: s is a subset sum of weights[i..k)
  std::vector<std::vector<char>> reach(k + 1, std::vector<char>(static_cast<std::size_t>(target) + 1, 0));
  reach[k][0] = 1;
  for (std::size_t i = k; i-- > 0;) {
    for (Demand s = 0; s <= target; ++s) {
      const auto us = static_cast<std::size_t>(s);
      reach[i][us] = reach[i + 1][us] || (s >= weights[i] && reach[i + 1][static_cast<std::size_t>(s - weights[i])]);
    }
  }
  if (!reach[0][static_cast<std::size_t>(target)]) throw std::logic_error("demand not representable");
  std::uint32_t mask = 0;
  Demand left = target;
  for (std::size_t i = 0; i < k; ++i) {
    if (left >= weights[i] && reach[i + 1][static_cast<std::size_t>(left - weights[i])]) {
      mask |= 1u << i;
      left -= weights[i];
    }
  }
  return mask;
}

Plan build_plan(const Problem& prob, const Found& f, const CycleConfig& cycle) {
  std::vector<std::uint32_t> membership = f.membership;
  if (membership.empty()) {
    membership.resize(prob.beams.size());
    for (std::size_t b = 0; b < prob.beams.size(); ++b) {
      membership[b] = decompose_demand(f.weights, prob.demand[b]);
    }
  }
  Plan plan{{}, cycle};
  for (std::size_t i = 0; i < f.weights.size(); ++i) {
    std::vector<BeamIndex> beams;
    for (std::size_t b = 0; b < prob.beams.size(); ++b) {
      if ((membership[b] >> i) & 1u) beams.push_back(prob.beams[b]);
    }
    if (!beams.empty()) plan.patterns.emplace_back(std::move(beams), f.weights[i]);
  }
  return plan;
}

// Beams of a clique take pairwise disjoint pattern subsets, so the demand
// total of every clique is itself a subset sum of the weights.
void add_clique_sums(const Problem& prob, std::set<Demand>& out) {
  constexpr std::size_t kCliqueCap = 200'000;
  const std::size_t m = prob.beams.size();
  std::size_t visited = 0;
  auto grow = [&](auto&& self, std::uint64_t candidates, Demand total) -> void {
    if (++visited > kCliqueCap) return;
    out.insert(total);
    for (std::uint64_t bits = candidates; bits; bits &= bits - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(bits));
      // only extend with higher indices so each clique is produced once
      const std::uint64_t higher = v + 1 < 64 ? ~((std::uint64_t{2} << v) - 1) : 0;
      self(self, candidates & prob.adj[v] & higher, total + prob.demand[v]);
    }
  };
  for (std::size_t v = 0; v < m; ++v) {
    const std::uint64_t higher = v + 1 < 64 ? ~((std::uint64_t{2} << v) - 1) : 0;
    grow(grow, prob.adj[v] & higher, prob.demand[v]);
  }
}

Problem make_problem(const Instance& inst, const ConstraintSet& cons) {
  Problem prob;
  std::vector<int> local(inst.n_beams(), -1);
  for (std::size_t b = 0; b < inst.n_beams(); ++b) {
    if (inst.demands[b] > 0) {
      local[b] = static_cast<int>(prob.beams.size());
      prob.beams.push_back(static_cast<BeamIndex>(b));
      prob.demand.push_back(inst.demands[b]);
    }
  }
  const std::size_t m = prob.beams.size();
  prob.n_max = cons.n_max ? *cons.n_max : m;
  bool has_conflict = false;
  if (cons.interference) {
    for (std::size_t b : prob.beams) {
      for (BeamIndex nb : inst.adjacency[b]) has_conflict = has_conflict || local[nb] >= 0;
    }
  }
  prob.constrained = has_conflict || prob.n_max < m;
  if (prob.constrained && m > 64) {
    throw ModelError("constrained exact search supports at most 64 active beams, got " +
                     std::to_string(m));
  }
  prob.adj.assign(m, 0);
  if (cons.interference) {
    for (std::size_t i = 0; i < m; ++i) {
      for (BeamIndex nb : inst.adjacency[prob.beams[i]]) {
        if (local[nb] >= 0) prob.adj[i] |= std::uint64_t{1} << local[nb];
      }
    }
  }
  const auto dom = weight_domain(inst);
  prob.max_demand = dom.max_weight;
  std::set<Demand> required(dom.distinct_demands.begin(), dom.distinct_demands.end());
  if (has_conflict) add_clique_sums(prob, required);
  prob.required.assign(required.begin(), required.end());
  return prob;
}

}  // namespace

OptResult solve_exact(const Instance& inst, const ConstraintSet& cons, const ExactOptions& opts) {
  if (auto rep = validate_instance(inst); !rep) {
    throw ModelError("invalid instance: " + rep.violations.front());
  }
  if (auto rep = validate_constraints(cons); !rep) {
    throw ModelError("invalid constraints: " + rep.violations.front());
  }
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double, std::milli>(opts.time_limit_ms));
  const Problem prob = make_problem(inst, cons);

  OptResult result;
  result.lower_bound = lower_bound(inst, cons);
  if (opts.warm_start) {
    if (auto rep = check_feasible(*opts.warm_start, inst, cons); !rep) {
      throw ModelError("warm start plan is infeasible: " + rep.violations.front());
    }
    result.plan = *opts.warm_start;
    result.plan->cycle = inst.cycle;
    result.upper_bound = opts.warm_start->size();
  }
  if (opts.ub_hint && (!result.upper_bound || *opts.ub_hint < *result.upper_bound)) {
    result.upper_bound = *opts.ub_hint;
  }

  WeightSearch search(prob, deadline, result.nodes_explored);
  std::size_t k = result.lower_bound;
  // the one-beam-per-pattern plan always exists, so k never passes m
  const std::size_t ceiling = std::max<std::size_t>(prob.beams.size(), 1);
  bool proven = false;
  while (k <= ceiling) {
    if (result.upper_bound && k >= *result.upper_bound && result.plan) {
      proven = true;
      break;
    }
    if (k > 32 && prob.constrained) break;
    auto found = search.run(k);
    if (search.timed_out()) break;
    if (found) {
      result.plan = build_plan(prob, *found, inst.cycle);
      result.upper_bound = result.plan->size();
      proven = true;
      break;
    }
    result.lower_bound = k + 1;
    ++k;
  }

  if (proven) {
    result.status = SolveStatus::optimal;
    result.lower_bound = result.plan->size();
    result.gap_percent = 0.0;
  } else if (result.plan) {
    result.status = SolveStatus::feasible;
    const auto ub = static_cast<double>(result.plan->size());
    result.upper_bound = result.plan->size();
    result.gap_percent = 100.0 * (ub - static_cast<double>(result.lower_bound)) / ub;
  } else {
    result.status = SolveStatus::timeout_no_solution;
  }
  result.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return result;
}

}  // namespace bhtp
