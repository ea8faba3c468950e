#include <doctest.h>

#include "bhtp/dp2.hpp"
#include "bhtp/schedule.hpp"
#include "support.hpp"

using namespace bhtp;

namespace {

Plan five_beam_plan() {
  const std::vector<Demand> d{109, 120, 91, 87, 135};
  return Plan{dp2_decompose(d), {}};
}

std::vector<Demand> weights(const Plan& p) {
  std::vector<Demand> w;
  for (const auto& x : p.patterns) w.push_back(x.weight());
  return w;
}

}  // namespace

TEST_CASE("round_ratio rounds halves away from zero") {
  CHECK(round_ratio(5, 2) == 3);
  CHECK(round_ratio(3, 2) == 2);
  CHECK(round_ratio(1, 3) == 0);
  CHECK(round_ratio(2, 3) == 1);
  CHECK(round_ratio(128 * 256, 255) == 129);
}

TEST_CASE("weights kept when the slot is long enough") {
  const auto s = scale_to_cycle(five_beam_plan(), CycleConfig{});
  CHECK_FALSE(s.rescaled);
  CHECK(s.total_slots == 255);
  CHECK(weights(s.plan) == std::vector<Demand>{128, 64, 32, 16, 8, 4, 2, 1});
}

TEST_CASE("forced rescale to 256 slots") {
  CycleConfig cfg;
  cfg.min_granularity_ms = 3.0;
  const auto s = scale_to_cycle(five_beam_plan(), cfg);
  CHECK(s.rescaled);
  CHECK(weights(s.plan) == std::vector<Demand>{129, 64, 32, 16, 8, 4, 2, 1});
  CHECK(s.total_slots == 256);
  CHECK(s.dropped_patterns == 0);
  CHECK(s.source_weights == std::vector<Demand>{128, 64, 32, 16, 8, 4, 2, 1});
}

TEST_CASE("single pattern fills the cycle") {
  CycleConfig cfg;
  cfg.min_granularity_ms = 100.0;
  const auto s = scale_to_cycle(Plan{{Pattern({0}, 10)}, {}}, cfg);
  CHECK(weights(s.plan) == std::vector<Demand>{256});
}

TEST_CASE("zero-slot patterns are dropped") {
  CycleConfig cfg;
  cfg.slots_per_cycle = 4;
  cfg.min_granularity_ms = 100.0;
  const auto s = scale_to_cycle(Plan{{Pattern({0}, 100), Pattern({1}, 1)}, {}}, cfg);
  CHECK(s.dropped_patterns == 1);
  CHECK(s.plan.size() == 1);
  CHECK(s.total_slots == 4);
  CHECK_THROWS_AS(scale_to_cycle(Plan{}, cfg), ModelError);
}

TEST_CASE("rescaled totals stay within half a slot per pattern of W") {
  Xoshiro256 rng(99);
  CycleConfig cfg;
  cfg.min_granularity_ms = 1e9;
  for (int i = 0; i < 200; ++i) {
    Plan plan;
    const std::size_t count = 1 + rng.below(30);
    for (std::size_t p = 0; p < count; ++p) plan.patterns.emplace_back(std::vector<BeamIndex>{0}, 1 + static_cast<Demand>(rng.below(500)));
    const auto s = scale_to_cycle(plan, cfg);
    const auto diff = static_cast<double>(std::abs(s.total_slots - cfg.slots_per_cycle));
    CHECK(diff <= static_cast<double>(count) / 2.0);
    for (const auto& p : s.plan.patterns) CHECK(p.weight() >= 1);
  }
}

TEST_CASE("power multipliers") {
  const auto prof = power_multipliers(Plan{{Pattern({0, 1, 2}, 4), Pattern({0}, 2)}, {}});
  CHECK(prof.multipliers == std::vector<std::size_t>{3, 1});
  CHECK(prof.weighted_total == 14);

  const Plan singles{{Pattern({0}, 3), Pattern({1}, 5)}, {}};
  CHECK(power_multipliers(singles).weighted_total == singles.total_weight());

  const auto five = power_multipliers(five_beam_plan());
  CHECK(five.multipliers == std::vector<std::size_t>{1, 4, 2, 3, 3, 3, 3, 4});
  CHECK(five.weighted_total == 542);
}

TEST_CASE("merging keeps the weighted total") {
  Xoshiro256 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto inst = test::random_instance(rng, 2 + rng.below(20), 300, 0.2);
    const auto plan = dp2_full(inst, ConstraintSet{3, true}).plan;
    Plan doubled = plan;
    doubled.patterns.insert(doubled.patterns.end(), plan.patterns.begin(), plan.patterns.end());
    CHECK(power_multipliers(merge_duplicates(doubled)).weighted_total == power_multipliers(doubled).weighted_total);
  }
}

TEST_CASE("plan timing") {
  CycleConfig cfg;
  const auto s = scale_to_cycle(five_beam_plan(), cfg);
  auto t = plan_timing(s, cfg);
  CHECK(t.cycle_ms == doctest::Approx(384.0));
  CHECK(t.effective_fraction == 1.0);
  CHECK(t.dwell_ms.size() == 8);

  cfg.switching_time_ms = 1.0;
  t = plan_timing(s, cfg);
  CHECK(t.switching_overhead_ms == doctest::Approx(8.0));
  CHECK(t.effective_fraction == doctest::Approx(1.0 - 8.0 / 384.0));
  CHECK_FALSE(t.degenerate);

  cfg.switching_time_ms = 100.0;
  t = plan_timing(s, cfg);
  CHECK(t.degenerate);
  CHECK(t.effective_fraction == 0.0);
}

TEST_CASE("effective fraction does not grow with pattern count") {
  CycleConfig cfg;
  cfg.switching_time_ms = 2.0;
  double previous = 2.0;
  for (std::size_t count = 1; count <= 40; ++count) {
    Plan plan;
    for (std::size_t p = 0; p < count; ++p) plan.patterns.emplace_back(std::vector<BeamIndex>{0}, 1);
    const double f = plan_timing(scale_to_cycle(plan, cfg), cfg).effective_fraction;
    CHECK(f <= previous);
    previous = f;
  }
}
