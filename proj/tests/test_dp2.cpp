#include <doctest.h>

#include <bit>

#include "bhtp/dp2.hpp"
#include "bhtp/testbed.hpp"
#include "support.hpp"

using namespace bhtp;

namespace {

using Sets = std::vector<std::pair<std::vector<BeamIndex>, Demand>>;

Sets sets_of(const std::vector<Pattern>& ps) {
  Sets out;
  for (const auto& p : ps) out.emplace_back(std::vector<BeamIndex>(p.beams().begin(), p.beams().end()), p.weight());
  return out;
}

}  // namespace

TEST_CASE("dp2_decompose on the five-beam example") {
  const std::vector<Demand> d{109, 120, 91, 87, 135};
  const auto ps = dp2_decompose(d);
  // 0-indexed form of ({5},128),({1,2,3,4},64),({1,2},32),({2,3,4},16),
  // ({1,2,3},8),({1,4,5},4),({3,4,5},2),({1,3,4,5},1)
  const Sets expected{{{4}, 128},   {{0, 1, 2, 3}, 64}, {{0, 1}, 32},   {{1, 2, 3}, 16},
                      {{0, 1, 2}, 8}, {{0, 3, 4}, 4},     {{2, 3, 4}, 2}, {{0, 2, 3, 4}, 1}};
  CHECK(sets_of(ps) == expected);
}

TEST_CASE("dp2_decompose small cases") {
  CHECK(sets_of(dp2_decompose(std::vector<Demand>{5})) == Sets{{{0}, 4}, {{0}, 1}});
  CHECK_THROWS_AS(dp2_decompose(std::vector<Demand>{0, 0}), ModelError);
  CHECK_THROWS_AS(dp2_decompose(std::vector<Demand>{3, -1}), ModelError);
  // zero-demand beams never appear
  for (const auto& p : dp2_decompose(std::vector<Demand>{0, 3, 0})) CHECK(!p.contains(0));
}

TEST_CASE("dp2 base counts on the sample instances") {
  CHECK(dp2_decompose(test::sample('a').demands).size() == 6);
  CHECK(dp2_decompose(test::sample('b').demands).size() == 8);
  const auto ra = dp2_full(test::sample('a'), {});
  CHECK(ra.plan.size() == 6);
  CHECK(ra.report.k_max == 5);
  const auto rb = dp2_full(test::sample('b'), {});
  CHECK(rb.plan.size() == 8);
  CHECK(rb.report.k_max == 7);
}

TEST_CASE("split_interference") {
  SUBCASE("path colours into two classes") {
    const auto inst = make_instance({1, 1, 1}, {{1}, {2}});
    CHECK(sets_of(split_interference(Pattern({0, 1, 2}, 3), inst.adjacency)) == Sets{{{0, 2}, 3}, {{1}, 3}});
  }
  SUBCASE("no internal adjacency leaves the pattern alone") {
    const auto inst = make_instance({1, 1, 1}, {{}, {}});
    CHECK(sets_of(split_interference(Pattern({0, 1, 2}, 2), inst.adjacency)) == Sets{{{0, 1, 2}, 2}});
  }
  SUBCASE("triangle needs three classes") {
    const auto inst = make_instance({1, 1, 1}, {{1, 2}, {2}});
    CHECK(sets_of(split_interference(Pattern({0, 1, 2}, 1), inst.adjacency)) ==
          Sets{{{0}, 1}, {{1}, 1}, {{2}, 1}});
  }
  SUBCASE("more than three classes when the graph demands it") {
    const auto inst = make_instance({1, 1, 1, 1}, {{1, 2, 3}, {2, 3}, {3}});
    CHECK(split_interference(Pattern({0, 1, 2, 3}, 1), inst.adjacency).size() == 4);
  }
}

TEST_CASE("split_cardinality") {
  const Pattern seven({0, 1, 2, 3, 4, 5, 6}, 5);
  CHECK(sets_of(split_cardinality(seven, 3)) == Sets{{{0, 1, 2}, 5}, {{3, 4, 5}, 5}, {{6}, 5}});
  CHECK(sets_of(split_cardinality(Pattern({0, 1, 2}, 2), 3)) == Sets{{{0, 1, 2}, 2}});
  const Pattern ten({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, 1);
  const auto singles = split_cardinality(ten, 1);
  CHECK(singles.size() == 10);
  for (const auto& p : singles) CHECK(p.size() == 1);
}

TEST_CASE("merge_duplicates") {
  const Plan a{{Pattern({0, 1}, 4), Pattern({0, 1}, 2)}, {}};
  CHECK(sets_of(merge_duplicates(a).patterns) == Sets{{{0, 1}, 6}});
  const Plan b{{Pattern({0}, 1), Pattern({1}, 1), Pattern({0}, 2)}, {}};
  CHECK(sets_of(merge_duplicates(b).patterns) == Sets{{{0}, 3}, {{1}, 1}});
  const Plan c{{Pattern({0}, 1), Pattern({1}, 1)}, {}};
  CHECK(merge_duplicates(c) == c);
}

TEST_CASE("dp2_full properties over random instances") {
  Xoshiro256 rng(77);
  for (int i = 0; i < 150; ++i) {
    const std::size_t n = 1 + rng.below(120);
    const auto inst = test::random_instance(rng, n, 1 + static_cast<Demand>(rng.below(4095)), 0.05);
    ConstraintSet cons;
    cons.interference = rng.below(2) == 1;
    if (rng.below(2)) cons.n_max = 1 + rng.below(10);
    const auto res = dp2_full(inst, cons);
    CHECK(accumulated_weights(res.plan, n) == inst.demands);
    CHECK(check_feasible(res.plan, inst, cons).ok());
    CHECK(res.report.base_pattern_count <= static_cast<std::size_t>(res.report.k_max) + 1);
    CHECK(res.report.final_pattern_count == res.plan.size());
    CHECK(res.report.final_pattern_count <= res.report.split_pattern_count);
    CHECK(res.report.final_pattern_count >= 1);
    // no two patterns share a beam set
    for (std::size_t x = 0; x < res.plan.size(); ++x) {
      for (std::size_t y = x + 1; y < res.plan.size(); ++y) {
        CHECK_FALSE(std::ranges::equal(res.plan.patterns[x].beams(), res.plan.patterns[y].beams()));
      }
    }
    // determinism
    CHECK(dp2_full(inst, cons).plan == res.plan);
  }
}

TEST_CASE("base patterns carry power-of-two weights and binary membership") {
  Xoshiro256 rng(5);
  for (int i = 0; i < 100; ++i) {
    std::vector<Demand> d(1 + rng.below(40));
    for (auto& v : d) v = static_cast<Demand>(rng.below(1 << 12));
    d[0] = 1 + static_cast<Demand>(rng.below(100));
    for (const auto& p : dp2_decompose(d)) {
      CHECK(std::has_single_bit(static_cast<std::uint64_t>(p.weight())));
      for (std::size_t b = 0; b < d.size(); ++b) {
        CHECK(p.contains(static_cast<BeamIndex>(b)) == ((d[b] & p.weight()) != 0));
      }
    }
  }
}

TEST_CASE("splits preserve accumulated weight") {
  Xoshiro256 rng(9);
  for (int i = 0; i < 50; ++i) {
    const auto inst = test::random_instance(rng, 2 + rng.below(30), 50, 0.3);
    std::vector<BeamIndex> all;
    for (std::size_t b = 0; b < inst.n_beams(); ++b) all.push_back(static_cast<BeamIndex>(b));
    const Pattern p(all, 3);
    const Plan whole{{p}, {}};
    const Plan by_colour{split_interference(p, inst.adjacency), {}};
    const Plan by_size{split_cardinality(p, 1 + rng.below(5)), {}};
    CHECK(accumulated_weights(by_colour, inst.n_beams()) == accumulated_weights(whole, inst.n_beams()));
    CHECK(accumulated_weights(by_size, inst.n_beams()) == accumulated_weights(whole, inst.n_beams()));
  }
}
