#pragma once
// Shared fixtures for the unit tests.

#include <algorithm>
#include <string>

#include "bhtp/io.hpp"
#include "bhtp/model.hpp"
#include "bhtp/rng.hpp"

namespace bhtp::test {

inline Instance sample(char which) {
  const std::string path = std::string(BHTP_DATA_DIR) + "/sample_" + which + ".json";
  return parse_instance(read_text_file(path)).instance;
}

/// Random instance: demands in [0, max_demand] with at least one positive,
/// each pair adjacent with probability edge_p.
inline Instance random_instance(Xoshiro256& rng, std::size_t n, Demand max_demand, double edge_p) {
  std::vector<Demand> d(n);
  for (auto& v : d) v = static_cast<Demand>(rng.below(static_cast<std::uint64_t>(max_demand) + 1));
  if (std::all_of(d.begin(), d.end(), [](Demand v) { return v == 0; })) d[rng.below(n)] = 1 + static_cast<Demand>(rng.below(static_cast<std::uint64_t>(max_demand)));
  std::vector<std::vector<BeamIndex>> nb(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (rng.uniform01() < edge_p) nb[a].push_back(static_cast<BeamIndex>(b));
    }
  }
  return make_instance(std::move(d), nb);
}

}  // namespace bhtp::test
