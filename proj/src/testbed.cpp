#include "bhtp/testbed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bhtp/io.hpp"
#include "bhtp/rng.hpp"
#include "bhtp/simd.hpp"

namespace bhtp {

using nlohmann::json;

std::string to_string(UserDistribution d) {
  return d == UserDistribution::continuous ? "continuous" : "discrete";
}

std::string to_string(GainModel g) { return g == GainModel::flat ? "flat" : "taper"; }

std::string to_string(Quantizer::Mode m) { return m == Quantizer::Mode::unit ? "unit" : "cycle"; }

namespace {

std::pair<std::size_t, std::size_t> lattice_dims(std::size_t target) {
  switch (target) {
    case 16: return {4, 4};
    case 49: return {7, 7};
    case 132: return {12, 11};
    default: break;
  }
  auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(target))));
  cols = std::max<std::size_t>(cols, 1);
  return {(target + cols - 1) / cols, cols};
}

}  // namespace

HexLayout hex_layout(std::size_t target_beams) {
  if (target_beams < 1) throw ModelError("hex layout needs at least one beam");
  HexLayout lay;
  std::tie(lay.rows, lay.columns) = lattice_dims(target_beams);
  lay.pitch = kGridWidth / static_cast<double>(lay.columns);
  lay.radius = lay.pitch / std::sqrt(3.0);
  const double row_step = lay.pitch * std::sqrt(3.0) / 2.0;
  const double half = kGridWidth / 2.0;
  // offset rows stick out by half a pitch; centre the whole lattice
  const double skew = lay.rows > 1 ? lay.pitch / 4.0 : 0.0;

  std::vector<Point> all;
  for (std::size_t r = 0; r < lay.rows; ++r) {
    const double y = (static_cast<double>(lay.rows - 1) / 2.0 - static_cast<double>(r)) * row_step;
    const double shift = (r % 2 == 1) ? lay.pitch / 2.0 : 0.0;
    for (std::size_t c = 0; c < lay.columns; ++c) {
      const double x = -half + lay.pitch / 2.0 + static_cast<double>(c) * lay.pitch + shift - skew;
      all.push_back({x, y});
    }
  }
  if (all.size() > target_beams) {
    std::vector<std::size_t> order(all.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double da = all[a].x * all[a].x + all[a].y * all[a].y;
      const double db = all[b].x * all[b].x + all[b].y * all[b].y;
      if (da != db) return da < db;
      return a < b;
    });
    order.resize(target_beams);
    std::sort(order.begin(), order.end());
    for (std::size_t i : order) lay.centers.push_back(all[i]);
  } else {
    lay.centers = std::move(all);
  }

  const std::size_t n = lay.centers.size();
  const double reach_sq = (1.1 * lay.pitch) * (1.1 * lay.pitch);
  lay.adjacency.assign(n, {});
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double dx = lay.centers[a].x - lay.centers[b].x;
      const double dy = lay.centers[a].y - lay.centers[b].y;
      if (dx * dx + dy * dy <= reach_sq) {
        lay.adjacency[a].push_back(static_cast<BeamIndex>(b));
        lay.adjacency[b].push_back(static_cast<BeamIndex>(a));
      }
    }
  }
  return lay;
}

std::vector<User> gen_users(const TestbedSpec& spec) {
  if (spec.n_users < 1) throw ModelError("test-bed needs at least one user");
  if (spec.demand_lo_mbps > spec.demand_hi_mbps) throw ModelError("demand range is inverted");
  Xoshiro256 rng(spec.seed);
  const double half = kGridWidth / 2.0;
  std::vector<User> users;
  users.reserve(spec.n_users);
  if (spec.distribution == UserDistribution::continuous) {
    for (std::size_t i = 0; i < spec.n_users; ++i) {
      User u;
      u.at.x = rng.uniform(-half, half);
      u.at.y = rng.uniform(-half, half);
      u.demand_mbps = rng.uniform(spec.demand_lo_mbps, spec.demand_hi_mbps);
      users.push_back(u);
    }
    return users;
  }
  if (spec.cluster_count < 1) throw ModelError("discrete test-bed needs at least one cluster");
  std::vector<Point> hubs(spec.cluster_count);
  for (auto& h : hubs) {
    h.x = rng.uniform(-half, half);
    h.y = rng.uniform(-half, half);
  }
  for (std::size_t i = 0; i < spec.n_users; ++i) {
    const Point& hub = hubs[rng.below(hubs.size())];
    const auto z = rng.normal_pair();
    User u;
    u.at.x = std::clamp(hub.x + spec.cluster_sigma * z[0], -half, half);
    u.at.y = std::clamp(hub.y + spec.cluster_sigma * z[1], -half, half);
    u.demand_mbps = rng.uniform(spec.demand_lo_mbps, spec.demand_hi_mbps);
    users.push_back(u);
  }
  return users;
}

std::vector<double> aggregate(const std::vector<User>& users, const HexLayout& layout,
                              GainModel gain, std::vector<std::size_t>* assignment) {
  const std::size_t n = layout.centers.size();
  std::vector<double> cx(n);
  std::vector<double> cy(n);
  for (std::size_t b = 0; b < n; ++b) {
    cx[b] = layout.centers[b].x;
    cy[b] = layout.centers[b].y;
  }
  const auto& k = simd::kernels();
  std::vector<double> demand(n, 0.0);
  if (assignment) assignment->clear();
  for (const User& u : users) {
    const auto hit = k.nearest(u.at.x, u.at.y, cx, cy);
    double d = u.demand_mbps;
    if (gain == GainModel::taper) {
      const double rel = std::sqrt(hit.distance_sq) / layout.radius;
      d /= std::exp2(-rel * rel);
    }
    demand[hit.index] += d;
    if (assignment) assignment->push_back(hit.index);
  }
  return demand;
}

Scene build_scene(const TestbedSpec& spec, GainModel gain) {
  Scene scene;
  scene.layout = hex_layout(spec.target_beams);
  scene.users = gen_users(spec);
  scene.per_beam_demand = aggregate(scene.users, scene.layout, gain, &scene.assignment);
  return scene;
}

std::vector<Demand> quantize(const std::vector<double>& mbps, const Quantizer& q,
                             const CycleConfig& cycle) {
  double factor = q.scale;
  if (q.mode == Quantizer::Mode::cycle) {
    double total = 0.0;
    for (double v : mbps) total += v;
    if (!(total > 0.0)) throw ModelError("no demand to quantize");
    factor *= static_cast<double>(cycle.slots_per_cycle) / total;
  }
  std::vector<Demand> out;
  out.reserve(mbps.size());
  bool any = false;
  for (double v : mbps) {
    out.push_back(static_cast<Demand>(std::llround(v * factor)));
    any = any || out.back() > 0;
  }
  if (!any) throw ModelError("every beam quantizes to zero demand; increase the quantizer scale");
  return out;
}

GeneratedInstance build_instance(const TestbedSpec& spec, const CycleConfig& cycle,
                                 const Quantizer& quantizer, GainModel gain) {
  GeneratedInstance gen;
  gen.scene = build_scene(spec, gain);
  gen.instance = Instance{quantize(gen.scene.per_beam_demand, quantizer, cycle),
                          gen.scene.layout.adjacency, cycle};
  gen.metadata = json{{"generator", Xoshiro256::kName},
                      {"spec", spec_to_json(spec)},
                      {"gain_model", to_string(gain)},
                      {"quantizer", {{"mode", to_string(quantizer.mode)}, {"scale", quantizer.scale}}},
                      {"lattice",
                       {{"rows", gen.scene.layout.rows},
                        {"columns", gen.scene.layout.columns},
                        {"pitch", gen.scene.layout.pitch},
                        {"radius", gen.scene.layout.radius}}},
                      {"requested_mbps", gen.scene.per_beam_demand}};
  return gen;
}

std::vector<TestbedSpec> trial_table() {
  auto row = [](std::size_t users, double lo, double hi, UserDistribution dist) {
    TestbedSpec s;
    s.n_users = users;
    s.demand_lo_mbps = lo;
    s.demand_hi_mbps = hi;
    s.distribution = dist;
    return s;
  };
  using D = UserDistribution;
  return {row(800, 10, 15, D::continuous), row(200, 1, 35, D::continuous),
          row(800, 10, 15, D::discrete),   row(200, 1, 35, D::discrete),
          row(200, 10, 15, D::discrete),   row(800, 1, 35, D::discrete),
          row(200, 10, 15, D::continuous), row(800, 1, 35, D::continuous)};
}

json spec_to_json(const TestbedSpec& spec) {
  return json{{"target_beams", spec.target_beams},
              {"n_users", spec.n_users},
              {"demand_range_mbps", {spec.demand_lo_mbps, spec.demand_hi_mbps}},
              {"distribution", to_string(spec.distribution)},
              {"seed", spec.seed},
              {"cluster_count", spec.cluster_count},
              {"cluster_sigma", spec.cluster_sigma}};
}

json scene_to_json(const Scene& scene) {
  json centers = json::array();
  for (const auto& c : scene.layout.centers) centers.push_back({c.x, c.y});
  json users = json::array();
  for (std::size_t i = 0; i < scene.users.size(); ++i) {
    const auto& u = scene.users[i];
    users.push_back(json{{"x", u.at.x}, {"y", u.at.y}, {"demand_mbps", u.demand_mbps},
                         {"beam", scene.assignment.empty() ? 0 : scene.assignment[i] + 1}});
  }
  return json{{"centers", std::move(centers)},
              {"radius", scene.layout.radius},
              {"pitch", scene.layout.pitch},
              {"users", std::move(users)},
              {"per_beam_demand_mbps", scene.per_beam_demand}};
}

}  // namespace bhtp
