#pragma once
// Satellite-agnostic benchmark scenes: a hexagonal beam lattice over a
// 100 x 100 grid centred at the origin, random users (uniform or clustered),
// and user demand aggregated onto the beam that serves each user.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bhtp/model.hpp"

namespace bhtp {

inline constexpr double kGridWidth = 100.0;

enum class UserDistribution { continuous, discrete };
enum class GainModel { flat, taper };

std::string to_string(UserDistribution d);
std::string to_string(GainModel g);

struct TestbedSpec {
  std::size_t target_beams = 49;
  std::size_t n_users = 800;
  double demand_lo_mbps = 10.0;
  double demand_hi_mbps = 15.0;
  UserDistribution distribution = UserDistribution::continuous;
  std::uint64_t seed = 1;
  std::size_t cluster_count = 5;
  double cluster_sigma = 5.0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct User {
  Point at;
  double demand_mbps = 0.0;
};

struct HexLayout {
  std::vector<Point> centers;
  double pitch = 0.0;
  double radius = 0.0;
  std::size_t rows = 0;
  std::size_t columns = 0;
  std::vector<std::vector<BeamIndex>> adjacency;
};

struct Scene {
  HexLayout layout;
  std::vector<User> users;
  std::vector<std::size_t> assignment;  // serving beam per user
  std::vector<double> per_beam_demand;  // Mbps
};

/// How real Mbps demands become integer per-cycle demand units.
struct Quantizer {
  enum class Mode {
    unit,   // D_b = round(mbps * scale)
    cycle,  // D_b = round(slots_per_cycle * mbps / total mbps * scale)
  };
  Mode mode = Mode::unit;
  double scale = 1.0;
};

std::string to_string(Quantizer::Mode m);

/// Lattice of rows x columns with odd rows shifted by half a pitch;
/// 16 -> 4x4, 49 -> 7x7, 132 -> 12 rows x 11 columns, otherwise the
/// smallest near-square lattice, trimmed to the target by dropping the
/// beams farthest from the origin. Neighbours are centres within 1.1 pitch.
HexLayout hex_layout(std::size_t target_beams);

std::vector<User> gen_users(const TestbedSpec& spec);

/// Nearest-centre assignment. Flat: beam demand is the sum of its users'
/// demands. Taper: each user's demand is divided by 2^-(r/radius)^2.
std::vector<double> aggregate(const std::vector<User>& users, const HexLayout& layout,
                              GainModel gain, std::vector<std::size_t>* assignment = nullptr);

Scene build_scene(const TestbedSpec& spec, GainModel gain = GainModel::flat);

/// Integer demands for an instance; throws ModelError if every beam rounds to 0.
std::vector<Demand> quantize(const std::vector<double>& mbps, const Quantizer& q,
                             const CycleConfig& cycle);

struct GeneratedInstance {
  Instance instance;
  Scene scene;
  nlohmann::json metadata;  // spec echo, generator, quantizer, requested Mbps
};

GeneratedInstance build_instance(const TestbedSpec& spec, const CycleConfig& cycle,
                                 const Quantizer& quantizer, GainModel gain = GainModel::flat);

/// The eight benchmark trials (users, demand range, distribution); seed and
/// beam count are left at their defaults for the caller to fill in.
std::vector<TestbedSpec> trial_table();

nlohmann::json spec_to_json(const TestbedSpec& spec);
nlohmann::json scene_to_json(const Scene& scene);

}  // namespace bhtp
