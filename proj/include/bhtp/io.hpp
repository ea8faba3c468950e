#pragma once
// JSON file formats. Beams are 1-indexed in files and 0-indexed in memory.
//
// Instance:  {"n_beams", "demands", "neighbours", "cycle", "metadata"?}
//            neighbours may be one-directional and shorter than n_beams;
//            they are symmetrized on load and written one-directionally
//            (higher-indexed neighbours only) on save.
// Plan:      {"patterns": [{"beams", "weight"}...], "cycle"}

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bhtp/model.hpp"

namespace bhtp {

/// Malformed file content. The message carries line/column or the field path.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceFile {
  Instance instance;
  nlohmann::json metadata;  // null when absent
};

nlohmann::json cycle_to_json(const CycleConfig& c);
CycleConfig cycle_from_json(const nlohmann::json& j);

/// Parses and validates; throws FormatError on syntax/field problems and
/// ModelError when the parsed instance violates an invariant.
InstanceFile parse_instance(std::string_view text);
std::string dump_instance(const Instance& inst, const nlohmann::json& metadata = nullptr);

nlohmann::json plan_to_json(const Plan& plan);
Plan plan_from_json(const nlohmann::json& j);
Plan parse_plan(std::string_view text);
std::string dump_plan(const Plan& plan);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Shortest round-trip decimal form; identical across runs and platforms.
std::string format_double(double v);

}  // namespace bhtp
