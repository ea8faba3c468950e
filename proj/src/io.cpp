#include "bhtp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace bhtp {

using nlohmann::json;

namespace {

// line/column of a byte offset, both 1-based
std::string position_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw FormatError("parse error at " + position_of(text, at) + ": " + e.what());
  }
}

const json& field(const json& obj, const char* name, const std::string& path) {
  if (!obj.is_object()) throw FormatError(path + ": expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) throw FormatError(path + ": missing field '" + name + "'");
  return *it;
}

std::int64_t as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw FormatError(path + ": expected an integer");
  return v.get<std::int64_t>();
}

double as_real(const json& v, const std::string& path) {
  if (!v.is_number()) throw FormatError(path + ": expected a number");
  return v.get<double>();
}

std::vector<BeamIndex> beam_list(const json& v, std::size_t n_beams, const std::string& path) {
  if (!v.is_array()) throw FormatError(path + ": expected an array of beam numbers");
  std::vector<BeamIndex> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    const std::int64_t b = as_int(v[i], at);
    if (b < 1 || (n_beams > 0 && static_cast<std::size_t>(b) > n_beams)) {
      throw FormatError(at + ": beam " + std::to_string(b) + " outside 1.." + std::to_string(n_beams));
    }
    out.push_back(static_cast<BeamIndex>(b - 1));
  }
  return out;
}

json beams_to_json(std::span<const BeamIndex> beams) {
  json arr = json::array();
  for (BeamIndex b : beams) arr.push_back(static_cast<std::int64_t>(b) + 1);
  return arr;
}

}  // namespace

json cycle_to_json(const CycleConfig& c) {
  return json{{"sf_ms", c.sf_duration_ms},
              {"slots", c.slots_per_cycle},
              {"min_granularity_ms", c.min_granularity_ms},
              {"switching_ms", c.switching_time_ms}};
}

CycleConfig cycle_from_json(const json& j) {
  CycleConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw FormatError("cycle: expected an object");
  if (j.contains("sf_ms")) c.sf_duration_ms = as_real(j["sf_ms"], "cycle.sf_ms");
  if (j.contains("slots")) c.slots_per_cycle = as_int(j["slots"], "cycle.slots");
  if (j.contains("min_granularity_ms")) {
    c.min_granularity_ms = as_real(j["min_granularity_ms"], "cycle.min_granularity_ms");
  }
  if (j.contains("switching_ms")) c.switching_time_ms = as_real(j["switching_ms"], "cycle.switching_ms");
  return c;
}

InstanceFile parse_instance(std::string_view text) {
  const json doc = parse_json(text);
  const std::int64_t n = as_int(field(doc, "n_beams", "instance"), "n_beams");
  if (n < 1) throw FormatError("n_beams: must be positive, got " + std::to_string(n));
  const json& dj = field(doc, "demands", "instance");
  if (!dj.is_array()) throw FormatError("demands: expected an array");
  if (dj.size() != static_cast<std::size_t>(n)) {
    throw FormatError("demands: expected " + std::to_string(n) + " entries, got " +
                      std::to_string(dj.size()));
  }
  std::vector<Demand> demands;
  for (std::size_t i = 0; i < dj.size(); ++i) demands.push_back(as_int(dj[i], "demands[" + std::to_string(i) + "]"));

  std::vector<std::vector<BeamIndex>> neighbours;
  if (doc.contains("neighbours")) {
    const json& nj = doc["neighbours"];
    if (!nj.is_array()) throw FormatError("neighbours: expected an array of arrays");
    if (nj.size() > static_cast<std::size_t>(n)) {
      throw FormatError("neighbours: " + std::to_string(nj.size()) + " lists for " +
                        std::to_string(n) + " beams");
    }
    for (std::size_t b = 0; b < nj.size(); ++b) {
      const std::string at = "neighbours[" + std::to_string(b) + "]";
      auto list = beam_list(nj[b], static_cast<std::size_t>(n), at);
      for (BeamIndex nb : list) {
        if (nb == b) throw FormatError(at + ": beam lists itself");
      }
      neighbours.push_back(std::move(list));
    }
  }
  const CycleConfig cycle = cycle_from_json(doc.contains("cycle") ? doc["cycle"] : json());

  InstanceFile out{make_instance(std::move(demands), neighbours, cycle),
                   doc.contains("metadata") ? doc["metadata"] : json()};
  if (auto rep = validate_instance(out.instance); !rep) {
    std::string msg = "invalid instance:";
    for (const auto& v : rep.violations) msg += " " + v + ";";
    throw ModelError(msg);
  }
  return out;
}

std::string dump_instance(const Instance& inst, const json& metadata) {
  json doc;
  doc["n_beams"] = inst.n_beams();
  doc["demands"] = inst.demands;
  json nb = json::array();
  for (std::size_t b = 0; b < inst.n_beams(); ++b) {
    json row = json::array();
    for (BeamIndex o : inst.adjacency[b]) {
      if (o > b) row.push_back(static_cast<std::int64_t>(o) + 1);
    }
    nb.push_back(std::move(row));
  }
  doc["neighbours"] = std::move(nb);
  doc["cycle"] = cycle_to_json(inst.cycle);
  if (!metadata.is_null()) doc["metadata"] = metadata;
  return doc.dump(2) + "\n";
}

json plan_to_json(const Plan& plan) {
  json pats = json::array();
  for (const auto& p : plan.patterns) {
    pats.push_back(json{{"beams", beams_to_json(p.beams())}, {"weight", p.weight()}});
  }
  return json{{"patterns", std::move(pats)}, {"cycle", cycle_to_json(plan.cycle)}};
}

Plan plan_from_json(const json& doc) {
  const json& pj = field(doc, "patterns", "plan");
  if (!pj.is_array()) throw FormatError("patterns: expected an array");
  Plan plan;
  plan.cycle = cycle_from_json(doc.contains("cycle") ? doc["cycle"] : json());
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const std::string at = "patterns[" + std::to_string(i) + "]";
    auto beams = beam_list(field(pj[i], "beams", at), 0, at + ".beams");
    const std::int64_t w = as_int(field(pj[i], "weight", at), at + ".weight");
    try {
      plan.patterns.emplace_back(std::move(beams), w);
    } catch (const ModelError& e) {
      throw FormatError(at + ": " + e.what());
    }
  }
  return plan;
}

Plan parse_plan(std::string_view text) { return plan_from_json(parse_json(text)); }

std::string dump_plan(const Plan& plan) { return plan_to_json(plan).dump(2) + "\n"; }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace bhtp
