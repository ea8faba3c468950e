#include "bhtp/bench.hpp"

#include <chrono>
#include <map>
#include <stdexcept>

#include "bhtp/dp2.hpp"
#include "bhtp/io.hpp"
#include "bhtp/metrics.hpp"
#include "bhtp/rng.hpp"
#include "bhtp/schedule.hpp"

namespace bhtp {

using nlohmann::json;

std::string to_string(Solver s) {
  switch (s) {
    case Solver::dp2: return "dp2";
    case Solver::exact: return "exact";
    case Solver::even: return "even";
  }
  return "unknown";
}

Solver parse_solver(const std::string& name) {
  if (name == "dp2") return Solver::dp2;
  if (name == "exact") return Solver::exact;
  if (name == "even") return Solver::even;
  throw std::invalid_argument("unknown solver '" + name + "'");
}

BenchConfig default_bench_config() {
  BenchConfig cfg;
  cfg.trials = {1, 2, 3, 4, 5, 6, 7, 8};
  cfg.beam_counts = {16, 49, 132};
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.solvers = {Solver::dp2, Solver::even};
  return cfg;
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t trial, std::size_t n_beams) {
  std::uint64_t state = seed;
  std::uint64_t mixed = splitmix64(state);
  state = mixed ^ (static_cast<std::uint64_t>(trial) << 32) ^ static_cast<std::uint64_t>(n_beams);
  return splitmix64(state);
}

GeneratedInstance cell_instance(const BenchConfig& cfg, std::size_t trial, std::size_t n_beams,
                                std::uint64_t seed) {
  const auto table = trial_table();
  if (trial < 1 || trial > table.size()) {
    throw ModelError("trial must be in 1.." + std::to_string(table.size()));
  }
  TestbedSpec spec = table[trial - 1];
  spec.target_beams = n_beams;
  spec.seed = cell_seed(seed, trial, n_beams);
  auto gen = build_instance(spec, cfg.cycle, cfg.quantizer, cfg.gain);
  gen.metadata["trial"] = trial;
  gen.metadata["user_seed"] = seed;
  return gen;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

void score(MetricsRecord& rec, const Plan& plan, const CycleConfig& cycle) {
  rec.pattern_count = plan.size();
  rec.b_ratio = static_cast<double>(rec.pattern_count) / static_cast<double>(rec.n_beams);
  rec.capacity_error_pre_scaling =
      capacity_error(supplied_from_plan(plan, rec.requested), rec.requested);
  const auto scheduled = scale_to_cycle(plan, cycle);
  rec.supplied = supplied_from_plan(scheduled.plan, rec.requested);
  rec.capacity_error = capacity_error(rec.supplied, rec.requested);
}

void run_solver(MetricsRecord& rec, const BenchConfig& cfg, const Instance& inst) {
  switch (rec.solver) {
    case Solver::dp2: {
      const auto t0 = Clock::now();
      auto res = dp2_full(inst, cfg.constraints);
      rec.runtime_ms = elapsed_ms(t0);
      rec.pattern_count_unmerged = res.report.split_pattern_count;
      score(rec, res.plan, inst.cycle);
      rec.status = "ok";
      break;
    }
    case Solver::exact: {
      const auto t0 = Clock::now();
      ExactOptions opts;
      opts.warm_start = dp2_full(inst, cfg.constraints).plan;
      opts.time_limit_ms = cfg.exact_time_limit_ms;
      const auto res = solve_exact(inst, cfg.constraints, opts);
      rec.runtime_ms = elapsed_ms(t0);
      rec.status = to_string(res.status);
      if (res.plan) {
        rec.pattern_count_unmerged = res.plan->size();
        score(rec, *res.plan, inst.cycle);
      }
      break;
    }
    case Solver::even: {
      const auto t0 = Clock::now();
      const auto even = even_baseline(rec.requested);
      rec.runtime_ms = elapsed_ms(t0);
      rec.pattern_count = rec.n_beams;
      rec.pattern_count_unmerged = rec.n_beams;
      rec.b_ratio = 1.0;
      rec.capacity_error = even.error;
      rec.capacity_error_pre_scaling = even.error;
      rec.supplied = even.supplied;
      rec.status = "ok";
      break;
    }
  }
}

}  // namespace

BenchResult run_benchmark(const BenchConfig& cfg) {
  BenchResult out;
  for (std::size_t trial : cfg.trials) {
    for (std::size_t beams : cfg.beam_counts) {
      for (std::uint64_t seed : cfg.seeds) {
        std::optional<GeneratedInstance> gen;
        std::string gen_error;
        try {
          gen = cell_instance(cfg, trial, beams, seed);
        } catch (const std::exception& e) {
          gen_error = e.what();
        }
        for (Solver s : cfg.solvers) {
          MetricsRecord rec;
          rec.trial = trial;
          rec.n_beams = gen ? gen->instance.n_beams() : beams;
          rec.seed = seed;
          rec.solver = s;
          if (!gen) {
            rec.status = "error: " + gen_error;
            out.records.push_back(std::move(rec));
            continue;
          }
          rec.requested = gen->scene.per_beam_demand;
          try {
            run_solver(rec, cfg, gen->instance);
          } catch (const std::exception& e) {
            rec.pattern_count = 0;
            rec.b_ratio = rec.capacity_error = rec.capacity_error_pre_scaling = 0.0;
            rec.supplied.clear();
            rec.status = std::string("error: ") + e.what();
          }
          out.records.push_back(std::move(rec));
        }
      }
    }
  }
  out.summary = summarize(out.records);
  return out;
}

BenchSummary summarize(const std::vector<MetricsRecord>& records) {
  struct Acc {
    std::size_t dp2 = 0, even = 0;
    double ratio = 0, dp2_err = 0, even_err = 0, runtime = 0;
  };
  std::vector<std::pair<std::size_t, std::size_t>> order;
  std::map<std::pair<std::size_t, std::size_t>, Acc> cells;
  for (const auto& r : records) {
    if (r.status.rfind("error", 0) == 0) continue;
    const auto key = std::make_pair(r.trial, r.n_beams);
    if (!cells.count(key)) order.push_back(key);
    Acc& a = cells[key];
    if (r.solver == Solver::dp2) {
      ++a.dp2;
      a.ratio += r.b_ratio;
      a.dp2_err += r.capacity_error;
      a.runtime += r.runtime_ms;
    } else if (r.solver == Solver::even) {
      ++a.even;
      a.even_err += r.capacity_error;
    }
  }
  BenchSummary sum;
  std::size_t n_dp2 = 0, n_even = 0;
  double dp2_err = 0, even_err = 0;
  for (const auto& key : order) {
    const Acc& a = cells[key];
    CellSummary c;
    c.trial = key.first;
    c.n_beams = key.second;
    c.samples = a.dp2;
    if (a.dp2) {
      c.mean_b_ratio = a.ratio / static_cast<double>(a.dp2);
      c.mean_dp2_error = a.dp2_err / static_cast<double>(a.dp2);
      c.mean_dp2_runtime_ms = a.runtime / static_cast<double>(a.dp2);
    }
    if (a.even) c.mean_even_error = a.even_err / static_cast<double>(a.even);
    n_dp2 += a.dp2;
    n_even += a.even;
    dp2_err += a.dp2_err;
    even_err += a.even_err;
    sum.cells.push_back(c);
  }
  if (n_dp2) sum.mean_dp2_error = dp2_err / static_cast<double>(n_dp2);
  if (n_even) sum.mean_even_error = even_err / static_cast<double>(n_even);
  if (n_dp2 && n_even && sum.mean_even_error > 0.0) {
    sum.error_reduction_percent = 100.0 * (1.0 - sum.mean_dp2_error / sum.mean_even_error);
  }
  return sum;
}

json config_to_json(const BenchConfig& cfg) {
  json solvers = json::array();
  for (Solver s : cfg.solvers) solvers.push_back(to_string(s));
  json cons = {{"interference", cfg.constraints.interference}};
  cons["n_max"] = cfg.constraints.n_max ? json(*cfg.constraints.n_max) : json(nullptr);
  return json{{"trials", cfg.trials},
              {"beam_counts", cfg.beam_counts},
              {"seeds", cfg.seeds},
              {"solvers", solvers},
              {"cycle", cycle_to_json(cfg.cycle)},
              {"quantizer", {{"mode", to_string(cfg.quantizer.mode)}, {"scale", cfg.quantizer.scale}}},
              {"gain_model", to_string(cfg.gain)},
              {"constraints", cons},
              {"exact_time_limit_ms", cfg.exact_time_limit_ms},
              {"supply_model", "fairness ratio: accumulated slot weight share of total request"}};
}

BenchConfig config_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("bench config must be a JSON object");
  BenchConfig cfg = default_bench_config();
  try {
    if (j.contains("trials")) cfg.trials = j.at("trials").get<std::vector<std::size_t>>();
    if (j.contains("beam_counts")) cfg.beam_counts = j.at("beam_counts").get<std::vector<std::size_t>>();
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("solvers")) {
      cfg.solvers.clear();
      for (const auto& s : j.at("solvers")) cfg.solvers.push_back(parse_solver(s.get<std::string>()));
    }
    if (j.contains("cycle")) cfg.cycle = cycle_from_json(j.at("cycle"));
    if (j.contains("quantizer")) {
      const auto& q = j.at("quantizer");
      const auto mode = q.value("mode", std::string("cycle"));
      if (mode == "unit") cfg.quantizer.mode = Quantizer::Mode::unit;
      else if (mode == "cycle") cfg.quantizer.mode = Quantizer::Mode::cycle;
      else throw FormatError("quantizer.mode must be 'unit' or 'cycle'");
      cfg.quantizer.scale = q.value("scale", 1.0);
    }
    if (j.contains("gain_model")) {
      const auto g = j.at("gain_model").get<std::string>();
      if (g == "flat") cfg.gain = GainModel::flat;
      else if (g == "taper") cfg.gain = GainModel::taper;
      else throw FormatError("gain_model must be 'flat' or 'taper'");
    }
    if (j.contains("constraints")) {
      const auto& c = j.at("constraints");
      cfg.constraints.interference = c.value("interference", cfg.constraints.interference);
      if (c.contains("n_max") && !c.at("n_max").is_null()) cfg.constraints.n_max = c.at("n_max").get<std::size_t>();
    }
    if (j.contains("exact_time_limit_ms")) cfg.exact_time_limit_ms = j.at("exact_time_limit_ms").get<double>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bench config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("bench config: ") + e.what());
  }
  return cfg;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string emit_csv(const std::vector<MetricsRecord>& records) {
  std::string out = "trial,n_beams,seed,solver,pattern_count,b_ratio,capacity_error,runtime_ms,status\n";
  for (const auto& r : records) {
    out += std::to_string(r.trial) + ',' + std::to_string(r.n_beams) + ',' + std::to_string(r.seed) + ',' +
           to_string(r.solver) + ',' + std::to_string(r.pattern_count) + ',' + format_double(r.b_ratio) + ',' +
           format_double(r.capacity_error) + ',' + format_double(r.runtime_ms) + ',' + csv_field(r.status) +
           '\n';
  }
  return out;
}

json emit_json(const BenchResult& result, const BenchConfig& cfg) {
  json recs = json::array();
  for (const auto& r : result.records) {
    recs.push_back(json{{"trial", r.trial},
                        {"n_beams", r.n_beams},
                        {"seed", r.seed},
                        {"cell_seed", cell_seed(r.seed, r.trial, r.n_beams)},
                        {"solver", to_string(r.solver)},
                        {"pattern_count", r.pattern_count},
                        {"pattern_count_unmerged", r.pattern_count_unmerged},
                        {"b_ratio", r.b_ratio},
                        {"capacity_error", r.capacity_error},
                        {"capacity_error_pre_scaling", r.capacity_error_pre_scaling},
                        {"runtime_ms", r.runtime_ms},
                        {"status", r.status},
                        {"supplied", r.supplied},
                        {"requested", r.requested}});
  }
  json cells = json::array();
  for (const auto& c : result.summary.cells) {
    cells.push_back(json{{"trial", c.trial},
                         {"n_beams", c.n_beams},
                         {"samples", c.samples},
                         {"mean_b_ratio", c.mean_b_ratio},
                         {"mean_dp2_error", c.mean_dp2_error},
                         {"mean_even_error", c.mean_even_error},
                         {"mean_dp2_runtime_ms", c.mean_dp2_runtime_ms}});
  }
  return json{{"config", config_to_json(cfg)},
              {"records", std::move(recs)},
              {"summary",
               {{"cells", std::move(cells)},
                {"mean_dp2_error", result.summary.mean_dp2_error},
                {"mean_even_error", result.summary.mean_even_error},
                {"error_reduction_percent", result.summary.error_reduction_percent}}}};
}

}  // namespace bhtp
