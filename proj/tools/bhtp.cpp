// bhtp: command-line front end for the beam-hopping time-plan toolkit.
//
// Exit codes: 0 ok, 1 usage, 2 invalid input, 3 exact search timed out
// without any plan.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bhtp/bench.hpp"
#include "bhtp/dp2.hpp"
#include "bhtp/exact.hpp"
#include "bhtp/io.hpp"
#include "bhtp/metrics.hpp"
#include "bhtp/schedule.hpp"
#include "bhtp/testbed.hpp"

using namespace bhtp;
using nlohmann::json;

namespace {

constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kTimeout = 3;

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

ConstraintSet constraints(std::optional<std::size_t> n_max, bool interference) {
  ConstraintSet c;
  c.n_max = n_max;
  c.interference = interference;
  return c;
}

json dp2_report_json(const Dp2Report& r) {
  return json{{"base_pattern_count", r.base_pattern_count},
              {"split_pattern_count", r.split_pattern_count},
              {"final_pattern_count", r.final_pattern_count},
              {"k_max", r.k_max},
              {"runtime_ms", r.runtime_ms}};
}

json scheduled_json(const ScheduledPlan& s, const CycleConfig& cfg) {
  json patterns = json::array();
  for (std::size_t i = 0; i < s.plan.patterns.size(); ++i) {
    json p = plan_to_json(Plan{{s.plan.patterns[i]}, cfg})["patterns"][0];
    p["source_weight"] = s.source_weights[i];
    patterns.push_back(p);
  }
  const auto timing = plan_timing(s, cfg);
  const auto power = power_multipliers(s.plan);
  return json{{"patterns", patterns},
              {"total_slots", s.total_slots},
              {"dropped_patterns", s.dropped_patterns},
              {"rescaled", s.rescaled},
              {"effective_illumination_fraction", s.effective_illumination_fraction},
              {"timing",
               {{"cycle_ms", timing.cycle_ms},
                {"dwell_ms", timing.dwell_ms},
                {"switching_overhead_ms", timing.switching_overhead_ms},
                {"degenerate", timing.degenerate}}},
              {"power", {{"multipliers", power.multipliers}, {"weighted_total", power.weighted_total}}},
              {"cycle", cycle_to_json(cfg)}};
}

std::vector<double> requested_of(const InstanceFile& file) {
  const auto& meta = file.metadata;
  if (meta.is_object() && meta.contains("requested_mbps")) {
    auto v = meta.at("requested_mbps").get<std::vector<double>>();
    if (v.size() == file.instance.n_beams()) return v;
  }
  return {file.instance.demands.begin(), file.instance.demands.end()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beam-hopping time-plan toolkit"};
  app.require_subcommand(1);

  std::string out_path;
  std::string format = "json";
  std::optional<std::size_t> n_max;
  bool interference = false;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a test-bed instance");
  std::size_t trial = 1;
  std::size_t beams = 49;
  std::uint64_t seed = 1;
  std::string quant = "cycle";
  double scale = 1.0;
  std::string gain = "flat";
  std::string scene_path;
  gen->add_option("--trial", trial, "Trial row 1..8")->check(CLI::Range(1, 8));
  gen->add_option("--beams", beams, "Target beam count")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "User seed");
  gen->add_option("--quantizer", quant, "unit or cycle")->check(CLI::IsMember({"unit", "cycle"}));
  gen->add_option("--scale", scale, "Quantizer scale factor")->check(CLI::PositiveNumber);
  gen->add_option("--gain", gain, "flat or taper")->check(CLI::IsMember({"flat", "taper"}));
  gen->add_option("--scene", scene_path, "Also write the scene geometry here");
  gen->add_option("--out", out_path, "Output file (default stdout)");

  // dp2
  auto* dp2 = app.add_subcommand("dp2", "Decompose demands by powers of two");
  std::string instance_path;
  std::string report_path;
  dp2->add_option("instance", instance_path, "Instance file")->required();
  dp2->add_option("--nmax", n_max, "Max beams per pattern")->check(CLI::PositiveNumber);
  dp2->add_flag("--interference", interference, "Forbid adjacent beams in one pattern");
  dp2->add_option("--out", out_path, "Plan output file (default stdout)");
  dp2->add_option("--report", report_path, "Report output file (default stderr)");

  // exact
  auto* exact = app.add_subcommand("exact", "Minimum-pattern plan");
  double time_limit_ms = 60'000.0;
  bool warm = false;
  exact->add_option("instance", instance_path, "Instance file")->required();
  exact->add_option("--time-limit-ms", time_limit_ms, "Search time limit")->check(CLI::NonNegativeNumber);
  exact->add_option("--nmax", n_max, "Max beams per pattern")->check(CLI::PositiveNumber);
  exact->add_flag("--interference", interference, "Forbid adjacent beams in one pattern");
  exact->add_flag("--warm-start", warm, "Seed the search with the dp2 plan");
  exact->add_option("--out", out_path, "Result output file (default stdout)");

  // schedule
  auto* sched = app.add_subcommand("schedule", "Realize a plan on the superframe cycle");
  std::string plan_path;
  std::optional<double> min_gran;
  std::optional<double> switching;
  sched->add_option("plan", plan_path, "Plan file")->required();
  sched->add_option("--min-granularity-ms", min_gran, "Override m_d")->check(CLI::PositiveNumber);
  sched->add_option("--switching-ms", switching, "Override switching time")->check(CLI::NonNegativeNumber);
  sched->add_option("--out", out_path, "Output file (default stdout)");

  // eval
  auto* eval = app.add_subcommand("eval", "Score a plan against an instance");
  eval->add_option("plan", plan_path, "Plan file")->required();
  eval->add_option("instance", instance_path, "Instance file")->required();
  eval->add_option("--nmax", n_max, "Max beams per pattern")->check(CLI::PositiveNumber);
  eval->add_flag("--interference", interference, "Check adjacency exclusion");
  eval->add_option("--out", out_path, "Output file (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run the benchmark matrix");
  std::string config_path;
  std::vector<std::size_t> bench_trials;
  std::vector<std::size_t> bench_beams;
  std::vector<std::uint64_t> bench_seeds;
  bench->add_option("config", config_path, "Bench config file (default: full matrix)");
  bench->add_option("--trial", bench_trials, "Restrict to these trials")->check(CLI::Range(1, 8));
  bench->add_option("--beams", bench_beams, "Restrict to these beam counts")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seeds, "Restrict to these seeds");
  bench->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--out", out_path, "Output file (default stdout)");

  // trials
  auto* trials = app.add_subcommand("trials", "Print the trial matrix");
  trials->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  trials->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*gen) {
      BenchConfig cfg = default_bench_config();
      cfg.quantizer = {quant == "unit" ? Quantizer::Mode::unit : Quantizer::Mode::cycle, scale};
      cfg.gain = gain == "taper" ? GainModel::taper : GainModel::flat;
      const auto g = cell_instance(cfg, trial, beams, seed);
      emit(out_path, dump_instance(g.instance, g.metadata));
      if (!scene_path.empty()) write_text_file(scene_path, scene_to_json(g.scene).dump(2) + "\n");
    } else if (*dp2) {
      const auto file = parse_instance(read_text_file(instance_path));
      const auto res = dp2_full(file.instance, constraints(n_max, interference));
      emit(out_path, dump_plan(res.plan));
      const std::string rep = dp2_report_json(res.report).dump(2) + "\n";
      if (report_path.empty()) std::cerr << rep;
      else write_text_file(report_path, rep);
    } else if (*exact) {
      const auto file = parse_instance(read_text_file(instance_path));
      const auto cons = constraints(n_max, interference);
      ExactOptions opts;
      opts.time_limit_ms = time_limit_ms;
      if (warm) opts.warm_start = dp2_full(file.instance, cons).plan;
      const auto res = solve_exact(file.instance, cons, opts);
      json j{{"status", to_string(res.status)},
             {"lower_bound", res.lower_bound},
             {"gap_percent", res.gap_percent},
             {"nodes_explored", res.nodes_explored},
             {"runtime_ms", res.runtime_ms}};
      j["upper_bound"] = res.upper_bound ? json(*res.upper_bound) : json(nullptr);
      j["plan"] = res.plan ? plan_to_json(*res.plan) : json(nullptr);
      emit(out_path, j.dump(2) + "\n");
      if (res.status == SolveStatus::timeout_no_solution) return kTimeout;
    } else if (*sched) {
      const Plan plan = parse_plan(read_text_file(plan_path));
      CycleConfig cfg = plan.cycle;
      if (min_gran) cfg.min_granularity_ms = *min_gran;
      if (switching) cfg.switching_time_ms = *switching;
      const auto s = scale_to_cycle(plan, cfg);
      emit(out_path, scheduled_json(s, cfg).dump(2) + "\n");
    } else if (*eval) {
      const Plan plan = parse_plan(read_text_file(plan_path));
      const auto file = parse_instance(read_text_file(instance_path));
      const auto report = check_feasible(plan, file.instance, constraints(n_max, interference));
      const auto requested = requested_of(file);
      const auto abstract = supplied_from_plan(plan, requested);
      const auto scheduled = scale_to_cycle(plan, file.instance.cycle);
      const auto realized = supplied_from_plan(scheduled.plan, requested);
      const auto even = even_baseline(requested);
      json j{{"feasible", report.ok()},
             {"violations", report.violations},
             {"pattern_count", plan.size()},
             {"b_ratio", static_cast<double>(plan.size()) / static_cast<double>(file.instance.n_beams())},
             {"capacity_error", capacity_error(realized, requested)},
             {"capacity_error_pre_scaling", capacity_error(abstract, requested)},
             {"even_capacity_error", even.error},
             {"supplied", realized},
             {"requested", requested}};
      emit(out_path, j.dump(2) + "\n");
      if (!report.ok()) return kInvalid;
    } else if (*bench) {
      BenchConfig cfg = config_path.empty() ? default_bench_config()
                                            : config_from_json(json::parse(read_text_file(config_path)));
      if (!bench_trials.empty()) cfg.trials = bench_trials;
      if (!bench_beams.empty()) cfg.beam_counts = bench_beams;
      if (!bench_seeds.empty()) cfg.seeds = bench_seeds;
      const auto res = run_benchmark(cfg);
      emit(out_path, format == "csv" ? emit_csv(res.records) : emit_json(res, cfg).dump(2) + "\n");
      std::cerr << "error reduction vs even: " << format_double(res.summary.error_reduction_percent) << "%\n";
    } else if (*trials) {
      const auto table = trial_table();
      if (format == "csv") {
        std::string csv = "trial,n_users,demand_lo_mbps,demand_hi_mbps,distribution\n";
        for (std::size_t i = 0; i < table.size(); ++i) {
          csv += std::to_string(i + 1) + ',' + std::to_string(table[i].n_users) + ',' +
                 format_double(table[i].demand_lo_mbps) + ',' + format_double(table[i].demand_hi_mbps) + ',' +
                 to_string(table[i].distribution) + '\n';
        }
        emit(out_path, csv);
      } else {
        json arr = json::array();
        for (std::size_t i = 0; i < table.size(); ++i) {
          json row = spec_to_json(table[i]);
          row["trial"] = i + 1;
          arr.push_back(row);
        }
        emit(out_path, arr.dump(2) + "\n");
      }
    }
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return 0;
}
