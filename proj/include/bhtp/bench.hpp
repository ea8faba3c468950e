#pragma once
// Benchmark harness: trials x beam counts x seeds x solvers, each cell
// generated, solved, realized on the cycle and scored against the request.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bhtp/exact.hpp"
#include "bhtp/model.hpp"
#include "bhtp/testbed.hpp"

namespace bhtp {

enum class Solver { dp2, exact, even };

std::string to_string(Solver s);
/// Throws std::invalid_argument for an unknown name.
Solver parse_solver(const std::string& name);

struct BenchConfig {
  std::vector<std::size_t> trials;  // 1-based rows of trial_table()
  std::vector<std::size_t> beam_counts;
  std::vector<std::uint64_t> seeds;
  std::vector<Solver> solvers;
  CycleConfig cycle;
  Quantizer quantizer{Quantizer::Mode::cycle, 1.0};
  GainModel gain = GainModel::flat;
  ConstraintSet constraints{std::nullopt, true};
  double exact_time_limit_ms = 10'000.0;
};

/// The full trial matrix: 8 trials x {16, 49, 132} beams x seeds 1..5, dp2 only.
BenchConfig default_bench_config();

/// Generator seed of one cell. Mixing in the trial and beam count keeps cells
/// with equal user seeds independent.
std::uint64_t cell_seed(std::uint64_t seed, std::size_t trial, std::size_t n_beams);

/// Instance of one cell, exactly as the benchmark builds it.
GeneratedInstance cell_instance(const BenchConfig& cfg, std::size_t trial, std::size_t n_beams,
                                std::uint64_t seed);

struct MetricsRecord {
  std::size_t trial = 0;
  std::size_t n_beams = 0;
  std::uint64_t seed = 0;
  Solver solver = Solver::dp2;
  std::size_t pattern_count = 0;
  std::size_t pattern_count_unmerged = 0;  // dp2: before duplicate merging
  double b_ratio = 0.0;
  double capacity_error = 0.0;              // on the cycle-realized plan
  double capacity_error_pre_scaling = 0.0;  // on the abstract plan
  double runtime_ms = 0.0;
  std::string status;  // "ok", solver status, or "error: ..."
  std::vector<double> supplied;
  std::vector<double> requested;
};

struct CellSummary {
  std::size_t trial = 0;
  std::size_t n_beams = 0;
  std::size_t samples = 0;
  double mean_b_ratio = 0.0;
  double mean_dp2_error = 0.0;
  double mean_even_error = 0.0;
  double mean_dp2_runtime_ms = 0.0;
};

struct BenchSummary {
  std::vector<CellSummary> cells;  // per (trial, beam count), config order
  double mean_dp2_error = 0.0;
  double mean_even_error = 0.0;
  /// 100 * (1 - mean dp2 error / mean even error); 0 without both solvers.
  double error_reduction_percent = 0.0;
};

struct BenchResult {
  std::vector<MetricsRecord> records;
  BenchSummary summary;
};

/// Cells that fail are recorded with an "error: ..." status and the run goes on.
BenchResult run_benchmark(const BenchConfig& cfg);

BenchSummary summarize(const std::vector<MetricsRecord>& records);

nlohmann::json config_to_json(const BenchConfig& cfg);
/// Missing keys keep their defaults from default_bench_config().
BenchConfig config_from_json(const nlohmann::json& j);

/// Header trial,n_beams,seed,solver,pattern_count,b_ratio,capacity_error,runtime_ms,status
std::string emit_csv(const std::vector<MetricsRecord>& records);
nlohmann::json emit_json(const BenchResult& result, const BenchConfig& cfg);

}  // namespace bhtp
