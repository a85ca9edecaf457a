#pragma once

#include "rfs/gospa.hpp"
#include "rfs/serialization.hpp"

namespace rfs {

struct ExperimentSpec {
  ScenarioConfig scenario;
  std::vector<FilterVariant> filters;
  int runs = 1;
  std::uint64_t base_seed = 1;
  std::vector<double> clutter_rates;  // empty = scenario's own rate
  int threads = 0;                    // 0 = hardware concurrency
  double gospa_p = 2.0;
  double gospa_c = 10.0;
  double gospa_alpha = 2.0;
};

/// One (clutter rate, filter) cell of the summary table.
struct ExperimentCell {
  double clutter_rate = 0.0;
  FilterVariant variant = FilterVariant::kPmbm;
  double rms_gospa = 0.0;  // across runs and time
  RmsCurves curves;
  double mean_run_seconds = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentCell> cells;  // rate-major, filters in spec order
};

/// Runs all (rate, filter, run) combinations. Per-run seeds are
/// base_seed + run_index; runs are farmed out to a worker pool and results
/// aggregated in run order, so outputs are independent of scheduling.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Writes summary.csv (Table-II layout: one row per clutter rate, one column
/// per filter), per-cell curve CSVs (Fig.-4 layout), timing.csv and
/// metadata.json into out_dir.
void write_experiment_outputs(const ExperimentResult& result,
                              const ExperimentSpec& spec,
                              const std::string& out_dir);

/// Parses a summary.csv back into (rate, variant, value) cells.
std::vector<ExperimentCell> read_summary_csv(const std::string& csv);

}  // namespace rfs
