#include "rfs/cardinality.hpp"
#include "rfs/experiment.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

using namespace rfs;

ScenarioConfig load_scenario(const std::string& spec, double clutter_override) {
  ScenarioConfig cfg;
  if (spec.ends_with(".json") || std::filesystem::exists(spec)) {
    cfg = io::scenario_from_json(io::json::parse(io::read_text_file(spec)));
  } else {
    cfg = preset(spec);
  }
  if (clutter_override >= 0.0)
    cfg.models.sensor.clutter.total_rate = clutter_override;
  return cfg;
}

std::vector<FilterVariant> parse_filters(const std::vector<std::string>& names) {
  std::vector<FilterVariant> out;
  for (const auto& n : names) {
    const auto v = parse_filter_variant(n);
    if (!v) {
      throw std::invalid_argument("unknown filter '" + n +
                                  "' (expected pmbm, pmb, a-mbm or a-mb)");
    }
    out.push_back(*v);
  }
  return out;
}

int cmd_simulate(const std::string& scenario, std::uint64_t seed,
                 double clutter_override, const std::string& out_path) {
  ScenarioConfig cfg = load_scenario(scenario, clutter_override);
  cfg.seed = seed;
  Rng rng(seed);
  io::Dataset ds;
  ds.scenario = cfg;
  ds.seed = seed;
  ds.truth = sample_ground_truth(cfg, rng);
  ds.truth.measurements = sample_measurements(ds.truth, cfg, rng);
  io::write_text_file(out_path, io::dataset_to_json(ds).dump(2) + "\n");
  std::cout << "wrote " << out_path << " (" << ds.truth.trajectories.size()
            << " trajectories, " << cfg.steps << " steps)\n";
  return 0;
}

int cmd_run(const std::string& filter_name, const std::string& dataset_path,
            const std::string& out_path, const std::string& diagnostics_path) {
  const auto variant = parse_filter_variant(filter_name);
  if (!variant) {
    throw std::invalid_argument("unknown filter '" + filter_name +
                                "' (expected pmbm, pmb, a-mbm or a-mb)");
  }
  const io::Dataset ds =
      io::dataset_from_json(io::json::parse(io::read_text_file(dataset_path)));

  FilterConfig cfg;
  cfg.variant = *variant;
  if (cfg.is_adaptive_variant()) cfg.adaptive = ds.scenario.adaptive;

  const auto zs = measurement_vectors(ds.truth.measurements);
  const FilterRunResult result = run_filter(cfg, ds.scenario.models, zs);
  io::write_text_file(out_path, io::estimates_to_csv(result.estimates));
  if (!diagnostics_path.empty()) {
    io::write_text_file(diagnostics_path,
                        io::diagnostics_to_csv(result.diagnostics));
  }
  std::size_t total = 0;
  for (const auto& step : result.estimates) total += step.size();
  std::cout << "wrote " << out_path << " (" << total << " estimates)\n";
  return 0;
}

int cmd_experiment(const std::string& scenario,
                   const std::vector<std::string>& filter_names, int runs,
                   std::uint64_t seed, const std::vector<double>& clutter_rates,
                   int threads, const std::string& out_dir) {
  ExperimentSpec spec;
  spec.scenario = load_scenario(scenario, -1.0);
  spec.filters = parse_filters(filter_names);
  spec.runs = runs;
  spec.base_seed = seed;
  spec.clutter_rates = clutter_rates;
  spec.threads = threads;

  const ExperimentResult result = run_experiment(spec);
  write_experiment_outputs(result, spec, out_dir);

  std::cout << "RMS-GOSPA (runs=" << runs << ")\n";
  std::cout << io::read_text_file((std::filesystem::path(out_dir) / "summary.csv").string());
  return 0;
}

int cmd_cardinality(const std::string& scenario, int samples, std::uint64_t seed,
                    double r_b_max_override, const std::string& out_path) {
  ScenarioConfig cfg = load_scenario(scenario, -1.0);
  AdaptiveBirthConfig acfg = cfg.adaptive;
  if (r_b_max_override >= 0.0) acfg.r_b_max = r_b_max_override;

  const CardinalityReport rep = lemma1_report(cfg, acfg, samples, seed);
  const auto sweep = lemma1_sweep(cfg, acfg, samples, seed);

  std::ostringstream out;
  out << "quantity,value\n";
  out << "bayes_expected," << io::format_double(rep.bayes_expected) << "\n";
  out << "adaptive_expected," << io::format_double(rep.adaptive_expected) << "\n";
  out << "empirical_adaptive," << io::format_double(rep.empirical_adaptive) << "\n";
  out << "empirical_std_error," << io::format_double(rep.empirical_std_error) << "\n";
  out << "gap," << io::format_double(rep.gap) << "\n";
  out << "r_b_max,gap\n";
  for (const auto& [r, gap] : sweep)
    out << io::format_double(r) << "," << io::format_double(gap) << "\n";

  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    io::write_text_file(out_path, out.str());
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-target tracking with PMBM/PMB Bayesian track initiation "
               "and MBM/MB adaptive birth"};
  app.require_subcommand(1);

  std::string scenario = "paper_sim";
  std::uint64_t seed = 1;
  double clutter_rate = -1.0;
  std::string out_path;

  auto* sim = app.add_subcommand("simulate", "Sample ground truth and measurements");
  sim->add_option("--scenario", scenario, "Preset name or scenario JSON path");
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--clutter-rate", clutter_rate, "Override the clutter rate");
  sim->add_option("--out", out_path, "Output dataset JSON path")->required();

  std::string filter_name = "pmbm";
  std::string dataset_path;
  std::string diagnostics_path;
  auto* run = app.add_subcommand("run", "Run one filter on a dataset");
  run->add_option("--filter", filter_name, "pmbm | pmb | a-mbm | a-mb");
  run->add_option("--dataset", dataset_path, "Dataset JSON path")->required();
  run->add_option("--out", out_path, "Estimates CSV path")->required();
  run->add_option("--diagnostics", diagnostics_path, "Diagnostics CSV path");

  std::vector<std::string> filter_names;
  std::vector<double> clutter_rates;
  int runs = 25;
  int threads = 0;
  auto* exp = app.add_subcommand("experiment",
                                 "Monte Carlo comparison with RMS-GOSPA tables");
  exp->add_option("--scenario", scenario, "Preset name or scenario JSON path");
  exp->add_option("--filter", filter_names, "Filters to run (repeatable)");
  exp->add_option("--runs", runs, "Monte Carlo runs per cell");
  exp->add_option("--seed", seed, "Base seed (per-run seed = base + run index)");
  exp->add_option("--clutter-rate", clutter_rates, "Clutter rates (repeatable)");
  exp->add_option("--threads", threads, "Worker threads (0 = hardware)");
  exp->add_option("--out", out_path, "Output directory")->required();

  int samples = 10000;
  double r_b_max = -1.0;
  auto* card = app.add_subcommand("cardinality",
                                  "Expected-cardinality report (Lemma-1 check)");
  card->add_option("--scenario", scenario, "Preset name or scenario JSON path");
  card->add_option("--samples", samples, "Monte Carlo samples for rho_Z1");
  card->add_option("--seed", seed, "RNG seed");
  card->add_option("--r-b-max", r_b_max, "Override r_B,max");
  card->add_option("--out", out_path, "Output CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(scenario, seed, clutter_rate, out_path);
    if (run->parsed())
      return cmd_run(filter_name, dataset_path, out_path, diagnostics_path);
    if (exp->parsed()) {
      if (filter_names.empty())
        filter_names = {"pmbm", "pmb", "a-mbm", "a-mb"};
      return cmd_experiment(scenario, filter_names, runs, seed, clutter_rates,
                            threads, out_path);
    }
    if (card->parsed())
      return cmd_cardinality(scenario, samples, seed, r_b_max, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
