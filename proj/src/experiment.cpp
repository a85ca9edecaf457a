#include "rfs/experiment.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <sstream>
#include <thread>

namespace rfs {

namespace {

struct RunOutput {
  std::vector<std::vector<GospaResult>> per_filter;  // [filter][step]
  std::vector<double> seconds;                       // [filter]
};

RunOutput evaluate_one_run(const ExperimentSpec& spec, const ScenarioConfig& scenario,
                           std::uint64_t run_index) {
  Rng rng = Rng::for_run(spec.base_seed, run_index);
  TrajectorySet truth = sample_ground_truth(scenario, rng);
  truth.measurements = sample_measurements(truth, scenario, rng);
  const auto zs = measurement_vectors(truth.measurements);
  const MatXd& h = scenario.models.sensor.H;

  RunOutput out;
  for (const FilterVariant v : spec.filters) {
    FilterConfig cfg;
    cfg.variant = v;
    if (cfg.is_adaptive_variant()) cfg.adaptive = scenario.adaptive;

    const auto t0 = std::chrono::steady_clock::now();
    const FilterRunResult run = run_filter(cfg, scenario.models, zs);
    out.seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    std::vector<GospaResult> per_step;
    per_step.reserve(scenario.steps);
    for (int k = 1; k <= scenario.steps; ++k) {
      std::vector<VecXd> truth_pos;
      for (const auto& x : truth.truth_at(k)) truth_pos.push_back(h * x);
      std::vector<VecXd> est_pos;
      for (const auto& e : run.estimates[k - 1]) est_pos.push_back(h * e.mean);
      per_step.push_back(gospa(truth_pos, est_pos, spec.gospa_p, spec.gospa_c,
                               spec.gospa_alpha));
    }
    out.per_filter.push_back(std::move(per_step));
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.runs < 1) throw std::invalid_argument("run_experiment: runs must be >= 1");
  if (spec.filters.empty())
    throw std::invalid_argument("run_experiment: no filters requested");

  std::vector<double> rates = spec.clutter_rates;
  if (rates.empty()) rates.push_back(spec.scenario.models.sensor.clutter.total_rate);

  unsigned n_threads = spec.threads > 0
                           ? static_cast<unsigned>(spec.threads)
                           : std::max(1u, std::thread::hardware_concurrency());

  ExperimentResult result;
  for (const double rate : rates) {
    ScenarioConfig scenario = spec.scenario;
    scenario.models.sensor.clutter.total_rate = rate;

    std::vector<RunOutput> runs(spec.runs);
    std::atomic<int> next{0};
    auto worker = [&]() {
      while (true) {
        const int r = next.fetch_add(1);
        if (r >= spec.runs) return;
        runs[r] = evaluate_one_run(spec, scenario, static_cast<std::uint64_t>(r));
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t + 1 < n_threads && t + 1 < static_cast<unsigned>(spec.runs); ++t)
      pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t f = 0; f < spec.filters.size(); ++f) {
      std::vector<std::vector<GospaResult>> per_run;
      double secs = 0.0;
      for (const auto& r : runs) {
        per_run.push_back(r.per_filter[f]);
        secs += r.seconds[f];
      }
      ExperimentCell cell;
      cell.clutter_rate = rate;
      cell.variant = spec.filters[f];
      cell.rms_gospa = rms_total(per_run);
      cell.curves = rms_over_runs(per_run);
      cell.mean_run_seconds = secs / spec.runs;
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

void write_experiment_outputs(const ExperimentResult& result,
                              const ExperimentSpec& spec,
                              const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto path = [&](const std::string& name) {
    return (fs::path(out_dir) / name).string();
  };

  std::vector<double> rates;
  for (const auto& c : result.cells)
    if (rates.empty() || rates.back() != c.clutter_rate) rates.push_back(c.clutter_rate);

  const auto cell_at = [&](double rate, FilterVariant v) -> const ExperimentCell& {
    for (const auto& c : result.cells)
      if (c.clutter_rate == rate && c.variant == v) return c;
    throw std::logic_error("missing experiment cell");
  };

  // Summary: one row per clutter rate, one column per filter.
  {
    std::ostringstream out;
    out << "clutter_rate";
    for (const auto v : spec.filters) out << "," << to_string(v);
    out << "\n";
    for (const double rate : rates) {
      out << io::format_double(rate);
      for (const auto v : spec.filters)
        out << "," << io::format_double(cell_at(rate, v).rms_gospa);
      out << "\n";
    }
    io::write_text_file(path("summary.csv"), out.str());
  }

  // Per-cell RMS curves with the decomposition.
  for (const auto& c : result.cells) {
    std::ostringstream out;
    out << "step,rms_total,rms_localisation,rms_missed,rms_false\n";
    for (Index k = 0; k < c.curves.total.size(); ++k) {
      out << (k + 1) << "," << io::format_double(c.curves.total(k)) << ","
          << io::format_double(c.curves.localisation(k)) << ","
          << io::format_double(c.curves.missed(k)) << ","
          << io::format_double(c.curves.false_(k)) << "\n";
    }
    std::ostringstream name;
    name << "curves_" << to_string(c.variant) << "_clutter"
         << io::format_double(c.clutter_rate) << ".csv";
    io::write_text_file(path(name.str()), out.str());
  }

  // Timing lives in its own file so every other artifact is reproducible
  // byte for byte.
  {
    std::ostringstream out;
    out << "clutter_rate,filter,mean_run_seconds\n";
    for (const auto& c : result.cells) {
      out << io::format_double(c.clutter_rate) << "," << to_string(c.variant)
          << "," << io::format_double(c.mean_run_seconds) << "\n";
    }
    io::write_text_file(path("timing.csv"), out.str());
  }

  {
    io::json meta;
    meta["scenario"] = io::scenario_to_json(spec.scenario);
    meta["runs"] = spec.runs;
    meta["base_seed"] = spec.base_seed;
    meta["per_run_seed"] = "base_seed + run_index";
    io::json filters = io::json::array();
    for (const auto v : spec.filters) filters.push_back(to_string(v));
    meta["filters"] = std::move(filters);
    meta["clutter_rates"] = rates;
    meta["gospa"] = {{"p", spec.gospa_p}, {"c", spec.gospa_c}, {"alpha", spec.gospa_alpha}};
    io::write_text_file(path("metadata.json"), meta.dump(2) + "\n");
  }
}

std::vector<ExperimentCell> read_summary_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("summary CSV: empty");
  std::vector<FilterVariant> variants;
  {
    std::istringstream hs(line);
    std::string cell;
    std::getline(hs, cell, ',');  // clutter_rate
    while (std::getline(hs, cell, ',')) {
      const auto v = parse_filter_variant(cell);
      if (!v) throw std::runtime_error("summary CSV: unknown filter '" + cell + "'");
      variants.push_back(*v);
    }
  }
  std::vector<ExperimentCell> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');
    const double rate = std::stod(cell);
    for (const auto v : variants) {
      if (!std::getline(ls, cell, ','))
        throw std::runtime_error("summary CSV: short row");
      ExperimentCell c;
      c.clutter_rate = rate;
      c.variant = v;
      c.rms_gospa = std::stod(cell);
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace rfs
