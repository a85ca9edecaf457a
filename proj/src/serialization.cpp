#include "rfs/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rfs::io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

json matrix_to_json(const MatXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatXd matrix_from_json(const json& j) {
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows > 0 ? static_cast<Index>(j.at(0).size()) : 0;
  MatXd m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index jj = 0; jj < cols; ++jj) m(i, jj) = j.at(i).at(jj).get<double>();
  return m;
}

json vector_to_json(const VecXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

VecXd vector_from_json(const json& j) {
  VecXd v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

json gaussian_to_json(const Gaussiand& g) {
  return {{"mean", vector_to_json(g.mean)}, {"cov", matrix_to_json(g.cov)}};
}

Gaussiand gaussian_from_json(const json& j) {
  return {vector_from_json(j.at("mean")), matrix_from_json(j.at("cov"))};
}

json detection_to_json(const DetectionSpec<double>& d) {
  if (d.kind == DetectionSpec<double>::Kind::kConstant)
    return {{"kind", "constant"}, {"value", d.value}};
  return {{"kind", "disc"},
          {"center", vector_to_json(d.disc_center)},
          {"radius", d.disc_radius},
          {"inside", d.inside_value},
          {"outside", d.outside_value}};
}

DetectionSpec<double> detection_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant")
    return DetectionSpec<double>::constant(j.at("value").get<double>());
  if (kind == "disc")
    return DetectionSpec<double>::disc(
        vector_from_json(j.at("center")), j.at("radius").get<double>(),
        j.at("inside").get<double>(), j.at("outside").get<double>());
  throw std::invalid_argument("unknown detection kind '" + kind + "'");
}

json clutter_to_json(const ClutterSpec<double>& c) {
  json j = {{"total_rate", c.total_rate},
            {"area_lo", vector_to_json(c.area_lo)},
            {"area_hi", vector_to_json(c.area_hi)}};
  if (c.has_hole) {
    j["hole_center"] = vector_to_json(c.hole_center);
    j["hole_radius"] = c.hole_radius;
  }
  return j;
}

ClutterSpec<double> clutter_from_json(const json& j) {
  ClutterSpec<double> c;
  c.total_rate = j.at("total_rate").get<double>();
  c.area_lo = vector_from_json(j.at("area_lo"));
  c.area_hi = vector_from_json(j.at("area_hi"));
  if (j.contains("hole_center")) {
    c.has_hole = true;
    c.hole_center = vector_from_json(j.at("hole_center"));
    c.hole_radius = j.at("hole_radius").get<double>();
  }
  return c;
}

json adaptive_to_json(const AdaptiveBirthConfig& a) {
  return {{"r_b_max", a.r_b_max},
          {"lambda_b_bar", a.lambda_b_bar},
          {"birth_cov", matrix_to_json(a.birth_cov)},
          {"birth_velocity_mean", vector_to_json(a.birth_velocity_mean)}};
}

AdaptiveBirthConfig adaptive_from_json(const json& j) {
  AdaptiveBirthConfig a;
  a.r_b_max = j.at("r_b_max").get<double>();
  a.lambda_b_bar = j.at("lambda_b_bar").get<std::vector<double>>();
  a.birth_cov = matrix_from_json(j.at("birth_cov"));
  a.birth_velocity_mean = vector_from_json(j.at("birth_velocity_mean"));
  return a;
}

}  // namespace

json scenario_to_json(const ScenarioConfig& cfg) {
  json birth = json::array();
  for (const auto& b : cfg.models.birth)
    birth.push_back({{"weights", b.weights},
                     {"density", gaussian_to_json(b.density)}});
  json mb_birth = json::array();
  for (const auto& b : cfg.mb_birth)
    mb_birth.push_back({{"r", b.r}, {"density", gaussian_to_json(b.density)}});
  return {{"name", cfg.name},
          {"steps", cfg.steps},
          {"motion",
           {{"F", matrix_to_json(cfg.models.motion.F)},
            {"Q", matrix_to_json(cfg.models.motion.Q)},
            {"ps", cfg.models.motion.ps}}},
          {"sensor",
           {{"H", matrix_to_json(cfg.models.sensor.H)},
            {"R", matrix_to_json(cfg.models.sensor.R)},
            {"detection", detection_to_json(cfg.models.sensor.detection)},
            {"clutter", clutter_to_json(cfg.models.sensor.clutter)}}},
          {"birth", std::move(birth)},
          {"mb_birth", std::move(mb_birth)},
          {"adaptive", adaptive_to_json(cfg.adaptive)},
          {"seed", cfg.seed}};
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig cfg;
  cfg.name = j.at("name").get<std::string>();
  cfg.steps = j.at("steps").get<int>();
  cfg.models.motion.F = matrix_from_json(j.at("motion").at("F"));
  cfg.models.motion.Q = matrix_from_json(j.at("motion").at("Q"));
  cfg.models.motion.ps = j.at("motion").at("ps").get<double>();
  cfg.models.sensor.H = matrix_from_json(j.at("sensor").at("H"));
  cfg.models.sensor.R = matrix_from_json(j.at("sensor").at("R"));
  cfg.models.sensor.detection = detection_from_json(j.at("sensor").at("detection"));
  cfg.models.sensor.clutter = clutter_from_json(j.at("sensor").at("clutter"));
  for (const auto& b : j.at("birth")) {
    BirthTerm t;
    t.weights = b.at("weights").get<std::vector<double>>();
    t.density = gaussian_from_json(b.at("density"));
    cfg.models.birth.push_back(std::move(t));
  }
  for (const auto& b : j.at("mb_birth")) {
    MultiBernoulliBirthTerm t;
    t.r = b.at("r").get<std::vector<double>>();
    t.density = gaussian_from_json(b.at("density"));
    cfg.mb_birth.push_back(std::move(t));
  }
  cfg.adaptive = adaptive_from_json(j.at("adaptive"));
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

json dataset_to_json(const Dataset& ds) {
  json trajectories = json::array();
  for (const auto& t : ds.truth.trajectories) {
    json states = json::array();
    for (const auto& x : t.states) states.push_back(vector_to_json(x));
    trajectories.push_back({{"birth_step", t.birth_step},
                            {"death_step", t.death_step},
                            {"states", std::move(states)}});
  }
  json measurements = json::array();
  for (const auto& step : ds.truth.measurements) {
    json zs = json::array();
    for (const auto& mz : step)
      zs.push_back({{"z", vector_to_json(mz.z)}, {"origin", mz.origin}});
    measurements.push_back(std::move(zs));
  }
  return {{"scenario", scenario_to_json(ds.scenario)},
          {"seed", ds.seed},
          {"trajectories", std::move(trajectories)},
          {"measurements", std::move(measurements)}};
}

Dataset dataset_from_json(const json& j) {
  Dataset ds;
  ds.scenario = scenario_from_json(j.at("scenario"));
  ds.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& t : j.at("trajectories")) {
    Trajectory traj;
    traj.birth_step = t.at("birth_step").get<int>();
    traj.death_step = t.at("death_step").get<int>();
    for (const auto& x : t.at("states")) traj.states.push_back(vector_from_json(x));
    ds.truth.trajectories.push_back(std::move(traj));
  }
  for (const auto& step : j.at("measurements")) {
    std::vector<Measurement> zs;
    for (const auto& mz : step)
      zs.push_back({vector_from_json(mz.at("z")), mz.at("origin").get<int>()});
    ds.truth.measurements.push_back(std::move(zs));
  }
  return ds;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> state_column_names(Index dim) {
  if (dim == 4) return {"px", "vx", "py", "vy"};
  if (dim == 2) return {"px", "py"};
  std::vector<std::string> names;
  for (Index i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

}  // namespace

std::string estimates_to_csv(const EstimateSet& estimates) {
  Index dim = 0;
  for (const auto& step : estimates)
    for (const auto& e : step) dim = std::max(dim, e.mean.size());
  if (dim == 0) dim = 4;

  std::ostringstream out;
  out << "step,track_id";
  for (const auto& name : state_column_names(dim)) out << "," << name;
  out << "\n";
  for (std::size_t k = 0; k < estimates.size(); ++k) {
    for (const auto& e : estimates[k]) {
      out << (k + 1) << "," << e.track_id;
      for (Index i = 0; i < dim; ++i)
        out << "," << format_double(i < e.mean.size() ? e.mean(i) : 0.0);
      out << "\n";
    }
  }
  return out.str();
}

EstimateSet estimates_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) return {};
  EstimateSet out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3) throw std::runtime_error("estimates CSV: bad row");
    const int step = std::stoi(cells[0]);
    Estimate e;
    e.track_id = std::stoi(cells[1]);
    e.mean = VecXd(static_cast<Index>(cells.size()) - 2);
    for (std::size_t i = 2; i < cells.size(); ++i)
      e.mean(static_cast<Index>(i) - 2) = std::stod(cells[i]);
    if (static_cast<std::size_t>(step) > out.size()) out.resize(step);
    out[step - 1].push_back(std::move(e));
  }
  return out;
}

std::string diagnostics_to_csv(std::span<const StepDiagnostics> diags) {
  std::ostringstream out;
  out << "step,num_global_hypotheses,num_tracks,num_ppp_terms,wall_seconds\n";
  for (const auto& d : diags) {
    out << d.step << "," << d.num_global_hypotheses << "," << d.num_tracks << ","
        << d.num_ppp_terms << "," << format_double(d.wall_seconds) << "\n";
  }
  return out.str();
}

}  // namespace rfs::io
