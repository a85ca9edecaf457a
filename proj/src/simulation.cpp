#include "rfs/simulation.hpp"

namespace rfs {

namespace {

// One clutter point uniform on the support (box minus optional hole).
VecXd sample_clutter_point(const ClutterSpec<double>& c, Rng& rng) {
  const Index d = c.area_lo.size();
  while (true) {
    VecXd z(d);
    for (Index i = 0; i < d; ++i) z(i) = rng.uniform(c.area_lo(i), c.area_hi(i));
    if (!c.in_hole(z)) return z;
  }
}

void extend_trajectory(Trajectory& traj, const MotionModeld& motion, int horizon,
                       Rng& rng) {
  int step = traj.birth_step;
  while (step < horizon) {
    const VecXd& x = traj.states.back();
    if (!rng.bernoulli(motion.survival_at(x))) break;
    traj.states.push_back(rng.multivariate_normal(motion.F * x, motion.Q));
    ++step;
  }
  traj.death_step = step;
}

}  // namespace

TrajectorySet sample_ground_truth(const ScenarioConfig& cfg, Rng& rng) {
  TrajectorySet out;
  for (int k = 1; k <= cfg.steps; ++k) {
    if (!cfg.mb_birth.empty()) {
      for (const auto& b : cfg.mb_birth) {
        if (!rng.bernoulli(b.r_at(k))) continue;
        Trajectory traj;
        traj.birth_step = k;
        traj.states.push_back(
            rng.multivariate_normal(b.density.mean, b.density.cov));
        extend_trajectory(traj, cfg.models.motion, cfg.steps, rng);
        out.trajectories.push_back(std::move(traj));
      }
      continue;
    }
    for (const auto& b : cfg.models.birth) {
      const int count = rng.poisson(b.weight_at(k));
      for (int c = 0; c < count; ++c) {
        Trajectory traj;
        traj.birth_step = k;
        traj.states.push_back(
            rng.multivariate_normal(b.density.mean, b.density.cov));
        extend_trajectory(traj, cfg.models.motion, cfg.steps, rng);
        out.trajectories.push_back(std::move(traj));
      }
    }
  }
  out.measurements.resize(cfg.steps);
  return out;
}

std::vector<std::vector<Measurement>> sample_measurements(
    const TrajectorySet& truth, const ScenarioConfig& cfg, Rng& rng) {
  const auto& sensor = cfg.models.sensor;
  std::vector<std::vector<Measurement>> out(cfg.steps);
  for (int k = 1; k <= cfg.steps; ++k) {
    auto& zs = out[k - 1];
    for (std::size_t ti = 0; ti < truth.trajectories.size(); ++ti) {
      const auto& traj = truth.trajectories[ti];
      if (!traj.alive_at(k)) continue;
      const VecXd& x = traj.state_at(k);
      if (!rng.bernoulli(sensor.pd_at(x))) continue;
      Measurement mz;
      mz.z = rng.multivariate_normal(sensor.H * x, sensor.R);
      mz.origin = static_cast<int>(ti);
      zs.push_back(std::move(mz));
    }
    const int nc = rng.poisson(sensor.clutter.total_rate);
    for (int c = 0; c < nc; ++c)
      zs.push_back({sample_clutter_point(sensor.clutter, rng), -1});
  }
  return out;
}

std::vector<std::vector<VecXd>> measurement_vectors(
    const std::vector<std::vector<Measurement>>& per_step) {
  std::vector<std::vector<VecXd>> out(per_step.size());
  for (std::size_t k = 0; k < per_step.size(); ++k)
    for (const auto& mz : per_step[k]) out[k].push_back(mz.z);
  return out;
}

namespace {

// Nearly-constant-velocity models from the simulation setup: state
// [px, vx, py, vy], T = 1, q = 0.01, pS = 0.995; position measurements with
// R = I2, pD = 0.9; clutter uniform on [0,1000]^2.
ScenarioConfig paper_sim() {
  ScenarioConfig cfg;
  cfg.name = "paper_sim";
  cfg.steps = 120;

  const double T = 1.0, q = 0.01;
  MatXd f2(2, 2), q2(2, 2);
  f2 << 1, T, 0, 1;
  q2 << T * T * T / 3, T * T / 2, T * T / 2, T;
  MatXd F = MatXd::Zero(4, 4), Q = MatXd::Zero(4, 4);
  F.block(0, 0, 2, 2) = f2;
  F.block(2, 2, 2, 2) = f2;
  Q.block(0, 0, 2, 2) = q * q2;
  Q.block(2, 2, 2, 2) = q * q2;
  cfg.models.motion = {F, Q, 0.995, nullptr};

  MatXd H = MatXd::Zero(2, 4);
  H(0, 0) = 1;
  H(1, 2) = 1;
  auto& sensor = cfg.models.sensor;
  sensor.H = H;
  sensor.R = MatXd::Identity(2, 2);
  sensor.detection = DetectionSpec<double>::constant(0.9);
  sensor.clutter.total_rate = 10.0;
  sensor.clutter.area_lo = VecXd::Zero(2);
  sensor.clutter.area_hi = VecXd::Constant(2, 1000.0);

  BirthTerm b;
  b.weights = {10.0, 0.1};
  b.density.mean = VecXd::Zero(4);
  b.density.mean(0) = 100.0;
  b.density.mean(2) = 100.0;
  b.density.cov = VecXd{{150.0 * 150.0, 1.0, 150.0 * 150.0, 1.0}}.asDiagonal();
  cfg.models.birth.push_back(std::move(b));

  cfg.adaptive.r_b_max = 0.1;
  cfg.adaptive.lambda_b_bar = {10.0, 0.1};
  cfg.adaptive.birth_cov = 100.0 * MatXd::Identity(4, 4);
  cfg.adaptive.birth_velocity_mean = VecXd::Zero(4);
  return cfg;
}

// Static targets, circular FoV of radius 5 with pD = 1 inside / 0 outside,
// clutter only outside the FoV; birth intensity approximately uniform on
// [-10,10]^2 as a Gaussian grid.
ScenarioConfig fov_case3() {
  ScenarioConfig cfg;
  cfg.name = "fov_case3";
  cfg.steps = 2;

  cfg.models.motion = {MatXd::Identity(2, 2), MatXd::Zero(2, 2), 1.0, nullptr};

  const double alpha = 0.01;
  auto& sensor = cfg.models.sensor;
  sensor.H = MatXd::Identity(2, 2);
  sensor.R = alpha * MatXd::Identity(2, 2);
  sensor.detection =
      DetectionSpec<double>::disc(VecXd::Zero(2), 5.0, 1.0, 0.0);
  sensor.clutter.total_rate = 37.0;
  sensor.clutter.area_lo = VecXd::Constant(2, -10.0);
  sensor.clutter.area_hi = VecXd::Constant(2, 10.0);
  sensor.clutter.has_hole = true;
  sensor.clutter.hole_center = VecXd::Zero(2);
  sensor.clutter.hole_radius = 5.0;

  // 21x21 grid of tight Gaussians approximating a uniform intensity of total
  // mass 2 per step over the surveillance square.
  const int grid = 21;
  const double lx = 10.0, total_mass = 2.0;
  const double spacing = 2.0 * lx / grid;
  const double sigma = 0.6 * spacing;
  for (int ix = 0; ix < grid; ++ix) {
    for (int iy = 0; iy < grid; ++iy) {
      BirthTerm b;
      b.weights = {total_mass / (grid * grid)};
      b.density.mean = VecXd(2);
      b.density.mean << -lx + (ix + 0.5) * spacing, -lx + (iy + 0.5) * spacing;
      b.density.cov = sigma * sigma * MatXd::Identity(2, 2);
      cfg.models.birth.push_back(std::move(b));
    }
  }

  cfg.adaptive.r_b_max = 0.9;
  cfg.adaptive.lambda_b_bar = {2.0};
  cfg.adaptive.birth_cov = 100.0 * MatXd::Identity(2, 2);
  cfg.adaptive.birth_velocity_mean = VecXd::Zero(2);
  return cfg;
}

// Isolated measurement near (100,100) inside a zero-clutter disc; a far-away
// region around (900,900) supplies controllable far-field measurements.
ScenarioConfig isolated_case1() {
  ScenarioConfig cfg = paper_sim();
  cfg.name = "isolated_case1";
  cfg.steps = 4;
  auto& clutter = cfg.models.sensor.clutter;
  clutter.has_hole = true;
  clutter.hole_center = VecXd::Constant(2, 100.0);
  clutter.hole_radius = 50.0;
  return cfg;
}

// Many far targets, near-perfect detection, vanishing clutter: the far
// measurements stem from targets rather than clutter.
ScenarioConfig isolated_case2() {
  ScenarioConfig cfg = paper_sim();
  cfg.name = "isolated_case2";
  cfg.steps = 4;
  cfg.models.sensor.detection = DetectionSpec<double>::constant(0.999);
  cfg.models.sensor.clutter.total_rate = 1e-4;

  BirthTerm far;
  far.weights = {20.0, 0.1};
  far.density.mean = VecXd::Zero(4);
  far.density.mean(0) = 900.0;
  far.density.mean(2) = 900.0;
  far.density.cov = VecXd{{50.0 * 50.0, 1.0, 50.0 * 50.0, 1.0}}.asDiagonal();
  cfg.models.birth.push_back(std::move(far));
  return cfg;
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
  if (name == "paper_sim") return paper_sim();
  if (name == "fov_case3") return fov_case3();
  if (name == "isolated_case1") return isolated_case1();
  if (name == "isolated_case2") return isolated_case2();
  std::string msg = "unknown preset '" + name + "'; available:";
  for (const auto& n : preset_names()) msg += " " + n;
  throw std::invalid_argument(msg);
}

std::vector<std::string> preset_names() {
  return {"paper_sim", "fov_case3", "isolated_case1", "isolated_case2"};
}

}  // namespace rfs
