#pragma once

#include "rfs/filter.hpp"
#include "rfs/random.hpp"

namespace rfs {

/// Multi-Bernoulli birth term for ground-truth sampling: per-step existence
/// schedule (1-based, last entry repeating) and a spatial density.
struct MultiBernoulliBirthTerm {
  std::vector<double> r;
  Gaussiand density;

  double r_at(int step) const {
    if (r.empty() || step < 1) return 0.0;
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(step), r.size());
    return r[idx - 1];
  }
};

struct ScenarioConfig {
  std::string name;
  int steps = 1;
  FilterModels models;  // motion, sensor, PPP birth
  std::vector<MultiBernoulliBirthTerm> mb_birth;  // used when nonempty
  AdaptiveBirthConfig adaptive;  // defaults for the A-variants on this scenario
  std::uint64_t seed = 0;
};

struct Trajectory {
  int birth_step = 0;
  int death_step = 0;  // last alive step, inclusive
  std::vector<VecXd> states;

  bool alive_at(int step) const { return step >= birth_step && step <= death_step; }
  const VecXd& state_at(int step) const { return states[step - birth_step]; }
};

struct Measurement {
  VecXd z;
  int origin = -1;  // trajectory index, -1 for clutter
};

struct TrajectorySet {
  std::vector<Trajectory> trajectories;
  std::vector<std::vector<Measurement>> measurements;  // [step-1]

  /// States of targets alive at `step` (1-based).
  std::vector<VecXd> truth_at(int step) const {
    std::vector<VecXd> out;
    for (const auto& t : trajectories)
      if (t.alive_at(step)) out.push_back(t.state_at(step));
    return out;
  }
};

/// Ground truth from the generative model: Poisson (or multi-Bernoulli)
/// births, geometric survival with parameter pS, linear-Gaussian motion.
TrajectorySet sample_ground_truth(const ScenarioConfig& cfg, Rng& rng);

/// Detections (probability pD(x), noise R) plus Poisson clutter uniform on
/// the clutter support. Fills and returns truth.measurements.
std::vector<std::vector<Measurement>> sample_measurements(
    const TrajectorySet& truth, const ScenarioConfig& cfg, Rng& rng);

/// Bare measurement vectors per step, as consumed by run_filter.
std::vector<std::vector<VecXd>> measurement_vectors(
    const std::vector<std::vector<Measurement>>& per_step);

/// Named presets: "paper_sim", "fov_case3", "isolated_case1",
/// "isolated_case2". Throws std::invalid_argument listing the names.
ScenarioConfig preset(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace rfs
