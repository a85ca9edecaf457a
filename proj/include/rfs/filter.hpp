#pragma once

#include "rfs/adaptive_birth.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace rfs {

enum class FilterVariant { kPmbm, kPmb, kAMbm, kAMb };

const char* to_string(FilterVariant v);
std::optional<FilterVariant> parse_filter_variant(std::string_view name);

struct FilterConfig {
  FilterVariant variant = FilterVariant::kPmbm;
  int max_hypotheses = 200;          // N_h
  double prune_ppp = 1e-5;           // Gamma_p
  double prune_bernoulli = 1e-5;     // Gamma_b
  double prune_hypothesis = 1e-10;
  double gate_gamma = 20.0;
  double estimator_threshold = 0.4;
  std::optional<AdaptiveBirthConfig> adaptive;

  bool is_adaptive_variant() const {
    return variant == FilterVariant::kAMbm || variant == FilterVariant::kAMb;
  }
  bool uses_bayesian_birth() const { return !is_adaptive_variant(); }
  bool reduces_to_single_hypothesis() const {
    return variant == FilterVariant::kPmb || variant == FilterVariant::kAMb;
  }
};

/// Models the filters run against.
struct FilterModels {
  MotionModeld motion;
  MeasurementModeld sensor;
  std::vector<BirthTerm> birth;  // PPP birth intensity (ignored by A-variants)
};

struct LocalHypothesis {
  BernoulliTrackd bern;
};

struct TrackRecord {
  int id = -1;
  int birth_step = 0;
  TrackOrigin origin = TrackOrigin::kBayesNew;
  int origin_measurement = -1;
  std::vector<LocalHypothesis> locals;
};

/// One consistent association history: normalized log weight plus, per track,
/// the index of the selected local hypothesis (-1 = track absent).
struct GlobalHypothesis {
  double log_weight = 0.0;
  std::vector<int> selectors;
};

struct PmbmDensity {
  PoissonIntensityd ppp;
  std::vector<TrackRecord> tracks;
  std::vector<GlobalHypothesis> globals;  // nonempty, normalized, weight-descending
  int step = 0;
  int next_track_id = 0;

  // Adaptive-birth seeds recorded by the last update (measurements and their
  // association probabilities r_U), consumed by the next predict.
  std::vector<VecXd> pending_birth_measurements;
  std::vector<double> pending_r_u;
};

PmbmDensity make_empty_density();

struct Estimate {
  int track_id;
  VecXd mean;
};
using EstimateSet = std::vector<std::vector<Estimate>>;  // [step][target]

struct StepDiagnostics {
  int step = 0;
  int num_global_hypotheses = 0;
  int num_tracks = 0;
  int num_ppp_terms = 0;
  double wall_seconds = 0.0;
};

/// Prediction to `step`: survival-scaled Bernoullis, PPP prediction with
/// birth (kept identically zero for A-variants), and, when an adaptive config
/// is present, one birth Bernoulli per previous measurement appended to every
/// global hypothesis.
PmbmDensity predict(const PmbmDensity& d, const FilterConfig& cfg,
                    const FilterModels& models, int step,
                    std::span<const VecXd> prev_measurements = {});

/// Measurement update: per-hypothesis cost matrices, Murty k-best with
/// weight-proportional budgets, pruning, N_h cap, renormalization. Records
/// r_U per measurement when an adaptive config is present.
PmbmDensity update(const PmbmDensity& d, std::span<const VecXd> measurements,
                   const FilterConfig& cfg, const FilterModels& models);

/// Track-oriented merge of the MBM to a single multi-Bernoulli.
PmbmDensity reduce_to_pmb(const PmbmDensity& d, double prune_bernoulli = 1e-5);

/// Estimator 1: Bernoullis of the highest-weight hypothesis with
/// r > estimator_threshold.
std::vector<Estimate> estimate(const PmbmDensity& d, const FilterConfig& cfg);

struct FilterRunResult {
  EstimateSet estimates;
  std::vector<StepDiagnostics> diagnostics;
};

/// predict -> update -> (reduce) -> estimate over the whole sequence.
FilterRunResult run_filter(const FilterConfig& cfg, const FilterModels& models,
                           std::span<const std::vector<VecXd>> measurement_sequence);

}  // namespace rfs
