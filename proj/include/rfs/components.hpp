#pragma once

#include "rfs/gaussian.hpp"

#include <optional>
#include <vector>

namespace rfs {

enum class TrackOrigin { kBayesNew, kAdaptiveBirth, kContinuation };

/// Potential target: exists with probability r, spatial density `density`.
template <typename Scalar = double>
struct BernoulliTrack {
  Scalar r = Scalar(0);
  Gaussian<Scalar> density;
  int track_id = -1;
  int birth_time = 0;
  TrackOrigin origin = TrackOrigin::kBayesNew;
  int origin_measurement = -1;
};

using BernoulliTrackd = BernoulliTrack<double>;

/// Weighted Gaussian-mixture intensity of undetected targets.
template <typename Scalar = double>
struct PoissonIntensity {
  struct Term {
    Scalar weight;
    Gaussian<Scalar> density;
  };

  std::vector<Term> terms;

  bool empty() const { return terms.empty(); }

  Scalar total_weight() const {
    Scalar s = Scalar(0);
    for (const auto& t : terms) s += t.weight;
    return s;
  }

  /// Intensity value at a state point.
  Scalar at(const VectorX<Scalar>& x) const {
    Scalar s = Scalar(0);
    for (const auto& t : terms)
      s += t.weight * std::exp(log_gaussian_pdf(x, t.density.mean, t.density.cov));
    return s;
  }
};

using PoissonIntensityd = PoissonIntensity<double>;

/// One Gaussian term of a PPP birth intensity with a per-step weight schedule
/// (1-based step; the last entry repeats for all later steps).
struct BirthTerm {
  std::vector<double> weights;
  Gaussiand density;

  double weight_at(int step) const {
    if (weights.empty() || step < 1) return 0.0;
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(step), weights.size());
    return weights[idx - 1];
  }
};

inline PoissonIntensityd birth_intensity_at(const std::vector<BirthTerm>& birth,
                                            int step) {
  PoissonIntensityd out;
  for (const auto& b : birth) {
    const double w = b.weight_at(step);
    if (w > 0.0) out.terms.push_back({w, b.density});
  }
  return out;
}

/// Moment-match a weighted set of Gaussians to a single Gaussian.
/// Weights are given in log domain and need not be normalized.
template <typename Scalar>
Gaussian<Scalar> moment_match(std::span<const Scalar> log_weights,
                              std::span<const Gaussian<Scalar>> densities) {
  const Scalar lse = log_sum_exp(log_weights);
  const Index d = densities.front().dim();
  VectorX<Scalar> mean = VectorX<Scalar>::Zero(d);
  for (std::size_t i = 0; i < densities.size(); ++i)
    mean += std::exp(log_weights[i] - lse) * densities[i].mean;
  MatrixX<Scalar> cov = MatrixX<Scalar>::Zero(d, d);
  for (std::size_t i = 0; i < densities.size(); ++i) {
    const VectorX<Scalar> dm = densities[i].mean - mean;
    cov += std::exp(log_weights[i] - lse) *
           (densities[i].cov + dm * dm.transpose());
  }
  symmetrize(cov);
  return {std::move(mean), std::move(cov)};
}

template <typename Scalar = double>
struct BernoulliInitResult {
  BernoulliTrack<Scalar> track;
  Scalar log_assoc_weight;  // log(<lambda, pD l(z|.)> + lambda_C(z))
  bool impossible_region = false;
};

/// New-track Bernoulli from one measurement: existence weighs the undetected
/// PPP against clutter, the density is the detection-updated mixture
/// moment-matched to a single Gaussian. PPP terms failing the ellipsoidal
/// gate are skipped (pass gamma = +inf to integrate over all terms).
template <typename Scalar>
BernoulliInitResult<Scalar> init_bernoulli_from_measurement(
    const PoissonIntensity<Scalar>& ppp, const VectorX<Scalar>& z,
    const MeasurementModel<Scalar>& m, Scalar gate_gamma = kInf) {
  std::vector<Scalar> term_log_w;
  std::vector<Gaussian<Scalar>> term_post;
  for (const auto& t : ppp.terms) {
    if (std::isfinite(gate_gamma) && !gate(t.density, z, m, gate_gamma)) continue;
    const Scalar pd = m.pd_at(t.density.mean);
    if (pd <= Scalar(0)) continue;
    auto up = kalman_update(t.density, z, m);
    term_log_w.push_back(std::log(t.weight) + std::log(pd) + up.log_likelihood);
    term_post.push_back(std::move(up.posterior));
  }

  const Scalar log_num =
      term_log_w.empty() ? kNegInf : log_sum_exp(std::span<const Scalar>(term_log_w));
  const Scalar clutter = m.clutter_at(z);

  BernoulliInitResult<Scalar> out;
  out.track.origin = TrackOrigin::kBayesNew;
  if (!std::isfinite(log_num) && clutter <= Scalar(0)) {
    // Measurement in a region where the model says nothing can happen.
    out.track.r = Scalar(0);
    out.track.density = {z, m.R};
    out.log_assoc_weight = kNegInf;
    out.impossible_region = true;
    return out;
  }

  const Scalar log_den = log_sum_exp(log_num, std::log(clutter));
  out.log_assoc_weight = log_den;
  out.track.r = std::isfinite(log_num) ? std::exp(log_num - log_den) : Scalar(0);
  if (!term_post.empty()) {
    out.track.density = moment_match(std::span<const Scalar>(term_log_w),
                                     std::span<const Gaussian<Scalar>>(term_post));
  } else {
    out.track.density = {z, m.R};  // placeholder; r is 0, never used
  }
  return out;
}

/// Bernoulli prediction: r' = r <p, pS>, density Kalman-predicted.
template <typename Scalar>
BernoulliTrack<Scalar> predict_bernoulli(const BernoulliTrack<Scalar>& t,
                                         const MotionModel<Scalar>& m) {
  BernoulliTrack<Scalar> out = t;
  out.r = t.r * m.survival_at(t.density.mean);
  out.density = kalman_predict(t.density, m);
  return out;
}

template <typename Scalar = double>
struct BernoulliUpdateResult {
  BernoulliTrack<Scalar> track;
  Scalar log_assoc_weight;
};

/// Detection hypothesis: the target exists and generated z.
template <typename Scalar>
BernoulliUpdateResult<Scalar> update_bernoulli_detection(
    const BernoulliTrack<Scalar>& t, const VectorX<Scalar>& z,
    const MeasurementModel<Scalar>& m) {
  auto up = kalman_update(t.density, z, m);
  BernoulliUpdateResult<Scalar> out;
  out.track = t;
  out.track.r = Scalar(1);
  out.track.density = std::move(up.posterior);
  out.track.origin = TrackOrigin::kContinuation;
  out.log_assoc_weight = std::log(t.r) + std::log(m.pd_at(t.density.mean)) +
                         up.log_likelihood;
  return out;
}

/// Misdetection hypothesis: weight 1 - r + r (1 - pD), existence rescaled.
template <typename Scalar>
BernoulliUpdateResult<Scalar> update_bernoulli_misdetection(
    const BernoulliTrack<Scalar>& t, const MeasurementModel<Scalar>& m) {
  const Scalar pd = m.pd_at(t.density.mean);
  const Scalar w = Scalar(1) - t.r + t.r * (Scalar(1) - pd);
  BernoulliUpdateResult<Scalar> out;
  out.track = t;
  out.track.origin = TrackOrigin::kContinuation;
  out.track.r = w > Scalar(0) ? t.r * (Scalar(1) - pd) / w : Scalar(1);
  out.log_assoc_weight = std::log(w);
  return out;
}

/// PPP prediction: survival-thinned, Kalman-predicted terms plus birth terms;
/// weights below prune_threshold are dropped.
template <typename Scalar>
PoissonIntensity<Scalar> predict_ppp(const PoissonIntensity<Scalar>& ppp,
                                     const MotionModel<Scalar>& m,
                                     const PoissonIntensity<Scalar>& birth,
                                     Scalar prune_threshold = Scalar(1e-5)) {
  PoissonIntensity<Scalar> out;
  out.terms.reserve(ppp.terms.size() + birth.terms.size());
  for (const auto& t : ppp.terms) {
    const Scalar w = t.weight * m.survival_at(t.density.mean);
    if (w < prune_threshold) continue;
    out.terms.push_back({w, kalman_predict(t.density, m)});
  }
  for (const auto& t : birth.terms) {
    if (t.weight < prune_threshold) continue;
    out.terms.push_back(t);
  }
  return out;
}

/// PPP misdetection update: each term thinned by 1 - pD at its mean.
template <typename Scalar>
PoissonIntensity<Scalar> update_ppp_misdetection(
    const PoissonIntensity<Scalar>& ppp, const MeasurementModel<Scalar>& m,
    Scalar prune_threshold = Scalar(1e-5)) {
  PoissonIntensity<Scalar> out;
  out.terms.reserve(ppp.terms.size());
  for (const auto& t : ppp.terms) {
    const Scalar w = t.weight * (Scalar(1) - m.pd_at(t.density.mean));
    if (w < prune_threshold) continue;
    out.terms.push_back({w, t.density});
  }
  return out;
}

}  // namespace rfs
