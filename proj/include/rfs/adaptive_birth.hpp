#pragma once

#include "rfs/assignment.hpp"

#include <utility>

namespace rfs {

/// Parameters of the measurement-driven (adaptive) birth rule.
/// lambda_b_bar is the expected-births-per-step schedule (1-based step, last
/// entry repeating), birth_cov / birth_velocity_mean define the user-chosen
/// single-target density placed at each measurement.
struct AdaptiveBirthConfig {
  double r_b_max = 1.0;
  std::vector<double> lambda_b_bar;
  MatXd birth_cov;
  VecXd birth_velocity_mean;  // empty = zero vector

  double lambda_at(int step) const {
    if (lambda_b_bar.empty() || step < 1) return 0.0;
    const auto idx =
        std::min<std::size_t>(static_cast<std::size_t>(step), lambda_b_bar.size());
    return lambda_b_bar[idx - 1];
  }
};

/// Probability that measurement z_index is associated to an existing track
/// under the given updated global hypotheses (weights normalized: |logsumexp|
/// <= 1e-6, else a contract violation is thrown). Assignments to new-track
/// columns count as "not associated".
inline double association_probability(
    int z_index,
    std::span<const std::pair<double, Assignment>> updated_hypotheses) {
  std::vector<double> lws;
  lws.reserve(updated_hypotheses.size());
  for (const auto& [lw, a] : updated_hypotheses) lws.push_back(lw);
  if (std::abs(log_sum_exp(std::span<const double>(lws))) > 1e-6) {
    throw std::invalid_argument(
        "association_probability: hypothesis weights not normalized");
  }
  double r_u = 0.0;
  for (const auto& [lw, a] : updated_hypotheses) {
    if (z_index < 0 || z_index >= static_cast<int>(a.mapping.size())) {
      throw std::invalid_argument("association_probability: z_index out of range");
    }
    if (a.mapping[z_index] < a.num_track_columns) r_u += std::exp(lw);
  }
  return std::min(r_u, 1.0);
}

/// Existence probability of the birth Bernoulli for measurement z_index,
///   min(r_b_max, (1 - r_U(z)) / sum_j (1 - r_U(z_j)) * lambda_b_bar(step)),
/// 0 when the denominator vanishes.
inline double birth_existence(std::span<const double> r_u_all, int z_index,
                              const AdaptiveBirthConfig& cfg, int birth_step) {
  if (r_u_all.empty()) throw std::invalid_argument("birth_existence: empty r_U list");
  if (z_index < 0 || z_index >= static_cast<int>(r_u_all.size())) {
    throw std::invalid_argument("birth_existence: z_index out of range");
  }
  double denom = 0.0;
  for (double r : r_u_all) denom += 1.0 - r;
  if (denom <= 0.0) return 0.0;
  const double lam = cfg.lambda_at(birth_step);
  return std::min(cfg.r_b_max, (1.0 - r_u_all[z_index]) / denom * lam);
}

/// Birth Bernoulli for one measurement: mean places the measurement in the
/// position slots (via H^T, exact for selector-type observation matrices)
/// plus the configured velocity offset; covariance is cfg.birth_cov.
inline BernoulliTrackd make_birth_bernoulli(const VecXd& z, double r,
                                            const AdaptiveBirthConfig& cfg,
                                            const MatXd& H, int next_time,
                                            int measurement_index = -1) {
  BernoulliTrackd t;
  t.r = r;
  t.density.mean = H.transpose() * z;
  if (cfg.birth_velocity_mean.size() == t.density.mean.size())
    t.density.mean += cfg.birth_velocity_mean;
  t.density.cov = cfg.birth_cov;
  t.birth_time = next_time;
  t.origin = TrackOrigin::kAdaptiveBirth;
  t.origin_measurement = measurement_index;
  return t;
}

}  // namespace rfs
