#pragma once

#include "rfs/simulation.hpp"

namespace rfs {

/// Expected step-2 cardinality, Bayesian vs adaptive birth.
struct CardinalityReport {
  double bayes_expected = 0.0;      // pS lb1 + lb2
  double adaptive_expected = 0.0;   // closed form on the sampled |Z1| pmf
  double empirical_adaptive = 0.0;  // sample mean of min(m r_max, lb2)
  double empirical_std_error = 0.0;
  double gap = 0.0;                 // bayes_expected - adaptive_expected
};

/// pS * lb1 + lb2: survivors of step-1 births plus step-2 births.
double bayes_expected_cardinality(double ps, double lb1, double lb2);

/// Expected adaptive-birth cardinality at step 2 for a pmf rho of |Z1|:
///   lb2 + sum_{m=0}^{m_check} (r_b_max m - lb2) rho(m),
/// with m_check = floor(lb2 / r_b_max); cross-computed as
/// sum_m min(m r_b_max, lb2) rho(m) and required to agree within 1e-12.
double adaptive_expected_cardinality(double r_b_max, double lb2,
                                     std::span<const double> rho);

/// Empirical pmf of the step-1 measurement count under the scenario's
/// generative model (births, detection, clutter).
std::vector<double> rho_z1(const ScenarioConfig& cfg, int n_samples,
                           std::uint64_t seed);

CardinalityReport lemma1_report(const ScenarioConfig& cfg,
                                const AdaptiveBirthConfig& acfg, int n_samples,
                                std::uint64_t seed);

/// (r_b_max, gap) over an evenly spaced sweep ending at r_b_max = 1, using a
/// single shared rho sample.
std::vector<std::pair<double, double>> lemma1_sweep(
    const ScenarioConfig& cfg, const AdaptiveBirthConfig& acfg, int n_samples,
    std::uint64_t seed, int n_points = 10);

}  // namespace rfs
