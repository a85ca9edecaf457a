#pragma once

#include "rfs/common.hpp"

#include <span>
#include <vector>

namespace rfs {

/// GOSPA value and its alpha = 2 decomposition. Components live in the same
/// p-th-power domain as the total, so total^2 = localisation^2 +
/// missed_cost^2 + false_cost^2 for p = 2.
struct GospaResult {
  double total = 0.0;
  double localisation = 0.0;
  double missed_cost = 0.0;
  double false_cost = 0.0;
  int num_matched = 0;
  int num_missed = 0;
  int num_false = 0;
};

/// GOSPA metric between two point sets with cutoff c, order p and alpha = 2
/// (any other alpha is rejected because the decomposition needs alpha = 2).
/// The assignment between the sets is solved exactly.
GospaResult gospa(std::span<const VecXd> truth, std::span<const VecXd> estimate,
                  double p, double c, double alpha);

/// Per-step RMS curves over Monte Carlo runs; aggregation happens in the
/// squared domain so the decomposition identity carries over to the curves.
struct RmsCurves {
  VecXd total;
  VecXd localisation;
  VecXd missed;
  VecXd false_;
};

RmsCurves rms_over_runs(std::span<const std::vector<GospaResult>> per_run_per_step);

/// Scalar RMS-GOSPA across all runs and time steps.
double rms_total(std::span<const std::vector<GospaResult>> per_run_per_step);

}  // namespace rfs
