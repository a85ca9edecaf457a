#pragma once

#include "rfs/components.hpp"

#include <span>
#include <vector>

namespace rfs {

/// Association cost matrix for one global hypothesis: rows = measurements,
/// columns = (existing tracks | one new-track column per measurement).
/// Costs are negative log association weights; +inf marks inadmissible pairs.
/// New-track column n+i admits only measurement i.
struct AssocCostMatrix {
  MatXd costs;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> gate_mask;  // m x n

  Index num_measurements() const { return costs.rows(); }
  Index num_track_columns() const { return costs.cols() - costs.rows(); }
};

/// One data association: measurement i -> column mapping[i]. Columns below
/// num_track_columns are existing tracks; column n+i is measurement i's
/// new-track (or clutter) column.
struct Assignment {
  std::vector<int> mapping;
  int num_track_columns = 0;
  double total_cost = 0.0;
};

/// Cost-matrix entries from component weights:
///   (i, j < n)  = -(det_logw(i,j) - mis_logw(j)), +inf where det_logw = -inf
///   (i, n + i)  = -new_col_logw(i)
/// Misdetection baselines and new-track weights are floored at kLogZero so
/// every row stays feasible; a child hypothesis built from an assignment has
/// log weight = parent + sum(floored mis_logw) - total_cost.
AssocCostMatrix assemble_cost_matrix(const MatXd& det_logw,
                                     const VecXd& mis_logw,
                                     const VecXd& new_col_logw);

/// Full cost matrix for one hypothesis' tracks (predicted Bernoullis),
/// with ellipsoidal gating at threshold gamma.
AssocCostMatrix build_cost_matrix(std::span<const BernoulliTrackd> tracks,
                                  std::span<const VecXd> measurements,
                                  const PoissonIntensityd& ppp,
                                  const MeasurementModeld& model,
                                  double gamma);

/// min(k, #feasible) best assignments in nondecreasing total cost, no
/// duplicates, first optimal. Throws std::runtime_error identifying a row
/// when the matrix admits no feasible assignment.
std::vector<Assignment> murty_kbest(const AssocCostMatrix& c, int k);

/// Murty budget for one hypothesis: ceil(total_budget * weight), at least 1.
int kbest_budget(double hypothesis_log_weight, int total_budget);

/// Exact minimum-cost assignment of every row of a rows <= cols matrix to a
/// distinct column (+inf entries forbidden). Returns the row -> column map;
/// throws std::runtime_error identifying a row when infeasible.
std::vector<int> solve_assignment(const MatXd& costs);

}  // namespace rfs
