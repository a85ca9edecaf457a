#include "rfs/gospa.hpp"

#include "rfs/assignment.hpp"

namespace rfs {

GospaResult gospa(std::span<const VecXd> truth, std::span<const VecXd> estimate,
                  double p, double c, double alpha) {
  if (!(p >= 1.0)) throw std::invalid_argument("gospa: p must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("gospa: c must be > 0");
  if (alpha != 2.0) {
    throw std::invalid_argument("gospa: decomposition requires alpha = 2");
  }
  const int nt = static_cast<int>(truth.size());
  const int ne = static_cast<int>(estimate.size());
  const double unmatched = std::pow(c, p) / alpha;

  GospaResult out;
  double loc_p = 0.0;
  if (nt > 0 && ne > 0) {
    // Padded square LAP: real pairs where d < c, per-element dummy columns
    // for missed truths, dummy rows for false estimates.
    MatXd costs = MatXd::Constant(nt + ne, ne + nt, kInf);
    for (int i = 0; i < nt; ++i) {
      for (int j = 0; j < ne; ++j) {
        const double d = (truth[i] - estimate[j]).norm();
        if (d < c) costs(i, j) = std::pow(d, p);
      }
      costs(i, ne + i) = unmatched;
    }
    for (int j = 0; j < ne; ++j) costs(nt + j, j) = unmatched;
    costs.block(nt, ne, ne, nt).setZero();

    const std::vector<int> row_to_col = solve_assignment(costs);
    for (int i = 0; i < nt; ++i) {
      if (row_to_col[i] < ne) {
        loc_p += costs(i, row_to_col[i]);
        ++out.num_matched;
      } else {
        ++out.num_missed;
      }
    }
    out.num_false = ne - out.num_matched;
  } else {
    out.num_missed = nt;
    out.num_false = ne;
  }

  const double missed_p = unmatched * out.num_missed;
  const double false_p = unmatched * out.num_false;
  out.localisation = std::pow(loc_p, 1.0 / p);
  out.missed_cost = std::pow(missed_p, 1.0 / p);
  out.false_cost = std::pow(false_p, 1.0 / p);
  out.total = std::pow(loc_p + missed_p + false_p, 1.0 / p);
  return out;
}

RmsCurves rms_over_runs(std::span<const std::vector<GospaResult>> per_run_per_step) {
  if (per_run_per_step.empty()) return {};
  const std::size_t steps = per_run_per_step.front().size();
  for (const auto& run : per_run_per_step) {
    if (run.size() != steps)
      throw std::invalid_argument("rms_over_runs: ragged run lengths");
  }
  RmsCurves out;
  out.total = VecXd::Zero(steps);
  out.localisation = VecXd::Zero(steps);
  out.missed = VecXd::Zero(steps);
  out.false_ = VecXd::Zero(steps);
  for (const auto& run : per_run_per_step) {
    for (std::size_t k = 0; k < steps; ++k) {
      out.total(k) += run[k].total * run[k].total;
      out.localisation(k) += run[k].localisation * run[k].localisation;
      out.missed(k) += run[k].missed_cost * run[k].missed_cost;
      out.false_(k) += run[k].false_cost * run[k].false_cost;
    }
  }
  const double n = static_cast<double>(per_run_per_step.size());
  out.total = (out.total / n).cwiseSqrt();
  out.localisation = (out.localisation / n).cwiseSqrt();
  out.missed = (out.missed / n).cwiseSqrt();
  out.false_ = (out.false_ / n).cwiseSqrt();
  return out;
}

double rms_total(std::span<const std::vector<GospaResult>> per_run_per_step) {
  double s = 0.0;
  std::size_t n = 0;
  for (const auto& run : per_run_per_step) {
    for (const auto& g : run) {
      s += g.total * g.total;
      ++n;
    }
  }
  return n == 0 ? 0.0 : std::sqrt(s / static_cast<double>(n));
}

}  // namespace rfs
