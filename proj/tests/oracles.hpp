// Independent reference implementations used only by tests: quadrature,
// exhaustive assignment enumeration, and brute-force GOSPA. These must stay
// free of the library code paths they check.
#pragma once

#include "rfs/common.hpp"
#include "rfs/gospa.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace oracle {

using rfs::Index;
using rfs::MatXd;
using rfs::VecXd;

/// Composite-Simpson quadrature of f over [a, b] with n (even) panels.
inline double quad_1d(const std::function<double(double)>& f, double a, double b,
                      int n = 4000) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * M_PI * var);
}

/// Grid-quadrature Bayes posterior for a linear-Gaussian update:
/// p(x | z) proportional to N(z; H x, R) N(x; mean, cov). Returns the
/// normalizing constant (the marginal likelihood) plus posterior moments
/// estimated by Riemann sums over a +-half_width-sigma box.
struct GridPosterior {
  double likelihood = 0.0;
  VecXd mean;
  MatXd cov;
};

inline GridPosterior grid_bayes_posterior(const VecXd& prior_mean,
                                          const MatXd& prior_cov, const MatXd& h,
                                          const MatXd& r, const VecXd& z,
                                          int points_per_dim,
                                          double half_width = 6.0) {
  const Index d = prior_mean.size();
  const VecXd sigma = prior_cov.diagonal().cwiseSqrt();
  const VecXd lo = prior_mean - half_width * sigma;
  const VecXd hi = prior_mean + half_width * sigma;
  const VecXd step = (hi - lo) / (points_per_dim - 1);

  Eigen::LDLT<MatXd> prior_ldlt(prior_cov);
  Eigen::LDLT<MatXd> noise_ldlt(r);
  const double prior_logdet =
      prior_ldlt.vectorD().array().log().sum() + d * std::log(2.0 * M_PI);
  const double noise_logdet =
      noise_ldlt.vectorD().array().log().sum() + z.size() * std::log(2.0 * M_PI);

  double cell = 1.0;
  for (Index i = 0; i < d; ++i) cell *= step(i);

  std::vector<int> idx(d, 0);
  double mass = 0.0;
  VecXd m1 = VecXd::Zero(d);
  MatXd m2 = MatXd::Zero(d, d);
  while (true) {
    VecXd x(d);
    for (Index i = 0; i < d; ++i) x(i) = lo(i) + idx[i] * step(i);
    const VecXd dp = x - prior_mean;
    const double lp = -0.5 * (dp.dot(prior_ldlt.solve(dp)) + prior_logdet);
    const VecXd dz = z - h * x;
    const double ll = -0.5 * (dz.dot(noise_ldlt.solve(dz)) + noise_logdet);
    const double w = std::exp(lp + ll) * cell;
    mass += w;
    m1 += w * x;
    m2 += w * x * x.transpose();

    Index i = 0;
    for (; i < d; ++i) {
      if (++idx[i] < points_per_dim) break;
      idx[i] = 0;
    }
    if (i == d) break;
  }

  GridPosterior out;
  out.likelihood = mass;
  out.mean = m1 / mass;
  out.cov = m2 / mass - out.mean * out.mean.transpose();
  return out;
}

/// All feasible injective row->column assignments of a cost matrix with +inf
/// entries forbidden, as (cost, mapping), sorted by cost ascending.
inline std::vector<std::pair<double, std::vector<int>>> enumerate_assignments(
    const MatXd& costs) {
  const Index m = costs.rows();
  const Index n = costs.cols();
  std::vector<std::pair<double, std::vector<int>>> out;
  std::vector<int> mapping(m, -1);
  std::vector<char> used(n, 0);
  std::function<void(Index, double)> rec = [&](Index row, double acc) {
    if (row == m) {
      out.emplace_back(acc, mapping);
      return;
    }
    for (Index j = 0; j < n; ++j) {
      if (used[j] || !std::isfinite(costs(row, j))) continue;
      used[j] = 1;
      mapping[row] = static_cast<int>(j);
      rec(row + 1, acc + costs(row, j));
      used[j] = 0;
    }
  };
  rec(0, 0.0);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/// Brute-force GOSPA (alpha = 2): enumerate every partial matching between
/// the sets, prune pairs at distance >= c, and take the minimum.
inline rfs::GospaResult brute_force_gospa(std::span<const VecXd> truth,
                                          std::span<const VecXd> estimate,
                                          double p, double c) {
  const int nt = static_cast<int>(truth.size());
  const int ne = static_cast<int>(estimate.size());
  const double unmatched = std::pow(c, p) / 2.0;

  double best = rfs::kInf;
  rfs::GospaResult best_res;
  std::vector<int> match(nt, -1);
  std::vector<char> used(ne, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == nt) {
      double loc_p = 0.0;
      int matched = 0;
      for (int t = 0; t < nt; ++t) {
        if (match[t] < 0) continue;
        loc_p += std::pow((truth[t] - estimate[match[t]]).norm(), p);
        ++matched;
      }
      const int missed = nt - matched;
      const int falses = ne - matched;
      const double total_p = loc_p + unmatched * (missed + falses);
      if (total_p < best) {
        best = total_p;
        best_res.total = std::pow(total_p, 1.0 / p);
        best_res.localisation = std::pow(loc_p, 1.0 / p);
        best_res.missed_cost = std::pow(unmatched * missed, 1.0 / p);
        best_res.false_cost = std::pow(unmatched * falses, 1.0 / p);
        best_res.num_matched = matched;
        best_res.num_missed = missed;
        best_res.num_false = falses;
      }
      return;
    }
    match[i] = -1;
    rec(i + 1);
    for (int j = 0; j < ne; ++j) {
      if (used[j] || (truth[i] - estimate[j]).norm() >= c) continue;
      used[j] = 1;
      match[i] = j;
      rec(i + 1);
      used[j] = 0;
    }
    match[i] = -1;
  };
  rec(0);
  return best_res;
}

}  // namespace oracle
