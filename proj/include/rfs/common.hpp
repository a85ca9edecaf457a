#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace rfs {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatXd = MatrixX<double>;
using VecXd = VectorX<double>;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Floor for log-weights of association events that must remain structurally
/// available (misdetection baselines, measurement-to-clutter columns) even
/// when their model probability is exactly zero. exp(kLogZero) underflows to
/// 0.0, and the magnitude dwarfs any reachable log-weight spread, so floored
/// events never outrank a possible one.
inline constexpr double kLogZero = -1e5;

inline double floored_log(double log_w) { return std::max(log_w, kLogZero); }

template <typename Scalar>
Scalar log_sum_exp(std::span<const Scalar> v) {
  Scalar m = Scalar(kNegInf);
  for (Scalar x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;  // all -inf (or an inf, which we never feed)
  Scalar s = Scalar(0);
  for (Scalar x : v) s += std::exp(x - m);
  return m + std::log(s);
}

inline double log_sum_exp(const std::vector<double>& v) {
  return log_sum_exp(std::span<const double>(v));
}

inline double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  if (!std::isfinite(m)) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

/// Symmetrize in place: A <- (A + A^T) / 2.
template <typename Scalar>
void symmetrize(MatrixX<Scalar>& a) {
  a = ((a + a.transpose()) / Scalar(2)).eval();
}

}  // namespace rfs
