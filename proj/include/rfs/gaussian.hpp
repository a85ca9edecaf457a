#pragma once

#include "rfs/common.hpp"

#include <Eigen/Cholesky>

#include <functional>
#include <utility>

namespace rfs {

/// Gaussian density over a state vector (positions in m, velocities in m/s).
template <typename Scalar = double>
struct Gaussian {
  VectorX<Scalar> mean;
  MatrixX<Scalar> cov;

  Index dim() const { return mean.size(); }
};

using Gaussiand = Gaussian<double>;

/// Linear-Gaussian motion: x' ~ N(F x, Q), survival probability ps.
/// ps_fn, when set, overrides the constant ps with a state-dependent value
/// (evaluated at component means throughout; constant in all presets).
template <typename Scalar = double>
struct MotionModel {
  MatrixX<Scalar> F;
  MatrixX<Scalar> Q;
  Scalar ps = Scalar(1);
  std::function<Scalar(const VectorX<Scalar>&)> ps_fn;

  Scalar survival_at(const VectorX<Scalar>& x) const {
    return ps_fn ? ps_fn(x) : ps;
  }
};

using MotionModeld = MotionModel<double>;

/// Detection probability as a function of state: constant, or an indicator on
/// a disc in measurement space (the state is mapped through H first).
template <typename Scalar = double>
struct DetectionSpec {
  enum class Kind { kConstant, kDisc };

  Kind kind = Kind::kConstant;
  Scalar value = Scalar(1);  // kConstant
  VectorX<Scalar> disc_center;
  Scalar disc_radius = Scalar(0);
  Scalar inside_value = Scalar(1);
  Scalar outside_value = Scalar(0);

  static DetectionSpec constant(Scalar p) {
    DetectionSpec s;
    s.kind = Kind::kConstant;
    s.value = p;
    return s;
  }

  static DetectionSpec disc(VectorX<Scalar> center, Scalar radius,
                            Scalar inside, Scalar outside) {
    DetectionSpec s;
    s.kind = Kind::kDisc;
    s.disc_center = std::move(center);
    s.disc_radius = radius;
    s.inside_value = inside;
    s.outside_value = outside;
    return s;
  }

  Scalar at(const VectorX<Scalar>& z_space_point) const {
    if (kind == Kind::kConstant) return value;
    const Scalar d = (z_space_point - disc_center).norm();
    return d <= disc_radius ? inside_value : outside_value;
  }
};

/// Clutter PPP: uniform intensity over an axis-aligned box, with an optional
/// disc hole of zero intensity (the hole must lie inside the box).
/// lambda_C(z) = total_rate / (box area - hole area) on the support, 0 off it.
template <typename Scalar = double>
struct ClutterSpec {
  Scalar total_rate = Scalar(0);
  VectorX<Scalar> area_lo;
  VectorX<Scalar> area_hi;
  bool has_hole = false;
  VectorX<Scalar> hole_center;
  Scalar hole_radius = Scalar(0);

  Scalar box_volume() const {
    return (area_hi - area_lo).prod();
  }

  Scalar support_volume() const {
    Scalar v = box_volume();
    if (has_hole) v -= Scalar(M_PI) * hole_radius * hole_radius;
    return v;
  }

  bool in_box(const VectorX<Scalar>& z) const {
    return (z.array() >= area_lo.array()).all() &&
           (z.array() <= area_hi.array()).all();
  }

  bool in_hole(const VectorX<Scalar>& z) const {
    return has_hole && (z - hole_center).norm() <= hole_radius;
  }

  Scalar at(const VectorX<Scalar>& z) const {
    if (total_rate <= Scalar(0)) return Scalar(0);
    if (!in_box(z) || in_hole(z)) return Scalar(0);
    return total_rate / support_volume();
  }
};

/// Linear-Gaussian sensor: z ~ N(H x, R) with detection probability pd(x)
/// and clutter intensity lambda_C(z).
template <typename Scalar = double>
struct MeasurementModel {
  MatrixX<Scalar> H;
  MatrixX<Scalar> R;
  DetectionSpec<Scalar> detection;
  ClutterSpec<Scalar> clutter;

  Scalar pd_at(const VectorX<Scalar>& x) const {
    if (detection.kind == DetectionSpec<Scalar>::Kind::kConstant)
      return detection.value;
    return detection.at((H * x).eval());
  }

  Scalar clutter_at(const VectorX<Scalar>& z) const { return clutter.at(z); }
};

using MeasurementModeld = MeasurementModel<double>;

namespace detail {

template <typename Scalar>
Eigen::LDLT<MatrixX<Scalar>> factor_spd(const MatrixX<Scalar>& s,
                                        const char* what) {
  Eigen::LDLT<MatrixX<Scalar>> ldlt(s);
  if (ldlt.info() != Eigen::Success ||
      !(ldlt.vectorD().minCoeff() > Scalar(0))) {
    throw std::runtime_error(std::string(what) + ": matrix not positive definite");
  }
  return ldlt;
}

}  // namespace detail

/// log N(x; mean, cov). Throws if cov is not positive definite.
template <typename Scalar, typename Derived>
Scalar log_gaussian_pdf(const Eigen::MatrixBase<Derived>& x,
                        const VectorX<Scalar>& mean,
                        const MatrixX<Scalar>& cov) {
  auto ldlt = detail::factor_spd<Scalar>(cov, "log_gaussian_pdf");
  const VectorX<Scalar> nu = x - mean;
  const Scalar quad = nu.dot(ldlt.solve(nu));
  const Scalar logdet = ldlt.vectorD().array().log().sum();
  return Scalar(-0.5) * (quad + logdet + Scalar(x.size()) * std::log(Scalar(2) * Scalar(M_PI)));
}

/// Kalman prediction: mean' = F mean, cov' = F cov F^T + Q, symmetrized.
template <typename Scalar>
Gaussian<Scalar> kalman_predict(const Gaussian<Scalar>& d,
                                const MotionModel<Scalar>& m) {
  if (m.F.cols() != d.dim() || m.F.rows() != m.Q.rows() ||
      m.Q.rows() != m.Q.cols()) {
    throw std::invalid_argument("kalman_predict: dimension mismatch");
  }
  Gaussian<Scalar> out;
  out.mean = m.F * d.mean;
  out.cov = m.F * d.cov * m.F.transpose() + m.Q;
  symmetrize(out.cov);
  return out;
}

template <typename Scalar>
struct KalmanUpdateResult {
  Gaussian<Scalar> posterior;
  Scalar log_likelihood;  // log N(z; H mean, H cov H^T + R)
};

/// Kalman update with Joseph-stabilized covariance. Throws std::runtime_error
/// if the innovation covariance is not invertible.
template <typename Scalar, typename Derived>
KalmanUpdateResult<Scalar> kalman_update(const Gaussian<Scalar>& d,
                                         const Eigen::MatrixBase<Derived>& z,
                                         const MeasurementModel<Scalar>& m) {
  if (z.size() != m.H.rows() || m.H.cols() != d.dim()) {
    throw std::invalid_argument("kalman_update: dimension mismatch");
  }
  MatrixX<Scalar> s = m.H * d.cov * m.H.transpose() + m.R;
  symmetrize(s);
  auto ldlt = detail::factor_spd<Scalar>(s, "kalman_update: innovation covariance");

  const VectorX<Scalar> zhat = m.H * d.mean;
  const VectorX<Scalar> nu = z - zhat;
  const Scalar quad = nu.dot(ldlt.solve(nu));
  const Scalar logdet = ldlt.vectorD().array().log().sum();
  const Scalar log_lik =
      Scalar(-0.5) * (quad + logdet + Scalar(z.size()) * std::log(Scalar(2) * Scalar(M_PI)));

  const MatrixX<Scalar> k = ldlt.solve(m.H * d.cov).transpose();  // P H^T S^-1
  KalmanUpdateResult<Scalar> out;
  out.posterior.mean = d.mean + k * nu;
  const MatrixX<Scalar> ikh =
      MatrixX<Scalar>::Identity(d.dim(), d.dim()) - k * m.H;
  out.posterior.cov = ikh * d.cov * ikh.transpose() + k * m.R * k.transpose();
  symmetrize(out.posterior.cov);
  out.log_likelihood = log_lik;
  return out;
}

/// Squared Mahalanobis distance of z in innovation space.
template <typename Scalar, typename Derived>
Scalar innovation_distance2(const Gaussian<Scalar>& d,
                            const Eigen::MatrixBase<Derived>& z,
                            const MeasurementModel<Scalar>& m) {
  MatrixX<Scalar> s = m.H * d.cov * m.H.transpose() + m.R;
  symmetrize(s);
  auto ldlt = detail::factor_spd<Scalar>(s, "gate: innovation covariance");
  const VectorX<Scalar> nu = z - m.H * d.mean;
  return nu.dot(ldlt.solve(nu));
}

/// Ellipsoidal gate, inclusive at the boundary.
template <typename Scalar, typename Derived>
bool gate(const Gaussian<Scalar>& d, const Eigen::MatrixBase<Derived>& z,
          const MeasurementModel<Scalar>& m, Scalar gamma) {
  if (!(gamma > Scalar(0))) throw std::invalid_argument("gate: gamma must be > 0");
  return innovation_distance2(d, z, m) <= gamma;
}

}  // namespace rfs
