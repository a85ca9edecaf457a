#include "rfs/gaussian.hpp"
#include "rfs/random.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace rfs;

namespace {

MotionModeld ncv_motion(double t, double q, double ps) {
  MatXd f2(2, 2), q2(2, 2);
  f2 << 1, t, 0, 1;
  q2 << t * t * t / 3, t * t / 2, t * t / 2, t;
  MatXd f = MatXd::Zero(4, 4), qq = MatXd::Zero(4, 4);
  f.block(0, 0, 2, 2) = f2;
  f.block(2, 2, 2, 2) = f2;
  qq.block(0, 0, 2, 2) = q * q2;
  qq.block(2, 2, 2, 2) = q * q2;
  return {f, qq, ps, nullptr};
}

MeasurementModeld position_sensor(double r_var = 1.0, double pd = 1.0) {
  MeasurementModeld m;
  m.H = MatXd::Zero(2, 4);
  m.H(0, 0) = 1;
  m.H(1, 2) = 1;
  m.R = r_var * MatXd::Identity(2, 2);
  m.detection = DetectionSpec<double>::constant(pd);
  return m;
}

double min_eigenvalue(const MatXd& a) {
  return Eigen::SelfAdjointEigenSolver<MatXd>(a).eigenvalues().minCoeff();
}

Gaussiand random_gaussian(Rng& rng, Index d, double scale = 1.0) {
  Gaussiand g;
  g.mean = VecXd::NullaryExpr(d, [&](Index) { return scale * rng.normal(); });
  MatXd a = MatXd::NullaryExpr(d, d, [&](Index, Index) { return rng.normal(); });
  g.cov = a * a.transpose() + 0.1 * MatXd::Identity(d, d);
  return g;
}

}  // namespace

TEST_CASE("kalman_predict identity leaves density unchanged") {
  Gaussiand d{VecXd::LinSpaced(4, 1.0, 4.0), MatXd::Identity(4, 4) * 2.0};
  MotionModeld m{MatXd::Identity(4, 4), MatXd::Zero(4, 4), 1.0, nullptr};
  const auto out = kalman_predict(d, m);
  CHECK((out.mean - d.mean).norm() == doctest::Approx(0.0));
  CHECK((out.cov - d.cov).norm() == doctest::Approx(0.0));
}

TEST_CASE("kalman_predict 1d direct substitution") {
  Gaussiand d{VecXd::Constant(1, 1.0), MatXd::Constant(1, 1, 1.0)};
  MotionModeld m{MatXd::Constant(1, 1, 2.0), MatXd::Constant(1, 1, 0.5), 1.0,
                 nullptr};
  const auto out = kalman_predict(d, m);
  CHECK(out.mean(0) == doctest::Approx(2.0));
  CHECK(out.cov(0, 0) == doctest::Approx(4.5));
}

TEST_CASE("kalman_predict matches element-by-element product on the NCV model") {
  const auto m = ncv_motion(1.0, 0.01, 0.995);
  Rng rng(7);
  const Gaussiand d = random_gaussian(rng, 4, 10.0);
  const auto out = kalman_predict(d, m);

  // Dense product evaluated index by index.
  MatXd expected = MatXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          expected(i, j) += m.F(i, a) * d.cov(a, b) * m.F(j, b);
      expected(i, j) += m.Q(i, j);
    }
  CHECK((out.cov - expected).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("kalman_predict rejects dimension mismatch") {
  Gaussiand d{VecXd::Zero(3), MatXd::Identity(3, 3)};
  MotionModeld m{MatXd::Identity(4, 4), MatXd::Zero(4, 4), 1.0, nullptr};
  CHECK_THROWS_AS(kalman_predict(d, m), std::invalid_argument);
}

TEST_CASE("kalman_update with an uninformative measurement keeps the prior") {
  Rng rng(3);
  const Gaussiand d = random_gaussian(rng, 4, 5.0);
  auto m = position_sensor(1e12);
  const VecXd z = VecXd::Constant(2, 100.0);
  const auto out = kalman_update(d, z, m);
  CHECK((out.posterior.mean - d.mean).norm() / d.mean.norm() < 1e-4);
  CHECK((out.posterior.cov - d.cov).norm() / d.cov.norm() < 1e-4);
}

TEST_CASE("kalman_update 1d textbook conjugacy") {
  Gaussiand d{VecXd::Zero(1), MatXd::Identity(1, 1)};
  MeasurementModeld m;
  m.H = MatXd::Identity(1, 1);
  m.R = MatXd::Identity(1, 1);
  const VecXd z = VecXd::Constant(1, 2.0);
  const auto out = kalman_update(d, z, m);
  CHECK(out.posterior.mean(0) == doctest::Approx(1.0));
  CHECK(out.posterior.cov(0, 0) == doctest::Approx(0.5));
  CHECK(out.log_likelihood ==
        doctest::Approx(std::log(oracle::normal_pdf(2.0, 0.0, 2.0))));
}

TEST_CASE("kalman_update matches grid-quadrature Bayes on a random 4d case") {
  Rng rng(11);
  Gaussiand d = random_gaussian(rng, 4);
  auto m = position_sensor(0.5);
  const VecXd z = m.H * d.mean + VecXd::Constant(2, 0.3);
  const auto out = kalman_update(d, z, m);

  const auto grid = oracle::grid_bayes_posterior(d.mean, d.cov, m.H, m.R, z, 45);
  CHECK((out.posterior.mean - grid.mean).norm() < 1e-3);
  CHECK((out.posterior.cov - grid.cov).norm() < 1e-3);
  CHECK(out.log_likelihood == doctest::Approx(std::log(grid.likelihood)).epsilon(1e-3));
}

TEST_CASE("covariances stay symmetric PSD through predict/update chains") {
  Rng rng(19);
  const auto motion = ncv_motion(1.0, 0.01, 0.995);
  auto sensor = position_sensor(1.0);
  Gaussiand d = random_gaussian(rng, 4, 20.0);
  for (int k = 0; k < 60; ++k) {
    d = kalman_predict(d, motion);
    const VecXd z =
        sensor.H * d.mean +
        VecXd::NullaryExpr(2, [&](Index) { return rng.normal(); });
    d = kalman_update(d, z, sensor).posterior;
    CHECK((d.cov - d.cov.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(min_eigenvalue(d.cov) >= -1e-9);
  }
}

TEST_CASE("gate accepts the predicted measurement and honors the boundary") {
  Rng rng(23);
  const Gaussiand d = random_gaussian(rng, 4);
  auto m = position_sensor(1.0);
  CHECK(gate(d, (m.H * d.mean).eval(), m, 1e-9));

  // 1d: innovation variance 2, offset sqrt(40) puts the squared distance at
  // exactly 20; the gate is inclusive.
  Gaussiand d1{VecXd::Zero(1), MatXd::Identity(1, 1)};
  MeasurementModeld m1;
  m1.H = MatXd::Identity(1, 1);
  m1.R = MatXd::Identity(1, 1);
  const VecXd z = VecXd::Constant(1, std::sqrt(40.0));
  const double d2 = innovation_distance2(d1, z, m1);
  CHECK(d2 == doctest::Approx(20.0));
  CHECK(gate(d1, z, m1, d2));  // boundary inclusive
  CHECK_FALSE(gate(d1, z, m1, d2 - 1e-9));
}

TEST_CASE("gate agrees with the explicit quadratic form on random cases") {
  Rng rng(29);
  auto m = position_sensor(0.7);
  for (int trial = 0; trial < 50; ++trial) {
    const Gaussiand d = random_gaussian(rng, 4, 3.0);
    const VecXd z = VecXd::NullaryExpr(2, [&](Index) { return 4.0 * rng.normal(); });
    const MatXd s = m.H * d.cov * m.H.transpose() + m.R;
    const VecXd nu = z - m.H * d.mean;
    const double d2 = nu.dot(s.inverse() * nu);
    const double gamma = rng.uniform(0.5, 30.0);
    CHECK(gate(d, z, m, gamma) == (d2 <= gamma + 1e-9 * std::abs(gamma)));
  }
}

TEST_CASE("gate is monotone in gamma") {
  Rng rng(31);
  auto m = position_sensor(1.3);
  for (int trial = 0; trial < 50; ++trial) {
    const Gaussiand d = random_gaussian(rng, 4, 3.0);
    const VecXd z = VecXd::NullaryExpr(2, [&](Index) { return 5.0 * rng.normal(); });
    const double g1 = rng.uniform(0.1, 15.0);
    const double g2 = g1 + rng.uniform(0.0, 15.0);
    if (gate(d, z, m, g1)) CHECK(gate(d, z, m, g2));
  }
}

TEST_CASE("kalman_update likelihood matches 1d quadrature of the prior predictive") {
  // p(z) = integral N(z; x, R) N(x; mu, P) dx.
  Gaussiand d{VecXd::Constant(1, 0.4), MatXd::Constant(1, 1, 1.7)};
  MeasurementModeld m;
  m.H = MatXd::Identity(1, 1);
  m.R = MatXd::Constant(1, 1, 0.6);
  const VecXd z = VecXd::Constant(1, 1.9);
  const double numeric = oracle::quad_1d(
      [&](double x) {
        return oracle::normal_pdf(1.9, x, 0.6) * oracle::normal_pdf(x, 0.4, 1.7);
      },
      -12.0, 12.0);
  const auto out = kalman_update(d, z, m);
  CHECK(std::exp(out.log_likelihood) == doctest::Approx(numeric).epsilon(1e-3));
}

TEST_CASE("kalman_update reports a non-invertible innovation covariance") {
  Gaussiand d{VecXd::Zero(2), MatXd::Zero(2, 2)};
  MeasurementModeld m;
  m.H = MatXd::Identity(2, 2);
  m.R = MatXd::Zero(2, 2);
  CHECK_THROWS_AS(kalman_update(d, VecXd::Zero(2), m), std::runtime_error);
}
