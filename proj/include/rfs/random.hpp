#pragma once

#include "rfs/common.hpp"

#include <Eigen/Eigenvalues>

#include <cstdint>
#include <random>

namespace rfs {

/// Deterministic random stream. All variate transforms are implemented here
/// (rather than via std::*_distribution) so that a (seed, run) pair produces
/// the same byte stream on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}

  /// Independent stream for one Monte Carlo run: stream id = splitmix64 walk
  /// from the base seed by run_index steps.
  static Rng for_run(std::uint64_t base_seed, std::uint64_t run_index) {
    return Rng(base_seed + 0x9e3779b97f4a7c15ULL * (run_index + 1));
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on (0, 1].
  double uniform_pos() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Poisson count, Knuth's product method. Adequate for rates up to a few
  /// hundred (exp(-rate) must stay normal); all scenario rates are <= ~40.
  int poisson(double rate) {
    if (rate <= 0.0) return 0;
    const double limit = std::exp(-rate);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform_pos();
    } while (p > limit);
    return k - 1;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Draw from N(mean, cov); cov may be singular (PSD).
  VecXd multivariate_normal(const VecXd& mean, const MatXd& cov) {
    const Index d = mean.size();
    VecXd z(d);
    for (Index i = 0; i < d; ++i) z(i) = normal();
    if (cov.isZero(0.0)) return mean;
    Eigen::LLT<MatXd> llt(cov);
    if (llt.info() == Eigen::Success) return mean + llt.matrixL() * z;
    // PSD fallback: eigenvalue square root with negative eigenvalues clamped.
    Eigen::SelfAdjointEigenSolver<MatXd> es(cov);
    VecXd sq = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return mean + es.eigenvectors() * sq.asDiagonal() * z;
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer; decorrelates nearby seeds.
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rfs
