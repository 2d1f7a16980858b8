#pragma once

// Small deterministic generators for property tests.

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace gen {

using cplx = std::complex<double>;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  cplx point(double re_max, double im_max) {
    const double re = uniform(-re_max, re_max);
    return {re, uniform(-im_max, im_max)};
  }

  Eigen::VectorXcd state(Eigen::Index n) {
    Eigen::VectorXcd c(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal();
      c[i] = cplx(re, normal());
    }
    return c;
  }

  Eigen::VectorXd real_vector(Eigen::Index n, double scale = 1.0) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * normal();
    return v;
  }

  // Symmetric positive-definite with eigenvalues in [0.5, 3].
  Eigen::MatrixXd spd(int n) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = normal();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d[i] = uniform(0.5, 3.0);
    const Eigen::MatrixXd s = q * d.asDiagonal() * q.transpose();
    return 0.5 * (s + s.transpose());
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen
