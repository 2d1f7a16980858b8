#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace holo {

using cplx = std::complex<double>;

/// Per-coordinate identification: a period length, or nullopt for a line.
using Period = std::optional<double>;

/// Flat configuration space in a global chart: constant metric sigma and
/// optional periodic identifications (cylinders, tori, planes).
///
/// Construction validates sigma (symmetric positive-definite) and caches its
/// inverse, determinant, and the frame that maps standard Gaussian
/// coordinates to tangent coordinates with |z|^2 = sigma_ij z^i conj(z^j).
class FlatChart {
 public:
  FlatChart(Eigen::MatrixXd sigma, std::vector<Period> periods);

  int dim() const { return static_cast<int>(sigma_.rows()); }
  const Eigen::MatrixXd& metric() const { return sigma_; }
  const Eigen::MatrixXd& metric_inverse() const { return sigma_inv_; }
  double metric_det() const { return det_; }
  const std::vector<Period>& periods() const { return periods_; }

  /// A with A^T sigma A = I. Real Gaussian coordinates (u, v) map to the
  /// tangent vector z = A (u + i v).
  const Eigen::MatrixXd& gaussian_frame() const { return frame_; }

  bool operator==(const FlatChart& other) const;

 private:
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd sigma_inv_;
  Eigen::MatrixXd frame_;
  double det_ = 1.0;
  std::vector<Period> periods_;
};

FlatChart make_chart(int n, const Eigen::MatrixXd& sigma, std::vector<Period> periods);

/// Holomorphic tangent coordinates z^i of a phase-space tangent vector.
struct TangentComplex {
  Eigen::VectorXcd z;
};

/// Christoffel symbols Gamma^k_{ml}, stored as gamma[k](m, l).
using Christoffel = std::vector<Eigen::MatrixXd>;

/// z^i = qdot^i + i sigma^{im} (pdot_m - p_k Gamma^k_{ml} qdot^l).
/// An empty `gamma` means the flat chart (all symbols zero).
TangentComplex complexify(const FlatChart& chart, const Eigen::VectorXd& qdot,
                          const Eigen::VectorXd& pdot, const Eigen::VectorXd& p,
                          const Christoffel& gamma = {});

/// Inverse of complexify on a flat chart: qdot = Re z, pdot = sigma Im z.
std::pair<Eigen::VectorXd, Eigen::VectorXd> decomplexify(const FlatChart& chart,
                                                         const TangentComplex& t);

struct PhasePoint {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
};

/// Reduces x into (-L/2, L/2] on every periodic coordinate.
double reduce_periodic(double x, double period);

/// Exponential map at the chart origin: q = x mod periods, p = y.
PhasePoint exp_map(const FlatChart& chart, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// sigma_ij z^i conj(z^j).
double norm_sq(const FlatChart& chart, const TangentComplex& t);

/// det(sigma): density of the pulled-back Riemannian volume w.r.t. Lebesgue measure.
double volume_factor(const FlatChart& chart);

}  // namespace holo
