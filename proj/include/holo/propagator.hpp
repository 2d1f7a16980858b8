#pragma once

#include <functional>

#include "holo/bargmann.hpp"
#include "holo/operators.hpp"

namespace holo {

/// Representative of K and K_H inside the step integral.
///
/// ambient: tangent-space Bargmann kernels centred at m, so K(m, m+z) = 1 and
///   K_H(m, m+z) = -alpha conj(z)^2 - i beta conj(z) + gamma for
///   h(k) = alpha k^2 + beta k + gamma.
/// gram: the truncated Gram-inverse kernel and its operator kernel.
enum class StepKernel { ambient, gram };

struct PropagatorConfig {
  OperatorMatrix H;
  double t = 0.0;
  int n_steps = 1;
  double division_guard = 1e-12;
  double epsilon = 0.0;
  StepKernel kernel = StepKernel::ambient;
  int outer_order = 24;
  int inner_order = 64;
};

void validate(const PropagatorConfig& config);

/// Fits h(k) = alpha k^2 + beta k + gamma to the diagonal of H; throws if H
/// is not diagonal or the fit misses an entry by more than 1e-10 relative.
struct QuadraticSymbol {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};
QuadraticSymbol quadratic_symbol(const OperatorMatrix& H);

/// Precomputed step u_Delta as a matrix on coefficients.
class StepOperator {
 public:
  StepOperator(const PropagatorConfig& config, const KernelRep& kernel, double delta, Exec exec = Exec::parallel);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  double delta() const { return delta_; }

  /// Route (a): quadrature of the step integral for one state, then projection.
  Eigen::VectorXcd apply_pointwise(const Eigen::VectorXcd& c, Exec exec = Exec::parallel) const;

 private:
  Eigen::MatrixXcd accumulate(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& f,
                              Eigen::Index width, Exec exec) const;

  PropagatorConfig config_;
  KernelRep kernel_;
  double delta_;
  TangentNodes outer_;
  TangentNodes inner_;
  Eigen::VectorXcd ambient_weights_;
  Eigen::MatrixXcd matrix_;
};

/// One step of u_Delta applied to `state` by route (a).
HoloState infinitesimal_step(const HoloState& state, const KernelRep& kernel, const PropagatorConfig& config,
                             double delta, Exec exec = Exec::parallel);

/// Observer for each iterate: step index (0 = initial) and coefficients.
using EvolveObserver = std::function<void(int, const Eigen::VectorXcd&)>;

/// (u_{t/n})^n applied through the step matrix.
HoloState evolve(const HoloState& state, const PropagatorConfig& config, const KernelRep& kernel,
                 const EvolveObserver& observe = {}, Exec exec = Exec::parallel);

/// c_k -> e^{-i h(k) t} c_k for diagonal H.
HoloState evolve_exact(const HoloState& state, const OperatorMatrix& H, double t);

/// (re + i im)(1 - i eps).
cplx regularized_time(double re, double im, double eps);

/// sum_{|n| <= n_max} (2 pi i T)^{-1/2} e^{i(theta - theta0 + 2 pi n)^2 / (2T)}.
/// Requires Im T < 0; throws when the omitted tail exceeds `tol`.
cplx greens_winding(double theta, double theta0, cplx T, int n_max, double tol = 1e-8);

/// (1/2pi) sum_{|k| <= M} e^{ik(theta - theta0)} e^{-ik^2 T/2}.
cplx greens_spectral(double theta, double theta0, cplx T, int M, double tol = 1e-8);

}  // namespace holo
