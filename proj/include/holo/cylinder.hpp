#pragma once

#include "holo/bargmann.hpp"
#include "holo/geometry.hpp"

namespace holo {

/// Default truncation: 17 basis functions.
inline constexpr int kDefaultTruncation = 8;

/// sigma = [1], period 2 pi.
FlatChart cylinder_chart();

/// e^{ikz} (raw) or e^{ikz - k^2/2} (normalized), k = -N..N, with z = x - iy.
/// The raw basis is limited to N <= 6.
BasisSpec cylinder_basis(int N, bool normalized = true);

/// e^{pq} (raw) or e^{-(p-q)^2/2} (normalized). Raw with |pq| > 700 overflows
/// and throws.
double gram_closed(int p, int q, bool normalized);

/// Label k of coefficient index i for truncation N.
inline int mode_of(int N, Eigen::Index i) { return static_cast<int>(i) - N; }
inline Eigen::Index index_of_mode(int N, int k) { return static_cast<Eigen::Index>(k + N); }

struct HeatKernelParams {
  double t = 1.0;
  int M = 12;
  double x0 = 0.0;
  int x_quad = 256;
  double tol = 1e-12;
};

void validate(const HeatKernelParams& params);

/// rho_t^z(x) = (1/2pi) sum_{|k| <= M} e^{ik(x - z) - k^2 t/2}. Throws when
/// the tail bound 2 e^{(M+1)|Im z|} e^{-(M+1)^2 t/2} / 2pi exceeds params.tol.
cplx heat_rho(const HeatKernelParams& params, cplx z, double x);

/// Gaussian winding form sum_n (2 pi t)^{-1/2} e^{-(x + 2 pi n)^2 / (2t)}.
double heat_rho_winding(double t, double x, int n_max = 20);

/// (1/2pi) int_{-pi}^{pi} rho^z(x) rho^{conj w}(x) / rho^{x0}(x) dx by the
/// periodic trapezoid rule on params.x_quad nodes.
cplx heat_kernel_formula(const HeatKernelParams& params, cplx z, cplx w);

/// c = K(0, 0) / formula(0, 0) for the given Gram-inverse kernel.
cplx heat_kernel_calibration(const HeatKernelParams& params, const KernelRep& kernel);

/// Formula values on a grid, rows z, columns w (each z_i, w_j a scalar).
Eigen::MatrixXcd heat_kernel_grid(const HeatKernelParams& params, const Eigen::VectorXcd& zs,
                                  const Eigen::VectorXcd& ws, Exec exec = Exec::parallel);

/// n points -pi + 2 pi j / n, j = 0..n-1.
Eigen::VectorXd periodic_grid(int n);

}  // namespace holo
