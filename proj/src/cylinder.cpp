#include "holo/cylinder.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "holo/errors.hpp"

namespace holo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRawLimit = 700.0;

// e^{ikz} for k = -N..N by one exponential and repeated products. The
// relative error grows like |k| ulp.
template <class C>
void fill_powers(int N, const C& z, Eigen::Matrix<C, Eigen::Dynamic, 1>& out) {
  using std::exp;
  const C i(0, 1);
  const C u = exp(i * z);
  const C uinv = exp(-i * z);
  out.resize(2 * N + 1);
  out[N] = C(1);
  C up(1), down(1);
  for (int k = 1; k <= N; ++k) {
    up *= u;
    down *= uinv;
    out[N + k] = up;
    out[N - k] = down;
  }
}

}  // namespace

FlatChart cylinder_chart() { return make_chart(1, Eigen::MatrixXd::Identity(1, 1), {2 * kPi}); }

double gram_closed(int p, int q, bool normalized) {
  if (normalized) {
    const double d = static_cast<double>(p - q);
    return std::exp(-0.5 * d * d);
  }
  const double pq = static_cast<double>(p) * static_cast<double>(q);
  if (std::abs(pq) > kRawLimit)
    throw NumericalError("raw Gram entry e^{pq} with pq = " + std::to_string(static_cast<long long>(pq)) +
                         " overflows; use the normalized basis");
  return std::exp(pq);
}

BasisSpec cylinder_basis(int N, bool normalized) {
  if (N < 0) throw ValidationError("truncation must be nonnegative");
  if (!normalized && N > 6)
    throw ValidationError("raw basis supported only for N <= 6 (Gram e^{pq} is ill-conditioned beyond)");
  BasisSpec b;
  b.name = normalized ? "cylinder" : "cylinder-raw";
  b.dim = 1;
  for (int k = -N; k <= N; ++k) b.labels.push_back(k);

  std::vector<double> damp(static_cast<std::size_t>(2 * N + 1), 1.0);
  std::vector<long double> damp_ext(damp.size(), 1.0L);
  if (normalized)
    for (int k = -N; k <= N; ++k) {
      damp[static_cast<std::size_t>(k + N)] = std::exp(-0.5 * k * k);
      damp_ext[static_cast<std::size_t>(k + N)] = std::exp(-0.5L * k * k);
    }

  b.eval_all = [N, damp](const Eigen::VectorXcd& z) {
    Eigen::VectorXcd out;
    fill_powers(N, z[0], out);
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] *= damp[static_cast<std::size_t>(i)];
    return out;
  };
  b.eval_all_ext = [N, damp_ext](const VectorXcld& z) {
    VectorXcld out;
    fill_powers(N, z[0], out);
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] *= damp_ext[static_cast<std::size_t>(i)];
    return out;
  };
  b.closed_form_inner = [normalized](int p, int q) { return cplx(gram_closed(p, q, normalized), 0.0); };
  return b;
}

void validate(const HeatKernelParams& params) {
  if (!(params.t > 0.0) || !std::isfinite(params.t)) throw ValidationError("heat-kernel time t must be positive");
  if (params.M < 1) throw ValidationError("mode cutoff M must be >= 1");
  if (params.x_quad < 2) throw ValidationError("x_quad must be >= 2");
  if (!std::isfinite(params.x0)) throw ValidationError("x0 must be finite");
  if (!(params.tol > 0.0)) throw ValidationError("tolerance must be positive");
}

cplx heat_rho(const HeatKernelParams& params, cplx z, double x) {
  validate(params);
  const double m1 = params.M + 1.0;
  const double tail = 2.0 * std::exp(m1 * std::abs(z.imag()) - 0.5 * m1 * m1 * params.t) / (2 * kPi);
  if (tail > params.tol)
    throw NumericalError("heat_rho tail bound " + std::to_string(tail) + " exceeds tolerance; increase M (now " +
                         std::to_string(params.M) + ")");
  // Pair k and -k so the sum is exactly real when z is real.
  const cplx arg = cplx(x, 0.0) - z;
  cplx sum = 1.0;
  for (int k = params.M; k >= 1; --k) {
    const double g = std::exp(-0.5 * k * k * params.t);
    sum += g * (std::exp(cplx(0, k) * arg) + std::exp(cplx(0, -k) * arg));
  }
  return sum / (2 * kPi);
}

double heat_rho_winding(double t, double x, int n_max) {
  if (!(t > 0.0)) throw ValidationError("heat-kernel time t must be positive");
  const double pref = 1.0 / std::sqrt(2 * kPi * t);
  double sum = 0.0;
  for (int n = n_max; n >= 1; --n) {
    const double a = x + 2 * kPi * n;
    const double b = x - 2 * kPi * n;
    sum += std::exp(-a * a / (2 * t)) + std::exp(-b * b / (2 * t));
  }
  sum += std::exp(-x * x / (2 * t));
  return pref * sum;
}

cplx heat_kernel_formula(const HeatKernelParams& params, cplx z, cplx w) {
  validate(params);
  const int n = params.x_quad;
  const double h = 2 * kPi / n;
  cplx sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = -kPi + h * j;
    const cplx base = heat_rho(params, cplx(params.x0, 0.0), x);
    if (std::abs(base) < 1e-12)
      throw NumericalError("heat-kernel division guard: |rho^{x0}(" + std::to_string(x) + ")| = " +
                           std::to_string(std::abs(base)));
    sum += heat_rho(params, z, x) * heat_rho(params, std::conj(w), x) / base;
  }
  return sum * h / (2 * kPi);
}

cplx heat_kernel_calibration(const HeatKernelParams& params, const KernelRep& kernel) {
  const cplx f = heat_kernel_formula(params, 0.0, 0.0);
  if (std::abs(f) == 0.0) throw NumericalError("heat-kernel formula vanishes at the origin");
  return kernel(cplx(0.0), cplx(0.0)) / f;
}

Eigen::MatrixXcd heat_kernel_grid(const HeatKernelParams& params, const Eigen::VectorXcd& zs,
                                  const Eigen::VectorXcd& ws, Exec exec) {
  Eigen::MatrixXcd out(zs.size(), ws.size());
  indexed_for(static_cast<std::size_t>(zs.size() * ws.size()), exec, [&](std::size_t flat) {
    const auto i = static_cast<Eigen::Index>(flat) / ws.size();
    const auto j = static_cast<Eigen::Index>(flat) % ws.size();
    out(i, j) = heat_kernel_formula(params, zs[i], ws[j]);
  });
  return out;
}

Eigen::VectorXd periodic_grid(int n) {
  if (n < 1) throw ValidationError("grid size must be positive");
  Eigen::VectorXd g(n);
  for (int j = 0; j < n; ++j) g[j] = -kPi + 2 * kPi * j / n;
  return g;
}

}  // namespace holo
