#include "holo/propagator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "holo/cylinder.hpp"
#include "holo/errors.hpp"
#include "holo/kernels.hpp"

namespace holo {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void validate(const PropagatorConfig& config) {
  validate(config.H);
  if (config.n_steps < 1) throw ValidationError("n_steps must be >= 1");
  if (!std::isfinite(config.t)) throw ValidationError("t must be finite");
  if (!(config.epsilon >= 0.0)) throw ValidationError("epsilon must be nonnegative");
  if (!(config.division_guard > 0.0)) throw ValidationError("division guard must be positive");
  if (config.outer_order < 1 || config.inner_order < 1) throw ValidationError("step quadrature orders must be >= 1");
}

QuadraticSymbol quadratic_symbol(const OperatorMatrix& H) {
  validate(H);
  if (!H.is_diagonal())
    throw ValidationError("ambient step kernel needs H diagonal in the phi~ basis; use the gram step kernel");
  const int N = H.N;
  Eigen::VectorXd h(2 * N + 1);
  for (int k = -N; k <= N; ++k) {
    const cplx v = H.entries(k + N, k + N);
    if (v.imag() != 0.0) throw ValidationError("H has a non-real diagonal entry at k = " + std::to_string(k));
    h[k + N] = v.real();
  }
  Eigen::MatrixXd V(2 * N + 1, 3);
  for (int k = -N; k <= N; ++k) V.row(k + N) << double(k) * k, double(k), 1.0;
  const Eigen::Vector3d coef = V.colPivHouseholderQr().solve(h);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((V * coef - h).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ValidationError("ambient step kernel needs h(k) quadratic in k");
  return {coef[0], coef[1], coef[2]};
}

StepOperator::StepOperator(const PropagatorConfig& config, const KernelRep& kernel, double delta, Exec exec)
    : config_(config), kernel_(kernel), delta_(delta) {
  validate(config_);
  if (!std::isfinite(delta)) throw ValidationError("step size must be finite");
  const auto m = static_cast<Eigen::Index>(kernel_.basis().size());
  if (config_.H.entries.rows() != m) throw ValidationError("H does not match the basis size");
  if (kernel_.basis().dim != 1) throw ValidationError("the step integral is implemented for one complex dimension");

  const FlatChart chart = cylinder_chart();
  outer_ = tangent_nodes(chart, QuadratureRule(config_.outer_order, 2));
  inner_ = tangent_nodes(chart, QuadratureRule(config_.inner_order, 2));

  if (config_.kernel == StepKernel::ambient) {
    const QuadraticSymbol s = quadratic_symbol(config_.H);
    ambient_weights_.resize(static_cast<Eigen::Index>(inner_.size()));
    for (Eigen::Index j = 0; j < ambient_weights_.size(); ++j) {
      const cplx zb = std::conj(inner_.points(0, j));
      const cplx kh = -s.alpha * zb * zb - kI * s.beta * zb + s.gamma;
      ambient_weights_[j] = inner_.weights[j] * std::exp(-kI * delta_ * kh);
    }
  }

  const BasisSpec& basis = kernel_.basis();
  const Eigen::MatrixXcd g = accumulate(basis.eval_all, m, exec);
  matrix_ = project_samples(outer_, basis, g);
}

Eigen::MatrixXcd StepOperator::accumulate(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& f,
                                          Eigen::Index width, Exec exec) const {
  if (config_.kernel == StepKernel::ambient) {
    return accumulate_step(outer_, inner_, f, width, [&](Eigen::Index) { return ambient_weights_; }, exec);
  }

  const BasisSpec& basis = kernel_.basis();
  const GramData& gram = kernel_.gram();
  const Eigen::MatrixXcd& H = config_.H.entries;
  const double guard = config_.division_guard;
  const double delta = delta_;
  const TangentNodes& inner = inner_;
  const TangentNodes& outer = outer_;
  auto weights = [&, guard, delta](Eigen::Index i) {
    const Eigen::VectorXcd phi_m = basis.eval_all(outer.points.col(i));
    // K(m, w) = sum_p r_p conj(phi_p(w)); likewise K_H with rh
    const Eigen::VectorXcd r = gram.solve(Eigen::VectorXcd(phi_m.conjugate())).conjugate();
    const Eigen::VectorXcd rh =
        gram.solve(Eigen::VectorXcd((H.transpose() * phi_m).conjugate())).conjugate();
    const double kmm = std::abs(phi_m.dot(r));
    Eigen::VectorXcd w(static_cast<Eigen::Index>(inner.size()));
    Eigen::VectorXcd point(1);
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      point[0] = outer.points(0, i) + inner.points(0, j);
      const Eigen::VectorXcd phi_w = basis.eval_all(point);
      const cplx K = phi_w.dot(r);
      const cplx KH = phi_w.dot(rh);
      if (!(std::abs(K) >= guard * kmm))
        throw NumericalError("division guard at outer node #" + std::to_string(i) + ", inner node #" +
                             std::to_string(j) + ": |K| = " + fmt(std::abs(K)) + ", K(m,m) = " + fmt(kmm));
      w[j] = inner.weights[j] * K * std::exp(-kI * delta * KH / K);
    }
    return w;
  };
  return accumulate_step(outer, inner, f, width, weights, exec);
}

Eigen::VectorXcd StepOperator::apply_pointwise(const Eigen::VectorXcd& c, Exec exec) const {
  const BasisSpec& basis = kernel_.basis();
  if (static_cast<std::size_t>(c.size()) != basis.size()) throw ValidationError("state size does not match basis");
  auto f = [&](const Eigen::VectorXcd& z) {
    return Eigen::VectorXcd::Constant(1, (basis.eval_all(z).transpose() * c)(0, 0)).eval();
  };
  const Eigen::MatrixXcd g = accumulate(f, 1, exec);
  return project_samples(outer_, basis, g).col(0);
}

HoloState infinitesimal_step(const HoloState& state, const KernelRep& kernel, const PropagatorConfig& config,
                             double delta, Exec exec) {
  const StepOperator step(config, kernel, delta, exec);
  return {state.N, step.apply_pointwise(state.coeffs, exec)};
}

HoloState evolve(const HoloState& state, const PropagatorConfig& config, const KernelRep& kernel,
                 const EvolveObserver& observe, Exec exec) {
  validate(config);
  const double delta = config.t / config.n_steps;
  const StepOperator step(config, kernel, delta, exec);
  if (state.coeffs.size() != step.matrix().cols()) throw ValidationError("state size does not match basis");
  Eigen::VectorXcd c = state.coeffs;
  if (observe) observe(0, c);
  for (int s = 1; s <= config.n_steps; ++s) {
    c = step.matrix() * c;
    if (!c.allFinite()) throw NumericalError("evolution step " + std::to_string(s) + " produced non-finite coefficients");
    if (observe) observe(s, c);
  }
  return {state.N, c};
}

HoloState evolve_exact(const HoloState& state, const OperatorMatrix& H, double t) {
  validate(H);
  if (!H.is_diagonal()) throw ValidationError("evolve_exact needs H diagonal in the phi~ basis; use evolve");
  if (state.coeffs.size() != H.entries.rows()) throw ValidationError("state size does not match H");
  HoloState out = state;
  for (Eigen::Index i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] *= std::exp(-kI * H.entries(i, i) * t);
  return out;
}

cplx regularized_time(double re, double im, double eps) { return cplx(re, im) * cplx(1.0, -eps); }

cplx greens_winding(double theta, double theta0, cplx T, int n_max, double tol) {
  if (n_max < 0) throw ValidationError("n_max must be nonnegative");
  if (!(T.imag() < 0.0))
    throw NumericalError("winding sum diverges for Im T >= 0; regularize with epsilon > 0");
  const cplx pref = 1.0 / std::sqrt(2.0 * kPi * kI * T);
  const double x = theta - theta0;
  // |e^{i d^2/(2T)}| = e^{d^2 Im T / (2|T|^2)}
  const double decay = T.imag() / (2.0 * std::norm(T));
  const double d = 2.0 * kPi * (n_max + 1) - std::abs(x);
  const double tail = 2.0 * std::abs(pref) * std::exp(decay * d * d) / (1.0 - std::exp(decay * 4.0 * kPi * kPi));
  if (!(tail <= tol))
    throw NumericalError("winding sum tail " + fmt(tail) + " exceeds tolerance; increase windings or epsilon");
  cplx sum = 0.0;
  for (int n = n_max; n >= 1; --n) {
    const double a = x + 2.0 * kPi * n;
    const double b = x - 2.0 * kPi * n;
    sum += std::exp(kI * a * a / (2.0 * T)) + std::exp(kI * b * b / (2.0 * T));
  }
  sum += std::exp(kI * x * x / (2.0 * T));
  return pref * sum;
}

cplx greens_spectral(double theta, double theta0, cplx T, int M, double tol) {
  if (M < 0) throw ValidationError("mode cutoff must be nonnegative");
  if (!(T.imag() < 0.0))
    throw NumericalError("mode sum diverges for Im T >= 0; regularize with epsilon > 0");
  const double m1 = M + 1.0;
  const double q = std::exp(0.5 * T.imag());
  const double tail = 2.0 * std::pow(q, m1 * m1) / (2.0 * kPi) / (1.0 - std::pow(q, 2.0 * m1 + 1.0));
  if (!(tail <= tol))
    throw NumericalError("mode sum tail " + fmt(tail) + " exceeds tolerance; increase modes or epsilon");
  const double x = theta - theta0;
  cplx sum = 1.0;
  for (int k = M; k >= 1; --k) {
    const cplx g = std::exp(-kI * (double(k) * k) * T / 2.0);
    sum += g * (std::exp(kI * (double(k) * x)) + std::exp(-kI * (double(k) * x)));
  }
  return sum / (2.0 * kPi);
}

}  // namespace holo
