#include "holo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace holo {

namespace {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

const long double kPi = std::numbers::pi_v<long double>;

struct RecurrenceValue {
  long double p;       // orthonormal p_n(x)
  long double p_prev;  // p_{n-1}(x)
};

// Orthonormal Hermite polynomials w.r.t. e^{-x^2}:
// p_0 = pi^{-1/4}, p_j = sqrt(2/j) x p_{j-1} - sqrt((j-1)/j) p_{j-2}.
RecurrenceValue orthonormal_hermite(int n, long double x) {
  long double pm = 0.0L;
  long double pc = 1.0L / std::pow(kPi, 0.25L);
  for (int j = 1; j <= n; ++j) {
    const long double jl = static_cast<long double>(j);
    const long double pn = std::sqrt(2.0L / jl) * x * pc - std::sqrt((jl - 1.0L) / jl) * pm;
    pm = pc;
    pc = pn;
  }
  return {pc, pm};
}

}  // namespace

HermiteRule hermite_rule(int order) {
  if (order < 1) throw ValidationError("Gauss-Hermite order must be >= 1");
  const int n = order;
  HermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = 0.0L;
    rule.weights[0] = std::sqrt(kPi);
    return rule;
  }

  // Jacobi matrix: zero diagonal, off-diagonal sqrt(k/2).
  LVector diag = LVector::Zero(n);
  LVector sub(n - 1);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(static_cast<long double>(k) / 2.0L);
  Eigen::SelfAdjointEigenSolver<LMatrix> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) throw NumericalError("Golub-Welsch eigensolve failed");

  const long double eps = std::numeric_limits<long double>::epsilon();
  for (int i = 0; i < n; ++i) {
    long double x = eig.eigenvalues()[i];
    // Newton on p_n with p_n' = sqrt(2n) p_{n-1}.
    for (int it = 0; it < 8; ++it) {
      const auto r = orthonormal_hermite(n, x);
      const long double dp = std::sqrt(2.0L * n) * r.p_prev;
      const long double step = r.p / dp;
      x -= step;
      if (std::abs(step) <= 4 * eps * std::max(1.0L, std::abs(x))) break;
    }
    const auto r = orthonormal_hermite(n, x);
    rule.nodes[i] = x;
    rule.weights[i] = 1.0L / (static_cast<long double>(n) * r.p_prev * r.p_prev);
  }

  // Enforce the exact symmetry of the rule.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const long double x = 0.5L * (rule.nodes[j] - rule.nodes[i]);
    const long double w = 0.5L * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0L;

  for (int i = 1; i < n; ++i)
    if (!(rule.nodes[i] > rule.nodes[i - 1])) throw NumericalError("Gauss-Hermite nodes not increasing");
  return rule;
}

QuadratureRule::QuadratureRule(int order, int dims) : order_(order), dims_(dims) {
  if (order < 1) throw ValidationError("quadrature order must be >= 1");
  if (dims < 1) throw ValidationError("quadrature dimension must be >= 1");
  const long double total = std::pow(static_cast<long double>(order), static_cast<long double>(dims));
  if (total > 1e12L) throw ValidationError("tensor grid with " + std::to_string(order) + "^" +
                                           std::to_string(dims) + " nodes is too large");
  size_ = 1;
  for (int d = 0; d < dims; ++d) size_ *= static_cast<std::size_t>(order);
  rule_ = hermite_rule(order);
  nodes_.assign(rule_.nodes.begin(), rule_.nodes.end());
  weights_.assign(rule_.weights.begin(), rule_.weights.end());
  normalization_ = std::pow(kPi, -0.5L * static_cast<long double>(dims));
}

void QuadratureRule::unflatten(std::size_t flat, std::vector<int>& idx) const {
  idx.resize(static_cast<std::size_t>(dims_));
  const auto base = static_cast<std::size_t>(order_);
  for (int d = dims_ - 1; d >= 0; --d) {
    idx[static_cast<std::size_t>(d)] = static_cast<int>(flat % base);
    flat /= base;
  }
}

TangentNodes tangent_nodes(const FlatChart& chart, const QuadratureRule& rule) {
  const int n = chart.dim();
  if (rule.dims() != 2 * n)
    throw ValidationError("quadrature rule dimension does not match chart");
  if (rule.size() > (std::size_t{1} << 26))
    throw ValidationError("tangent grid too large to materialize; lower the quadrature order");

  const auto frame = detail::frame_as<long double>(chart);
  const long double norm = rule.normalization_ext();
  TangentNodes out;
  out.points.resize(n, static_cast<Eigen::Index>(rule.size()));
  out.weights.resize(static_cast<Eigen::Index>(rule.size()));
  std::vector<int> idx;
  LVector u(n), v(n);
  for (std::size_t flat = 0; flat < rule.size(); ++flat) {
    rule.unflatten(flat, idx);
    long double w = norm;
    for (int i = 0; i < n; ++i) {
      u[i] = rule.nodes_ext()[idx[i]];
      v[i] = rule.nodes_ext()[idx[n + i]];
      w *= rule.weights_ext()[idx[i]] * rule.weights_ext()[idx[n + i]];
    }
    const LVector zr = frame * u;
    const LVector zi = frame * v;
    const auto j = static_cast<Eigen::Index>(flat);
    for (int i = 0; i < n; ++i)
      out.points(i, j) = cplx(static_cast<double>(zr[i]), static_cast<double>(zi[i]));
    out.weights[j] = static_cast<double>(w);
  }
  return out;
}

}  // namespace holo
