#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "holo/errors.hpp"
#include "holo/geometry.hpp"
#include "holo/parallel.hpp"

namespace holo {

using cplx_ext = std::complex<long double>;

/// Default nodes per real dimension. See README "Defaults".
inline constexpr int kDefaultQuadOrder = 96;

/// One-dimensional Gauss-Hermite rule for the weight e^{-x^2}.
struct HermiteRule {
  std::vector<long double> nodes;    // strictly increasing
  std::vector<long double> weights;  // positive, sum sqrt(pi)
};

/// Golub-Welsch on the Hermite Jacobi matrix, then Newton polishing of each
/// node on the orthonormal three-term recurrence. Exact for polynomials of
/// degree <= 2*order - 1.
HermiteRule hermite_rule(int order);

/// Tensor Gauss-Hermite rule on R^dims for the normalized Gaussian measure
/// pi^{-dims/2} e^{-|x|^2} dx. The grid is never materialized.
class QuadratureRule {
 public:
  QuadratureRule(int order, int dims);

  int order() const { return order_; }
  int dims() const { return dims_; }
  std::size_t size() const { return size_; }

  const std::vector<long double>& nodes_ext() const { return rule_.nodes; }
  const std::vector<long double>& weights_ext() const { return rule_.weights; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// pi^{-dims/2}, so that the constant 1 integrates to 1.
  long double normalization_ext() const { return normalization_; }
  double normalization() const { return static_cast<double>(normalization_); }

  /// Decodes a flat grid index into per-dimension node indices (dimension 0
  /// varies slowest).
  void unflatten(std::size_t flat, std::vector<int>& idx) const;

 private:
  int order_;
  int dims_;
  std::size_t size_;
  HermiteRule rule_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  long double normalization_;
};

/// Point and normalized weight of every node of `rule` mapped into the
/// tangent space of `chart`. Used by kernels that revisit nodes many times.
struct TangentNodes {
  Eigen::MatrixXcd points;  // dim x count, column j is z_j
  Eigen::VectorXd weights;  // normalized, sums to 1
  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
};

TangentNodes tangent_nodes(const FlatChart& chart, const QuadratureRule& rule);

namespace detail {

template <class Real>
std::string describe_node(std::size_t flat, const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>& z) {
  std::ostringstream os;
  os.precision(17);
  os << "node #" << flat << " at z = (";
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (i) os << ", ";
    os << static_cast<double>(z[i].real()) << (z[i].imag() < 0 ? " - " : " + ")
       << std::abs(static_cast<double>(z[i].imag())) << "i";
  }
  os << ")";
  return os.str();
}

// Gaussian frame recomputed in the working precision.
template <class Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> frame_as(const FlatChart& chart) {
  using M = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  const M sigma = chart.metric().template cast<Real>();
  const Eigen::LLT<M> llt(sigma);
  const M L = llt.matrixL();
  return L.transpose().template triangularView<Eigen::Upper>().solve(M::Identity(sigma.rows(), sigma.cols()));
}

}  // namespace detail

/// Visits every node of `rule` mapped into the tangent space of `chart` and
/// folds `visit(flat, z, w, acc)` into per-block accumulators seeded with
/// `zero`.
/// Blocks are combined pairwise, so the result does not depend on `exec`.
template <class Real, class T, class Visit>
T reduce_tangent(const FlatChart& chart, const QuadratureRule& rule, Exec exec, const T& zero,
                 Visit&& visit) {
  using C = std::complex<Real>;
  using VecC = Eigen::Matrix<C, Eigen::Dynamic, 1>;
  using VecR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  const int n = chart.dim();
  if (rule.dims() != 2 * n)
    throw ValidationError("quadrature rule has " + std::to_string(rule.dims()) +
                          " real dimensions; chart needs " + std::to_string(2 * n));

  const auto frame = detail::frame_as<Real>(chart);
  const Real norm = static_cast<Real>(rule.normalization_ext());
  const auto& xs = rule.nodes_ext();
  const auto& ws = rule.weights_ext();

  return blocked_reduce<T>(
      rule.size(), exec,
      [&](std::size_t begin, std::size_t end) {
        std::vector<int> idx(static_cast<std::size_t>(rule.dims()));
        VecR u(n), v(n);
        VecC z(n);
        T acc = zero;
        for (std::size_t flat = begin; flat < end; ++flat) {
          rule.unflatten(flat, idx);
          Real w = norm;
          for (int i = 0; i < n; ++i) {
            u[i] = static_cast<Real>(xs[idx[i]]);
            v[i] = static_cast<Real>(xs[idx[n + i]]);
            w *= static_cast<Real>(ws[idx[i]]) * static_cast<Real>(ws[idx[n + i]]);
          }
          const VecR zr = frame * u;
          const VecR zi = frame * v;
          for (int i = 0; i < n; ++i) z[i] = C(zr[i], zi[i]);
          visit(flat, z, w, acc);
        }
        return acc;
      },
      zero);
}

/// Normalized Gaussian-measure integral of f over the tangent space:
/// sum over nodes of w * f(z) with z = A(u + i v), |z|^2 = |u|^2 + |v|^2.
///
/// `Real` selects the working precision (double or long double); f receives
/// and returns values of that precision. Throws NumericalError naming the
/// first node where f is not finite.
template <class Real = double, class F>
std::complex<Real> integrate_tangent(const FlatChart& chart, const QuadratureRule& rule, F&& f,
                                     Exec exec = Exec::parallel) {
  using C = std::complex<Real>;
  return reduce_tangent<Real, C>(chart, rule, exec, C(0), [&](std::size_t flat, const auto& z, Real w, C& acc) {
    const C value = f(z);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      throw NumericalError("integrand is not finite at " + detail::describe_node<Real>(flat, z));
    acc += w * value;
  });
}

}  // namespace holo
