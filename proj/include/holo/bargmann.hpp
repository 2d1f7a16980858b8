#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "holo/geometry.hpp"
#include "holo/parallel.hpp"
#include "holo/quadrature.hpp"

namespace holo {

using VectorXcld = Eigen::Matrix<cplx_ext, Eigen::Dynamic, 1>;
using MatrixXcld = Eigen::Matrix<cplx_ext, Eigen::Dynamic, Eigen::Dynamic>;

/// A finite family of holomorphic functions on the complexified tangent space.
///
/// `eval_all(z)` returns every basis function at z in label order. The
/// long-double evaluator and the closed-form inner product are optional.
struct BasisSpec {
  std::string name;
  int dim = 1;
  std::vector<int> labels;
  std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)> eval_all;
  std::function<VectorXcld(const VectorXcld&)> eval_all_ext;
  std::function<cplx(int, int)> closed_form_inner;

  std::size_t size() const { return labels.size(); }
  /// Position of `label` in `labels`, or nullopt.
  std::optional<std::size_t> index_of(int label) const;
  cplx eval(int label, const Eigen::VectorXcd& z) const;
};

/// Distinct labels, finite values, and a central-difference Cauchy-Riemann
/// residual |df/dx + i df/dy| / max(1, |df/dx|) <= tol at fixed sample points.
void validate_basis(const BasisSpec& basis, double tol = 1e-6);

/// <e^{alpha z}, e^{beta z}> = exp(conj(alpha) beta) for the normalized
/// Gaussian measure on C.
cplx inner_product_exponential(cplx alpha, cplx beta);

/// Gram-Schmidt order 0, 1, -1, 2, -2, ... restricted to the labels present;
/// labels the sequence never reaches are appended in ascending order.
/// Returns positions into `labels`.
std::vector<std::size_t> alternating_ordering(const std::vector<int>& labels);

struct GramData {
  Eigen::MatrixXcd matrix;
  Eigen::LLT<Eigen::MatrixXcd> factor;
  std::vector<std::size_t> ordering;

  Eigen::MatrixXcd lower() const { return factor.matrixL(); }
  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const { return factor.solve(b); }
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& b) const { return factor.solve(b); }
};

/// Validates Hermitian symmetry (1e-12 relative) and factorizes.
GramData make_gram(Eigen::MatrixXcd matrix, std::vector<std::size_t> ordering);

enum class GramSource { automatic, closed_form, quadrature };
enum class Precision { standard, extended };

/// Entries from the closed form when available (or forced), else tensor
/// quadrature in the requested precision. Ordering defaults to
/// alternating_ordering.
GramData gram_matrix(const BasisSpec& basis, const FlatChart& chart, const QuadratureRule& rule,
                     GramSource source = GramSource::automatic,
                     Precision precision = Precision::standard, Exec exec = Exec::parallel);

/// Quadrature moments M_pq = <basis_p, basis_q> in the given precision.
Eigen::MatrixXcd quadrature_gram(const BasisSpec& basis, const FlatChart& chart,
                                 const QuadratureRule& rule, Precision precision,
                                 Exec exec = Exec::parallel);

/// Coefficient matrix C with beta_j = sum_k C(k, j) basis_k, columns in
/// processing order (`order`, defaults to gram.ordering). Projection
/// coefficients use <alpha_j, phi>; throws NumericalError when a squared norm
/// drops below 1e-13 of the corresponding diagonal entry.
Eigen::MatrixXcd orthonormalize(const GramData& gram,
                                const std::vector<std::size_t>& order = {});

/// Coefficient vector over a basis; for the cylinder basis index i is k = i - N.
struct HoloState {
  int N = 0;
  Eigen::VectorXcd coeffs;
};

Eigen::VectorXcd state_values(const BasisSpec& basis, const Eigen::VectorXcd& coeffs,
                              const Eigen::MatrixXcd& points);
cplx state_value(const BasisSpec& basis, const Eigen::VectorXcd& coeffs, const Eigen::VectorXcd& z);

/// c1^H G c2.
cplx inner_product(const GramData& gram, const Eigen::VectorXcd& c1, const Eigen::VectorXcd& c2);

using HoloFunction = std::function<cplx(const Eigen::VectorXcd&)>;

/// Quadrature form of the normalized scalar product <f, g>.
cplx inner_product(const HoloFunction& f, const HoloFunction& g, const FlatChart& chart,
                   const QuadratureRule& rule, Exec exec = Exec::parallel);

/// Reproducing kernel K(z, conj w) = phi(z)^T G^{-1} conj(phi(w)).
class KernelRep {
 public:
  KernelRep(BasisSpec basis, std::shared_ptr<const GramData> gram);

  const BasisSpec& basis() const { return basis_; }
  const GramData& gram() const { return *gram_; }

  cplx operator()(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) const;
  cplx operator()(cplx z, cplx w) const;

  /// Coefficients of the coherent state zeta at w: G^{-1} conj(phi(w)).
  Eigen::VectorXcd coherent(const Eigen::VectorXcd& w) const;

  /// Same kernel through an orthonormal system: sum_j beta_j(z) conj(beta_j(w)).
  cplx series(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) const;

  /// Kernel values on a grid, rows z_i, columns w_j.
  Eigen::MatrixXcd grid(const Eigen::MatrixXcd& zs, const Eigen::MatrixXcd& ws,
                        Exec exec = Exec::parallel) const;

 private:
  BasisSpec basis_;
  std::shared_ptr<const GramData> gram_;
};

KernelRep reproducing_kernel(const GramData& gram, const BasisSpec& basis);

/// Orthogonal projection onto the span: coefficients G^{-1} <phi_l, f>.
Eigen::VectorXcd project(const HoloFunction& f, const KernelRep& kernel, const FlatChart& chart,
                         const QuadratureRule& rule, Exec exec = Exec::parallel);

/// K_O(z, conj w) = phi(z)^T O G^{-1} conj(phi(w)), O acting on coefficient columns.
class OperatorKernel {
 public:
  OperatorKernel(Eigen::MatrixXcd op, const KernelRep& kernel);
  cplx operator()(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) const;
  const Eigen::MatrixXcd& matrix() const { return op_; }

 private:
  Eigen::MatrixXcd op_;
  KernelRep kernel_;
};

OperatorKernel operator_kernel(const Eigen::MatrixXcd& op, const KernelRep& kernel);

/// Full Bargmann space on C: z^m / sqrt(m!), m = 0..max_degree (orthonormal).
BasisSpec monomial_basis(int max_degree);

}  // namespace holo
