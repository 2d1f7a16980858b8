#include "holo/bargmann.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "holo/errors.hpp"

namespace holo {

std::optional<std::size_t> BasisSpec::index_of(int label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

cplx BasisSpec::eval(int label, const Eigen::VectorXcd& z) const {
  const auto i = index_of(label);
  if (!i) throw ValidationError("basis " + name + " has no label " + std::to_string(label));
  return eval_all(z)[static_cast<Eigen::Index>(*i)];
}

void validate_basis(const BasisSpec& basis, double tol) {
  if (basis.labels.empty()) throw ValidationError("basis " + basis.name + " is empty");
  if (basis.dim < 1) throw ValidationError("basis dimension must be positive");
  if (!basis.eval_all) throw ValidationError("basis " + basis.name + " has no evaluator");
  std::set<int> seen(basis.labels.begin(), basis.labels.end());
  if (seen.size() != basis.labels.size()) throw ValidationError("basis labels are not distinct");

  const double h = 1e-5;
  const cplx samples[] = {{0.0, 0.0}, {0.7, -0.3}, {-1.1, 0.45}, {0.2, 0.5}};
  for (const cplx s : samples) {
    Eigen::VectorXcd z = Eigen::VectorXcd::Constant(basis.dim, s);
    const Eigen::VectorXcd f0 = basis.eval_all(z);
    if (static_cast<std::size_t>(f0.size()) != basis.size())
      throw ValidationError("basis evaluator returned " + std::to_string(f0.size()) + " values, expected " +
                            std::to_string(basis.size()));
    if (!f0.allFinite()) throw ValidationError("basis " + basis.name + " is not finite at sample points");
    for (int d = 0; d < basis.dim; ++d) {
      auto shifted = [&](cplx dz) {
        Eigen::VectorXcd zz = z;
        zz[d] += dz;
        return Eigen::VectorXcd(basis.eval_all(zz));
      };
      const Eigen::VectorXcd dx = (shifted({h, 0}) - shifted({-h, 0})) / (2 * h);
      const Eigen::VectorXcd dy = (shifted({0, h}) - shifted({0, -h})) / (2 * h);
      for (Eigen::Index k = 0; k < dx.size(); ++k) {
        const double resid = std::abs(dx[k] + cplx(0, 1) * dy[k]) / std::max(1.0, std::abs(dx[k]));
        if (resid > tol)
          throw ValidationError("basis " + basis.name + " label " + std::to_string(basis.labels[k]) +
                                " fails the Cauchy-Riemann check (residual " + std::to_string(resid) + ")");
      }
    }
  }
}

cplx inner_product_exponential(cplx alpha, cplx beta) { return std::exp(std::conj(alpha) * beta); }

std::vector<std::size_t> alternating_ordering(const std::vector<int>& labels) {
  int reach = 0;
  for (int l : labels) reach = std::max(reach, std::abs(l));
  std::vector<std::size_t> order;
  std::vector<bool> used(labels.size(), false);
  auto take = [&](int label) {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (!used[i] && labels[i] == label) {
        used[i] = true;
        order.push_back(i);
        return;
      }
  };
  // n-th processed label is (-1)^{n+1} [(n+1)/2]
  for (int n = 0; n <= 2 * reach; ++n) {
    const int mag = (n + 1) / 2;
    take(n % 2 == 1 ? mag : -mag);
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (!used[i]) rest.push_back(i);
  std::sort(rest.begin(), rest.end(), [&](auto a, auto b) { return labels[a] < labels[b]; });
  order.insert(order.end(), rest.begin(), rest.end());
  return order;
}

GramData make_gram(Eigen::MatrixXcd matrix, std::vector<std::size_t> ordering) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
    throw ValidationError("Gram matrix must be square and non-empty");
  if (!matrix.allFinite()) throw NumericalError("Gram matrix has non-finite entries");
  const double scale = matrix.cwiseAbs().maxCoeff();
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NumericalError("Gram matrix is not Hermitian");
  if (ordering.empty()) {
    ordering.resize(static_cast<std::size_t>(matrix.rows()));
    for (std::size_t i = 0; i < ordering.size(); ++i) ordering[i] = i;
  }
  std::vector<std::size_t> check = ordering;
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < check.size(); ++i)
    if (check[i] != i || check.size() != static_cast<std::size_t>(matrix.rows()))
      throw ValidationError("Gram ordering is not a permutation");

  GramData g;
  g.matrix = 0.5 * (matrix + matrix.adjoint());
  g.factor.compute(g.matrix);
  if (g.factor.info() != Eigen::Success)
    throw NumericalError("basis numerically dependent at this truncation/precision (Cholesky failed)");
  const Eigen::MatrixXcd L = g.factor.matrixL();
  if ((L.diagonal().real().array() <= 0.0).any())
    throw NumericalError("basis numerically dependent at this truncation/precision (Cholesky failed)");
  g.ordering = std::move(ordering);
  return g;
}

Eigen::MatrixXcd quadrature_gram(const BasisSpec& basis, const FlatChart& chart,
                                 const QuadratureRule& rule, Precision precision, Exec exec) {
  if (basis.dim != chart.dim()) throw ValidationError("basis and chart dimensions differ");
  const auto m = static_cast<Eigen::Index>(basis.size());

  if (precision == Precision::extended) {
    if (!basis.eval_all_ext) throw ValidationError("basis " + basis.name + " has no extended-precision evaluator");
    const MatrixXcld zero = MatrixXcld::Zero(m, m);
    const MatrixXcld G = reduce_tangent<long double, MatrixXcld>(
        chart, rule, exec, zero, [&](std::size_t flat, const VectorXcld& z, long double w, MatrixXcld& acc) {
          const VectorXcld f = basis.eval_all_ext(z);
          for (Eigen::Index i = 0; i < f.size(); ++i)
            if (!std::isfinite(f[i].real()) || !std::isfinite(f[i].imag()))
              throw NumericalError("basis not finite at " + detail::describe_node<long double>(flat, z));
          acc.noalias() += w * f.conjugate() * f.transpose();
        });
    return G.cast<cplx>();
  }

  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(m, m);
  return reduce_tangent<double, Eigen::MatrixXcd>(
      chart, rule, exec, zero, [&](std::size_t flat, const Eigen::VectorXcd& z, double w, Eigen::MatrixXcd& acc) {
        const Eigen::VectorXcd f = basis.eval_all(z);
        if (!f.allFinite()) throw NumericalError("basis not finite at " + detail::describe_node<double>(flat, z));
        acc.noalias() += w * f.conjugate() * f.transpose();
      });
}

GramData gram_matrix(const BasisSpec& basis, const FlatChart& chart, const QuadratureRule& rule,
                     GramSource source, Precision precision, Exec exec) {
  const auto m = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd G(m, m);
  const bool closed = source == GramSource::closed_form ||
                      (source == GramSource::automatic && basis.closed_form_inner);
  if (closed) {
    if (!basis.closed_form_inner) throw ValidationError("basis " + basis.name + " has no closed-form Gram");
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = 0; q < m; ++q) G(p, q) = basis.closed_form_inner(basis.labels[p], basis.labels[q]);
  } else {
    G = quadrature_gram(basis, chart, rule, precision, exec);
  }
  return make_gram(std::move(G), alternating_ordering(basis.labels));
}

Eigen::MatrixXcd orthonormalize(const GramData& gram, const std::vector<std::size_t>& order_in) {
  const auto& G = gram.matrix;
  const auto m = G.rows();
  const std::vector<std::size_t>& order = order_in.empty() ? gram.ordering : order_in;
  if (static_cast<Eigen::Index>(order.size()) != m) throw ValidationError("ordering length does not match Gram size");

  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index n = 0; n < m; ++n) {
    const auto k = static_cast<Eigen::Index>(order[static_cast<std::size_t>(n)]);
    Eigen::VectorXcd alpha = Eigen::VectorXcd::Unit(m, k);
    // beta_j already normalized: alpha -= <beta_j, phi_k> beta_j
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx proj = C.col(j).dot(G.col(k));
      alpha -= proj * C.col(j);
    }
    const double norm2 = alpha.dot(G * alpha).real();
    if (!(norm2 > 1e-13 * G(k, k).real()))
      throw NumericalError("Gram-Schmidt lost positivity at step " + std::to_string(n) +
                           "; lower the truncation");
    C.col(n) = alpha / std::sqrt(norm2);
  }
  return C;
}

Eigen::VectorXcd state_values(const BasisSpec& basis, const Eigen::VectorXcd& coeffs,
                              const Eigen::MatrixXcd& points) {
  if (static_cast<std::size_t>(coeffs.size()) != basis.size()) throw ValidationError("state size does not match basis");
  Eigen::VectorXcd out(points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) out[j] = basis.eval_all(points.col(j)).transpose() * coeffs;
  return out;
}

cplx state_value(const BasisSpec& basis, const Eigen::VectorXcd& coeffs, const Eigen::VectorXcd& z) {
  if (static_cast<std::size_t>(coeffs.size()) != basis.size()) throw ValidationError("state size does not match basis");
  return (basis.eval_all(z).transpose() * coeffs)(0, 0);
}

cplx inner_product(const GramData& gram, const Eigen::VectorXcd& c1, const Eigen::VectorXcd& c2) {
  if (c1.size() != gram.matrix.rows() || c2.size() != gram.matrix.rows())
    throw ValidationError("state size does not match Gram matrix");
  return c1.dot(gram.matrix * c2);
}

cplx inner_product(const HoloFunction& f, const HoloFunction& g, const FlatChart& chart,
                   const QuadratureRule& rule, Exec exec) {
  return integrate_tangent<double>(
      chart, rule, [&](const Eigen::VectorXcd& z) { return std::conj(f(z)) * g(z); }, exec);
}

KernelRep::KernelRep(BasisSpec basis, std::shared_ptr<const GramData> gram)
    : basis_(std::move(basis)), gram_(std::move(gram)) {
  if (!gram_ || gram_->matrix.rows() != static_cast<Eigen::Index>(basis_.size()))
    throw ValidationError("Gram matrix does not match basis size");
}

Eigen::VectorXcd KernelRep::coherent(const Eigen::VectorXcd& w) const {
  return gram_->solve(Eigen::VectorXcd(basis_.eval_all(w).conjugate()));
}

cplx KernelRep::operator()(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) const {
  return (basis_.eval_all(z).transpose() * coherent(w))(0, 0);
}

cplx KernelRep::operator()(cplx z, cplx w) const {
  return (*this)(Eigen::VectorXcd::Constant(1, z), Eigen::VectorXcd::Constant(1, w));
}

cplx KernelRep::series(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) const {
  const Eigen::VectorXcd bz = C.transpose() * basis_.eval_all(z);
  const Eigen::VectorXcd bw = C.transpose() * basis_.eval_all(w);
  return (bz.transpose() * bw.conjugate())(0, 0);
}

Eigen::MatrixXcd KernelRep::grid(const Eigen::MatrixXcd& zs, const Eigen::MatrixXcd& ws, Exec exec) const {
  const auto m = static_cast<Eigen::Index>(basis_.size());
  Eigen::MatrixXcd coh(m, ws.cols());
  indexed_for(static_cast<std::size_t>(ws.cols()), exec,
              [&](std::size_t j) { coh.col(static_cast<Eigen::Index>(j)) = coherent(ws.col(static_cast<Eigen::Index>(j))); });
  Eigen::MatrixXcd out(zs.cols(), ws.cols());
  indexed_for(static_cast<std::size_t>(zs.cols()), exec, [&](std::size_t i) {
    const auto r = static_cast<Eigen::Index>(i);
    out.row(r) = basis_.eval_all(zs.col(r)).transpose() * coh;
  });
  return out;
}

KernelRep reproducing_kernel(const GramData& gram, const BasisSpec& basis) {
  return KernelRep(basis, std::make_shared<const GramData>(gram));
}

Eigen::VectorXcd project(const HoloFunction& f, const KernelRep& kernel, const FlatChart& chart,
                         const QuadratureRule& rule, Exec exec) {
  const auto& basis = kernel.basis();
  const auto m = static_cast<Eigen::Index>(basis.size());
  const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(m);
  const Eigen::VectorXcd moments = reduce_tangent<double, Eigen::VectorXcd>(
      chart, rule, exec, zero, [&](std::size_t flat, const Eigen::VectorXcd& z, double w, Eigen::VectorXcd& acc) {
        const cplx fz = f(z);
        if (!std::isfinite(fz.real()) || !std::isfinite(fz.imag()))
          throw NumericalError("function not finite at " + detail::describe_node<double>(flat, z));
        acc.noalias() += (w * fz) * basis.eval_all(z).conjugate();
      });
  return kernel.gram().solve(moments);
}

OperatorKernel::OperatorKernel(Eigen::MatrixXcd op, const KernelRep& kernel) : op_(std::move(op)), kernel_(kernel) {
  const auto m = static_cast<Eigen::Index>(kernel_.basis().size());
  if (op_.rows() != m || op_.cols() != m)
    throw ValidationError("operator is " + std::to_string(op_.rows()) + "x" + std::to_string(op_.cols()) +
                          ", basis has " + std::to_string(m) + " elements");
}

cplx OperatorKernel::operator()(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) const {
  return (kernel_.basis().eval_all(z).transpose() * (op_ * kernel_.coherent(w)))(0, 0);
}

OperatorKernel operator_kernel(const Eigen::MatrixXcd& op, const KernelRep& kernel) {
  return OperatorKernel(op, kernel);
}

BasisSpec monomial_basis(int max_degree) {
  if (max_degree < 0) throw ValidationError("monomial degree must be nonnegative");
  BasisSpec b;
  b.name = "monomial";
  b.dim = 1;
  for (int m = 0; m <= max_degree; ++m) b.labels.push_back(m);
  b.eval_all = [max_degree](const Eigen::VectorXcd& z) {
    Eigen::VectorXcd out(max_degree + 1);
    cplx term = 1.0;
    out[0] = term;
    for (int m = 1; m <= max_degree; ++m) {
      term *= z[0] / std::sqrt(static_cast<double>(m));
      out[m] = term;
    }
    return out;
  };
  b.eval_all_ext = [max_degree](const VectorXcld& z) {
    VectorXcld out(max_degree + 1);
    cplx_ext term = 1.0L;
    out[0] = term;
    for (int m = 1; m <= max_degree; ++m) {
      term *= z[0] / std::sqrt(static_cast<long double>(m));
      out[m] = term;
    }
    return out;
  };
  b.closed_form_inner = [](int p, int q) { return cplx(p == q ? 1.0 : 0.0, 0.0); };
  return b;
}

}  // namespace holo
