#include "holo/kernels.hpp"

#include <string>

#include "holo/errors.hpp"

namespace holo {

Eigen::MatrixXcd accumulate_step(const TangentNodes& outer, const TangentNodes& inner, const VectorEval& f,
                                 Eigen::Index width, const StepWeights& weights, Exec exec) {
  if (outer.points.rows() != inner.points.rows()) throw ValidationError("outer and inner node dimensions differ");
  const auto n_outer = static_cast<Eigen::Index>(outer.size());
  const auto n_inner = static_cast<Eigen::Index>(inner.size());
  Eigen::MatrixXcd g(n_outer, width);

  indexed_for(outer.size(), exec, [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    const Eigen::VectorXcd w = weights(i);
    if (w.size() != n_inner) throw ValidationError("step weight row has wrong length");
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(width);
    Eigen::VectorXcd point(outer.points.rows());
    for (Eigen::Index j = 0; j < n_inner; ++j) {
      point = outer.points.col(i) + inner.points.col(j);
      acc.noalias() += w[j] * f(point);
    }
    if (!acc.allFinite())
      throw NumericalError("step integrand is not finite at outer node #" + std::to_string(i));
    g.row(i) = acc.transpose();
  });
  return g;
}

Eigen::MatrixXcd project_samples(const TangentNodes& outer, const BasisSpec& basis, const Eigen::MatrixXcd& g) {
  const auto m = static_cast<Eigen::Index>(basis.size());
  if (g.rows() != static_cast<Eigen::Index>(outer.size())) throw ValidationError("sample count does not match nodes");
  Eigen::MatrixXcd Gd = Eigen::MatrixXcd::Zero(m, m);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(m, g.cols());
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    const Eigen::VectorXcd phi = basis.eval_all(outer.points.col(i));
    const Eigen::VectorXcd wphi = outer.weights[i] * phi.conjugate();
    Gd.noalias() += wphi * phi.transpose();
    rhs.noalias() += wphi * g.row(i);
  }
  const Eigen::LLT<Eigen::MatrixXcd> llt(0.5 * (Gd + Gd.adjoint()));
  if (llt.info() != Eigen::Success) throw NumericalError("discrete Gram of the outer rule is singular");
  return llt.solve(rhs);
}

}  // namespace holo
