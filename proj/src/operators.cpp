#include "holo/operators.hpp"

#include <cmath>

#include "holo/cylinder.hpp"
#include "holo/errors.hpp"

namespace holo {

namespace {

void check_gram(const GramData& gram, int N) {
  if (N < 0) throw ValidationError("truncation must be nonnegative");
  if (gram.matrix.rows() != 2 * N + 1)
    throw ValidationError("Gram matrix has size " + std::to_string(gram.matrix.rows()) + ", truncation " +
                          std::to_string(N) + " needs " + std::to_string(2 * N + 1));
}

}  // namespace

Eigen::VectorXcd OperatorMatrix::apply(const Eigen::VectorXcd& c) const {
  if (c.size() != entries.cols()) throw ValidationError("state size does not match operator");
  return entries * c;
}

bool OperatorMatrix::is_diagonal(double tol) const {
  for (Eigen::Index i = 0; i < entries.rows(); ++i)
    for (Eigen::Index j = 0; j < entries.cols(); ++j)
      if (i != j && std::abs(entries(i, j)) > tol) return false;
  return true;
}

void validate(const OperatorMatrix& op) {
  const auto d = 2 * op.N + 1;
  if (op.entries.rows() != d || op.entries.cols() != d)
    throw ValidationError("operator must be " + std::to_string(d) + "x" + std::to_string(d));
  if (!op.entries.allFinite()) throw ValidationError("operator has non-finite entries");
}

OperatorMatrix ladder_lower(int N) {
  if (N < 0) throw ValidationError("truncation must be nonnegative");
  OperatorMatrix a{N, Eigen::MatrixXcd::Zero(2 * N + 1, 2 * N + 1), "lower"};
  for (int k = -N; k <= N; ++k) a.entries(k + N, k + N) = cplx(0.0, k);
  return a;
}

Eigen::MatrixXcd multiplication_moments(int N) {
  Eigen::MatrixXcd T(2 * N + 1, 2 * N + 1);
  for (int l = -N; l <= N; ++l)
    for (int k = -N; k <= N; ++k) T(l + N, k + N) = cplx(0.0, -l) * gram_closed(l, k, true);
  return T;
}

OperatorMatrix ladder_raise(const GramData& gram, int N) {
  check_gram(gram, N);
  return {N, gram.solve(multiplication_moments(N)), "raise"};
}

OperatorMatrix ladder_raise_quadrature(const GramData& gram, int N, const QuadratureRule& rule, Exec exec) {
  check_gram(gram, N);
  const FlatChart chart = cylinder_chart();
  const BasisSpec basis = cylinder_basis(N, true);
  const auto d = 2 * N + 1;
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(d, d);
  const Eigen::MatrixXcd T = reduce_tangent<double, Eigen::MatrixXcd>(
      chart, rule, exec, zero, [&](std::size_t, const Eigen::VectorXcd& z, double w, Eigen::MatrixXcd& acc) {
        const Eigen::VectorXcd f = basis.eval_all(z);
        acc.noalias() += w * f.conjugate() * (z[0] * f).transpose();
      });
  return {N, gram.solve(T), "raise (quadrature)"};
}

OperatorMatrix hamiltonian_free(int N) {
  if (N < 0) throw ValidationError("truncation must be nonnegative");
  OperatorMatrix h{N, Eigen::MatrixXcd::Zero(2 * N + 1, 2 * N + 1), "free"};
  for (int k = -N; k <= N; ++k) h.entries(k + N, k + N) = 0.5 * k * k;
  return h;
}

Eigen::MatrixXcd in_orthonormal_basis(const Eigen::MatrixXcd& M, const GramData& gram, const Eigen::MatrixXcd& C) {
  if (M.rows() != gram.matrix.rows() || C.rows() != gram.matrix.rows())
    throw ValidationError("operator, Gram and coefficient sizes differ");
  return C.adjoint() * gram.matrix * M * C;
}

double adjointness_residual(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, int buffer) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw ValidationError("matrix sizes differ");
  const auto size = A.rows() - 2 * buffer;
  if (buffer < 0 || size < 1) throw ValidationError("buffer leaves an empty block");
  return (A.topLeftCorner(size, size) - B.adjoint().topLeftCorner(size, size)).cwiseAbs().maxCoeff();
}

}  // namespace holo
