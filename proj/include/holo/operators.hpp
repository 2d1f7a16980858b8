#pragma once

#include <string>

#include "holo/bargmann.hpp"

namespace holo {

/// Operator on phi~-coefficients of the cylinder basis, k = -N..N.
struct OperatorMatrix {
  int N = 0;
  Eigen::MatrixXcd entries;
  std::string description;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& c) const;
  bool is_diagonal(double tol = 0.0) const;
};

void validate(const OperatorMatrix& op);

/// a = d/dz: diag(ik).
OperatorMatrix ladder_lower(int N);

/// a+ = G~^{-1} T with T_lk = <phi~_l, z phi~_k> = -il e^{-(l-k)^2/2}.
OperatorMatrix ladder_raise(const GramData& gram, int N);

/// Same operator with T obtained by quadrature and the coefficients by
/// projecting z * phi~_k.
OperatorMatrix ladder_raise_quadrature(const GramData& gram, int N, const QuadratureRule& rule,
                                       Exec exec = Exec::parallel);

/// Closed-form multiplication moments T_lk.
Eigen::MatrixXcd multiplication_moments(int N);

/// diag(k^2/2) = -a^2/2.
OperatorMatrix hamiltonian_free(int N);

/// Matrix of `op` in the orthonormal system with coefficient matrix C:
/// C^{-1} M C = C^H G M C.
Eigen::MatrixXcd in_orthonormal_basis(const Eigen::MatrixXcd& M, const GramData& gram,
                                      const Eigen::MatrixXcd& C);

/// max |A - B^H| over the leading (size - 2 buffer) block of the beta ordering.
/// With the alternating ordering that block spans |k| <= N - buffer.
double adjointness_residual(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, int buffer);

}  // namespace holo
