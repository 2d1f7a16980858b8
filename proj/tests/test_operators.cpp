#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "holo/cylinder.hpp"
#include "holo/errors.hpp"
#include "holo/operators.hpp"

using namespace holo;

namespace {
GramData cyl_gram(int N) { return gram_matrix(cylinder_basis(N), cylinder_chart(), QuadratureRule(1, 2)); }
}  // namespace

TEST_SUITE("operators") {
  TEST_CASE("ladder_lower acts as d/dz") {
    const OperatorMatrix a = ladder_lower(4);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(9);
    e[index_of_mode(4, 2)] = 1.0;
    const Eigen::VectorXcd r = a.apply(e);
    CHECK(std::abs(r[index_of_mode(4, 2)] - cplx(0, 2)) < 1e-15);
    CHECK(r.cwiseAbs().sum() == doctest::Approx(2.0));
    CHECK(a.is_diagonal());
  }

  TEST_CASE("multiplication moments match quadrature") {
    const int N = 3;
    const Eigen::MatrixXcd T = multiplication_moments(N);
    const QuadratureRule rule(64, 2);
    for (int l = -N; l <= N; ++l)
      for (int k = -N; k <= N; ++k) {
        const cplx q = integrate_tangent(cylinder_chart(), rule, [&](const Eigen::VectorXcd& z) {
          return std::conj(std::exp(cplx(0, l) * z[0] - 0.5 * l * l)) * z[0] * std::exp(cplx(0, k) * z[0] - 0.5 * k * k);
        });
        CHECK(std::abs(T(l + N, k + N) - q) < 1e-12);
        CHECK(std::abs(T(l + N, k + N) - cplx(0, -l) * std::exp(-0.5 * (l - k) * (l - k))) < 1e-15);
      }
  }

  TEST_CASE("closed form and quadrature raising operators agree") {
    const int N = 4;
    const GramData g = cyl_gram(N);
    const OperatorMatrix a = ladder_raise(g, N);
    const OperatorMatrix b = ladder_raise_quadrature(g, N, QuadratureRule(64, 2));
    CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() < 1e-10 * (1 + a.entries.cwiseAbs().maxCoeff()));
  }

  TEST_CASE("raising operator is the Gram adjoint of lowering") {
    const int N = 8;
    const GramData g = cyl_gram(N);
    const Eigen::MatrixXcd C = orthonormalize(g);
    const Eigen::MatrixXcd A = in_orthonormal_basis(ladder_lower(N).entries, g, C);
    const Eigen::MatrixXcd B = in_orthonormal_basis(ladder_raise(g, N).entries, g, C);
    CHECK(adjointness_residual(B, A, 2) < 1e-6);
    // <f, a+ g> = <a f, g> in the Gram inner product
    gen::Gen r(111);
    const Eigen::MatrixXcd a = ladder_lower(N).entries, ap = ladder_raise(g, N).entries;
    for (int i = 0; i < 5; ++i) {
      const Eigen::VectorXcd f = r.state(17), h = r.state(17);
      const cplx lhs = inner_product(g, f, Eigen::VectorXcd(ap * h));
      const cplx rhs = inner_product(g, Eigen::VectorXcd(a * f), h);
      CHECK(std::abs(lhs - rhs) < 1e-8 * (1 + std::abs(lhs)));
    }
  }

  TEST_CASE("free Hamiltonian is -a^2/2") {
    const OperatorMatrix a = ladder_lower(5), H = hamiltonian_free(5);
    CHECK((H.entries + 0.5 * a.entries * a.entries).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(H.entries(index_of_mode(5, -3), index_of_mode(5, -3)) - 4.5) < 1e-15);
  }

  TEST_CASE("validation") {
    OperatorMatrix bad{2, Eigen::MatrixXcd::Identity(4, 4), "bad"};
    CHECK_THROWS_AS(validate(bad), ValidationError);
    CHECK_THROWS_AS(ladder_lower(-1), ValidationError);
    CHECK_THROWS_AS(ladder_raise(cyl_gram(2), 3), ValidationError);
    CHECK_THROWS_AS(adjointness_residual(Eigen::MatrixXcd::Identity(3, 3), Eigen::MatrixXcd::Identity(3, 3), 2),
                    ValidationError);
  }
}
