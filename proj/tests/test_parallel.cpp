#include <doctest.h>

#include "gen.hpp"
#include "holo/cylinder.hpp"
#include "holo/propagator.hpp"

using namespace holo;

// The OpenMP kernels use fixed blocks combined in a fixed order, so they must
// match the serial reference bit for bit.
TEST_SUITE("parallel") {
  TEST_CASE("quadrature_gram") {
    const BasisSpec b = cylinder_basis(6);
    const QuadratureRule rule(48, 2);
    for (Precision p : {Precision::standard, Precision::extended}) {
      const Eigen::MatrixXcd s = quadrature_gram(b, cylinder_chart(), rule, p, Exec::serial);
      const Eigen::MatrixXcd q = quadrature_gram(b, cylinder_chart(), rule, p, Exec::parallel);
      CHECK(s == q);
    }
  }

  TEST_CASE("integrate_tangent and project") {
    const BasisSpec b = cylinder_basis(4);
    const KernelRep K = reproducing_kernel(gram_matrix(b, cylinder_chart(), QuadratureRule(1, 2)), b);
    const QuadratureRule rule(64, 2);
    auto f = [](const Eigen::VectorXcd& z) { return std::exp(cplx(0, 1) * z[0]) * (1.0 + 0.1 * std::conj(z[0])); };
    CHECK(integrate_tangent(cylinder_chart(), rule, f, Exec::serial) ==
          integrate_tangent(cylinder_chart(), rule, f, Exec::parallel));
    CHECK(project(f, K, cylinder_chart(), rule, Exec::serial) == project(f, K, cylinder_chart(), rule, Exec::parallel));
  }

  TEST_CASE("kernel grid") {
    const BasisSpec b = cylinder_basis(8);
    const KernelRep K = reproducing_kernel(gram_matrix(b, cylinder_chart(), QuadratureRule(1, 2)), b);
    gen::Gen g(151);
    Eigen::MatrixXcd zs(1, 40), ws(1, 30);
    for (Eigen::Index i = 0; i < zs.cols(); ++i) zs(0, i) = g.point(3, 1);
    for (Eigen::Index i = 0; i < ws.cols(); ++i) ws(0, i) = g.point(3, 1);
    CHECK(K.grid(zs, ws, Exec::serial) == K.grid(zs, ws, Exec::parallel));
  }

  TEST_CASE("step matrix and heat grid") {
    const BasisSpec b = cylinder_basis(3);
    const KernelRep K = reproducing_kernel(gram_matrix(b, cylinder_chart(), QuadratureRule(1, 2)), b);
    PropagatorConfig c;
    c.H = hamiltonian_free(3);
    c.t = 0.3;
    c.outer_order = 12;
    c.inner_order = 24;
    CHECK(StepOperator(c, K, 0.3, Exec::serial).matrix() == StepOperator(c, K, 0.3, Exec::parallel).matrix());

    HeatKernelParams p;
    const Eigen::VectorXd x = periodic_grid(9);
    const Eigen::VectorXcd pts = x.cast<cplx>();
    CHECK(heat_kernel_grid(p, pts, pts, Exec::serial) == heat_kernel_grid(p, pts, pts, Exec::parallel));
  }
}
