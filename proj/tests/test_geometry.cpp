#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "holo/errors.hpp"
#include "holo/geometry.hpp"
#include "holo/serialization.hpp"

using namespace holo;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

Eigen::VectorXd v1(double x) { return Eigen::VectorXd::Constant(1, x); }
}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("make_chart examples") {
    const FlatChart cyl = make_chart(1, Eigen::MatrixXd::Identity(1, 1), {2 * kPi});
    CHECK(cyl.dim() == 1);
    CHECK(*cyl.periods()[0] == Approx(2 * kPi));
    const FlatChart plane = make_chart(1, Eigen::MatrixXd::Identity(1, 1), {Period{}});
    CHECK_FALSE(plane.periods()[0].has_value());
    const FlatChart torus = make_chart(2, Eigen::MatrixXd::Identity(2, 2), {2 * kPi, 2 * kPi});
    CHECK(torus.dim() == 2);
    CHECK(torus.metric_det() == Approx(1.0));
  }

  TEST_CASE("make_chart rejects bad input") {
    Eigen::MatrixXd nonsym(2, 2);
    nonsym << 1, 0.5, 0.2, 1;
    CHECK_THROWS_AS(make_chart(2, nonsym, {Period{}, Period{}}), ValidationError);
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1, 2, 2, 1;
    CHECK_THROWS_AS(make_chart(2, indefinite, {Period{}, Period{}}), ValidationError);
    CHECK_THROWS_AS(make_chart(1, Eigen::MatrixXd::Identity(1, 1), {0.0}), ValidationError);
    CHECK_THROWS_AS(make_chart(1, Eigen::MatrixXd::Identity(1, 1), {-1.0}), ValidationError);
    CHECK_THROWS_AS(make_chart(1, Eigen::MatrixXd::Identity(1, 1), {}), ValidationError);
    CHECK_THROWS_AS(make_chart(2, Eigen::MatrixXd::Identity(1, 1), {Period{}}), ValidationError);
  }

  TEST_CASE("chart caches inverse, determinant and frame") {
    Eigen::MatrixXd s(2, 2);
    s << 2, 0, 0, 3;
    const FlatChart c = make_chart(2, s, {Period{}, Period{}});
    CHECK(c.metric_det() == Approx(6.0));
    CHECK((c.metric() * c.metric_inverse() - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
    const Eigen::MatrixXd A = c.gaussian_frame();
    CHECK((A.transpose() * s * A - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
  }

  TEST_CASE("complexify examples") {
    const FlatChart id = make_chart(1, Eigen::MatrixXd::Identity(1, 1), {Period{}});
    CHECK(complexify(id, v1(1), v1(0), v1(0)).z[0] == cplx(1, 0));
    CHECK(complexify(id, v1(0), v1(1), v1(0)).z[0] == cplx(0, 1));
    const FlatChart four = make_chart(1, Eigen::MatrixXd::Constant(1, 1, 4.0), {Period{}});
    const cplx z = complexify(four, v1(1), v1(1), v1(0)).z[0];
    CHECK(z.real() == Approx(1.0));
    CHECK(z.imag() == Approx(0.25));
    CHECK_THROWS_AS(complexify(id, Eigen::VectorXd::Zero(2), v1(0), v1(0)), ValidationError);
  }

  TEST_CASE("complexify with Christoffel symbols") {
    // z = qdot + i sigma^{-1} (pdot - p_k Gamma^k qdot), hand arithmetic
    const FlatChart id = make_chart(1, Eigen::MatrixXd::Identity(1, 1), {Period{}});
    const Christoffel gamma{Eigen::MatrixXd::Constant(1, 1, 0.5)};
    const cplx z = complexify(id, v1(2), v1(3), v1(4), gamma).z[0];
    CHECK(z.real() == Approx(2.0));
    CHECK(z.imag() == Approx(3.0 - 4.0 * 0.5 * 2.0));
  }

  TEST_CASE("decomplexify inverts complexify on flat charts") {
    gen::Gen g(11);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = g.integer(1, 3);
      const FlatChart c(g.spd(n), std::vector<Period>(static_cast<std::size_t>(n)));
      const Eigen::VectorXd qd = g.real_vector(n), pd = g.real_vector(n);
      const auto [q2, p2] = decomplexify(c, complexify(c, qd, pd, Eigen::VectorXd::Zero(n)));
      CHECK((q2 - qd).norm() < 1e-12);
      CHECK((p2 - pd).norm() < 1e-12);
    }
  }

  TEST_CASE("exp_map examples") {
    const FlatChart cyl = make_chart(1, Eigen::MatrixXd::Identity(1, 1), {2 * kPi});
    const PhasePoint a = exp_map(cyl, v1(3 * kPi), v1(5));
    CHECK(a.q[0] == Approx(kPi));
    CHECK(a.p[0] == 5.0);
    const PhasePoint b = exp_map(cyl, v1(0.3), v1(-1));
    CHECK(b.q[0] == 0.3);
    CHECK(b.p[0] == -1.0);
    const FlatChart plane = make_chart(1, Eigen::MatrixXd::Identity(1, 1), {Period{}});
    const PhasePoint c = exp_map(plane, v1(17.5), v1(-2));
    CHECK(c.q[0] == 17.5);
  }

  TEST_CASE("reduce_periodic lands in (-L/2, L/2]") {
    CHECK(reduce_periodic(-kPi, 2 * kPi) == Approx(kPi));
    CHECK(reduce_periodic(kPi, 2 * kPi) == Approx(kPi));
    CHECK(reduce_periodic(5.0, 4.0) == Approx(1.0));
    CHECK(reduce_periodic(-3.0, 4.0) == Approx(1.0));
  }

  TEST_CASE("norm_sq and volume_factor examples") {
    const FlatChart id = make_chart(1, Eigen::MatrixXd::Identity(1, 1), {Period{}});
    CHECK(norm_sq(id, {Eigen::VectorXcd::Constant(1, cplx(1, -1))}) == Approx(2.0));
    CHECK(norm_sq(id, {Eigen::VectorXcd::Zero(1)}) == 0.0);
    const FlatChart four = make_chart(1, Eigen::MatrixXd::Constant(1, 1, 4.0), {Period{}});
    CHECK(norm_sq(four, {Eigen::VectorXcd::Constant(1, cplx(1, 1))}) == Approx(8.0));
    CHECK(volume_factor(four) == Approx(4.0));
    CHECK(volume_factor(make_chart(3, Eigen::MatrixXd::Identity(3, 3), {Period{}, Period{}, Period{}})) == Approx(1.0));
    Eigen::MatrixXd d(2, 2);
    d << 2, 0, 0, 3;
    CHECK(volume_factor(make_chart(2, d, {Period{}, Period{}})) == Approx(6.0));
  }

  TEST_CASE("property: exp_map is periodic") {
    gen::Gen g(1);
    const double L = 2 * kPi;
    const FlatChart cyl = make_chart(1, Eigen::MatrixXd::Identity(1, 1), {L});
    for (int i = 0; i < 200; ++i) {
      const double x = g.uniform(-50, 50), y = g.uniform(-5, 5);
      const int shift = g.integer(-5, 5);
      const PhasePoint a = exp_map(cyl, v1(x), v1(y));
      const PhasePoint b = exp_map(cyl, v1(x + shift * L), v1(y));
      // equal modulo L up to roundoff of the shifted argument
      const double d = reduce_periodic(a.q[0] - b.q[0], L);
      CHECK(std::abs(d) < 1e-12 * (1 + std::abs(x) + std::abs(shift * L)));
      CHECK(a.q[0] > -L / 2 - 1e-12);
      CHECK(a.q[0] <= L / 2 + 1e-12);
    }
  }

  TEST_CASE("property: norm_sq is definite and real-linear complexify") {
    gen::Gen g(2);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = g.integer(1, 3);
      const FlatChart c(g.spd(n), std::vector<Period>(static_cast<std::size_t>(n)));
      Eigen::VectorXcd z(n);
      for (int i = 0; i < n; ++i) z[i] = g.point(2, 2);
      CHECK(norm_sq(c, {z}) > 0.0);

      const Eigen::VectorXd p = g.real_vector(n);
      Christoffel gamma;
      for (int k = 0; k < n; ++k) gamma.push_back(g.spd(n) - Eigen::MatrixXd::Identity(n, n));
      const Eigen::VectorXd q1 = g.real_vector(n), p1 = g.real_vector(n);
      const Eigen::VectorXd q2 = g.real_vector(n), p2 = g.real_vector(n);
      const double a = g.normal(), b = g.normal();
      const Eigen::VectorXcd lhs = complexify(c, a * q1 + b * q2, a * p1 + b * p2, p, gamma).z;
      const Eigen::VectorXcd rhs = a * complexify(c, q1, p1, p, gamma).z + b * complexify(c, q2, p2, p, gamma).z;
      CHECK((lhs - rhs).norm() < 1e-11 * (1 + lhs.norm()));
    }
  }

  TEST_CASE("property: sigma = I, Gamma = 0 gives qdot + i pdot exactly") {
    gen::Gen g(3);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = g.integer(1, 4);
      const FlatChart c(Eigen::MatrixXd::Identity(n, n), std::vector<Period>(static_cast<std::size_t>(n)));
      const Eigen::VectorXd q = g.real_vector(n), p = g.real_vector(n);
      const Eigen::VectorXcd z = complexify(c, q, p, g.real_vector(n)).z;
      for (int i = 0; i < n; ++i) CHECK(z[i] == cplx(q[i], p[i]));
    }
  }

  TEST_CASE("chart JSON round trip") {
    Eigen::MatrixXd s(2, 2);
    s << 2, 0.5, 0.5, 3;
    const FlatChart c = make_chart(2, s, {2 * kPi, Period{}});
    const auto j = chart_to_json(c);
    CHECK(j["periods"][1].is_null());
    CHECK(chart_from_json(j) == c);
    CHECK_THROWS_AS(chart_from_json(nlohmann::json{{"n", 2}, {"sigma", {1, 0, 0}}, {"periods", {nullptr, nullptr}}}),
                    ValidationError);
  }
}
