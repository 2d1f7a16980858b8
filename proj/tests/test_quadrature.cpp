#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "holo/cylinder.hpp"
#include "holo/errors.hpp"
#include "holo/quadrature.hpp"

using namespace holo;

namespace {
constexpr double kPi = std::numbers::pi;

// Moments of e^{-x^2}: int x^{2m} = Gamma(m + 1/2).
double hermite_moment(int k) { return k % 2 ? 0.0 : std::tgamma(0.5 * k + 0.5); }

FlatChart plane() { return make_chart(1, Eigen::MatrixXd::Identity(1, 1), {Period{}}); }
}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("hermite_rule small orders") {
    const HermiteRule r1 = hermite_rule(1);
    CHECK(r1.nodes[0] == 0.0L);
    CHECK(static_cast<double>(r1.weights[0]) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-15));

    // first four moment equations of e^{-x^2}
    const HermiteRule r2 = hermite_rule(2);
    CHECK(static_cast<double>(r2.nodes[0]) == doctest::Approx(-1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(static_cast<double>(r2.nodes[1]) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(static_cast<double>(r2.weights[0]) == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-15));
    CHECK(static_cast<double>(r2.weights[1]) == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-15));

    CHECK_THROWS_AS(hermite_rule(0), ValidationError);
  }

  TEST_CASE("hermite_rule polynomial exactness") {
    for (int order : {2, 5, 16, 64, 128}) {
      const HermiteRule r = hermite_rule(order);
      for (int k = 0; k <= std::min(2 * order - 1, 40); ++k) {
        long double s = 0, scale = 0;
        for (int i = 0; i < order; ++i) {
          const long double t = r.weights[i] * std::pow(r.nodes[i], static_cast<long double>(k));
          s += t;
          scale += std::abs(t);
        }
        // odd moments cancel terms of size `scale`
        CHECK(std::abs(static_cast<double>(s) - hermite_moment(k)) <= 1e-13 * std::max(1.0, static_cast<double>(scale)));
      }
    }
  }

  TEST_CASE("hermite_rule structure") {
    for (int order : {3, 48, 96, 200}) {
      const HermiteRule r = hermite_rule(order);
      long double sum = 0;
      for (int i = 0; i < order; ++i) {
        CHECK(r.weights[i] > 0.0L);
        if (i) CHECK(r.nodes[i] > r.nodes[i - 1]);
        CHECK(r.nodes[i] == -r.nodes[order - 1 - i]);
        sum += r.weights[i];
      }
      CHECK(static_cast<double>(sum) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
    }
  }

  TEST_CASE("QuadratureRule normalization and indexing") {
    const QuadratureRule rule(7, 3);
    CHECK(rule.size() == 343);
    std::vector<int> idx;
    rule.unflatten(7 * 7 * 2 + 7 * 3 + 5, idx);
    CHECK(idx == std::vector<int>{2, 3, 5});
    long double total = 0;
    for (std::size_t f = 0; f < rule.size(); ++f) {
      rule.unflatten(f, idx);
      long double w = rule.normalization_ext();
      for (int i : idx) w *= rule.weights_ext()[i];
      total += w;
    }
    CHECK(std::abs(static_cast<double>(total) - 1.0) < 1e-12);
    CHECK_THROWS_AS(QuadratureRule(0, 2), ValidationError);
    CHECK_THROWS_AS(QuadratureRule(4, 0), ValidationError);
  }

  TEST_CASE("integrate_tangent examples") {
    const QuadratureRule rule(64, 2);
    const cplx one = integrate_tangent(plane(), rule, [](const Eigen::VectorXcd&) { return cplx(1.0); });
    CHECK(std::abs(one - 1.0) < 1e-14);

    // <phi_0, phi_1> = e^0 = 1 on the cylinder
    const cplx g01 = integrate_tangent(cylinder_chart(), rule,
                                       [](const Eigen::VectorXcd& z) { return std::exp(cplx(0, 1) * z[0]); });
    CHECK(std::abs(g01 - 1.0) < 1e-13);

    // second moment of the normalized complex Gaussian: int (u^2+v^2) e^{-u^2-v^2}/pi = 1
    const cplx m2 = integrate_tangent(plane(), rule, [](const Eigen::VectorXcd& z) { return std::norm(z[0]) + 0.0 * z[0]; });
    CHECK(std::abs(m2 - 1.0) < 1e-14);
  }

  TEST_CASE("integrate_tangent with a non-identity metric") {
    // E|z|^2_sigma = n for the normalized measure; E (z^1 conj z^1) = (sigma^{-1})_{11}
    Eigen::MatrixXd s(2, 2);
    s << 2, 0.5, 0.5, 1;
    const FlatChart c = make_chart(2, s, {Period{}, Period{}});
    const QuadratureRule rule(6, 4);
    const cplx m = integrate_tangent(c, rule, [](const Eigen::VectorXcd& z) { return std::norm(z[0]) + 0.0 * z[0]; });
    CHECK(m.real() == doctest::Approx(c.metric_inverse()(0, 0)).epsilon(1e-13));
    const cplx q = integrate_tangent(c, rule, [&](const Eigen::VectorXcd& z) {
      return cplx(norm_sq(c, {z}), 0.0);
    });
    CHECK(q.real() == doctest::Approx(2.0).epsilon(1e-13));
  }

  TEST_CASE("integrate_tangent reports the failing node") {
    const QuadratureRule rule(4, 2);
    try {
      integrate_tangent(plane(), rule, [](const Eigen::VectorXcd& z) {
        return z[0].real() > 1.0 ? cplx(NAN, 0) : cplx(1.0);
      });
      FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("node #") != std::string::npos);
    }
    CHECK_THROWS_AS(integrate_tangent(cylinder_chart(), QuadratureRule(4, 3),
                                      [](const Eigen::VectorXcd&) { return cplx(1.0); }),
                    ValidationError);
  }

  TEST_CASE("long double path agrees with double and is more accurate") {
    const QuadratureRule rule(64, 2);
    const FlatChart c = cylinder_chart();
    // <phi~_4, phi~_-4> = e^{-32}: cancellation-heavy entry
    auto fd = [](const auto& z) {
      using C = typename std::decay_t<decltype(z)>::Scalar;
      using R = typename C::value_type;
      const C i(0, 1);
      return std::conj(std::exp(i * R(4) * z[0] - R(8))) * std::exp(-i * R(4) * z[0] - R(8));
    };
    const double exact = std::exp(-32.0);
    const cplx_ext ext = integrate_tangent<long double>(c, rule, fd);
    CHECK(std::abs(static_cast<double>(ext.real()) - exact) / exact < 1e-10);
  }

  TEST_CASE("property: spectral convergence once order >= 48") {
    const FlatChart c = cylinder_chart();
    for (int p = -4; p <= 4; ++p)
      for (int q = -4; q <= 4; ++q) {
        auto f = [p, q](const VectorXcld& z) {
          const cplx_ext i(0, 1);
          return std::conj(std::exp(i * (long double)p * z[0] - 0.5L * p * p)) *
                 std::exp(i * (long double)q * z[0] - 0.5L * q * q);
        };
        const auto a = integrate_tangent<long double>(c, QuadratureRule(48, 2), f);
        const auto b = integrate_tangent<long double>(c, QuadratureRule(96, 2), f);
        CHECK(static_cast<double>(std::abs(a - b)) < 1e-12);
      }
  }

  TEST_CASE("property: linearity and conjugation") {
    gen::Gen g(5);
    const QuadratureRule rule(24, 2);
    for (int trial = 0; trial < 20; ++trial) {
      const cplx a = g.point(2, 2), b = g.point(2, 2), s = g.point(1, 1), t = g.point(1, 1);
      auto f = [&](const Eigen::VectorXcd& z) { return std::exp(s * z[0]); };
      auto h = [&](const Eigen::VectorXcd& z) { return z[0] * std::conj(z[0]) * std::exp(t * std::conj(z[0])); };
      const cplx lhs = integrate_tangent(plane(), rule, [&](const Eigen::VectorXcd& z) { return a * f(z) + b * h(z); });
      const cplx rhs = a * integrate_tangent(plane(), rule, f) + b * integrate_tangent(plane(), rule, h);
      CHECK(std::abs(lhs - rhs) < 1e-12 * (1 + std::abs(lhs)));
      const cplx cf = integrate_tangent(plane(), rule, [&](const Eigen::VectorXcd& z) { return std::conj(f(z)); });
      CHECK(std::abs(cf - std::conj(integrate_tangent(plane(), rule, f))) < 1e-13 * (1 + std::abs(cf)));
    }
  }

  TEST_CASE("tangent_nodes matches the lazy sum") {
    const QuadratureRule rule(12, 2);
    const TangentNodes nodes = tangent_nodes(cylinder_chart(), rule);
    CHECK(nodes.size() == rule.size());
    CHECK(std::abs(nodes.weights.sum() - 1.0) < 1e-14);
    cplx s = 0;
    for (Eigen::Index j = 0; j < nodes.weights.size(); ++j) s += nodes.weights[j] * std::exp(nodes.points(0, j));
    const cplx lazy = integrate_tangent(cylinder_chart(), rule, [](const Eigen::VectorXcd& z) { return std::exp(z[0]); },
                                        Exec::serial);
    CHECK(std::abs(s - lazy) < 1e-14);
  }
}
