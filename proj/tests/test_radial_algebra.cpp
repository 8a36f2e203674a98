#include "catch_amalgamated.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "halfspace/radial_algebra.hpp"

using namespace halfspace;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

bool close(complex a, complex b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

RadialExpr sample_elliptic() {
  return RadialExpr::monomial(1.0, 1, 0, Rational(-3, 2)) +
         RadialExpr::monomial(complex(0.5, -0.25), 2, 0, Rational(1, 2), Factor::bessel_k(Rational(3, 2), {1.3, 0.4})) +
         RadialExpr::monomial(-2.0, 0, 0, Rational(0), Factor::bessel_k(Rational(1), 0.7));
}

RadialExpr sample_cone() {
  return RadialExpr::monomial(1.0, 1, 0, Rational(-1, 2), Factor::cone_power(Rational(5, 2))) +
         RadialExpr::monomial(0.3, 0, 1, Rational(0), Factor::cone_bessel_j(Rational(3, 2), 0.8)) +
         RadialExpr::monomial(-1.5, 2, 2, Rational(-1), Factor::cone_power(Rational(7, 2)));
}

}  // namespace

TEST_CASE("canonical form merges and cancels", "[algebra]") {
  const RadialExpr a = sample_elliptic();
  const RadialExpr b = sample_cone();
  CHECK(a + b == b + a);
  CHECK((a - a).is_zero());
  CHECK(a + a == complex(2.0) * a);
  CHECK((a + b).size() == a.size() + b.size());
  CHECK(RadialExpr::monomial(0.0, 1, 0, Rational(1)).is_zero());
}

TEST_CASE("evaluation is linear", "[algebra]") {
  const RadialExpr a = sample_elliptic();
  const RadialExpr c = sample_cone();
  const Point p{0.7, 1.1, 2.4};
  CHECK(close(evaluate(a + complex(2.0, 1.0) * c, p), evaluate(a, p) + complex(2.0, 1.0) * evaluate(c, p), 1e-14));
  const complex direct = std::pow(0.7 * 0.7 + 1.1 * 1.1, -1.5) * 1.1;
  CHECK(close(evaluate(RadialExpr::monomial(1.0, 1, 0, Rational(-3, 2)), p), direct, 1e-15));
}

TEST_CASE("d_y matches differences", "[algebra]") {
  const double h = 1e-4;
  for (const RadialExpr& e : {sample_elliptic(), sample_cone()}) {
    const RadialExpr d = d_y(e);
    for (auto [r, y] : {std::pair{0.4, 0.9}, std::pair{1.5, 0.6}}) {
      const double t = 2.5;
      const complex fd = (evaluate(e, {r, y + h, t}) - evaluate(e, {r, y - h, t})) / (2 * h);
      CHECK(close(evaluate(d, {r, y, t}), fd, 1e-7));
      CHECK(close(evaluate(inv_y_d_y(e), {r, y, t}), fd / y, 1e-7));
    }
  }
}

TEST_CASE("d_t matches differences", "[algebra]") {
  const RadialExpr e = sample_cone();
  const double h = 1e-4;
  const Point p{0.5, 0.8, 1.9};
  const complex fd = (evaluate(e, {p.r, p.y, *p.t + h}) - evaluate(e, {p.r, p.y, *p.t - h})) / (2 * h);
  CHECK(close(evaluate(d_t(e), p), fd, 1e-7));
  CHECK(d_t(sample_elliptic()).is_zero());
}

TEST_CASE("radial Laplacian matches differences", "[algebra]") {
  const double h = 1e-3;
  for (int n = 1; n <= 3; ++n)
    for (const RadialExpr& e : {sample_elliptic(), sample_cone()}) {
      const double r = 0.9, y = 0.7, t = 2.6;
      auto f = [&](double rr) { return evaluate(e, {rr, y, t}); };
      const complex f1 = (f(r - 2 * h) - 8.0 * f(r - h) + 8.0 * f(r + h) - f(r + 2 * h)) / (12 * h);
      const complex f2 = (-f(r - 2 * h) + 16.0 * f(r - h) - 30.0 * f(r) + 16.0 * f(r + h) - f(r + 2 * h)) / (12 * h * h);
      const complex want = f2 + (n - 1.0) / r * f1;
      CHECK(close(evaluate(laplacian_x(e, n), {r, y, t}), want, 1e-7));
    }
}

TEST_CASE("operators commute", "[algebra]") {
  const RadialExpr e = sample_cone();
  const Point p{0.3, 0.9, 2.2};
  CHECK(close(evaluate(d_y(d_t(e)), p), evaluate(d_t(d_y(e)), p), 1e-13));
  CHECK(close(evaluate(d_y(laplacian_x(e, 2)), p), evaluate(laplacian_x(d_y(e), 2), p), 1e-12));
  CHECK(d_y(d_t(e)) == d_t(d_y(e)));
}

TEST_CASE("harmonic profile cancels symbolically", "[algebra]") {
  for (int n = 1; n <= 4; ++n) {
    const RadialExpr e = RadialExpr::monomial(1.0, 1, 0, Rational(-(n + 1), 2));
    CHECK(apply(Operator::helmholtz(n, 0.0), e).is_zero());
    CHECK(op_power(Operator::lap_x(n), 0, e) == e);
  }
}

TEST_CASE("evaluation errors", "[algebra]") {
  const RadialExpr delta = RadialExpr::monomial(1.0, 0, 0, Rational(0), Factor::delta(1));
  CHECK_THROWS_AS(evaluate(delta, {0.0, 1.0, 2.0}), EvaluationError);
  try {
    evaluate(sample_cone(), {0.1, 1.0, std::nullopt});
    FAIL("expected MissingTime");
  } catch (const EvaluationError& e) {
    CHECK(e.kind() == EvalErrorKind::MissingTime);
  }
  CHECK_THROWS_AS(evaluate(sample_elliptic(), {0.1, 0.0, std::nullopt}), DomainError);
  const RadialExpr sing = RadialExpr::monomial(1.0, 0, 0, Rational(0), Factor::cone_power(Rational(-3, 2)));
  CHECK_THROWS_AS(evaluate(sing, {0.0, 1.0, 1.0}), EvaluationError);
  CHECK(evaluate(sing, {0.6, 0.8, 0.9}) == complex(0.0));
}

TEST_CASE("JSON round trip", "[algebra]") {
  const RadialExpr e = sample_elliptic() + sample_cone() +
                       RadialExpr::monomial(complex(0.0, 2.0), 3, 1, Rational(-5, 2), Factor::delta(2));
  const std::string text = to_json(e).dump();
  CHECK(expr_from_json(nlohmann::json::parse(text)) == e);
  CHECK(parse_rational("-7/2") == Rational(-7, 2));
  CHECK(parse_rational("3") == Rational(3));
}

TEST_CASE("pairing a smooth cone term", "[pairing]") {
  const auto psi = bump(1.5, 0.8);
  const double r = 0.6, y = 0.8, s = 1.0;
  const RadialExpr e = RadialExpr::monomial(1.0, 0, 2, Rational(0), Factor::cone_power(Rational(1, 2)));
  const double want = GK::integrate([&](double t) { return psi(t) * t * t * std::sqrt(t * t - s); }, 1.0, 2.3, 15, 1e-14);
  CHECK_THAT(pair_time(e, psi, r, y).value.real(), WithinRel(want, 1e-10));
}

TEST_CASE("pairing u_+^{-3/2} as a finite part", "[pairing]") {
  const auto psi = bump(1.5, 0.8);
  const double r = 0.6, y = 0.8, s = 1.0;
  // g(u) = psi(t)/(2t) with t = sqrt(s + u); finite part of int u^{-3/2} g(u) du
  // with u = v^2: 2 int (g(v^2) - g(0)) / v^2 dv - 2 g(0) / V.
  auto g = [&](double u) {
    const double t = std::sqrt(s + u);
    return psi(t) / (2.0 * t);
  };
  const double V = std::sqrt(2.3 * 2.3 - s);
  const double body = GK::integrate([&](double v) { return 2.0 * (g(v * v) - g(0.0)) / (v * v); }, 0.0, V, 8, 1e-13);
  const double want = body - 2.0 * g(0.0) / V;
  const RadialExpr e = RadialExpr::monomial(1.0, 0, 0, Rational(0), Factor::cone_power(Rational(-3, 2)));
  CHECK_THAT(pair_time(e, psi, r, y).value.real(), WithinRel(want, 1e-8));
}

TEST_CASE("pairing delta layers", "[pairing]") {
  const auto psi = bump(1.2, 0.6);
  const double r = 0.3, y = 0.9;
  const double t0 = std::hypot(r, y);
  const RadialExpr d0 = RadialExpr::monomial(1.0, 0, 0, Rational(0), Factor::delta(0));
  CHECK_THAT(pair_time(d0, psi, r, y).value.real(), WithinRel(psi(t0) / (2 * t0), 1e-13));
  // <delta'(u), psi> = -(1/2t) d/dt [psi/(2t)] at the cone
  const double h = 1e-3;
  auto q = [&](double t) { return psi(t) / (2 * t); };
  const double dq = (q(t0 - 2 * h) - 8 * q(t0 - h) + 8 * q(t0 + h) - q(t0 + 2 * h)) / (12 * h);
  const double want = -dq / (2 * t0);
  const RadialExpr d1 = RadialExpr::monomial(1.0, 0, 0, Rational(0), Factor::delta(1));
  CHECK_THAT(pair_time(d1, psi, r, y).value.real(), WithinRel(want, 1e-7));
  CHECK_THROWS_AS(pair_time(d0, bump(0.5, 0.5), r, y), DomainError);
}
