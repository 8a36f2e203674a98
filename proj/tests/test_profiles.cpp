#include "catch_amalgamated.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "halfspace/profiles.hpp"
#include "halfspace/test_functions.hpp"

using namespace halfspace;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Fourth-order central difference of the k-th derivative.
complex fd_derivative(const Profile& p, int k, double x, double h) {
  auto f = [&](double v) { return profile_eval(p, k, v); };
  return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}

void check_chain(const Profile& p, double x, int depth, double tol) {
  for (int k = 0; k < depth; ++k) {
    const complex want = fd_derivative(p, k, x, 1e-3 * x);
    const complex got = profile_eval(p, k + 1, x);
    CHECK(std::abs(got - want) <= tol * std::max(1.0, std::abs(want)));
  }
}

}  // namespace

TEST_CASE("power profile derivatives", "[profiles]") {
  for (int n = 0; n <= 4; ++n) check_chain(Profile::power(n), 1.7, 4, 1e-8);
  CHECK_THAT(profile_eval(Profile::power(1), 0, 4.0).real(), WithinRel(0.25, 1e-15));
  CHECK_THROWS_AS(Profile::power(-1), DomainError);
  CHECK_THROWS_AS(profile_eval(Profile::power(1), 0, 0.0), DomainError);
}

TEST_CASE("bessel-K profile derivatives", "[profiles]") {
  check_chain(Profile::bessel_k(Rational(1, 2), 1.0), 0.9, 3, 1e-8);
  check_chain(Profile::bessel_k(Rational(1), complex(2.0, 1.0)), 1.3, 3, 1e-8);
  check_chain(Profile::bessel_k(Rational(3, 2), complex(0.5, -0.5)), 2.1, 3, 1e-8);
  CHECK_THROWS_AS(Profile::bessel_k(Rational(1), complex(0.0, 1.0)), DomainError);
}

TEST_CASE("truncated power derivatives and delta layers", "[profiles]") {
  check_chain(Profile::trunc_power(Rational(5, 2)), 0.6, 4, 1e-7);
  CHECK(profile_eval(Profile::trunc_power(Rational(1, 2)), 0, -0.3) == complex(0.0));
  const auto d = profile_deriv_rule(Profile::trunc_power(Rational(2)), 3);
  REQUIRE(d.delta_order);
  CHECK(*d.delta_order == 0);
  CHECK(d.coeff == complex(2.0));
  const auto d2 = profile_deriv_rule(Profile::trunc_power(Rational(1)), 4);
  REQUIRE(d2.delta_order);
  CHECK(*d2.delta_order == 2);
  try {
    profile_eval(Profile::trunc_power(Rational(0)), 1, 0.5);
    FAIL("expected a delta layer");
  } catch (const EvaluationError& e) {
    CHECK(e.kind() == EvalErrorKind::DeltaLayerPresent);
  }
  try {
    profile_eval(Profile::trunc_power(Rational(-1, 2)), 0, 0.0);
    FAIL("expected an on-cone singularity");
  } catch (const EvaluationError& e) {
    CHECK(e.kind() == EvalErrorKind::OnConeSingularity);
  }
}

TEST_CASE("cone Bessel profile derivatives", "[profiles]") {
  check_chain(Profile::bessel_j_cone(Rational(3, 2), 1.0), 0.8, 3, 1e-7);
  check_chain(Profile::bessel_j_cone(Rational(1, 2), 2.5), 1.9, 3, 1e-7);
  CHECK(profile_eval(Profile::bessel_j_cone(Rational(1, 2), 1.0), 0, -1.0) == complex(0.0));
  CHECK_THROWS_AS(Profile::bessel_j_cone(Rational(1, 2), 0.0), DomainError);
  CHECK_THROWS_AS(profile_eval(Profile::bessel_j_cone(Rational(-1, 2), 1.0), 0, 0.0), EvaluationError);
}

TEST_CASE("unit-mass bump", "[test-functions]") {
  boost::math::quadrature::tanh_sinh<double> ts;
  const auto f = normalized_bump(0.3, 0.2);
  const double mass = ts.integrate([&](double t) { return f(t); }, f.lo, f.hi);
  CHECK_THAT(mass, WithinAbs(1.0, 1e-12));
  const auto b = bump(2.0, 1.0);
  CHECK_THAT(b(2.0), WithinRel(1.0, 1e-15));
  CHECK(b(3.0) == 0.0);
  CHECK(b(0.5) == 0.0);
}

TEST_CASE("test function jets match differences", "[test-functions]") {
  const auto b = bump(1.0, 0.5);
  const auto g = gaussian(2.0, 0.3, 1.5);
  const auto st = reversed_step(2.0, 0.4, 0.1);
  for (const auto* f : {&b, &g, &st}) {
    const double t = f == &st ? 1.8 : 1.15;
    const Jet j = f->jet(t, 3);
    const double h = 1e-4;
    const double d1 = ((*f)(t + h) - (*f)(t - h)) / (2 * h);
    const double d2 = ((*f)(t + h) - 2 * (*f)(t) + (*f)(t - h)) / (h * h);
    CHECK_THAT(j.derivative(1), WithinAbs(d1, 1e-6 * std::max(1.0, std::abs(d1))));
    CHECK_THAT(j.derivative(2), WithinAbs(d2, 1e-4 * std::max(1.0, std::abs(d2))));
  }
  CHECK(st(1.0) == 1.0);
  CHECK(st(2.0) == 0.0);
}

TEST_CASE("jet arithmetic", "[jet]") {
  const Jet t = Jet::variable(5, 0.7);
  const Jet e = exp(t * 2.0);
  for (std::size_t k = 0; k <= 5; ++k)
    CHECK_THAT(e.derivative(k), WithinRel(std::pow(2.0, static_cast<double>(k)) * std::exp(1.4), 1e-13));
  const Jet q = pow(t, 3);
  CHECK_THAT(q.derivative(1), WithinRel(3 * 0.49, 1e-14));
  CHECK_THAT(q.derivative(3), WithinRel(6.0, 1e-14));
  CHECK(std::abs(q.derivative(4)) < 1e-12);
  const Jet r = Jet(5, 1.0) / t;
  CHECK_THAT(r.derivative(2), WithinRel(2.0 / std::pow(0.7, 3), 1e-13));
  const Jet prod = times_power(e, 0.7, 2);
  CHECK_THAT(prod.derivative(1), WithinRel(std::exp(1.4) * (2 * 0.7 + 2 * 0.49), 1e-13));
}
