#include "catch_amalgamated.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "halfspace/specfun.hpp"

using namespace halfspace;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt, real and imaginary parts separately.
complex k_oracle(double nu, complex z) {
  auto part = [&](bool imag) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) {
          const complex v = std::exp(-z * std::cosh(t)) * std::cosh(nu * t);
          return imag ? v.imag() : v.real();
        },
        0.0, 40.0, 25, 1e-14);
  };
  return {part(false), part(true)};
}

}  // namespace

TEST_CASE("integer-order K against boost", "[specfun]") {
  for (int nu = 0; nu <= 6; ++nu)
    for (double x : {0.05, 0.7, 1.0, 4.0, 25.0}) {
      const double want = boost::math::cyl_bessel_k(nu, x);
      CHECK_THAT(bessel_k(Order::integer(nu), x).real(), WithinRel(want, 1e-12));
    }
}

TEST_CASE("half-integer K against boost", "[specfun]") {
  for (int k = -5; k <= 9; k += 2)
    for (double x : {0.1, 1.3, 9.0, 60.0}) {
      const double want = boost::math::cyl_bessel_k(0.5 * k, x);
      CHECK_THAT(bessel_k(Order::half(k), x).real(), WithinRel(want, 1e-13));
    }
}

TEST_CASE("K_0(1) reference value", "[specfun]") {
  CHECK_THAT(bessel_k(Order::integer(0), 1.0).real(), WithinAbs(0.4210244382, 1e-10));
}

TEST_CASE("complex-argument K against the cosh integral", "[specfun]") {
  for (complex z : {complex(2.0, 1.0), complex(0.5, 3.0), complex(1.0, -0.4)})
    for (int nu : {0, 1, 2}) {
      const complex got = bessel_k(Order::integer(nu), z);
      const complex want = k_oracle(nu, z);
      CHECK(std::abs(got - want) <= 1e-11 * std::abs(want));
    }
  const complex z(1.5, 2.0);
  const complex half = std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z);
  CHECK(std::abs(bessel_k(Order::half(1), z) - half) < 1e-14);
  CHECK(std::abs(bessel_k(Order::half(3), z) - half * (1.0 + 1.0 / z)) < 1e-14);
}

TEST_CASE("K recurrence and range consistency", "[specfun]") {
  const complex z(0.8, 0.6);
  auto range = bessel_k_range(Order::integer(0), 6, z);
  for (int nu = 1; nu < 5; ++nu) {
    const complex rhs = range[nu - 1] + (2.0 * nu / z) * range[nu];
    CHECK(std::abs(range[nu + 1] - rhs) < 1e-12 * std::abs(rhs));
    CHECK(std::abs(range[nu] - bessel_k(Order::integer(nu), z)) < 1e-14 * std::abs(range[nu]));
  }
  CHECK(bessel_k(Order::integer(-2), z) == bessel_k(Order::integer(2), z));
  CHECK(std::abs(bessel_k_integral(2.0, z) - range[2]) < 1e-12 * std::abs(range[2]));
}

TEST_CASE("K domain", "[specfun]") {
  CHECK_THROWS_AS(bessel_k(Order::integer(0), complex(-1.0, 0.0)), DomainError);
  CHECK(bessel_k(Order::integer(1), 800.0) == complex(0.0));
  CHECK_THROWS_AS(Order::from_rational(Rational(1, 3)), DomainError);
}

TEST_CASE("half-integer J against boost", "[specfun]") {
  for (int k = -7; k <= 9; k += 2)
    for (double x : {0.05, 0.9, 2.5, 11.0, 40.0}) {
      const double want = boost::math::cyl_bessel_j(0.5 * k, x);
      CHECK_THAT(bessel_j_half(Order::half(k), x), WithinAbs(want, 1e-13 * std::max(1.0, std::abs(want))));
    }
  CHECK(bessel_j_half(Order::half(1), 0.0) == 0.0);
  CHECK_THROWS_AS(bessel_j_half(Order::half(-1), 0.0), DomainError);
  CHECK_THROWS_AS(bessel_j_half(Order::integer(1), 1.0), DomainError);
}

TEST_CASE("gamma at half integers and sphere areas", "[specfun]") {
  for (int k = 1; k <= 15; ++k) CHECK_THAT(gamma_half(Order{k}), WithinRel(std::tgamma(0.5 * k), 1e-14));
  CHECK_THROWS_AS(gamma_half(Order{-1}), DomainError);
  CHECK_THAT(gamma_half(2.5), WithinRel(std::tgamma(2.5), 1e-14));
  CHECK_THAT(unit_sphere_area(1), WithinRel(2.0, 1e-15));
  CHECK_THAT(unit_sphere_area(2), WithinRel(2.0 * std::numbers::pi, 1e-15));
  CHECK_THAT(unit_sphere_area(3), WithinRel(4.0 * std::numbers::pi, 1e-15));
  CHECK_THAT(unit_sphere_area(4), WithinRel(2.0 * std::numbers::pi * std::numbers::pi, 1e-14));
}
