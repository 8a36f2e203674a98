#pragma once

// Special functions used by the kernel formulas: Gamma at half-integers,
// modified Bessel K for complex argument, half-integer Bessel J, sphere areas.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace halfspace {

using complex = std::complex<double>;
using Rational = boost::rational<long long>;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

inline bool is_integer(const Rational& q) { return q.denominator() == 1; }

inline std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

/// An order lambda = twice_order / 2; integers and half-integers are exact.
struct Order {
  int twice_order = 0;

  static constexpr Order integer(int k) { return Order{2 * k}; }
  static constexpr Order half(int k) { return Order{k}; }
  static Order from_rational(const Rational& q) {
    if (q.denominator() != 1 && q.denominator() != 2)
      throw DomainError("order " + to_string(q) + " is not an integer or half-integer");
    return Order{static_cast<int>(q.numerator() * (2 / q.denominator()))};
  }

  constexpr double value() const { return 0.5 * twice_order; }
  constexpr bool is_half_integer() const { return (twice_order % 2) != 0; }
  constexpr Order abs() const { return Order{twice_order < 0 ? -twice_order : twice_order}; }
  friend constexpr bool operator==(Order, Order) = default;
};

namespace detail {

// Gamma(k/2) for any k such that k/2 is not a non-positive integer.
inline double gamma_twice(int k) {
  if (k <= 0 && k % 2 == 0)
    throw DomainError("Gamma has a pole at " + std::to_string(k / 2));
  if (k > 0) {
    double g = (k % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
    for (int q2 = (k % 2 == 0) ? 2 : 1; q2 < k; q2 += 2) g *= 0.5 * q2;
    return g;
  }
  // Gamma(q) = Gamma(q+1) / q for negative half-integers.
  double g = std::sqrt(std::numbers::pi);
  for (int q2 = -1; q2 >= k; q2 -= 2) g /= 0.5 * q2;
  return g;
}

}  // namespace detail

/// Gamma(q) for a positive integer or half-integer q.
inline double gamma_half(Order q) {
  if (q.twice_order <= 0) throw DomainError("gamma_half requires a positive argument");
  return detail::gamma_twice(q.twice_order);
}

inline double gamma_half(double q) {
  const double twice = 2.0 * q;
  if (!(q > 0.0) || twice != std::round(twice) || twice > 340.0)
    throw DomainError("gamma_half requires a positive half-integer argument");
  return gamma_half(Order{static_cast<int>(twice)});
}

/// Surface measure of the unit sphere in R^d.
inline double unit_sphere_area(int d) {
  if (d < 1) throw DomainError("unit_sphere_area requires d >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / gamma_half(Order{d});
}

namespace detail {

// K_{k+1/2}(z) from the terminating expansion
// sqrt(pi/(2z)) e^{-z} sum_{j<=k} (k+j)! / (j! (k-j)!) (2z)^{-j}.
inline complex bessel_k_half_closed(int k, complex z) {
  complex sum = 0.0;
  complex term = 1.0;
  for (int j = 0; j <= k; ++j) {
    sum += term;
    // ratio of consecutive coefficients: (k+j+1)(k-j) / (j+1)
    term *= static_cast<double>(k + j + 1) * static_cast<double>(k - j) /
            static_cast<double>(j + 1) / (2.0 * z);
  }
  return std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z) * sum;
}

// Trapezoid sums of K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt for a
// list of orders. The integrand is analytic in the strip |Im t| < pi/2 - |arg z|
// and decays double exponentially, so the step is halved until successive
// sums agree.
inline std::vector<complex> bessel_k_cosh_trapezoid(const std::vector<double>& orders,
                                                    complex z) {
  const double re = z.real();
  const double strip = 0.5 * std::numbers::pi - std::abs(std::arg(z));
  if (strip <= 1e-3) throw DomainError("bessel_k: argument too close to the imaginary axis");
  const double nu_max = [&] {
    double v = 0.0;
    for (double o : orders) v = std::max(v, std::abs(o));
    return v;
  }();

  auto sweep = [&](double h) {
    std::vector<complex> acc(orders.size(), 0.0);
    for (std::size_t i = 0; i < orders.size(); ++i) acc[i] = 0.5 * std::exp(-z);
    for (int k = 1;; ++k) {
      const double t = k * h;
      const double ch = std::cosh(t);
      const double log_mag = -re * ch + nu_max * t;
      if (t > 1.0 && log_mag < -745.0 + 0.0) break;
      const complex e = std::exp(-z * ch);
      double biggest = 0.0;
      for (std::size_t i = 0; i < orders.size(); ++i) {
        const complex term = e * std::cosh(orders[i] * t);
        acc[i] += term;
        biggest = std::max(biggest, std::abs(term) / std::max(std::abs(acc[i]), 1e-300));
      }
      if (re * ch > nu_max * t + 40.0 && biggest < 1e-18) break;
      if (k > 2000000) throw DomainError("bessel_k: trapezoid sum did not terminate");
    }
    for (auto& a : acc) a *= h;
    return acc;
  };

  double h = std::min(0.5, 2.0 * std::numbers::pi * strip / 36.0);
  std::vector<complex> prev = sweep(h);
  for (int level = 0; level < 8; ++level) {
    h *= 0.5;
    std::vector<complex> next = sweep(h);
    double diff = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i)
      diff = std::max(diff, std::abs(next[i] - prev[i]) / std::max(std::abs(next[i]), 1e-300));
    prev = std::move(next);
    if (diff < 1e-14) break;
  }
  return prev;
}

}  // namespace detail

/// K_nu(z) via the cosh-integral representation (any real order, Re z > 0).
inline complex bessel_k_integral(double order, complex z) {
  if (!(z.real() > 0.0)) throw DomainError("bessel_k requires Re z > 0");
  return detail::bessel_k_cosh_trapezoid({order}, z)[0];
}

/// K_lambda(z) for the orders lambda, lambda+1, ..., lambda+count-1.
/// Half-integer orders use the closed elementary form; integer orders start
/// from the integral representation for K_0, K_1 and recur upward.
inline std::vector<complex> bessel_k_range(Order lowest, int count, complex z) {
  if (!(z.real() > 0.0)) throw DomainError("bessel_k requires Re z > 0");
  if (count <= 0) return {};
  lowest = lowest.abs();
  std::vector<complex> out(static_cast<std::size_t>(count), 0.0);
  if (z.real() > 700.0) return out;

  if (lowest.is_half_integer()) {
    const int k0 = (lowest.twice_order - 1) / 2;
    for (int i = 0; i < count; ++i) out[i] = detail::bessel_k_half_closed(k0 + i, z);
    return out;
  }
  const int start = lowest.twice_order / 2;
  const int top = start + count - 1;
  auto base = detail::bessel_k_cosh_trapezoid({0.0, 1.0}, z);
  complex km1 = base[0];
  complex k = base[1];
  if (start == 0) out[0] = km1;
  if (start <= 1 && top >= 1) out[1 - start] = k;
  for (int nu = 1; nu < top; ++nu) {
    const complex next = km1 + (2.0 * nu / z) * k;
    km1 = k;
    k = next;
    if (nu + 1 >= start) out[nu + 1 - start] = k;
  }
  return out;
}

/// Modified Bessel function of the second kind for integer or half-integer order.
inline complex bessel_k(Order order, complex z) { return bessel_k_range(order, 1, z)[0]; }

/// J_lambda(z) for half-integer lambda (positive or negative) and z >= 0.
inline double bessel_j_half(Order order, double z) {
  if (!order.is_half_integer()) throw DomainError("bessel_j_half requires a half-integer order");
  if (z < 0.0 || std::isnan(z)) throw DomainError("bessel_j_half requires z >= 0");
  const double lambda = order.value();
  if (z == 0.0) {
    if (lambda > 0.0) return 0.0;
    throw DomainError("bessel_j_half: negative order is singular at z = 0");
  }
  // Ascending series, well conditioned for small z and for z below the order.
  if (z < std::max(2.0, lambda)) {
    const double half_z = 0.5 * z;
    double term = std::pow(half_z, lambda) / detail::gamma_twice(order.twice_order + 2);
    double sum = term;
    for (int k = 1; k < 500; ++k) {
      term *= -half_z * half_z / (k * (k + lambda));
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  const double norm = std::sqrt(2.0 / (std::numbers::pi * z));
  double j_plus = norm * std::sin(z);   // J_{1/2}
  double j_minus = norm * std::cos(z);  // J_{-1/2}
  if (order.twice_order == 1) return j_plus;
  if (order.twice_order == -1) return j_minus;
  if (lambda > 0.0) {
    // J_{mu+1} = (2 mu / z) J_mu - J_{mu-1}
    double lo = j_minus, hi = j_plus;
    for (double mu = 0.5; mu < lambda - 0.25; mu += 1.0) {
      const double next = (2.0 * mu / z) * hi - lo;
      lo = hi;
      hi = next;
    }
    return hi;
  }
  // J_{mu-1} = (2 mu / z) J_mu - J_{mu+1}
  double hi = j_plus, lo = j_minus;
  for (double mu = -0.5; mu > lambda + 0.25; mu -= 1.0) {
    const double next = (2.0 * mu / z) * lo - hi;
    hi = lo;
    lo = next;
  }
  return lo;
}

}  // namespace halfspace
