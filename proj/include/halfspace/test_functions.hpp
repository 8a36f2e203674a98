#pragma once

// Smooth test functions of time, evaluated as jets so that pairings can move
// derivatives onto them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "jet.hpp"
#include "specfun.hpp"

namespace halfspace {

struct TimeTestFunction {
  std::function<Jet(double t, std::size_t order)> jet;
  double lo = 0.0;  // support lower end
  double hi = 0.0;  // support upper end
  std::vector<double> breakpoints;
  std::string name;

  double operator()(double t) const { return jet(t, 0).value(); }
};

namespace detail {

// exp(-1/x) for x > 0, zero otherwise; C-infinity at 0.
inline Jet flat_exp(const Jet& x) {
  if (x.value() <= 0.0) return Jet(x.order(), 0.0);
  return exp(-(Jet(x.order(), 1.0) / x));
}

// Smooth step: 0 for x <= 0, 1 for x >= 1.
inline Jet smooth_step(const Jet& x) {
  if (x.value() <= 0.0) return Jet(x.order(), 0.0);
  if (x.value() >= 1.0) return Jet(x.order(), 1.0);
  const Jet a = flat_exp(x);
  const Jet b = flat_exp(Jet(x.order(), 1.0) - x);
  return a / (a + b);
}

}  // namespace detail

/// exp(-1/(1-z^2)) with z = (t - center) / halfwidth, scaled so the peak is 1.
inline TimeTestFunction bump(double center, double halfwidth) {
  TimeTestFunction f;
  f.lo = center - halfwidth;
  f.hi = center + halfwidth;
  f.name = "bump";
  f.breakpoints = {center};
  f.jet = [center, halfwidth](double t, std::size_t order) {
    Jet z = (Jet::variable(order, t) - Jet(order, center)) * (1.0 / halfwidth);
    if (std::abs(z.value()) >= 1.0) return Jet(order, 0.0);
    return detail::flat_exp(Jet(order, 1.0) - z * z) * std::exp(1.0);
  };
  return f;
}

/// Unit-mass smooth bump: bump(center, halfwidth) divided by its integral.
inline TimeTestFunction normalized_bump(double center, double halfwidth) {
  // int_{-1}^{1} e^{1 - 1/(1-z^2)} dz
  constexpr double kBumpMass = 0.443993816168079437823 * 2.718281828459045235360;
  TimeTestFunction f = bump(center, halfwidth);
  const double scale = 1.0 / (kBumpMass * halfwidth);
  auto inner = f.jet;
  f.jet = [inner, scale](double t, std::size_t order) { return inner(t, order) * scale; };
  f.name = "normalized_bump";
  return f;
}

/// Gaussian exp(-(t-c)^2/(2 sigma^2)), support truncated at 12 sigma.
inline TimeTestFunction gaussian(double center, double sigma, double amplitude = 1.0) {
  TimeTestFunction f;
  f.lo = center - 12.0 * sigma;
  f.hi = center + 12.0 * sigma;
  f.name = "gaussian";
  f.breakpoints = {center - 2.0 * sigma, center, center + 2.0 * sigma};
  f.jet = [center, sigma, amplitude](double t, std::size_t order) {
    Jet z = (Jet::variable(order, t) - Jet(order, center)) * (1.0 / sigma);
    return exp(z * z * -0.5) * amplitude;
  };
  return f;
}

/// psi(t) = step((t_end - t) / eps): one for t <= t_end - eps, zero for t >= t_end.
/// This is the time reversal of a mollified Heaviside data profile.
inline TimeTestFunction reversed_step(double t_end, double eps, double lo) {
  TimeTestFunction f;
  f.lo = lo;
  f.hi = t_end;
  f.name = "reversed_step";
  f.breakpoints = {t_end - eps};
  f.jet = [t_end, eps](double t, std::size_t order) {
    Jet x = (Jet(order, t_end) - Jet::variable(order, t)) * (1.0 / eps);
    return detail::smooth_step(x);
  };
  return f;
}

/// Multiplies the jet by t^e.
inline Jet times_power(const Jet& j, double t, int e) {
  if (e == 0) return j;
  return j * pow(Jet::variable(j.order(), t), e);
}

}  // namespace halfspace
