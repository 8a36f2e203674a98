#pragma once

// Poisson kernels of the half-space Dirichlet problems, assembled in the
// radial algebra, plus separately coded closed forms for low orders.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "radial_algebra.hpp"
#include "specfun.hpp"

namespace halfspace {

enum class Family { Polyharmonic, Metaharmonic, Wave, KleinGordon };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::Polyharmonic: return "polyharmonic";
    case Family::Metaharmonic: return "metaharmonic";
    case Family::Wave: return "wave";
    case Family::KleinGordon: return "klein-gordon";
  }
  return "?";
}

inline std::optional<Family> family_from_string(const std::string& s) {
  if (s == "polyharmonic") return Family::Polyharmonic;
  if (s == "metaharmonic") return Family::Metaharmonic;
  if (s == "wave") return Family::Wave;
  if (s == "klein-gordon" || s == "kleingordon" || s == "klein_gordon") return Family::KleinGordon;
  return std::nullopt;
}

/// Thrown for malformed kernel specifications and run configurations.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct KernelSpec {
  Family family = Family::Polyharmonic;
  int n = 1;  // space dimension (Klein-Gordon: space dimension is 2n+1)
  int m = 1;
  int j = 0;
  std::optional<complex> param;  // xi (real) or p (Re p > 0)
  double constant_scale = 1.0;   // multiplies the prefactor; 1 except in mutation tests

  bool is_hyperbolic() const { return family == Family::Wave || family == Family::KleinGordon; }
  /// Dimension of x in the Laplacian.
  int space_dim() const { return family == Family::KleinGordon ? 2 * n + 1 : n; }

  /// Spectral parameter p with Re p > 0 (metaharmonic) or xi (Klein-Gordon).
  complex p() const {
    const complex v = param.value_or(0.0);
    if (family == Family::Metaharmonic && v.imag() == 0.0) return std::abs(v.real());
    return v;
  }

  void validate() const {
    if (m < 1) throw ConfigError("m must be >= 1");
    if (j < 0 || j > m - 1) throw ConfigError("j must satisfy 0 <= j <= m-1");
    if (family == Family::KleinGordon ? n < 0 : n < 1) throw ConfigError("n out of range");
    switch (family) {
      case Family::Polyharmonic:
      case Family::Wave: break;
      case Family::Metaharmonic: {
        if (!param) throw ConfigError("metaharmonic kernel requires xi or p");
        const complex v = *param;
        if (v == 0.0) throw ConfigError("xi must be nonzero");
        if (v.imag() != 0.0 && !(v.real() > 0.0)) throw ConfigError("p must satisfy Re p > 0");
        break;
      }
      case Family::KleinGordon: {
        if (!param || param->imag() != 0.0) throw ConfigError("klein-gordon kernel requires real xi");
        if (param->real() == 0.0) throw ConfigError("xi must be nonzero");
        if (param->real() < 0.0) throw ConfigError("xi must be positive");
        break;
      }
    }
  }

  std::string describe() const {
    std::string out = std::string(to_string(family)) + " n=" + std::to_string(n) + " m=" + std::to_string(m) +
                      " j=" + std::to_string(j);
    if (param) {
      out += " param=" + std::to_string(param->real());
      if (param->imag() != 0.0) out += (param->imag() < 0 ? "" : "+") + std::to_string(param->imag()) + "i";
    }
    return out;
  }
};

/// Two equivalent constructions of the metaharmonic kernel: directly on
/// H_{(n+1)/2}, or through (1/y) d/dy applied to H_{(n-1)/2}.
enum class MetaharmonicForm { Direct, Reduced };

namespace detail {

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

inline double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// y^m (-d_y)^{m-1-j} [inner] times c.
inline RadialExpr finish(const KernelSpec& s, const RadialExpr& inner, complex c) {
  const RadialExpr e = op_power(Operator::neg_dy(), s.m - 1 - s.j, inner);
  return (c * s.constant_scale) * e.times_monomial(s.m, 0, 0);
}

}  // namespace detail

inline RadialExpr polyharmonic_kernel(const KernelSpec& s) {
  s.validate();
  if (s.family != Family::Polyharmonic) throw ConfigError("expected a polyharmonic spec");
  const double c = 2.0 / unit_sphere_area(s.n + 1) / (detail::factorial(s.j) * detail::factorial(s.m - 1 - s.j));
  return detail::finish(s, RadialExpr::from_profile(Profile::power(s.n)), c);
}

inline RadialExpr metaharmonic_kernel(const KernelSpec& s, MetaharmonicForm form = MetaharmonicForm::Direct) {
  s.validate();
  if (s.family != Family::Metaharmonic) throw ConfigError("expected a metaharmonic spec");
  const complex p = s.p();
  const int n = s.n;
  const double base = std::pow(2.0, 0.5 * (n - 1)) * std::pow(std::numbers::pi, 0.5 * (n + 1)) *
                      detail::factorial(s.j) * detail::factorial(s.m - 1 - s.j);
  if (form == MetaharmonicForm::Direct) {
    const RadialExpr h = RadialExpr::from_profile(Profile::bessel_k(Rational(n + 1, 2), p));
    return detail::finish(s, h, std::pow(p, 0.5 * (n + 1)) / base);
  }
  const RadialExpr h = RadialExpr::from_profile(Profile::bessel_k(Rational(n - 1, 2), p));
  return detail::finish(s, inv_y_d_y(h), -std::pow(p, 0.5 * (n - 1)) / base);
}

inline RadialExpr wave_kernel(const KernelSpec& s) {
  s.validate();
  if (s.family != Family::Wave) throw ConfigError("expected a wave spec");
  const int n = s.n;
  RadialExpr cone = RadialExpr::from_profile(Profile::trunc_power(Rational(n - 2, 2)));
  cone = op_power(Operator::dt(), n - 1, cone).times_monomial(0, 0, Rational(-(n - 1), 2));
  const double c = -1.0 / (std::pow(2.0, n - 1) * std::pow(std::numbers::pi, 0.5 * n) * gamma_half(Order{n}) *
                           detail::factorial(s.j) * detail::factorial(s.m - 1 - s.j));
  return detail::finish(s, inv_y_d_y(cone), c);
}

inline RadialExpr kleingordon_kernel(const KernelSpec& s) {
  s.validate();
  if (s.family != Family::KleinGordon) throw ConfigError("expected a klein-gordon spec");
  const int n = s.n;
  const double xi = s.param->real();
  const RadialExpr base = RadialExpr::from_profile(Profile::bessel_j_cone(Rational(2 * n - 1, 2), xi));
  RadialExpr sum;
  RadialExpr dt_pow = base;
  for (int l = 0; l <= n; ++l) {
    sum = sum + (detail::binomial(n, l) * std::pow(xi, n - 2 * l + 0.5)) * dt_pow;
    dt_pow = d_t(d_t(dt_pow));
  }
  sum = sum.times_monomial(0, 0, Rational(-n));
  const double c = -1.0 / (std::pow(2.0 * std::numbers::pi, n + 0.5) * detail::factorial(s.j) *
                           detail::factorial(s.m - 1 - s.j));
  return detail::finish(s, inv_y_d_y(sum), c);
}

inline RadialExpr build_kernel(const KernelSpec& s, MetaharmonicForm form = MetaharmonicForm::Direct) {
  switch (s.family) {
    case Family::Polyharmonic: return polyharmonic_kernel(s);
    case Family::Metaharmonic: return metaharmonic_kernel(s, form);
    case Family::Wave: return wave_kernel(s);
    case Family::KleinGordon: return kleingordon_kernel(s);
  }
  throw ConfigError("unknown family");
}

/// The operator annihilating the kernel of a spec (one factor of the power).
inline Operator annihilator(const KernelSpec& s) {
  switch (s.family) {
    case Family::Polyharmonic: return Operator::helmholtz(s.n, 0.0);
    case Family::Metaharmonic: return Operator::helmholtz(s.n, s.p());
    case Family::Wave: return Operator::dalembert(s.n, 0.0);
    case Family::KleinGordon: return Operator::dalembert(2 * s.n + 1, s.param->real());
  }
  throw ConfigError("unknown family");
}

namespace detail {

// Time antiderivative (from the cone) of one cone term; nullopt when no
// closed form is available.
inline std::optional<std::vector<Term>> antiderivative_term(const Term& t) {
  const Factor& f = t.factor;
  std::vector<Term> out;
  if (f.kind == FactorKind::ConeBesselJ) return std::nullopt;
  if (!f.is_cone()) return std::nullopt;

  if (t.t_pow % 2 != 0) {
    // t^e dt = (u + s)^{(e-1)/2} du / 2
    const int h = (t.t_pow - 1) / 2;
    for (int i = 0; i <= h; ++i) {
      const double b = binomial(h, i);
      const Rational s_shift(h - i);
      if (f.kind == FactorKind::ConePower) {
        const Rational a = f.order + i;
        if ((a + 1).numerator() == 0) return std::nullopt;
        Term r = t;
        r.t_pow = 0;
        r.s_pow += s_shift;
        r.coeff *= b / (2.0 * to_double(a + 1));
        r.factor = Factor::cone_power(a + 1);
        out.push_back(r);
      } else {
        // u^i delta^{(k)}(u) = (-1)^i k!/(k-i)! delta^{(k-i)}(u)
        const int k = f.layer;
        if (i > k) continue;
        const double c = ((i % 2) ? -1.0 : 1.0) * factorial(k) / factorial(k - i);
        Term r = t;
        r.t_pow = 0;
        r.s_pow += s_shift;
        r.coeff *= 0.5 * b * c;
        r.factor = (k - i == 0) ? Factor::cone_power(0) : Factor::delta(k - i - 1);
        out.push_back(r);
      }
    }
    return out;
  }

  if (f.kind != FactorKind::ConePower) return std::nullopt;
  // t^e u^a = [d/dt(t^{e+1} u^{a+1}) - (e+2a+3) t^e u^{a+1}] / (2(a+1)s)
  Term cur = t;
  while (true) {
    const Rational a = cur.factor.order;
    if ((a + 1).numerator() == 0) return std::nullopt;
    const Rational lead = Rational(cur.t_pow + 3) + 2 * a;
    if (lead.numerator() > 0) return std::nullopt;
    const double denom = 2.0 * to_double(a + 1);
    Term r = cur;
    r.t_pow += 1;
    r.s_pow -= 1;
    r.coeff /= denom;
    r.factor = Factor::cone_power(a + 1);
    out.push_back(r);
    if (lead.numerator() == 0) break;
    cur.coeff *= -to_double(lead) / denom;
    cur.s_pow -= 1;
    cur.factor = Factor::cone_power(a + 1);
  }
  return out;
}

}  // namespace detail

/// Response to boundary data delta(x) (x) Y(t): the time antiderivative of a
/// hyperbolic kernel that vanishes below the light cone. Returns nullopt when
/// some term has no closed antiderivative; callers then convolve numerically.
inline std::optional<RadialExpr> constant_boundary_transient(const RadialExpr& k) {
  std::vector<Term> out;
  for (const auto& t : k.terms()) {
    auto part = detail::antiderivative_term(t);
    if (!part) return std::nullopt;
    out.insert(out.end(), part->begin(), part->end());
  }
  return RadialExpr(std::move(out));
}

/// Closed forms for low orders, coded directly from their elementary expressions.
namespace closed_form {

/// Classical Poisson kernel of the half-space in R^{n+1}.
inline double poisson(int n, double r, double y) {
  const double s = r * r + y * y;
  return gamma_half(Order{n + 1}) / std::pow(std::numbers::pi, 0.5 * (n + 1)) * y / std::pow(s, 0.5 * (n + 1));
}

/// Biharmonic kernels: E_0 (data u) and E_1 (data d_y u).
inline double biharmonic_e0(int n, double r, double y) {
  const double s = r * r + y * y;
  return 2.0 * gamma_half(Order{n + 3}) / std::pow(std::numbers::pi, 0.5 * (n + 1)) * y * y * y /
         std::pow(s, 0.5 * (n + 3));
}
inline double biharmonic_e1(int n, double r, double y) {
  const double s = r * r + y * y;
  return gamma_half(Order{n + 1}) / std::pow(std::numbers::pi, 0.5 * (n + 1)) * y * y / std::pow(s, 0.5 * (n + 1));
}

/// Highest-index kernel E_{m-1} of the m-th power of the Laplacian in the plane.
inline double plane_top_kernel(int m, double r, double y) {
  double f = 1.0;
  for (int i = 2; i < m; ++i) f *= i;
  return std::pow(y, m) / (std::numbers::pi * f * (r * r + y * y));
}

/// Metaharmonic m = 1 kernel.
inline complex metaharmonic_m1(int n, complex p, double r, double y) {
  const double s = r * r + y * y;
  const Order lambda{n + 1};
  return y * std::pow(p, 0.5 * (n + 1)) /
         (std::pow(2.0, 0.5 * (n - 1)) * std::pow(std::numbers::pi, 0.5 * (n + 1))) *
         bessel_k(lambda, p * std::sqrt(s)) / std::pow(s, 0.25 * (n + 1));
}

/// One-dimensional wave kernel E_0 off the cone.
inline double wave1_e0(double r, double y, double t) {
  const double u = t * t - r * r - y * y;
  if (u <= 0.0 || t <= 0.0) return 0.0;
  return -y / (std::numbers::pi * u * std::sqrt(u));
}

/// Response of the one-dimensional wave problem to delta(x) (x) Y(t).
inline double wave1_step_response(double r, double y, double t) {
  const double s = r * r + y * y;
  const double u = t * t - s;
  if (u <= 0.0 || t <= 0.0) return 0.0;
  return y * t / (std::numbers::pi * s * std::sqrt(u));
}

/// <E_0(r, y, .), psi> for the two-dimensional wave kernel, a single layer
/// -(1/2pi) d_y [delta(t - sqrt s) / sqrt s].
inline double wave2_e0_paired(double r, double y, const TimeTestFunction& psi) {
  const double s = r * r + y * y;
  const double rs = std::sqrt(s);
  const Jet j = psi.jet(rs, 1);
  // d_y [psi(sqrt s) / sqrt s] = (y / sqrt s) (psi'(sqrt s)/sqrt s - psi(sqrt s)/s)
  const double dy = (y / rs) * (j.derivative(1) / rs - j.value() / s);
  return -dy / (2.0 * std::numbers::pi);
}

/// <U, psi> for U = -(1/2pi) d_y [Y(t - sqrt s) / sqrt s].
inline double wave2_step_response_paired(double r, double y, const TimeTestFunction& psi) {
  const double s = r * r + y * y;
  const double rs = std::sqrt(s);
  // d_y [Y(t - sqrt s)/sqrt s] = -(y/sqrt s) delta(t - sqrt s)/sqrt s - y Y(t - sqrt s)/s^{3/2}
  const double tail = integrate([&](double t) { return psi(t); }, std::max(rs, psi.lo), psi.hi, psi.breakpoints,
                                {1e-13, 1e-16, 4000, false})
                          .value;
  const double at_front = (rs > psi.lo && rs < psi.hi) ? psi(rs) : 0.0;
  const double dy = -(y / s) * at_front - y / (s * rs) * tail;
  return -dy / (2.0 * std::numbers::pi);
}

/// Klein-Gordon kernel in one space dimension,
/// -(1/pi) d_y [cos(xi w) / w] with w = sqrt(t^2 - s).
inline double kleingordon0_e0(double xi, double r, double y, double t) {
  const double u = t * t - r * r - y * y;
  if (u <= 0.0 || t <= 0.0) return 0.0;
  const double w = std::sqrt(u);
  return -y / std::numbers::pi * (xi * w * std::sin(xi * w) + std::cos(xi * w)) / (w * w * w);
}

}  // namespace closed_form

}  // namespace halfspace
