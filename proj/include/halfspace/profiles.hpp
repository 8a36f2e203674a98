#pragma once

// Radial profile families with exact first-derivative recurrences.
//
//   POWER(n)            G(s) = s^{-(n+1)/2}
//   BESSEL_K(lambda, p) H(s) = K_lambda(p sqrt s) / s^{lambda/2}
//   TRUNC_POWER(alpha)  W(u) = u_+^alpha
//   BESSEL_J_CONE(lambda, xi)  P(u) = u^{lambda/2} J_lambda(xi sqrt u) Y(u)
//
// The first two are functions of s = |x|^2 + y^2, the cone families of
// u = t^2 - s.

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include "specfun.hpp"

namespace halfspace {

enum class EvalErrorKind { DeltaLayerPresent, OnConeSingularity, MissingTime };

inline const char* to_string(EvalErrorKind k) {
  switch (k) {
    case EvalErrorKind::DeltaLayerPresent: return "DeltaLayerPresent";
    case EvalErrorKind::OnConeSingularity: return "OnConeSingularity";
    case EvalErrorKind::MissingTime: return "MissingTime";
  }
  return "?";
}

class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(EvalErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}
  EvalErrorKind kind() const { return kind_; }

 private:
  EvalErrorKind kind_;
};

enum class ProfileFamily { Power, BesselK, TruncPower, BesselJCone };

struct Profile {
  ProfileFamily family = ProfileFamily::Power;
  int n = 1;                 // POWER only
  Rational order{0};         // lambda (Bessel families) or alpha (TRUNC_POWER)
  complex param{0.0, 0.0};   // p (BESSEL_K) or xi (BESSEL_J_CONE, real part)

  static Profile power(int n) {
    if (n < 0) throw DomainError("POWER profile requires n >= 0");
    return Profile{ProfileFamily::Power, n, Rational(-(n + 1), 2), {}};
  }
  static Profile bessel_k(Rational lambda, complex p) {
    if (!(p.real() > 0.0)) throw DomainError("BESSEL_K profile requires Re p > 0");
    return Profile{ProfileFamily::BesselK, 0, lambda, p};
  }
  static Profile trunc_power(Rational alpha) { return Profile{ProfileFamily::TruncPower, 0, alpha, {}}; }
  static Profile bessel_j_cone(Rational lambda, double xi) {
    if (!(xi > 0.0)) throw DomainError("BESSEL_J_CONE profile requires xi > 0");
    Order::from_rational(lambda);
    return Profile{ProfileFamily::BesselJCone, 0, lambda, complex(xi, 0.0)};
  }

  bool is_cone() const {
    return family == ProfileFamily::TruncPower || family == ProfileFamily::BesselJCone;
  }
  double xi() const { return param.real(); }

  friend bool operator==(const Profile& a, const Profile& b) {
    return a.family == b.family && a.n == b.n && a.order == b.order && a.param == b.param;
  }
};

/// k-th derivative of a profile: coeff times a shifted profile, or a delta
/// layer delta^{(delta_order)}(u) once an integer truncated power crosses zero.
struct ProfileDerivative {
  complex coeff{1.0, 0.0};
  Profile profile;
  std::optional<int> delta_order;
};

inline ProfileDerivative profile_deriv_rule(const Profile& p, int k) {
  if (k < 0) throw DomainError("derivative order must be non-negative");
  ProfileDerivative d{complex(1.0, 0.0), p, std::nullopt};
  for (int i = 0; i < k; ++i) {
    if (d.delta_order) {
      ++*d.delta_order;
      continue;
    }
    Profile& q = d.profile;
    switch (q.family) {
      case ProfileFamily::Power:
        // d/ds s^{-(n+1)/2} = -((n+1)/2) s^{-(n+3)/2}
        d.coeff *= -0.5 * (q.n + 1);
        q.n += 2;
        q.order = Rational(-(q.n + 1), 2);
        break;
      case ProfileFamily::BesselK:
        d.coeff *= -0.5 * q.param;
        q.order += 1;
        break;
      case ProfileFamily::TruncPower:
        if (q.order.numerator() == 0) {
          d.delta_order = 0;
        } else {
          d.coeff *= to_double(q.order);
          q.order -= 1;
        }
        break;
      case ProfileFamily::BesselJCone:
        d.coeff *= 0.5 * q.xi();
        q.order -= 1;
        break;
    }
  }
  return d;
}

namespace detail {

inline complex profile_value(const Profile& p, double arg) {
  switch (p.family) {
    case ProfileFamily::Power:
      if (!(arg > 0.0)) throw DomainError("POWER profile requires s > 0");
      return std::pow(arg, -0.5 * (p.n + 1));
    case ProfileFamily::BesselK: {
      if (!(arg > 0.0)) throw DomainError("BESSEL_K profile requires s > 0");
      const double lambda = to_double(p.order);
      const double root = std::sqrt(arg);
      return bessel_k(Order::from_rational(p.order), p.param * root) / std::pow(arg, 0.5 * lambda);
    }
    case ProfileFamily::TruncPower: {
      const double alpha = to_double(p.order);
      if (arg < 0.0) return 0.0;
      if (arg == 0.0) {
        if (alpha < 0.0)
          throw EvaluationError(EvalErrorKind::OnConeSingularity, "u_+^alpha with alpha < 0 at u = 0");
        return alpha == 0.0 ? 1.0 : 0.0;
      }
      return std::pow(arg, alpha);
    }
    case ProfileFamily::BesselJCone: {
      const Order lambda = Order::from_rational(p.order);
      if (arg < 0.0) return 0.0;
      if (arg == 0.0) {
        if (lambda.value() < 0.0)
          throw EvaluationError(EvalErrorKind::OnConeSingularity, "cone Bessel profile of negative order at u = 0");
        return 0.0;
      }
      return std::pow(arg, 0.5 * lambda.value()) * bessel_j_half(lambda, p.xi() * std::sqrt(arg));
    }
  }
  return 0.0;
}

}  // namespace detail

/// Value of the k-th derivative of the profile at s (radial) or u (cone).
inline complex profile_eval(const Profile& p, int k, double arg) {
  const ProfileDerivative d = profile_deriv_rule(p, k);
  if (d.delta_order)
    throw EvaluationError(EvalErrorKind::DeltaLayerPresent, "derivative chain produced a delta layer");
  return d.coeff * detail::profile_value(d.profile, arg);
}

}  // namespace halfspace
