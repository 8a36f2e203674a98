#pragma once

// Closed algebra of finite sums  c * y^a * t^e * s^q * F  with s = |x|^2 + y^2
// and u = t^2 - s. F is one of
//   - nothing (pure power of s),
//   - a radial Bessel-K profile H_lambda(s),
//   - a truncated cone power u_+^alpha,
//   - a cone Bessel-J profile P_lambda(u),
//   - a delta layer delta^{(k)}(u) on the light cone.
// Expressions are immutable values kept in canonical (sorted, merged) form.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "jet.hpp"
#include "profiles.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "test_functions.hpp"

namespace halfspace {

enum class FactorKind { None = 0, RadialBesselK = 1, ConePower = 2, ConeBesselJ = 3, ConeDelta = 4 };

struct Factor {
  FactorKind kind = FactorKind::None;
  Rational order{0};  // lambda or alpha
  complex param{};    // p for Bessel-K, xi for Bessel-J
  int layer = 0;      // delta order

  static Factor none() { return {}; }
  static Factor bessel_k(Rational lambda, complex p) { return {FactorKind::RadialBesselK, lambda, p, 0}; }
  static Factor cone_power(Rational alpha) { return {FactorKind::ConePower, alpha, {}, 0}; }
  static Factor cone_bessel_j(Rational lambda, double xi) {
    return {FactorKind::ConeBesselJ, lambda, complex(xi, 0.0), 0};
  }
  static Factor delta(int k) { return {FactorKind::ConeDelta, Rational(0), {}, k}; }

  bool is_cone() const { return kind == FactorKind::ConePower || kind == FactorKind::ConeBesselJ || kind == FactorKind::ConeDelta; }

  Profile profile() const {
    switch (kind) {
      case FactorKind::RadialBesselK: return Profile::bessel_k(order, param);
      case FactorKind::ConePower: return Profile::trunc_power(order);
      case FactorKind::ConeBesselJ: return Profile::bessel_j_cone(order, param.real());
      default: throw std::logic_error("factor has no profile");
    }
  }

  friend bool operator==(const Factor& a, const Factor& b) {
    return a.kind == b.kind && a.order == b.order && a.param == b.param && a.layer == b.layer;
  }
  friend bool operator<(const Factor& a, const Factor& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.param.real() != b.param.real()) return a.param.real() < b.param.real();
    if (a.param.imag() != b.param.imag()) return a.param.imag() < b.param.imag();
    if (a.order != b.order) return a.order < b.order;
    return a.layer < b.layer;
  }
};

struct Term {
  complex coeff{1.0, 0.0};
  int y_pow = 0;
  int t_pow = 0;
  Rational s_pow{0};
  Factor factor;

  bool same_signature(const Term& o) const {
    return factor == o.factor && y_pow == o.y_pow && t_pow == o.t_pow && s_pow == o.s_pow;
  }
  friend bool signature_less(const Term& a, const Term& b) {
    if (!(a.factor == b.factor)) return a.factor < b.factor;
    if (a.y_pow != b.y_pow) return a.y_pow < b.y_pow;
    if (a.t_pow != b.t_pow) return a.t_pow < b.t_pow;
    return a.s_pow < b.s_pow;
  }
};

/// Evaluation point: r = |x|, y > 0, optional time.
struct Point {
  double r = 0.0;
  double y = 1.0;
  std::optional<double> t;
};

struct EvalDetail {
  complex value{};
  double max_term = 0.0;  // largest single-term magnitude
};

struct PairOptions {
  QuadratureOptions quad{1e-12, 1e-15, 2000, false};
};

struct PairResult {
  complex value{};
  double error = 0.0;
  double max_term = 0.0;
};

/// Coefficients whose merged magnitude falls below this fraction of the
/// largest contribution to the same signature are treated as cancellation dust.
inline constexpr double kMergeDust = 1e-15;

class RadialExpr {
 public:
  RadialExpr() = default;
  explicit RadialExpr(std::vector<Term> raw) : terms_(canonicalize(std::move(raw))) {}

  static RadialExpr zero() { return {}; }
  static RadialExpr monomial(complex c, int y_pow, int t_pow, Rational s_pow, Factor f = Factor::none()) {
    return RadialExpr({Term{c, y_pow, t_pow, s_pow, f}});
  }
  /// A profile as an expression; POWER profiles become plain powers of s.
  static RadialExpr from_profile(const Profile& p, complex c = 1.0) {
    switch (p.family) {
      case ProfileFamily::Power: return monomial(c, 0, 0, Rational(-(p.n + 1), 2));
      case ProfileFamily::BesselK: return monomial(c, 0, 0, 0, Factor::bessel_k(p.order, p.param));
      case ProfileFamily::TruncPower: return monomial(c, 0, 0, 0, Factor::cone_power(p.order));
      case ProfileFamily::BesselJCone: return monomial(c, 0, 0, 0, Factor::cone_bessel_j(p.order, p.xi()));
    }
    return zero();
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  bool has_delta() const {
    return std::any_of(terms_.begin(), terms_.end(),
                       [](const Term& t) { return t.factor.kind == FactorKind::ConeDelta; });
  }
  bool depends_on_time() const {
    return std::any_of(terms_.begin(), terms_.end(),
                       [](const Term& t) { return t.t_pow != 0 || t.factor.is_cone(); });
  }

  friend RadialExpr operator+(const RadialExpr& a, const RadialExpr& b) {
    std::vector<Term> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    return RadialExpr(std::move(all));
  }
  friend RadialExpr operator*(complex c, const RadialExpr& e) {
    std::vector<Term> all = e.terms_;
    for (auto& t : all) t.coeff *= c;
    return RadialExpr(std::move(all));
  }
  friend RadialExpr operator*(const RadialExpr& e, complex c) { return c * e; }
  friend RadialExpr operator-(const RadialExpr& a, const RadialExpr& b) { return a + complex(-1.0) * b; }

  /// Multiplies every term by y^a t^e s^q.
  RadialExpr times_monomial(int y_pow, int t_pow, Rational s_pow) const {
    std::vector<Term> all = terms_;
    for (auto& t : all) {
      t.y_pow += y_pow;
      t.t_pow += t_pow;
      t.s_pow += s_pow;
    }
    return RadialExpr(std::move(all));
  }

  friend bool operator==(const RadialExpr& a, const RadialExpr& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!a.terms_[i].same_signature(b.terms_[i]) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    return true;
  }

  static std::vector<Term> canonicalize(std::vector<Term> raw) {
    std::stable_sort(raw.begin(), raw.end(), [](const Term& a, const Term& b) { return signature_less(a, b); });
    std::vector<Term> out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
      Term merged = raw[i];
      double biggest = std::abs(raw[i].coeff);
      std::size_t j = i + 1;
      for (; j < raw.size() && raw[j].same_signature(raw[i]); ++j) {
        merged.coeff += raw[j].coeff;
        biggest = std::max(biggest, std::abs(raw[j].coeff));
      }
      const double mag = std::abs(merged.coeff);
      if (mag != 0.0 && mag > kMergeDust * biggest) {
        if (merged.factor.kind != FactorKind::ConeDelta && merged.factor.kind != FactorKind::ConePower &&
            merged.factor.kind != FactorKind::ConeBesselJ && merged.t_pow != 0 &&
            merged.factor.kind != FactorKind::None)
          throw std::logic_error("radial profile terms cannot carry powers of t");
        out.push_back(merged);
      }
      i = j;
    }
    return out;
  }

 private:
  std::vector<Term> terms_;
};

namespace detail {

// dF/du for a cone factor (as coefficient/factor pairs).
inline std::vector<std::pair<complex, Factor>> du_factor(const Factor& f) {
  switch (f.kind) {
    case FactorKind::ConePower:
      if (f.order.numerator() == 0) return {{1.0, Factor::delta(0)}};
      return {{to_double(f.order), Factor::cone_power(f.order - 1)}};
    case FactorKind::ConeBesselJ:
      return {{0.5 * f.param.real(), Factor::cone_bessel_j(f.order - 1, f.param.real())}};
    case FactorKind::ConeDelta:
      return {{1.0, Factor::delta(f.layer + 1)}};
    default:
      return {};
  }
}

// d/ds at fixed y and t (so du/ds = -1).
inline void ds_term(const Term& t, std::vector<Term>& out) {
  if (t.s_pow.numerator() != 0) {
    Term a = t;
    a.coeff *= to_double(t.s_pow);
    a.s_pow -= 1;
    out.push_back(a);
  }
  switch (t.factor.kind) {
    case FactorKind::None: break;
    case FactorKind::RadialBesselK: {
      Term b = t;
      b.coeff *= -0.5 * t.factor.param;
      b.factor = Factor::bessel_k(t.factor.order + 1, t.factor.param);
      out.push_back(b);
      break;
    }
    default:
      for (const auto& [c, f] : du_factor(t.factor)) {
        Term b = t;
        b.coeff *= -c;
        b.factor = f;
        out.push_back(b);
      }
  }
}

inline std::vector<Term> ds_all(const std::vector<Term>& terms) {
  std::vector<Term> out;
  for (const auto& t : terms) ds_term(t, out);
  return out;
}

}  // namespace detail

/// d/dy at fixed |x| and t.
inline RadialExpr d_y(const RadialExpr& e) {
  std::vector<Term> out;
  for (const auto& t : e.terms()) {
    if (t.y_pow != 0) {
      Term a = t;
      a.coeff *= static_cast<double>(t.y_pow);
      a.y_pow -= 1;
      out.push_back(a);
    }
    std::vector<Term> ds;
    detail::ds_term(t, ds);
    for (auto& b : ds) {
      b.coeff *= 2.0;
      b.y_pow += 1;
      out.push_back(b);
    }
  }
  return RadialExpr(std::move(out));
}

/// (1/y) d/dy.
inline RadialExpr inv_y_d_y(const RadialExpr& e) { return d_y(e).times_monomial(-1, 0, 0); }

/// d/dt at fixed |x| and y.
inline RadialExpr d_t(const RadialExpr& e) {
  std::vector<Term> out;
  for (const auto& t : e.terms()) {
    if (t.t_pow != 0) {
      Term a = t;
      a.coeff *= static_cast<double>(t.t_pow);
      a.t_pow -= 1;
      out.push_back(a);
    }
    for (const auto& [c, f] : detail::du_factor(t.factor)) {
      Term b = t;
      b.coeff *= 2.0 * c;
      b.t_pow += 1;
      b.factor = f;
      out.push_back(b);
    }
  }
  return RadialExpr(std::move(out));
}

/// Laplacian in x in R^n for radial dependence through s:
/// Delta_n f = 2n f_s + 4 (s - y^2) f_ss.
inline RadialExpr laplacian_x(const RadialExpr& e, int n) {
  if (n < 1) throw DomainError("laplacian_x requires n >= 1");
  std::vector<Term> first = detail::ds_all(e.terms());
  std::vector<Term> second = detail::ds_all(RadialExpr(first).terms());
  std::vector<Term> out;
  for (auto t : first) {
    t.coeff *= 2.0 * n;
    out.push_back(t);
  }
  for (const auto& t : second) {
    Term a = t;
    a.coeff *= 4.0;
    a.s_pow += 1;
    out.push_back(a);
    Term b = t;
    b.coeff *= -4.0;
    b.y_pow += 2;
    out.push_back(b);
  }
  return RadialExpr(std::move(out));
}

enum class OpKind { DY, NegDY, InvYDY, DT, LapX, Helmholtz, DAlembert };

/// Operator tag for op_power. Helmholtz(n, p) = Delta_n + d_y^2 - p^2,
/// DAlembert(n, xi) = Delta_n + d_y^2 - d_t^2 - xi^2.
struct Operator {
  OpKind kind = OpKind::DY;
  int n = 1;
  complex shift{};

  static Operator dy() { return {OpKind::DY}; }
  static Operator neg_dy() { return {OpKind::NegDY}; }
  static Operator inv_y_dy() { return {OpKind::InvYDY}; }
  static Operator dt() { return {OpKind::DT}; }
  static Operator lap_x(int n) { return {OpKind::LapX, n}; }
  static Operator helmholtz(int n, complex p) { return {OpKind::Helmholtz, n, p}; }
  static Operator dalembert(int n, double xi) { return {OpKind::DAlembert, n, complex(xi, 0.0)}; }
};

inline RadialExpr apply(const Operator& op, const RadialExpr& e) {
  switch (op.kind) {
    case OpKind::DY: return d_y(e);
    case OpKind::NegDY: return complex(-1.0) * d_y(e);
    case OpKind::InvYDY: return inv_y_d_y(e);
    case OpKind::DT: return d_t(e);
    case OpKind::LapX: return laplacian_x(e, op.n);
    case OpKind::Helmholtz:
      return laplacian_x(e, op.n) + d_y(d_y(e)) - (op.shift * op.shift) * e;
    case OpKind::DAlembert:
      return laplacian_x(e, op.n) + d_y(d_y(e)) - d_t(d_t(e)) - (op.shift * op.shift) * e;
  }
  return e;
}

inline RadialExpr op_power(const Operator& op, int m, RadialExpr e) {
  if (m < 0) throw DomainError("op_power requires m >= 0");
  for (int i = 0; i < m; ++i) e = apply(op, e);
  return e;
}

namespace detail {

inline double int_pow(double x, int k) {
  if (k == 0) return 1.0;
  return std::pow(x, k);
}

inline double rational_pow(double x, const Rational& q) {
  if (q.numerator() == 0) return 1.0;
  if (q.denominator() == 1) return std::pow(x, static_cast<double>(q.numerator()));
  if (q.denominator() == 2) {
    const double root = std::sqrt(x);
    return std::pow(root, static_cast<double>(q.numerator()));
  }
  return std::pow(x, to_double(q));
}

// Values of all Bessel-K factors that share a parameter p, computed with one
// recurrence per parity class of the order.
class BesselKCache {
 public:
  complex get(const Factor& f) const {
    const Order order = Order::from_rational(f.order);
    for (auto& e : entries_)
      if (e.p == f.param && e.parity == (order.twice_order & 1))
        return e.values.at(static_cast<std::size_t>((order.twice_order - e.lo_twice) / 2));
    throw std::logic_error("BesselKCache: order not prepared");
  }

  void prepare(const std::vector<Term>& terms, double s) {
    entries_.clear();
    for (const auto& t : terms) {
      if (t.factor.kind != FactorKind::RadialBesselK) continue;
      const Order o = Order::from_rational(t.factor.order);
      const int parity = o.twice_order & 1;
      auto it = std::find_if(entries_.begin(), entries_.end(),
                             [&](const Entry& e) { return e.p == t.factor.param && e.parity == parity; });
      if (it == entries_.end()) {
        entries_.push_back({t.factor.param, parity, o.twice_order, o.twice_order, {}});
      } else {
        it->lo_twice = std::min(it->lo_twice, o.twice_order);
        it->hi_twice = std::max(it->hi_twice, o.twice_order);
      }
    }
    const double root = std::sqrt(s);
    for (auto& e : entries_) {
      // K_{-lambda} = K_lambda: evaluate on |order| and map back.
      const int abs_lo = e.lo_twice < 0 ? (e.hi_twice < 0 ? -e.hi_twice : (e.parity ? 1 : 0)) : e.lo_twice;
      const int abs_hi = std::max(std::abs(e.lo_twice), std::abs(e.hi_twice));
      const int count = (abs_hi - abs_lo) / 2 + 1;
      std::vector<complex> k = bessel_k_range(Order{abs_lo}, count, e.p * root);
      e.values.resize(static_cast<std::size_t>((e.hi_twice - e.lo_twice) / 2 + 1));
      for (int tw = e.lo_twice; tw <= e.hi_twice; tw += 2) {
        const int a = std::abs(tw);
        const complex kv = k.at(static_cast<std::size_t>((a - abs_lo) / 2));
        e.values[static_cast<std::size_t>((tw - e.lo_twice) / 2)] = kv / rational_pow(s, Rational(tw, 4));
      }
    }
  }

 private:
  struct Entry {
    complex p;
    int parity;
    int lo_twice;
    int hi_twice;
    std::vector<complex> values;
  };
  std::vector<Entry> entries_;
};

inline double cone_value(const Factor& f, double u) {
  if (u < 0.0) return 0.0;
  const Profile p = f.profile();
  return detail::profile_value(p, u).real();
}

}  // namespace detail

/// Pointwise value and the largest single-term magnitude.
inline EvalDetail evaluate_detailed(const RadialExpr& e, const Point& at) {
  EvalDetail out;
  if (e.is_zero()) return out;
  if (e.has_delta()) throw EvaluationError(EvalErrorKind::DeltaLayerPresent, "delta layers have no pointwise value");
  if (e.depends_on_time() && !at.t) throw EvaluationError(EvalErrorKind::MissingTime, "expression depends on t");
  if (!(at.y > 0.0)) throw DomainError("evaluation requires y > 0");
  if (at.r < 0.0) throw DomainError("evaluation requires r >= 0");
  const double s = at.r * at.r + at.y * at.y;
  const double t = at.t.value_or(0.0);
  const double u = t * t - s;

  detail::BesselKCache kcache;
  kcache.prepare(e.terms(), s);

  const Factor* last = nullptr;
  complex last_value{};
  for (const auto& term : e.terms()) {
    if (!last || !(term.factor == *last)) {
      switch (term.factor.kind) {
        case FactorKind::None: last_value = 1.0; break;
        case FactorKind::RadialBesselK: last_value = kcache.get(term.factor); break;
        default: last_value = detail::cone_value(term.factor, u); break;
      }
      last = &term.factor;
    }
    if (last_value == 0.0) continue;
    const complex v = term.coeff * detail::int_pow(at.y, term.y_pow) * detail::int_pow(t, term.t_pow) *
                      detail::rational_pow(s, term.s_pow) * last_value;
    out.value += v;
    out.max_term = std::max(out.max_term, std::abs(v));
  }
  return out;
}

inline complex evaluate(const RadialExpr& e, const Point& at) { return evaluate_detailed(e, at).value; }

namespace detail {

// L g = -d/dt (g / (2t)), applied `times` times to a jet; each application
// lowers the jet order by one.
inline Jet apply_raising(Jet g, double t, int times) {
  for (int i = 0; i < times; ++i) {
    const Jet two_t = Jet::variable(g.order(), t) * 2.0;
    g = -(g / two_t).differentiate();
  }
  return g;
}

// Polynomial weight sum_e c_e t^e as a jet.
inline Jet weight_jet(const std::vector<std::pair<int, complex>>& weights, double t, std::size_t order,
                      bool imag) {
  Jet w(order, 0.0);
  const Jet var = Jet::variable(order, t);
  for (const auto& [e, c] : weights) w += pow(var, e) * (imag ? c.imag() : c.real());
  return w;
}

}  // namespace detail

/// <e(r, y, .), psi>: the expression paired in time against a smooth test
/// function supported in [psi.lo, psi.hi] with psi.lo > 0. Delta layers are
/// paired in closed form. Truncated powers with alpha <= -1 (and cone Bessel
/// profiles of order <= -1) are first raised by integration by parts.
/// If psi.lo lies above the cone, psi must vanish to all orders there.
inline PairResult pair_time(const RadialExpr& e, const TimeTestFunction& psi, double r, double y,
                            const PairOptions& opt = {}) {
  if (!(psi.lo > 0.0)) throw DomainError("pair_time: test function support touches t = 0");
  if (!(y > 0.0)) throw DomainError("pair_time requires y > 0");
  PairResult out;
  const double s = r * r + y * y;
  const double t0 = std::sqrt(s);

  detail::BesselKCache kcache;
  kcache.prepare(e.terms(), s);

  const auto& terms = e.terms();
  std::size_t i = 0;
  while (i < terms.size()) {
    // Group terms sharing a factor; within a group the t-dependence is a
    // polynomial weight sum c_e t^e with (y, s) frozen.
    std::size_t j = i;
    std::vector<std::pair<int, complex>> weights;
    while (j < terms.size() && terms[j].factor == terms[i].factor) {
      const Term& tm = terms[j];
      const complex c = tm.coeff * detail::int_pow(y, tm.y_pow) * detail::rational_pow(s, tm.s_pow);
      weights.emplace_back(tm.t_pow, c);
      ++j;
    }
    const Factor& f = terms[i].factor;

    if (f.kind == FactorKind::ConeDelta) {
      if (t0 > psi.lo && t0 < psi.hi) {
        const std::size_t k = static_cast<std::size_t>(f.layer);
        const Jet ps = psi.jet(t0, k);
        for (const auto& [ep, c] : weights) {
          const Jet chi = times_power(ps, t0, ep);
          const double v = detail::apply_raising(chi, t0, f.layer).value() / (2.0 * t0);
          const complex term = c * v;
          out.value += term;
          out.max_term = std::max(out.max_term, std::abs(term));
        }
      }
      i = j;
      continue;
    }

    if (!f.is_cone()) {
      // Time-independent radial factor: value times the moments of psi.
      const complex fv = (f.kind == FactorKind::None) ? complex(1.0) : kcache.get(f);
      for (const auto& [ep, c] : weights) {
        auto q = integrate([&](double t) { return std::pow(t, ep) * psi(t); }, psi.lo, psi.hi, psi.breakpoints,
                           opt.quad);
        const complex term = c * fv * q.value;
        out.value += term;
        out.error += std::abs(c * fv) * q.error;
        out.max_term = std::max(out.max_term, std::abs(term));
      }
      i = j;
      continue;
    }

    // Raise the order above -1.
    Factor g = f;
    int raises = 0;
    complex scale = 1.0;
    while (to_double(g.order) <= -1.0) {
      if (g.kind == FactorKind::ConePower) {
        if (is_integer(g.order))
          throw EvaluationError(EvalErrorKind::OnConeSingularity, "integer truncated power below -1");
        scale /= to_double(g.order + 1);
        g.order += 1;
      } else {
        scale *= 2.0 / g.param.real();
        g.order += 1;
      }
      ++raises;
    }

    const double a = std::max(psi.lo, t0);
    if (a >= psi.hi) {
      i = j;
      continue;
    }
    auto chi = [&](double t, bool imag) {
      const std::size_t order = static_cast<std::size_t>(raises);
      const Jet w = detail::weight_jet(weights, t, order, imag);
      return detail::apply_raising(w * psi.jet(t, order), t, raises).value();
    };
    bool has_imag = false;
    for (const auto& w : weights) has_imag = has_imag || w.second.imag() != 0.0;
    auto chi_c = [&](double t) {
      return complex(chi(t, false), has_imag ? chi(t, true) : 0.0);
    };

    QuadratureResult<complex> q;
    if (t0 > psi.lo) {
      // t = sqrt(s + w^2) removes the endpoint singularity at the cone.
      const double w_max = std::sqrt(psi.hi * psi.hi - s);
      std::vector<double> wb;
      for (double b : psi.breakpoints)
        if (b > t0 && b < psi.hi) wb.push_back(std::sqrt(b * b - s));
      const double alpha = to_double(g.order);
      q = integrate(
          [&](double w) -> complex {
            const double t = std::sqrt(s + w * w);
            double fw;
            if (g.kind == FactorKind::ConePower)
              fw = std::pow(w, 2.0 * alpha + 1.0);
            else
              fw = w * detail::cone_value(g, w * w);
            return chi_c(t) * (fw / t);
          },
          0.0, w_max, wb, opt.quad);
    } else {
      q = integrate([&](double t) -> complex { return chi_c(t) * detail::cone_value(g, t * t - s); }, a, psi.hi,
                    psi.breakpoints, opt.quad);
    }
    const complex term = scale * q.value;
    out.value += term;
    out.error += std::abs(scale) * q.error;
    out.max_term = std::max(out.max_term, std::max(std::abs(term), std::abs(scale) * q.l1));
    if (!q.converged && opt.quad.throw_on_failure)
      throw QuadratureError("pair_time quadrature did not converge", q.error);
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Debug serialization.

inline nlohmann::json to_json(const Factor& f) {
  using nlohmann::json;
  switch (f.kind) {
    case FactorKind::None: return json{{"kind", "none"}};
    case FactorKind::RadialBesselK:
      return json{{"kind", "bessel_k"}, {"order", to_string(f.order)}, {"p", {f.param.real(), f.param.imag()}}};
    case FactorKind::ConePower: return json{{"kind", "cone_power"}, {"alpha", to_string(f.order)}};
    case FactorKind::ConeBesselJ:
      return json{{"kind", "cone_bessel_j"}, {"order", to_string(f.order)}, {"xi", f.param.real()}};
    case FactorKind::ConeDelta: return json{{"kind", "cone_delta"}, {"layer", f.layer}};
  }
  return {};
}

inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(std::stoll(text));
  return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
}

inline Factor factor_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind");
  if (kind == "none") return Factor::none();
  if (kind == "bessel_k")
    return Factor::bessel_k(parse_rational(j.at("order")), complex(j.at("p")[0], j.at("p")[1]));
  if (kind == "cone_power") return Factor::cone_power(parse_rational(j.at("alpha")));
  if (kind == "cone_bessel_j") return Factor::cone_bessel_j(parse_rational(j.at("order")), j.at("xi"));
  if (kind == "cone_delta") return Factor::delta(j.at("layer"));
  throw std::invalid_argument("unknown factor kind " + kind);
}

inline nlohmann::json to_json(const RadialExpr& e) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : e.terms())
    terms.push_back({{"coeff", {t.coeff.real(), t.coeff.imag()}},
                     {"y_pow", t.y_pow},
                     {"t_pow", t.t_pow},
                     {"s_pow", to_string(t.s_pow)},
                     {"factor", to_json(t.factor)}});
  return nlohmann::json{{"terms", terms}};
}

inline RadialExpr expr_from_json(const nlohmann::json& j) {
  std::vector<Term> terms;
  for (const auto& t : j.at("terms"))
    terms.push_back(Term{complex(t.at("coeff")[0], t.at("coeff")[1]), t.at("y_pow"), t.at("t_pow"),
                         parse_rational(t.at("s_pow")), factor_from_json(t.at("factor"))});
  return RadialExpr(std::move(terms));
}

}  // namespace halfspace
