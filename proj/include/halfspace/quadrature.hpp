#pragma once

// Globally adaptive Gauss-Kronrod quadrature with user breakpoints and error
// bookkeeping. The 15-point rule comes from Boost; panels are bisected in
// order of their error estimate until the total meets the tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace halfspace {

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate)
      : std::runtime_error(what + " (error estimate " + std::to_string(estimate) + ")"),
        estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  unsigned max_panels = 2000;
  bool throw_on_failure = false;
};

template <class Value>
struct QuadratureResult {
  Value value{};
  double error = 0.0;
  double l1 = 0.0;
  bool converged = true;

  QuadratureResult& operator+=(const QuadratureResult& other) {
    value += other.value;
    error += other.error;
    l1 += other.l1;
    converged = converged && other.converged;
    return *this;
  }
};

namespace detail {

template <class Value>
struct Panel {
  double a, b;
  Value value;
  double error, l1;
  friend bool operator<(const Panel& x, const Panel& y) { return x.error < y.error; }
};

// Adaptive bisection on a finite interval.
template <class Value, class G>
QuadratureResult<Value> adapt(G&& g, double a, double b, const QuadratureOptions& opt, unsigned budget) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto rule = [&](double lo, double hi) {
    double err = 0.0, l1 = 0.0;
    Value v = Rule::integrate(g, lo, hi, 0, 0.0, &err, &l1);
    // Boost reports the single-panel error on the reference interval [-1, 1].
    return Panel<Value>{lo, hi, v, err * 0.5 * (hi - lo), l1};
  };
  std::priority_queue<Panel<Value>> heap;
  std::vector<Panel<Value>> done;  // too narrow to split further
  heap.push(rule(a, b));
  unsigned panels = 1;
  auto totals = [&] {
    QuadratureResult<Value> r;
    auto add = [&](const Panel<Value>& p) {
      r.value += p.value;
      r.error += p.error;
      r.l1 += p.l1;
    };
    auto copy = heap;
    while (!copy.empty()) {
      add(copy.top());
      copy.pop();
    }
    for (const auto& p : done) add(p);
    return r;
  };
  double err = heap.top().error, l1 = heap.top().l1;
  while (!heap.empty() && err > std::max(opt.abs_tol, opt.rel_tol * l1) && panels < budget) {
    Panel<Value> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 64.0 * std::numeric_limits<double>::epsilon() *
                                                                        std::max(std::abs(worst.a), std::abs(worst.b))) {
      done.push_back(worst);
      continue;
    }
    Panel<Value> left = rule(worst.a, mid);
    Panel<Value> right = rule(mid, worst.b);
    err += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  QuadratureResult<Value> r = totals();
  r.converged = r.error <= std::max(opt.abs_tol, opt.rel_tol * r.l1) * 1.000001;
  return r;
}

}  // namespace detail

/// Integrates f over [a, b] (either end may be infinite), splitting at every
/// breakpoint that lies strictly inside the interval.
template <class F>
auto integrate(F&& f, double a, double b, std::vector<double> breakpoints = {},
               const QuadratureOptions& opt = {}) {
  using Value = decltype(f(0.0));
  QuadratureResult<Value> total;
  if (!(a < b)) return total;

  std::vector<double> cuts{a};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double p : breakpoints)
    if (p > a && p < b && std::isfinite(p) && p > cuts.back()) cuts.push_back(p);
  if (std::isinf(a) && std::isinf(b) && cuts.size() == 1) cuts.push_back(0.0);
  cuts.push_back(b);

  const unsigned budget = std::max(1U, opt.max_panels / static_cast<unsigned>(cuts.size() - 1));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    QuadratureResult<Value> piece;
    if (std::isinf(hi)) {
      // x = lo + t / (1 - t)
      piece = detail::adapt<Value>(
          [&](double t) -> Value {
            const double q = 1.0 - t;
            return f(lo + t / q) * (1.0 / (q * q));
          },
          0.0, 1.0, opt, budget);
    } else if (std::isinf(lo)) {
      // x = hi - t / (1 - t)
      piece = detail::adapt<Value>(
          [&](double t) -> Value {
            const double q = 1.0 - t;
            return f(hi - t / q) * (1.0 / (q * q));
          },
          0.0, 1.0, opt, budget);
    } else {
      piece = detail::adapt<Value>(f, lo, hi, opt, budget);
    }
    total += piece;
  }
  total.converged = total.converged || total.error <= std::max(opt.abs_tol, opt.rel_tol * total.l1);
  if (opt.throw_on_failure && !total.converged)
    throw QuadratureError("adaptive quadrature did not converge", total.error);
  return total;
}

}  // namespace halfspace
