#pragma once

// Truncated Taylor series ("jets") at a point. Coefficient k holds f^(k)/k!.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace halfspace {

class Jet {
 public:
  Jet() = default;
  explicit Jet(std::size_t order, double value = 0.0) : c_(order + 1, 0.0) { c_[0] = value; }
  explicit Jet(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  /// The identity function t at the point t0.
  static Jet variable(std::size_t order, double t0) {
    Jet j(order, t0);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  std::size_t order() const { return c_.empty() ? 0 : c_.size() - 1; }
  double operator[](std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
  double& operator[](std::size_t k) { return c_[k]; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }

  /// k-th derivative at the expansion point.
  double derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return (*this)[k] * f;
  }

  /// Jet of f', one order lower.
  Jet differentiate() const {
    if (c_.size() <= 1) return Jet(0, 0.0);
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 0; k + 1 < c_.size(); ++k) d[k] = static_cast<double>(k + 1) * c_[k + 1];
    return Jet(std::move(d));
  }

  Jet truncated(std::size_t order) const {
    std::vector<double> d(order + 1, 0.0);
    for (std::size_t k = 0; k <= order && k < c_.size(); ++k) d[k] = c_[k];
    return Jet(std::move(d));
  }

  Jet& operator+=(const Jet& o) {
    resize_min(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    resize_min(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator-(Jet a) { return a *= -1.0; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<double> r(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i <= k; ++i) r[k] += a.c_[i] * b.c_[k - i];
    return Jet(std::move(r));
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<double> r(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double acc = a.c_[k];
      for (std::size_t i = 1; i <= k; ++i) acc -= b.c_[i] * r[k - i];
      r[k] = acc / b.c_[0];
    }
    return Jet(std::move(r));
  }

  friend Jet exp(const Jet& a) {
    const std::size_t n = a.c_.size();
    std::vector<double> r(n, 0.0);
    r[0] = std::exp(a.c_[0]);
    // r' = a' r  =>  k r_k = sum_{i=1}^{k} i a_i r_{k-i}
    for (std::size_t k = 1; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t i = 1; i <= k; ++i) acc += static_cast<double>(i) * a.c_[i] * r[k - i];
      r[k] = acc / static_cast<double>(k);
    }
    return Jet(std::move(r));
  }

  /// Integer power.
  friend Jet pow(const Jet& a, int e) {
    Jet r(a.order(), 1.0);
    if (e >= 0) {
      for (int i = 0; i < e; ++i) r = r * a;
      return r;
    }
    Jet inv = r / a;
    for (int i = 0; i < -e; ++i) r = r * inv;
    return r;
  }

 private:
  void resize_min(const Jet& o) {
    if (o.c_.size() < c_.size()) c_.resize(o.c_.size());
  }

  std::vector<double> c_;
};

}  // namespace halfspace
