#pragma once

// Boundary-value solves by convolution of the kernels with Dirichlet data,
// and boundary traces by extrapolation in y.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <nlohmann/json.hpp>

#include "kernels.hpp"
#include "quadrature.hpp"
#include "radial_algebra.hpp"
#include "test_functions.hpp"

namespace halfspace {

// ---------------------------------------------------------------------------
// Boundary data.

/// Values on a tensor grid, multilinear in between and zero outside.
struct SampledGrid {
  std::vector<std::vector<double>> axes;
  std::vector<complex> values;  // last axis varies fastest

  std::size_t dim() const { return axes.size(); }

  complex operator()(const std::vector<double>& x) const {
    const std::size_t n = axes.size();
    std::vector<std::size_t> cell(n);
    std::vector<double> frac(n);
    for (std::size_t d = 0; d < n; ++d) {
      const auto& a = axes[d];
      if (x[d] < a.front() || x[d] > a.back()) return 0.0;
      auto it = std::upper_bound(a.begin(), a.end(), x[d]);
      std::size_t i = static_cast<std::size_t>(std::distance(a.begin(), it));
      i = std::clamp<std::size_t>(i, 1, a.size() - 1) - 1;
      cell[d] = i;
      frac[d] = (x[d] - a[i]) / (a[i + 1] - a[i]);
    }
    complex sum = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << n); ++corner) {
      double w = 1.0;
      std::size_t flat = 0;
      for (std::size_t d = 0; d < n; ++d) {
        const bool up = (corner >> d) & 1U;
        w *= up ? frac[d] : 1.0 - frac[d];
        flat = flat * axes[d].size() + cell[d] + (up ? 1 : 0);
      }
      if (w != 0.0) sum += w * values[flat];
    }
    return sum;
  }
};

enum class SpatialKind { Zero, Constant, Gaussian, Sampled };

struct SpatialData {
  SpatialKind kind = SpatialKind::Zero;
  complex amplitude{1.0, 0.0};  // constant value or Gaussian amplitude
  std::vector<double> center;
  double width = 1.0;
  SampledGrid sampled;

  static SpatialData zero() { return {}; }
  static SpatialData constant(complex c) { return {SpatialKind::Constant, c, {}, 1.0, {}}; }
  static SpatialData gaussian(std::vector<double> center, double width, complex amplitude = 1.0) {
    if (!(width > 0.0)) throw ConfigError("gaussian width must be positive");
    return {SpatialKind::Gaussian, amplitude, std::move(center), width, {}};
  }
  static SpatialData from_samples(SampledGrid g) { return {SpatialKind::Sampled, 1.0, {}, 1.0, std::move(g)}; }

  complex operator()(const std::vector<double>& x) const {
    switch (kind) {
      case SpatialKind::Zero: return 0.0;
      case SpatialKind::Constant: return amplitude;
      case SpatialKind::Gaussian: {
        double r2 = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d) r2 += (x[d] - center[d]) * (x[d] - center[d]);
        return amplitude * std::exp(-r2 / (2.0 * width * width));
      }
      case SpatialKind::Sampled: return sampled(x);
    }
    return 0.0;
  }
};

enum class TimeKind { None, Heaviside, GaussianPulse, Sampled };

struct TimeProfile {
  TimeKind kind = TimeKind::None;
  double t0 = 0.0;
  double sigma = 0.0;
  std::vector<double> times;
  std::vector<double> values;

  static TimeProfile none() { return {}; }
  static TimeProfile heaviside() { return {TimeKind::Heaviside, 0.0, 0.0, {}, {}}; }
  static TimeProfile gaussian_pulse(double t0, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("pulse sigma must be positive");
    if (t0 < 8.0 * sigma) throw ConfigError("pulse must start after t = 0 (t0 >= 8 sigma)");
    return {TimeKind::GaussianPulse, t0, sigma, {}, {}};
  }
  static TimeProfile from_samples(std::vector<double> t, std::vector<double> v) {
    if (t.size() != v.size() || t.size() < 2) throw ConfigError("sampled time profile needs matching t/value arrays");
    if (!std::is_sorted(t.begin(), t.end())) throw ConfigError("sampled times must be increasing");
    TimeProfile p{TimeKind::Sampled, 0.0, 0.0, std::move(t), std::move(v)};
    p.sigma = (p.times.back() - p.times.front()) / static_cast<double>(p.times.size() - 1);
    if (p.times.front() < 8.0 * p.sigma) throw ConfigError("sampled time profile must start after t = 0");
    return p;
  }

  /// psi(tau) = h(t - tau), restricted to tau >= lo.
  TimeTestFunction reversed(double t, double lo, double ramp) const {
    switch (kind) {
      case TimeKind::None: throw ConfigError("transient solve requires a time profile");
      case TimeKind::Heaviside: return reversed_step(t, ramp, lo);
      case TimeKind::GaussianPulse: {
        TimeTestFunction f = gaussian(t - t0, sigma);
        f.lo = std::max(f.lo, lo);
        f.hi = std::min(f.hi, t);
        return f;
      }
      case TimeKind::Sampled: {
        // Gaussian quasi-interpolant with width equal to the sample spacing.
        TimeTestFunction f;
        f.name = "sampled";
        const double s = sigma;
        const auto ts = times;
        const auto vs = values;
        f.lo = std::max(lo, t - ts.back() - 12.0 * s);
        f.hi = std::min(t, t - ts.front() + 12.0 * s);
        f.jet = [t, s, ts, vs](double tau, std::size_t order) {
          Jet acc(order, 0.0);
          const Jet var = Jet::variable(order, tau);
          const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
          for (std::size_t i = 0; i < ts.size(); ++i) {
            const double c = t - ts[i];
            if (std::abs(tau - c) > 12.0 * s) continue;
            const Jet z = (var - Jet(order, c)) * (1.0 / s);
            acc += exp(z * z * -0.5) * (vs[i] * norm);
          }
          return acc;
        };
        for (double ti : ts) f.breakpoints.push_back(t - ti);
        return f;
      }
    }
    throw ConfigError("unknown time profile");
  }
};

struct BoundaryEntry {
  SpatialData space;
  TimeProfile time;
};

/// Data g_0, ..., g_{m-1}; entry j is the trace of d_y^j u.
struct BoundaryData {
  std::vector<BoundaryEntry> entries;

  void validate(const KernelSpec& spec, bool transient) const {
    if (static_cast<int>(entries.size()) != spec.m)
      throw ConfigError("boundary data must have exactly m entries");
    const int n = spec.space_dim();
    for (const auto& e : entries) {
      if (e.space.kind == SpatialKind::Gaussian && static_cast<int>(e.space.center.size()) != n)
        throw ConfigError("gaussian center dimension does not match n");
      if (e.space.kind == SpatialKind::Sampled && static_cast<int>(e.space.sampled.dim()) != n)
        throw ConfigError("sampled data dimension does not match n");
      if (transient && e.space.kind != SpatialKind::Zero && e.time.kind == TimeKind::None)
        throw ConfigError("transient data requires a time profile");
    }
  }
};

// ---------------------------------------------------------------------------
// Grids and fields.

struct Grid {
  std::vector<std::vector<double>> x;  // one axis per space dimension
  std::vector<double> y;
  std::vector<double> t;               // empty for elliptic solves

  std::size_t size() const {
    std::size_t s = y.size() * std::max<std::size_t>(t.size(), 1);
    for (const auto& a : x) s *= a.size();
    return s;
  }

  void validate(int n) const {
    if (static_cast<int>(x.size()) != n) throw ConfigError("grid needs one x axis per space dimension");
    if (y.empty()) throw ConfigError("grid needs a y axis");
    for (double v : y)
      if (!(v > 0.0)) throw ConfigError("grid y values must be positive");
    for (double v : t)
      if (!(v > 0.0)) throw ConfigError("grid t values must be positive");
  }
};

struct FieldPoint {
  std::vector<double> x;
  double y = 0.0;
  std::optional<double> t;
  complex value{};
  double error = 0.0;
  bool converged = true;
};

struct Field {
  std::string spec;
  std::vector<FieldPoint> points;

  bool all_converged() const {
    return std::all_of(points.begin(), points.end(), [](const FieldPoint& p) { return p.converged; });
  }
};

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 17);
  return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& os, const Field& f) {
  if (f.points.empty()) return;
  const auto& p0 = f.points.front();
  for (std::size_t d = 0; d < p0.x.size(); ++d) os << "x" << (d + 1) << ",";
  os << "y,";
  if (p0.t) os << "t,";
  os << "re,im,err\n";
  for (const auto& p : f.points) {
    for (double v : p.x) os << format_double(v) << ",";
    os << format_double(p.y) << ",";
    if (p.t) os << format_double(*p.t) << ",";
    os << format_double(p.value.real()) << "," << format_double(p.value.imag()) << "," << format_double(p.error)
       << "\n";
  }
}

inline nlohmann::json to_json(const Field& f) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : f.points) {
    nlohmann::json j{{"x", p.x}, {"y", p.y}, {"value", {p.value.real(), p.value.imag()}}, {"err", p.error}};
    if (p.t) j["t"] = *p.t;
    pts.push_back(std::move(j));
  }
  return {{"spec", f.spec}, {"points", pts}};
}

/// Parses boundary samples: columns x1..xn, y, [t], re, im, err. Rows must
/// cover a full tensor grid in x; y, t and err are ignored.
inline SampledGrid read_sampled_csv(std::istream& in, int n) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty sample file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  auto col = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  };
  std::vector<int> xcols;
  for (int d = 1; d <= n; ++d) {
    const int c = col("x" + std::to_string(d));
    if (c < 0) throw ConfigError("sample file lacks column x" + std::to_string(d));
    xcols.push_back(c);
  }
  const int re_col = col("re");
  const int im_col = col("im");
  if (re_col < 0) throw ConfigError("sample file lacks column re");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("malformed number in sample file: " + cell);
      }
    }
    if (row.size() < header.size()) throw ConfigError("short row in sample file");
    rows.push_back(std::move(row));
  }

  SampledGrid g;
  g.axes.resize(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    auto& a = g.axes[static_cast<std::size_t>(d)];
    for (const auto& r : rows) a.push_back(r[static_cast<std::size_t>(xcols[static_cast<std::size_t>(d)])]);
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    if (a.size() < 2) throw ConfigError("sampled data needs at least two nodes per axis");
  }
  std::size_t total = 1;
  for (const auto& a : g.axes) total *= a.size();
  if (rows.size() != total) throw ConfigError("sample rows do not form a full tensor grid");
  g.values.assign(total, 0.0);
  std::vector<bool> seen(total, false);
  for (const auto& r : rows) {
    std::size_t flat = 0;
    for (int d = 0; d < n; ++d) {
      const auto& a = g.axes[static_cast<std::size_t>(d)];
      const double v = r[static_cast<std::size_t>(xcols[static_cast<std::size_t>(d)])];
      flat = flat * a.size() + static_cast<std::size_t>(std::lower_bound(a.begin(), a.end(), v) - a.begin());
    }
    if (seen[flat]) throw ConfigError("duplicate node in sample file");
    seen[flat] = true;
    g.values[flat] = complex(r[static_cast<std::size_t>(re_col)],
                             im_col >= 0 ? r[static_cast<std::size_t>(im_col)] : 0.0);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Solvers.

struct SolverOptions {
  QuadratureOptions quad{1e-10, 1e-14, 2000, false};
  double ramp = 1e-2;          // Heaviside mollification width
  double gaussian_reach = 10;  // Gaussian data integrated over center +- reach * width
  double fail_tol = 1e-6;      // a point is unconverged if err > fail_tol * max(1, |u|)
  unsigned threads = 1;
};

struct PointValue {
  complex value{};
  double error = 0.0;
};

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  threads = std::max(1U, threads);
  if (threads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

namespace detail {

// e^{-a} I_0(a) for a >= 0.
inline double scaled_bessel_i0(double a) {
  if (a < 700.0) return boost::math::cyl_bessel_i(0, a) * std::exp(-a);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 8; ++k) {
    term *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * a);
    sum += term;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * a);
}

// Integral of the data over the sphere |x' - x| = rho.
inline complex sphere_integral(const SpatialData& g, const std::vector<double>& x, double rho) {
  const int n = static_cast<int>(x.size());
  if (g.kind == SpatialKind::Constant) return g.amplitude * unit_sphere_area(n);
  double d2 = 0.0;
  for (int i = 0; i < n; ++i) d2 += (x[i] - g.center[i]) * (x[i] - g.center[i]);
  const double d = std::sqrt(d2);
  const double w2 = g.width * g.width;
  const double a = rho * d / w2;
  const double base = std::exp(-(d - rho) * (d - rho) / (2.0 * w2));
  double mean = 0.0;
  switch (n) {
    case 1: mean = 1.0 + std::exp(-2.0 * a); break;
    case 2: mean = 2.0 * std::numbers::pi * scaled_bessel_i0(a); break;
    case 3: mean = 4.0 * std::numbers::pi * (a < 1e-8 ? 1.0 - a : -std::expm1(-2.0 * a) / (2.0 * a)); break;
    default: throw ConfigError("solves support n <= 3");
  }
  return g.amplitude * base * mean;
}

// Inner levels of a nested quadrature run two digits tighter so their noise
// stays below the outer tolerance.
inline QuadratureOptions inner_options(QuadratureOptions q) {
  q.rel_tol *= 1e-2;
  q.abs_tol *= 1e-2;
  q.throw_on_failure = false;
  return q;
}

// Nested integral over a box of f(x'); the accumulated error of inner levels
// is bounded by their largest estimate times the outer length.
template <class F>
QuadratureResult<complex> integrate_box(F&& f, const std::vector<double>& lo, const std::vector<double>& hi,
                                        const std::vector<std::vector<double>>& breaks, const QuadratureOptions& q) {
  const std::size_t n = lo.size();
  std::vector<double> xp(n, 0.0);
  std::function<QuadratureResult<complex>(std::size_t)> level = [&](std::size_t d) {
    double worst_inner = 0.0;
    bool inner_ok = true;
    auto r = integrate(
        [&](double v) -> complex {
          xp[d] = v;
          if (d + 1 == n) return f(xp);
          auto in = level(d + 1);
          worst_inner = std::max(worst_inner, in.error);
          inner_ok = inner_ok && in.converged;
          return in.value;
        },
        lo[d], hi[d], breaks[d], d == 0 ? q : inner_options(q));
    r.error += worst_inner * (hi[d] - lo[d]);
    r.converged = r.converged && inner_ok;
    return r;
  };
  return level(0);
}

}  // namespace detail

/// Convolution of a family of kernels E_j with Dirichlet data. Kernel
/// y-derivatives are formed symbolically so traces need no differencing.
class DirichletSolver {
 public:
  DirichletSolver(KernelSpec spec, BoundaryData data, SolverOptions opt = {})
      : spec_(std::move(spec)), data_(std::move(data)), opt_(opt) {
    spec_.validate();
    if (spec_.is_hyperbolic()) throw ConfigError("Dirichlet solves need an elliptic family");
    if (spec_.n > 3) throw ConfigError("solves support n <= 3");
    data_.validate(spec_, false);
    for (int j = 0; j < spec_.m; ++j) {
      KernelSpec s = spec_;
      s.j = j;
      kernels_.push_back({build_kernel(s)});
    }
  }

  const KernelSpec& spec() const { return spec_; }
  const SolverOptions& options() const { return opt_; }

  /// d_y^k u at (x, y).
  QuadratureResult<complex> value(const std::vector<double>& x, double y, int k = 0) const {
    if (!(y > 0.0)) throw DomainError("solution is evaluated at y > 0");
    QuadratureResult<complex> total;
    for (int j = 0; j < spec_.m; ++j) {
      const SpatialData& g = data_.entries[static_cast<std::size_t>(j)].space;
      if (g.kind == SpatialKind::Zero) continue;
      const RadialExpr& e = kernel_derivative(j, k);
      if (e.is_zero()) continue;
      total += convolve(e, g, x, y);
    }
    return total;
  }

  Field solve(const Grid& grid) const {
    grid.validate(spec_.n);
    if (!grid.t.empty()) throw ConfigError("Dirichlet solves take no t axis");
    std::vector<FieldPoint> pts = enumerate(grid);
    parallel_for(pts.size(), opt_.threads, [&](std::size_t i) {
      auto r = value(pts[i].x, pts[i].y);
      pts[i].value = r.value;
      pts[i].error = r.error;
      pts[i].converged = r.converged && r.error <= opt_.fail_tol * std::max(1.0, std::abs(r.value));
    });
    return Field{spec_.describe(), std::move(pts)};
  }

  static std::vector<FieldPoint> enumerate(const Grid& grid) {
    std::vector<FieldPoint> pts;
    const std::size_t n = grid.x.size();
    std::vector<std::size_t> idx(n, 0);
    const std::vector<double> no_t{0.0};
    const auto& taxis = grid.t.empty() ? no_t : grid.t;
    while (true) {
      std::vector<double> x(n);
      for (std::size_t d = 0; d < n; ++d) x[d] = grid.x[d][idx[d]];
      for (double y : grid.y)
        for (double t : taxis) {
          FieldPoint p;
          p.x = x;
          p.y = y;
          if (!grid.t.empty()) p.t = t;
          pts.push_back(std::move(p));
        }
      std::size_t d = n;
      while (d > 0) {
        --d;
        if (++idx[d] < grid.x[d].size()) break;
        idx[d] = 0;
        if (d == 0) return pts;
      }
      if (n == 0) return pts;
    }
  }

 private:
  const RadialExpr& kernel_derivative(int j, int k) const {
    std::lock_guard lock(mutex_);
    auto& chain = kernels_[static_cast<std::size_t>(j)];
    while (static_cast<int>(chain.size()) <= k) chain.push_back(d_y(chain.back()));
    return chain[static_cast<std::size_t>(k)];
  }

  QuadratureResult<complex> convolve(const RadialExpr& e, const SpatialData& g, const std::vector<double>& x,
                                     double y) const {
    const int n = spec_.n;
    auto kernel = [&](double rho) { return evaluate(e, Point{rho, y, std::nullopt}); };
    if (g.kind == SpatialKind::Sampled) {
      std::vector<double> lo, hi;
      std::vector<std::vector<double>> breaks;
      for (int d = 0; d < n; ++d) {
        const auto& a = g.sampled.axes[static_cast<std::size_t>(d)];
        lo.push_back(a.front());
        hi.push_back(a.back());
        std::vector<double> b{x[d] - y, x[d], x[d] + y};
        if (a.size() <= 256) b.insert(b.end(), a.begin(), a.end());
        breaks.push_back(std::move(b));
      }
      return detail::integrate_box(
          [&](const std::vector<double>& xp) -> complex {
            double r2 = 0.0;
            for (int d = 0; d < n; ++d) r2 += (x[d] - xp[d]) * (x[d] - xp[d]);
            return kernel(std::sqrt(r2)) * g.sampled(xp);
          },
          lo, hi, breaks, opt_.quad);
    }
    // Radial reduction: integral over spheres centred at x.
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    std::vector<double> breaks{y, 4.0 * y, 16.0 * y};
    if (g.kind == SpatialKind::Gaussian) {
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) d2 += (x[i] - g.center[i]) * (x[i] - g.center[i]);
      const double d = std::sqrt(d2);
      const double reach = opt_.gaussian_reach * g.width;
      lo = std::max(0.0, d - reach);
      hi = d + reach;
      for (double k : {-2.0, -1.0, 0.0, 1.0, 2.0}) breaks.push_back(d + k * g.width);
    }
    return integrate(
        [&](double rho) -> complex {
          if (rho == 0.0 && n > 1) return 0.0;
          return std::pow(rho, n - 1) * kernel(rho) * detail::sphere_integral(g, x, rho);
        },
        lo, hi, breaks, opt_.quad);
  }

  KernelSpec spec_;
  BoundaryData data_;
  SolverOptions opt_;
  mutable std::vector<std::vector<RadialExpr>> kernels_;
  mutable std::mutex mutex_;
};

/// Transient Cauchy-Dirichlet solves: time convolution through pair_time,
/// space convolution by quadrature.
class TransientSolver {
 public:
  TransientSolver(KernelSpec spec, BoundaryData data, SolverOptions opt = {})
      : spec_(std::move(spec)), data_(std::move(data)), opt_(opt) {
    spec_.validate();
    if (!spec_.is_hyperbolic()) throw ConfigError("transient solves need the wave or klein-gordon family");
    if (spec_.space_dim() > 2) throw ConfigError("transient solves support space dimension <= 2");
    data_.validate(spec_, true);
    for (int j = 0; j < spec_.m; ++j) {
      KernelSpec s = spec_;
      s.j = j;
      kernels_.push_back(build_kernel(s));
    }
  }

  QuadratureResult<complex> value(const std::vector<double>& x, double y, double t) const {
    if (!(y > 0.0)) throw DomainError("solution is evaluated at y > 0");
    QuadratureResult<complex> total;
    if (t <= y) return total;  // the backward cone misses the boundary
    for (int j = 0; j < spec_.m; ++j) {
      const BoundaryEntry& b = data_.entries[static_cast<std::size_t>(j)];
      if (b.space.kind == SpatialKind::Zero) continue;
      total += convolve(kernels_[static_cast<std::size_t>(j)], b, x, y, t);
    }
    return total;
  }

  Field solve(const Grid& grid) const {
    grid.validate(spec_.space_dim());
    if (grid.t.empty()) throw ConfigError("transient solves need a t axis");
    std::vector<FieldPoint> pts = DirichletSolver::enumerate(grid);
    parallel_for(pts.size(), opt_.threads, [&](std::size_t i) {
      auto r = value(pts[i].x, pts[i].y, *pts[i].t);
      pts[i].value = r.value;
      pts[i].error = r.error;
      pts[i].converged = r.converged && r.error <= opt_.fail_tol * std::max(1.0, std::abs(r.value));
    });
    return Field{spec_.describe(), std::move(pts)};
  }

 private:
  QuadratureResult<complex> convolve(const RadialExpr& e, const BoundaryEntry& b, const std::vector<double>& x,
                                     double y, double t) const {
    const int n = spec_.space_dim();
    const TimeTestFunction psi = b.time.reversed(t, 0.5 * y, opt_.ramp);
    PairOptions popt;
    popt.quad = detail::inner_options(opt_.quad);
    auto paired = [&](double rho) { return pair_time(e, psi, rho, y, popt).value; };
    if (psi.hi <= psi.lo) return {};
    const double rho_max = std::sqrt(std::max(0.0, psi.hi * psi.hi - y * y));

    // Kinks of the paired kernel where the cone crosses breakpoints of psi.
    std::vector<double> breaks{0.25 * y, y};
    for (double tb : psi.breakpoints)
      if (tb > y) breaks.push_back(std::sqrt(tb * tb - y * y));

    if (b.space.kind == SpatialKind::Sampled) {
      std::vector<double> lo, hi;
      std::vector<std::vector<double>> bk;
      for (int d = 0; d < n; ++d) {
        const auto& a = b.space.sampled.axes[static_cast<std::size_t>(d)];
        lo.push_back(std::max(a.front(), x[d] - rho_max));
        hi.push_back(std::min(a.back(), x[d] + rho_max));
        std::vector<double> bb{x[d]};
        if (a.size() <= 256) bb.insert(bb.end(), a.begin(), a.end());
        bk.push_back(std::move(bb));
      }
      for (int d = 0; d < n; ++d)
        if (!(lo[d] < hi[d])) return {};
      return detail::integrate_box(
          [&](const std::vector<double>& xp) -> complex {
            double r2 = 0.0;
            for (int d = 0; d < n; ++d) r2 += (x[d] - xp[d]) * (x[d] - xp[d]);
            return paired(std::sqrt(r2)) * b.space.sampled(xp);
          },
          lo, hi, bk, opt_.quad);
    }
    double lo = 0.0, hi = rho_max;
    if (b.space.kind == SpatialKind::Gaussian) {
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) d2 += (x[i] - b.space.center[i]) * (x[i] - b.space.center[i]);
      const double d = std::sqrt(d2);
      const double reach = opt_.gaussian_reach * b.space.width;
      lo = std::max(0.0, d - reach);
      hi = std::min(rho_max, d + reach);
      for (double k : {-2.0, -1.0, 0.0, 1.0, 2.0}) breaks.push_back(d + k * b.space.width);
    }
    return integrate(
        [&](double rho) -> complex {
          if (rho == 0.0 && n > 1) return 0.0;
          return std::pow(rho, n - 1) * paired(rho) * detail::sphere_integral(b.space, x, rho);
        },
        lo, hi, breaks, opt_.quad);
  }

  KernelSpec spec_;
  BoundaryData data_;
  SolverOptions opt_;
  std::vector<RadialExpr> kernels_;
};

// ---------------------------------------------------------------------------
// Boundary traces.

struct TraceSample {
  std::vector<double> x;
  complex value{};
  double error = 0.0;
  bool converged = true;
};

struct TraceReport {
  int k = 0;
  std::vector<TraceSample> samples;

  double max_error() const {
    double e = 0.0;
    for (const auto& s : samples) e = std::max(e, s.error);
    return e;
  }
};

/// (x, y, k) -> d_y^k u(x, y).
using TraceEvaluator = std::function<complex(const std::vector<double>&, double, int)>;

/// Wraps a value-only evaluator (k = 0) with central differences in y of
/// fourth order, step proportional to y.
inline TraceEvaluator finite_difference_adaptor(std::function<complex(const std::vector<double>&, double)> f,
                                                double rel_step = 0.125) {
  return [f = std::move(f), rel_step](const std::vector<double>& x, double y, int k) -> complex {
    const double h = rel_step * y;
    auto at = [&](int i) { return f(x, y + i * h); };
    switch (k) {
      case 0: return f(x, y);
      case 1: return (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
      case 2: return (-at(-2) + 16.0 * at(-1) - 30.0 * at(0) + 16.0 * at(1) - at(2)) / (12.0 * h * h);
      case 3: return (-at(-3) + 8.0 * at(-2) - 13.0 * at(-1) + 13.0 * at(1) - 8.0 * at(2) + at(3)) / (8.0 * h * h * h);
      default: throw DomainError("finite-difference traces support k <= 3");
    }
  };
}

struct TraceOptions {
  double y0 = 0.4;
  int rungs = 6;
  double tolerance = 1e-3;  // per-sample flag threshold on the error estimate
};

/// Extrapolates d_y^k u to y = 0 from the ladder y0 2^{-i}, i < rungs, by
/// Neville's scheme; the error is the change between the last two orders.
inline TraceReport trace(const TraceEvaluator& f, int k, const std::vector<std::vector<double>>& xs,
                         const TraceOptions& opt = {}, unsigned threads = 1) {
  if (opt.rungs < 2) throw DomainError("trace needs at least two ladder rungs");
  TraceReport rep;
  rep.k = k;
  rep.samples.resize(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t s) {
    const auto& x = xs[s];
    const std::size_t r = static_cast<std::size_t>(opt.rungs);
    std::vector<double> h(r);
    std::vector<complex> p(r);
    for (std::size_t i = 0; i < r; ++i) {
      h[i] = opt.y0 * std::ldexp(1.0, -static_cast<int>(i));
      p[i] = f(x, h[i], k);
    }
    // Neville at 0: p[i] <- (h[i+m] p[i] - h[i] p[i+1]) / (h[i+m] - h[i])
    complex previous = p[r - 1];
    complex best = p[r - 1];
    for (std::size_t m = 1; m < r; ++m) {
      for (std::size_t i = 0; i + m < r; ++i) p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
      previous = best;
      best = p[0];
    }
    TraceSample out{x, best, std::abs(best - previous), true};
    out.converged = std::isfinite(out.error) && out.error < opt.tolerance;
    rep.samples[s] = std::move(out);
  });
  return rep;
}

inline TraceEvaluator trace_evaluator(const DirichletSolver& solver) {
  return [&solver](const std::vector<double>& x, double y, int k) { return solver.value(x, y, k).value; };
}

}  // namespace halfspace
