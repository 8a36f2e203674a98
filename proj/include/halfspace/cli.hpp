#pragma once

// Command-line front end: kernel, solve and verify subcommands.
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 evaluation domain error, 4 quadrature failure.

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kernels.hpp"
#include "solver.hpp"
#include "verification.hpp"

namespace halfspace::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kDomainError = 3, kQuadratureError = 4 };

inline double parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("not a number: '" + std::string(text) + "'");
  return v;
}

/// "2", "2+1i", "2-0.5i", "1i" or "2,1".
inline complex parse_complex(std::string text) {
  if (auto comma = text.find(','); comma != std::string::npos)
    return {parse_number(std::string_view(text).substr(0, comma)), parse_number(std::string_view(text).substr(comma + 1))};
  if (text.empty() || (text.back() != 'i' && text.back() != 'j')) return parse_number(text);
  text.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = text.size(); k-- > 1;)
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
      split = k;
      break;
    }
  auto imag = [](std::string_view s) { return s.empty() || s == "+" ? 1.0 : s == "-" ? -1.0 : parse_number(s); };
  if (split == std::string::npos) return {0.0, imag(text)};
  return {parse_number(std::string_view(text).substr(0, split)), imag(std::string_view(text).substr(split))};
}

inline complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  throw ConfigError("complex values are numbers or [re, im] arrays");
}

inline std::vector<double> parse_axis(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() == 1) return {parse_number(parts[0])};
  if (parts.size() != 3) throw ConfigError("axis must be 'value' or 'lo:hi:count': " + text);
  const double lo = parse_number(parts[0]), hi = parse_number(parts[1]);
  const double count = parse_number(parts[2]);
  if (!(count >= 1.0) || count != std::floor(count)) throw ConfigError("axis count must be a positive integer");
  const auto nn = static_cast<std::size_t>(count);
  std::vector<double> v(nn);
  for (std::size_t i = 0; i < nn; ++i)
    v[i] = nn == 1 ? lo : (i + 1 == nn ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(nn - 1));
  return v;
}

/// "x=-3:3:121,y=0.1:2:20" (x1, x2, x3 for several space axes; t optional).
inline Grid parse_grid(const std::string& text, int space_dim) {
  Grid g;
  g.x.resize(static_cast<std::size_t>(std::max(space_dim, 0)));
  std::vector<bool> seen(g.x.size(), false);
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("grid entries are name=axis: " + item);
    const std::string name = item.substr(0, eq);
    auto axis = parse_axis(item.substr(eq + 1));
    if (name == "y") {
      g.y = std::move(axis);
    } else if (name == "t") {
      g.t = std::move(axis);
    } else if (name == "x" || (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '9')) {
      const std::size_t d = name == "x" ? 0 : static_cast<std::size_t>(name[1] - '1');
      if (d >= g.x.size()) throw ConfigError("grid axis " + name + " exceeds the space dimension");
      g.x[d] = std::move(axis);
      seen[d] = true;
    } else {
      throw ConfigError("unknown grid axis: " + name);
    }
  }
  for (std::size_t d = 0; d < g.x.size(); ++d)
    if (!seen[d]) g.x[d] = {0.0};
  g.validate(space_dim);
  return g;
}

/// "bump:center:halfwidth" or "gaussian:center:sigma".
inline TimeTestFunction parse_time_probe(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError("--pair-with expects kind:center:width");
  const double c = parse_number(parts[1]), w = parse_number(parts[2]);
  if (!(w > 0.0)) throw ConfigError("--pair-with width must be positive");
  if (parts[0] == "bump") {
    if (c - w <= 0.0) throw ConfigError("--pair-with support must lie in t > 0");
    return bump(c, w);
  }
  if (parts[0] == "gaussian") {
    if (c - 12.0 * w <= 0.0) throw ConfigError("--pair-with gaussian must lie in t > 0 (center >= 12 sigma)");
    return gaussian(c, w);
  }
  throw ConfigError("unknown --pair-with kind: " + parts[0]);
}

inline SpatialData spatial_from_json(const nlohmann::json& j, int n, const std::filesystem::path& base) {
  const std::string kind = j.value("kind", "zero");
  if (kind == "zero") return SpatialData::zero();
  if (kind == "constant") return SpatialData::constant(complex_from_json(j.value("value", nlohmann::json(1.0))));
  if (kind == "gaussian") {
    auto center = j.value("center", std::vector<double>(static_cast<std::size_t>(n), 0.0));
    const double width = j.at("width").get<double>();
    if (!(width > 0.0)) throw ConfigError("gaussian width must be positive");
    return SpatialData::gaussian(std::move(center), width, complex_from_json(j.value("amplitude", nlohmann::json(1.0))));
  }
  if (kind == "samples") {
    std::filesystem::path p = j.at("file").get<std::string>();
    if (p.is_relative()) p = base / p;
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open sample file " + p.string());
    return SpatialData::from_samples(read_sampled_csv(in, n));
  }
  throw ConfigError("unknown spatial data kind: " + kind);
}

inline TimeProfile time_from_json(const nlohmann::json& j) {
  const std::string kind = j.value("kind", "none");
  if (kind == "none") return TimeProfile::none();
  if (kind == "heaviside") return TimeProfile::heaviside();
  if (kind == "gaussian_pulse") return TimeProfile::gaussian_pulse(j.at("t0").get<double>(), j.at("sigma").get<double>());
  if (kind == "samples")
    return TimeProfile::from_samples(j.at("times").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
  throw ConfigError("unknown time profile kind: " + kind);
}

/// Settings shared by the subcommands: config file first, flags on top.
struct RunConfig {
  KernelSpec spec;
  bool have_family = false;
  std::string grid;
  std::optional<std::string> pair_with;
  nlohmann::json boundary = nlohmann::json::array();
  std::filesystem::path base_dir = ".";
  SolverOptions solver;
  VerifyConfig verify;
  std::string suite;
  std::string out;
};

inline void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{"family", "n",    "m",       "j",     "xi",       "p",        "grid",
                                              "pair_with", "boundary", "tolerances", "ramp", "seed", "threads",
                                              "points", "suite", "out"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown config key: " + k);
  if (j.contains("family")) {
    auto f = family_from_string(j["family"].get<std::string>());
    if (!f) throw ConfigError("unknown family: " + j["family"].get<std::string>());
    c.spec.family = *f;
    c.have_family = true;
  }
  if (j.contains("n")) c.spec.n = j["n"].get<int>();
  if (j.contains("m")) c.spec.m = j["m"].get<int>();
  if (j.contains("j")) c.spec.j = j["j"].get<int>();
  if (j.contains("xi")) c.spec.param = complex_from_json(j["xi"]);
  if (j.contains("p")) c.spec.param = complex_from_json(j["p"]);
  if (j.contains("grid")) c.grid = j["grid"].get<std::string>();
  if (j.contains("pair_with")) c.pair_with = j["pair_with"].get<std::string>();
  if (j.contains("boundary")) c.boundary = j["boundary"];
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    c.solver.quad.rel_tol = t.value("rel", c.solver.quad.rel_tol);
    c.solver.quad.abs_tol = t.value("abs", c.solver.quad.abs_tol);
    c.solver.quad.max_panels = t.value("max_panels", c.solver.quad.max_panels);
    c.solver.fail_tol = t.value("fail", c.solver.fail_tol);
  }
  if (j.contains("ramp")) c.solver.ramp = j["ramp"].get<double>();
  if (j.contains("seed")) c.verify.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) c.solver.threads = c.verify.threads = j["threads"].get<unsigned>();
  if (j.contains("points")) c.verify.points = j["points"].get<int>();
  if (j.contains("suite")) c.suite = j["suite"].get<std::string>();
  if (j.contains("out")) c.out = j["out"].get<std::string>();
}

inline BoundaryData boundary_from_config(const RunConfig& c) {
  if (!c.boundary.is_array()) throw ConfigError("boundary must be an array with one entry per row j < m");
  BoundaryData data;
  for (const auto& e : c.boundary) {
    BoundaryEntry b;
    if (e.contains("space")) b.space = spatial_from_json(e["space"], c.spec.space_dim(), c.base_dir);
    if (e.contains("time")) b.time = time_from_json(e["time"]);
    data.entries.push_back(std::move(b));
  }
  return data;
}

// ---------------------------------------------------------------------------

namespace detail {

inline void write_output(const std::string& path, const std::string& body, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << body;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << body;
}

inline void write_sidecar(const std::string& path, const std::string& command, double seconds, unsigned threads) {
  if (path.empty() || path == "-") return;
  nlohmann::json meta{{"command", command},
                      {"elapsed_seconds", seconds},
                      {"threads", threads},
                      {"finished_unix", std::chrono::duration_cast<std::chrono::seconds>(
                                            std::chrono::system_clock::now().time_since_epoch())
                                            .count()}};
  std::ofstream(path + ".meta.json") << meta.dump(2) << "\n";
}

inline bool wants_json(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

inline std::string render_field(const Field& f, const std::string& path) {
  if (wants_json(path)) return to_json(f).dump(2) + "\n";
  std::ostringstream os;
  write_csv(os, f);
  return os.str();
}

}  // namespace detail

inline int cmd_kernel(const RunConfig& c, std::ostream& out) {
  if (!c.have_family) throw ConfigError("--family is required");
  c.spec.validate();
  if (c.grid.empty()) throw ConfigError("--grid is required");
  const Grid grid = parse_grid(c.grid, c.spec.space_dim());
  std::optional<TimeTestFunction> probe;
  if (c.pair_with) probe = parse_time_probe(*c.pair_with);
  if (!c.spec.is_hyperbolic() && (!grid.t.empty() || probe))
    throw ConfigError("elliptic kernels take neither a t axis nor --pair-with");
  if (probe && !grid.t.empty()) throw ConfigError("--pair-with replaces the t axis");

  const RadialExpr e = build_kernel(c.spec);
  std::vector<FieldPoint> pts = DirichletSolver::enumerate(grid);
  parallel_for(pts.size(), c.solver.threads, [&](std::size_t i) {
    auto& p = pts[i];
    double r2 = 0.0;
    for (double v : p.x) r2 += v * v;
    const double r = std::sqrt(r2);
    if (probe) {
      auto pr = pair_time(e, *probe, r, p.y);
      p.value = pr.value;
      p.error = pr.error;
    } else {
      p.value = evaluate(e, Point{r, p.y, p.t});
    }
  });
  detail::write_output(c.out, detail::render_field(Field{c.spec.describe(), std::move(pts)}, c.out), out);
  return kOk;
}

inline int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.have_family) throw ConfigError("family is required");
  c.spec.validate();
  if (c.grid.empty()) throw ConfigError("grid is required");
  const BoundaryData data = boundary_from_config(c);
  const Grid grid = parse_grid(c.grid, c.spec.space_dim());
  Field field;
  if (c.spec.is_hyperbolic())
    field = TransientSolver(c.spec, data, c.solver).solve(grid);
  else
    field = DirichletSolver(c.spec, data, c.solver).solve(grid);
  detail::write_output(c.out, detail::render_field(field, c.out), out);
  if (!field.all_converged()) {
    std::size_t bad = 0;
    for (const auto& p : field.points) bad += p.converged ? 0 : 1;
    err << "error: quadrature did not reach tolerance at " << bad << " of " << field.points.size() << " points\n";
    return kQuadratureError;
  }
  return kOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
  if (c.suite.empty()) throw ConfigError("suite name is required");
  if (c.suite != "all" && std::find(suite_names().begin(), suite_names().end(), c.suite) == suite_names().end())
    throw ConfigError("unknown suite: " + c.suite);
  if (c.verify.points < 1) throw ConfigError("points must be positive");
  const auto reports = run_suite(c.suite, c.verify);
  std::size_t passed = 0;
  for (const auto& r : reports) {
    out << (r.pass ? "PASS " : "FAIL ") << r.suite << " | " << r.spec << " | max_err " << format_double(r.max_err)
        << " tol " << r.tol;
    if (!r.note.empty()) out << " | " << r.note;
    out << "\n";
    passed += r.pass ? 1 : 0;
  }
  out << passed << "/" << reports.size() << " passed\n";
  if (!c.out.empty() && c.out != "-") detail::write_output(c.out, to_json(reports).dump(2) + "\n", out);
  return reports.empty() || passed != reports.size() ? kVerifyFailed : kOk;
}

// ---------------------------------------------------------------------------

/// Runs the CLI on argv (argv[0] is the program name).
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Half-space Poisson kernels: evaluation, solves and verification"};
  app.require_subcommand(1);

  std::string config_path, out_path, family, grid, pair_with, xi, p, suite;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<int> n, m, j, points;
  std::optional<double> tamper;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_path, "output path (stdout if omitted)");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1U, 256U));
  };
  auto spec_flags = [&](CLI::App* sub) {
    sub->add_option("--family", family, "polyharmonic | metaharmonic | wave | klein-gordon");
    sub->add_option("-n", n, "space dimension");
    sub->add_option("-m", m, "operator power");
    sub->add_option("-j", j, "kernel index");
    sub->add_option("--xi", xi, "spectral shift (real)");
    sub->add_option("--p", p, "complex parameter, e.g. 2+1i");
  };

  auto* kernel = app.add_subcommand("kernel", "evaluate a kernel on a grid");
  common(kernel);
  spec_flags(kernel);
  kernel->add_option("--grid", grid, "e.g. x=-3:3:121,y=0.1:2:20[,t=...]");
  kernel->add_option("--pair-with", pair_with, "time probe bump:center:halfwidth or gaussian:center:sigma");

  auto* solve = app.add_subcommand("solve", "solve a boundary-value problem");
  common(solve);
  spec_flags(solve);
  solve->add_option("--grid", grid, "evaluation grid");

  auto* verify = app.add_subcommand("verify", "run verification suites");
  common(verify);
  spec_flags(verify);
  verify->add_option("suite", suite, "residual | closed-form | eq2122 | normalization | trace | laplace-pair | "
                                     "fourier-slice | transient | cauchy-zero | kg-limit | all");
  verify->add_option("--points", points, "sample points per spec");
  verify->add_option("--tamper-scale", tamper)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  const auto started = std::chrono::steady_clock::now();
  std::string command;
  try {
    RunConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config " + config_path);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
      c.base_dir = std::filesystem::path(config_path).parent_path();
      if (c.base_dir.empty()) c.base_dir = ".";
      apply_json(c, doc);
    }
    if (!family.empty()) {
      auto f = family_from_string(family);
      if (!f) throw ConfigError("unknown family: " + family);
      c.spec.family = *f;
      c.have_family = true;
    }
    if (n) c.spec.n = *n;
    if (m) c.spec.m = *m;
    if (j) c.spec.j = *j;
    if (!xi.empty()) c.spec.param = parse_number(xi);
    if (!p.empty()) c.spec.param = parse_complex(p);
    if (!grid.empty()) c.grid = grid;
    if (!pair_with.empty()) c.pair_with = pair_with;
    if (!out_path.empty()) c.out = out_path;
    if (seed) c.verify.seed = *seed;
    if (threads) c.solver.threads = c.verify.threads = *threads;
    if (points) c.verify.points = *points;
    if (tamper) c.verify.tamper_scale = *tamper;
    if (!suite.empty()) c.suite = suite;

    int code = kOk;
    if (kernel->parsed()) {
      command = "kernel";
      code = cmd_kernel(c, out);
    } else if (solve->parsed()) {
      command = "solve";
      code = cmd_solve(c, out, err);
    } else {
      command = "verify";
      if (c.have_family) c.verify.filter.family = c.spec.family;
      if (n) c.verify.filter.n = *n;
      if (m) c.verify.filter.m = *m;
      if (j) c.verify.filter.j = *j;
      if (!xi.empty() || !p.empty()) c.verify.filter.param = c.spec.param;
      code = cmd_verify(c, out);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    detail::write_sidecar(c.out, command, seconds, c.solver.threads);
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << "\n";
    return kConfigError;
  } catch (const EvaluationError& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const QuadratureError& e) {
    err << "error: " << e.what() << "\n";
    return kQuadratureError;
  }
}

}  // namespace halfspace::cli
