#include "catch_amalgamated.hpp"

#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "halfspace/solver.hpp"

using namespace halfspace;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

BoundaryData single(int m, int j, SpatialData g, TimeProfile h = {}) {
  BoundaryData d;
  d.entries.resize(static_cast<std::size_t>(m));
  d.entries[static_cast<std::size_t>(j)] = {std::move(g), std::move(h)};
  return d;
}

}  // namespace

TEST_CASE("Poisson convolution with Gaussian data", "[solver]") {
  const double w = 0.4;
  DirichletSolver solver({Family::Polyharmonic, 1, 1, 0}, single(1, 0, SpatialData::gaussian({0.2}, w)));
  for (auto [x, y] : {std::pair{0.0, 0.3}, std::pair{1.1, 0.8}}) {
    // int y / (pi ((x - x')^2 + y^2)) exp(-(x' - 0.2)^2 / (2 w^2)) dx'
    const double want = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double xp) {
          return y / (pi * ((x - xp) * (x - xp) + y * y)) * std::exp(-(xp - 0.2) * (xp - 0.2) / (2 * w * w));
        },
        -30.0, 30.0, 20, 1e-14);
    CHECK_THAT(solver.value({x}, y).value.real(), WithinRel(want, 1e-9));
  }
}

TEST_CASE("constant data reproduces exp(-xi y)", "[solver]") {
  DirichletSolver solver({Family::Metaharmonic, 2, 1, 0, complex(1.5)}, single(1, 0, SpatialData::constant(2.0)));
  for (double y : {0.3, 1.0, 2.5}) CHECK_THAT(solver.value({0.1, -0.4}, y).value.real(), WithinRel(2.0 * std::exp(-1.5 * y), 1e-9));
}

TEST_CASE("zero data gives a zero field", "[solver]") {
  DirichletSolver solver({Family::Polyharmonic, 1, 2, 0}, single(2, 0, SpatialData::zero()));
  Grid g{{{-1.0, 0.0, 1.0}}, {0.5, 1.0}, {}};
  const Field f = solver.solve(g);
  REQUIRE(f.points.size() == 6);
  for (const auto& p : f.points) CHECK(p.value == complex(0.0));
}

TEST_CASE("sampled data follows the analytic Gaussian", "[solver]") {
  const double w = 0.5;
  SampledGrid grid;
  std::vector<double> axis;
  for (int i = 0; i <= 400; ++i) axis.push_back(-5.0 + 0.025 * i);
  grid.axes = {axis};
  for (double v : axis) grid.values.push_back(std::exp(-v * v / (2 * w * w)));
  const KernelSpec spec{Family::Polyharmonic, 1, 1, 0};
  DirichletSolver a(spec, single(1, 0, SpatialData::gaussian({0.0}, w)));
  DirichletSolver b(spec, single(1, 0, SpatialData::from_samples(grid)));
  for (double x : {0.0, 0.7})
    CHECK_THAT(b.value({x}, 0.6).value.real(), WithinAbs(a.value({x}, 0.6).value.real(), 2e-4));
}

TEST_CASE("boundary traces form the identity table", "[solver][trace]") {
  const double w = 0.5;
  for (int j = 0; j < 2; ++j) {
    DirichletSolver solver({Family::Polyharmonic, 1, 2, j}, single(2, j, SpatialData::gaussian({0.0}, w)));
    for (int k = 0; k < 2; ++k) {
      const auto rep = trace(trace_evaluator(solver), k, {{0.0}, {0.6}});
      for (const auto& s : rep.samples) {
        const double want = j == k ? std::exp(-s.x[0] * s.x[0] / (2 * w * w)) : 0.0;
        CHECK_THAT(s.value.real(), WithinAbs(want, 1e-4));
      }
    }
  }
}

TEST_CASE("difference adaptor agrees with symbolic derivatives", "[solver][trace]") {
  DirichletSolver solver({Family::Metaharmonic, 1, 2, 0, complex(1.0)},
                         single(2, 0, SpatialData::gaussian({0.0}, 0.5)));
  auto fd = finite_difference_adaptor([&](const std::vector<double>& x, double y) { return solver.value(x, y).value; });
  const auto exact = trace_evaluator(solver);
  for (int k = 1; k <= 2; ++k) CHECK(std::abs(fd({0.3}, 0.5, k) - exact({0.3}, 0.5, k)) < 1e-4);
}

TEST_CASE("transient step response in one dimension", "[solver][transient]") {
  const double w = 1e-2;
  const double amp = 1.0 / (std::sqrt(2 * pi) * w);
  TransientSolver solver({Family::Wave, 1, 1, 0},
                         single(1, 0, SpatialData::gaussian({0.0}, w, amp), TimeProfile::heaviside()));
  CHECK_THAT(solver.value({0.0}, 1.0, 2.0).value.real(), WithinAbs(2.0 / (pi * std::sqrt(3.0)), 1e-3));
  CHECK(solver.value({0.0}, 1.0, 0.9).value == complex(0.0));
}

TEST_CASE("transient Gaussian pulse vanishes before arrival", "[solver][transient]") {
  TransientSolver solver({Family::Wave, 1, 1, 0},
                         single(1, 0, SpatialData::gaussian({0.0}, 0.05), TimeProfile::gaussian_pulse(1.0, 0.1)));
  // the pulse leaves the boundary near t = 0.2 and needs time 2 to arrive
  CHECK(std::abs(solver.value({0.0}, 2.0, 2.1).value) < 1e-12);
  CHECK(std::abs(solver.value({0.0}, 1.0, 2.2).value) > 1e-3);
}

TEST_CASE("CSV output and sample input", "[solver][io]") {
  Field f{"x", {FieldPoint{{0.5}, 1.0, std::nullopt, complex(1.0 / 3.0, -2.0), 1e-12, true}}};
  std::ostringstream os;
  write_csv(os, f);
  const std::string text = os.str();
  CHECK(text.rfind("x1,y,re,im,err\n", 0) == 0);
  CHECK(text.find("3.33333333333333315e-01") != std::string::npos);
  CHECK(std::stod(format_double(0.1)) == 0.1);

  std::istringstream in("x1,re,im\n0,1,0\n1,2,0\n2,4,1\n");
  const SampledGrid g = read_sampled_csv(in, 1);
  CHECK(g({0.5}) == complex(1.5));
  CHECK(g({1.5}) == complex(3.0, 0.5));
  CHECK(g({3.0}) == complex(0.0));
  std::istringstream dup("x1,re\n0,1\n0,2\n");
  CHECK_THROWS_AS(read_sampled_csv(dup, 1), ConfigError);
}

TEST_CASE("solver configuration errors", "[solver]") {
  CHECK_THROWS_AS(DirichletSolver({Family::Wave, 1, 1, 0}, single(1, 0, SpatialData::constant(1.0))), ConfigError);
  CHECK_THROWS_AS(DirichletSolver({Family::Polyharmonic, 1, 2, 0}, single(1, 0, SpatialData::constant(1.0))),
                  ConfigError);
  CHECK_THROWS_AS(TransientSolver({Family::Wave, 1, 1, 0}, single(1, 0, SpatialData::constant(1.0))), ConfigError);
  CHECK_THROWS_AS(TimeProfile::gaussian_pulse(0.1, 0.1), ConfigError);
  Grid g{{{0.0}}, {0.0}, {}};
  CHECK_THROWS_AS(g.validate(1), ConfigError);
  DirichletSolver ok({Family::Polyharmonic, 1, 1, 0}, single(1, 0, SpatialData::constant(1.0)));
  CHECK_THROWS_AS(ok.value({0.0}, -1.0), DomainError);
}
