#include "catch_amalgamated.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include "halfspace/verification.hpp"

using namespace halfspace;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

VerifyConfig only(Family f, std::optional<int> n = {}, std::optional<int> m = {}, std::optional<int> j = {}) {
  VerifyConfig c;
  c.filter.family = f;
  c.filter.n = n;
  c.filter.m = m;
  c.filter.j = j;
  return c;
}

void require_all_pass(const std::vector<SuiteReport>& rs) {
  REQUIRE_FALSE(rs.empty());
  for (const auto& r : rs) {
    INFO(r.suite << " " << r.spec << " max_err " << r.max_err);
    CHECK(r.pass);
  }
}

}  // namespace

TEST_CASE("sample points stay in the annulus", "[verification]") {
  const auto pts = detail::sample_points(7, 200, true);
  for (const auto& p : pts) {
    const double rs = std::hypot(p.r, p.y);
    CHECK(rs >= 0.2 - 1e-12);
    CHECK(rs <= 5.0 + 1e-12);
    CHECK(p.y > 0.0);
    REQUIRE(p.t);
    CHECK(*p.t - rs >= 0.1 - 1e-12);
  }
  const auto again = detail::sample_points(7, 200, true);
  CHECK(again.front().r == pts.front().r);
}

TEST_CASE("residuals of named kernels", "[verification][residual]") {
  auto poly = residual_report({Family::Polyharmonic, 2, 3, 1}, detail::sample_points(7, 20, false));
  CHECK(poly.max_err < 1e-10);
  auto meta = residual_report({Family::Metaharmonic, 1, 2, 0, complex(2.0, 1.0)}, detail::sample_points(7, 20, false));
  CHECK(meta.max_err < 1e-8);
  auto wave = residual_report({Family::Wave, 1, 1, 0}, detail::sample_points(7, 20, true));
  CHECK(wave.max_err < 1e-8);
  auto wave2 = residual_report({Family::Wave, 2, 2, 1}, detail::sample_points(7, 20, true));
  CHECK(wave2.max_err < 1e-8);
}

TEST_CASE("residual suite on one family", "[verification][residual]") {
  require_all_pass(residual_suite(only(Family::KleinGordon)));
}

TEST_CASE("closed-form suite", "[verification]") { require_all_pass(closed_form_suite({})); }

TEST_CASE("eq2122 examples", "[verification]") {
  auto one = [](int n, int m, int j, complex p) {
    VerifyConfig c = only(Family::Metaharmonic, n, m, j);
    c.filter.param = p;
    auto rs = eq2122_suite(c);
    REQUIRE(rs.size() == 1);
    return rs.front().max_err;
  };
  CHECK(one(1, 1, 0, 1.0) < 1e-12);
  CHECK(one(3, 2, 1, 0.5) < 1e-10);
  CHECK(one(2, 3, 2, complex(2.0, 2.0)) < 1e-9);
}

TEST_CASE("Laplace pair", "[verification]") {
  CHECK_THAT(laplace_pair_integral(1, 1.0, 1.0).real(), WithinAbs(0.4210244382, 1e-9));
  CHECK_THAT(laplace_pair_integral(3, 1.0, 1.0).real(), WithinRel(boost::math::cyl_bessel_k(1, 1.0), 1e-9));
  require_all_pass(laplace_pair_suite({}));
}

TEST_CASE("Fourier slice", "[verification]") {
  const RadialExpr f = build_kernel({Family::Polyharmonic, 2, 1, 0});
  CHECK_THAT(fourier_slice_integral(f, 1.0, 0.0, 1.0),
             WithinRel(boost::math::cyl_bessel_k(1, 1.0) / std::numbers::pi, 1e-8));
  require_all_pass(fourier_slice_suite({}));
}

TEST_CASE("normalization, kg-limit and transient suites", "[verification]") {
  require_all_pass(normalization_suite({}));
  require_all_pass(kg_limit_suite({}));
  require_all_pass(transient_suite({}));
}

TEST_CASE("trace suite", "[verification][trace]") {
  require_all_pass(trace_suite(only(Family::Polyharmonic, 1, 2)));
  require_all_pass(trace_suite(only(Family::Metaharmonic, 2, 2)));
}

TEST_CASE("Cauchy data pairings", "[verification]") {
  const auto rs = cauchy_zero_suite({});
  require_all_pass(rs);
  CHECK(cauchy_pairing(RadialExpr::zero(), 1, 1e-2, 0.05, 0.03) == 0.0);
  // with the cone inside the support the pairing is visibly nonzero
  CHECK(std::abs(cauchy_pairing(build_kernel({Family::Wave, 2, 1, 0}), 2, 4e-2, 0.05, 0.03)) > 1e-3);
}

TEST_CASE("reports are deterministic", "[verification]") {
  VerifyConfig c;
  const std::string a = to_json(run_suite("residual", c)).dump();
  const std::string b = to_json(run_suite("residual", c)).dump();
  CHECK(a == b);
  c.threads = 3;
  CHECK(to_json(run_suite("residual", c)).dump() == a);
}

TEST_CASE("tampered constants are detected", "[verification]") {
  VerifyConfig c;
  c.tamper_scale = 1.001;
  CHECK_FALSE(all_pass(closed_form_suite(c)));
  CHECK_FALSE(all_pass(normalization_suite(c)));
  CHECK(all_pass(residual_suite(only(Family::Polyharmonic, 1))));
}

TEST_CASE("unknown suite", "[verification]") { CHECK_THROWS_AS(run_suite("nope", {}), ConfigError); }

TEST_CASE("report JSON schema", "[verification]") {
  const auto j = to_json(SuiteReport{"residual", "x", 20, 1e-16, 1e-8, true, "note"});
  CHECK(j.size() == 6);
  for (const char* k : {"suite", "spec", "n_points", "max_err", "tol", "pass"}) CHECK(j.contains(k));
}
