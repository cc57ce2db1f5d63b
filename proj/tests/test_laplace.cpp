// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "expchar/laplace.hpp"
#include "expchar/errors.hpp"
#include "expchar/io.hpp"

using namespace expchar;

TEST_SUITE_BEGIN("laplace");

namespace {

/// Runs every residual scan for one transform and returns the per-equation
/// max_abs values, using admissible parameters throughout.
std::vector<std::pair<std::string, double>> scan_all(const LTFunction& f, double lambda,
                                                     const EvalGrid& grid) {
  ResidualParams prm;
  prm.p = 0.3;
  prm.a = 0.2;
  prm.b = 0.8;
  prm.q = 0.6;
  prm.lambda = lambda;
  prm.p2 = 0.7;
  std::vector<std::pair<std::string, double>> out;
  for (Equation eq : {Equation::Independence, Equation::Diagonal, Equation::FixedPoint,
                      Equation::AbForms, Equation::Geometric, Equation::Regression,
                      Equation::PInvariance}) {
    const ResidualReport report = scan(eq, f, prm, grid);
    out.emplace_back(report.equation, report.max_abs);
  }
  return out;
}

}  // namespace

TEST_CASE("every residual vanishes for exponential transforms on the default grid") {
  const EvalGrid grid = default_scan_grid();
  for (double lambda : {0.25, 1.0, 4.0}) {
    const LTFunction f = LTFunction::exponential(lambda);
    for (const auto& [name, max_abs] : scan_all(f, lambda, grid)) {
      INFO(name, " lambda=", lambda);
      CHECK(max_abs < 1e-12);
    }
  }
}

TEST_CASE("point checks of the exponential solutions") {
  const LTFunction f = LTFunction::exponential(1.0);
  CHECK(std::abs(residual_independence(f, 0.3, 1, 1, 1, 2)) < 1e-14);
  CHECK(std::abs(residual_fixedpoint(f, 0.5, 2.0)) < 1e-14);
  CHECK(std::abs(residual_geometric(f, 0.3, 0.7, 2.0)) < 1e-14);   // q = 1 - p
  CHECK(std::abs(residual_geometric(f, 0.3, 0.6, 1.0)) < 1e-14);   // q != 1 - p
  CHECK(std::abs(residual_regression(f, 0.5, 1.0, 1.0)) < 1e-14);
  CHECK(std::abs(residual_p_invariance(f, 0.2, 0.8, 3.0)) < 1e-14);
  for (double lambda : {0.5, 2.0}) {
    const LTFunction g = LTFunction::exponential(lambda);
    CHECK(std::abs(residual_diagonal(g, 0.4, 3.0)) < 1e-14);
    CHECK(std::abs(residual_ab_forms(g, 0.5, 0.2, 0.8, 1.0)) < 1e-14);
  }
}

TEST_CASE("every residual vanishes at the origin") {
  const std::vector<DistSpec> roster = {DistSpec::exponential(1.0), DistSpec::gamma(2, 1),
                                        DistSpec::uniform01(), DistSpec::two_point(0.5, 2, 0.3)};
  for (const DistSpec& spec : roster) {
    const LTFunction f = LTFunction::analytic(spec);
    // powers-of-two parameters make the cancellation exact
    CHECK(residual_independence(f, 0.5, 1, 1, 0, 0) == 0.0);
    CHECK(residual_diagonal(f, 0.5, 0.0) == 0.0);
    CHECK(residual_fixedpoint(f, 0.5, 0.0) == 0.0);
    CHECK(residual_ab_forms(f, 0.5, 0.25, 0.5, 0.0) == 0.0);
    CHECK(residual_geometric(f, 0.5, 0.5, 0.0) == 0.0);
    CHECK(residual_p_invariance(f, 0.25, 0.75, 0.0) == 0.0);
    // general parameters leave at most rounding dust
    CHECK(std::abs(residual_independence(f, 0.3, 1.7, 0.9, 0, 0)) < 1e-15);
    CHECK(std::abs(residual_diagonal(f, 0.37, 0.0)) < 1e-15);
    CHECK(std::abs(residual_geometric(f, 0.3, 0.6, 0.0)) < 1e-15);
    // the origin identity for the regression residual needs lambda = E X
    CHECK(residual_regression(f, 0.3, spec.mean(), 0.0) == 0.0);
  }
}

TEST_CASE("frozen counterexample values for the gamma transform") {
  const LTFunction g = LTFunction::analytic(DistSpec::gamma(2.0, 1.0));
  // rational closed forms for f(s) = (1+s)^-2
  CHECK(residual_diagonal(g, 0.5, 1.0) == doctest::Approx(-19.0 / 1296.0).epsilon(1e-12));
  CHECK(residual_fixedpoint(g, 0.5, 1.0) == doctest::Approx(-1.0 / 36.0).epsilon(1e-12));
  CHECK(residual_regression(g, 0.5, 2.0, 1.0) == doctest::Approx(2.0 / 27.0).epsilon(1e-12));
  CHECK(residual_p_invariance(g, 0.2, 0.8, 1.0) ==
        doctest::Approx(-0.015432098765432098).epsilon(1e-12));
  CHECK(residual_ab_forms(g, 0.5, 0.2, 0.8, 1.0) ==
        doctest::Approx(-0.0085733882030178326).epsilon(1e-12));
  CHECK(std::abs(residual_independence(g, 0.5, 1, 1, 1, 1)) > 0.01);
  CHECK(std::abs(residual_ab_forms(g, 0.5, 0.2, 0.8, 1.0)) > 1e-4);
}

TEST_CASE("change of variables is an exact identity") {
  const LTFunction g = LTFunction::analytic(DistSpec::gamma(2.0, 1.0));
  const LTFunction e = LTFunction::exponential(0.7);
  for (const LTFunction* f : {&g, &e}) {
    for (double a : {0.3, 1.7}) {
      for (double b : {0.6, 2.2}) {
        for (double s : {0.25, 1.0, 3.5}) {
          const double direct = residual_independence(*f, 0.35, a, b, s, 2 * s);
          const double changed = residual_independence(*f, 0.35, 1.0, 1.0, a * s, b * (2 * s));
          REQUIRE(direct == changed);
        }
      }
    }
  }
}

TEST_CASE("scan aggregates are consistent and single points are reproduced") {
  const LTFunction g = LTFunction::analytic(DistSpec::gamma(2.0, 1.0));
  ResidualParams prm;
  prm.p = 0.5;

  const EvalGrid one(std::vector<double>{1.0});
  const ResidualReport single = scan(Equation::Diagonal, g, prm, one);
  REQUIRE(single.points.size() == 1);
  CHECK(single.points[0].value == residual_diagonal(g, 0.5, 1.0));
  CHECK(single.max_abs == std::abs(single.points[0].value));
  CHECK(single.rms == std::abs(single.points[0].value));

  const EvalGrid grid = EvalGrid::logspace(0.5, 2.0, 9);  // includes s = 1
  const ResidualReport report = scan(Equation::Diagonal, g, prm, grid);
  CHECK(report.max_abs >= 0.0146);
  double sq = 0.0;
  double mx = 0.0;
  for (const auto& pt : report.points) {
    sq += pt.value * pt.value;
    mx = std::max(mx, std::abs(pt.value));
  }
  CHECK(report.max_abs == mx);
  CHECK(report.rms == doctest::Approx(std::sqrt(sq / report.points.size())).epsilon(1e-14));

  // two-variable scans carry (s, t) points
  const ResidualReport indep = scan(Equation::Independence, g, prm, one, one);
  REQUIRE(indep.points.size() == 1);
  CHECK(indep.points[0].t.has_value());
  CHECK_THROWS_AS(scan(Equation::Diagonal, g, prm, one, one), std::invalid_argument);
}

TEST_CASE("empirical transform: normalization is exact, derivative matches") {
  const SampleBatch batch = sample(DistSpec::exponential(1.0), 50000, 161803);
  const LTFunction f = LTFunction::empirical(batch);
  CHECK(f(0.0) == 1.0);
  CHECK(f.source() == LTFunction::Source::Empirical);
  CHECK(f.has_deriv());
  // empirical derivative tracks the analytic one at the 1/sqrt(n) scale
  CHECK(f.deriv(1.0) == doctest::Approx(-0.25).epsilon(0.05));
}

TEST_CASE("empirical transform keeps every residual small at scale 1e6") {
  const SampleBatch batch = sample(DistSpec::exponential(1.0), 1000000, 2718);
  const LTFunction f = LTFunction::empirical(batch);
  const EvalGrid grid = EvalGrid::logspace(0.01, 3.0, 10);
  ResidualParams prm;
  prm.p = 0.3;
  prm.a = 0.2;
  prm.b = 0.8;
  prm.q = 0.6;
  prm.lambda = 1.0;
  prm.p2 = 0.7;
  for (Equation eq : {Equation::Independence, Equation::Diagonal, Equation::FixedPoint,
                      Equation::AbForms, Equation::Geometric, Equation::Regression,
                      Equation::PInvariance}) {
    const ResidualReport report = scan(eq, f, prm, grid);
    INFO(report.equation);
    CHECK(report.max_abs <= 5e-3);
  }
}

TEST_CASE("gamma transform violates every identity somewhere on the default grid") {
  const LTFunction g = LTFunction::analytic(DistSpec::gamma(2.0, 1.0));
  const EvalGrid grid = default_scan_grid();
  for (const auto& [name, max_abs] : scan_all(g, 2.0, grid)) {
    INFO(name);
    CHECK(max_abs > 1e-4);
  }
}

TEST_CASE("residual report serialization shapes") {
  const LTFunction g = LTFunction::analytic(DistSpec::gamma(2.0, 1.0));
  ResidualParams prm;
  const EvalGrid grid = EvalGrid::logspace(0.5, 2.0, 3);
  const auto rj = report_to_json(scan(Equation::Diagonal, g, prm, grid));
  CHECK(rj["equation"] == "diagonal");
  CHECK(rj["points"].size() == 3);
  CHECK(rj["points"][0].size() == 2);
  const auto rj2 = report_to_json(scan(Equation::Independence, g, prm, grid));
  CHECK(rj2["points"].size() == 9);
  CHECK(rj2["points"][0].size() == 3);

  const std::string csv = report_to_csv(scan(Equation::Diagonal, g, prm, grid));
  CHECK(csv.find("s,residual\n") != std::string::npos);
  CHECK(csv.find("# equation: diagonal") != std::string::npos);
}

TEST_SUITE_END();
