// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "expchar/errors.hpp"
#include "expchar/forms.hpp"
#include "expchar/parallel.hpp"
#include "expchar/stats.hpp"
#include "oracles.hpp"

using namespace expchar;

namespace {

double pvalue_of(const TestResult& r) {
  return std::visit(
      [](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MonteCarloQuantile>) return c.pvalue;
        else return c.pvalue;
      },
      r.calibration);
}

PairedSample scale_pairs(const PairedSample& pairs, double t) {
  PairedSample out = pairs;
  for (double& v : out.left) v *= t;
  for (double& v : out.right) v *= t;
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("stats");

TEST_CASE("ks: identical batches give D = 0") {
  const SampleBatch x = sample(DistSpec::exponential(1.0), 5000, 10);
  const SampleBatch y = sample(DistSpec::exponential(1.0), 5000, 10);
  const TestResult r = ks_two_sample(x, y, 0.05);
  CHECK(r.statistic == 0.0);
  CHECK(r.decision == Decision::Consistent);
  CHECK(pvalue_of(r) == 1.0);
}

TEST_CASE("ks: mixed exponential form is consistent with fresh draws") {
  const std::size_t n = 100000;
  const SampleBatch mixed = simulate_mixed(DistSpec::exponential(1.0), 0.3, n, 100);
  const SampleBatch fresh = sample(DistSpec::exponential(1.0), n, 101);
  CHECK(ks_two_sample(mixed, fresh, 0.01).decision == Decision::Consistent);
}

TEST_CASE("ks: exponential vs gamma separates at the oracle's sup-distance") {
  // CDF oracle: sup_x |F_exp - F_gamma| = sup x e^{-x} = 1/e at x = 1
  double sup = 0.0;
  for (int i = 1; i < 800; ++i) {
    const double x = i * 0.01;
    sup = std::max(sup, std::abs(oracles::cdf(DistSpec::exponential(1.0), x) -
                                 oracles::cdf(DistSpec::gamma(2.0, 1.0), x)));
  }
  CHECK(sup == doctest::Approx(std::exp(-1.0)).epsilon(1e-4));

  const std::size_t n = 10000;
  const SampleBatch x = sample(DistSpec::exponential(1.0), n, 110);
  const SampleBatch y = sample(DistSpec::gamma(2.0, 1.0), n, 111);
  const TestResult r = ks_two_sample(x, y, 0.01);
  CHECK(r.decision == Decision::Rejected);
  CHECK(r.statistic == doctest::Approx(sup).epsilon(0.08));
}

TEST_CASE("ks: refuses coupled columns") {
  const PairedSample coupled = simulate_pair_transform(DistSpec::exponential(1.0), 0.5, 2000, 7);
  CHECK_THROWS_AS(ks_two_sample(coupled, 0.05), MisuseError);
  const PairedSample indep = simulate_ab_forms(DistSpec::exponential(1.0), 0.5, 0.2, 0.8, 2000, 7);
  CHECK_NOTHROW(ks_two_sample(indep, 0.05));
}

TEST_CASE("ks statistic is exactly scale invariant") {
  const SampleBatch x = sample(DistSpec::gamma(2.0, 1.0), 20000, 120);
  const SampleBatch y = sample(DistSpec::exponential(2.0), 20000, 121);
  const double d = ks_statistic(x.values, y.values);
  for (double t : {0.5, 2.0, 4.0}) {
    std::vector<double> xs = x.values;
    std::vector<double> ys = y.values;
    for (double& v : xs) v *= t;
    for (double& v : ys) v *= t;
    REQUIRE(ks_statistic(xs, ys) == d);
  }
}

TEST_CASE("factorization: preconditions and degenerate input") {
  const PairedSample small = simulate_pair_transform(DistSpec::exponential(1.0), 0.5, 500, 1);
  CHECK_THROWS_AS(lt_factorization_test(small, default_factorization_grid(), 199, 0.05, 2),
                  ParameterDomainError);
  const PairedSample pairs = simulate_pair_transform(DistSpec::exponential(1.0), 0.5, 2000, 1);
  CHECK_THROWS_AS(lt_factorization_test(pairs, default_factorization_grid(), 99, 0.05, 2),
                  ParameterDomainError);
  const PairedSample degenerate{std::vector<double>(2000, 1.0), std::vector<double>(2000, 2.0),
                                Coupling::Coupled, DistSpec::two_point(1, 1, 0.5), 1};
  CHECK_THROWS_AS(lt_factorization_test(degenerate, default_factorization_grid(), 199, 0.05, 2),
                  DegenerateSampleError);
}

TEST_CASE("factorization: exponential coupled forms are independent") {
  const PairedSample pairs = simulate_L1L2(DistSpec::exponential(1.0), 0.5, 1, 1, 100000, 130);
  const TestResult r = lt_factorization_test(pairs, default_factorization_grid(), 499, 0.01, 131);
  CHECK(r.decision == Decision::Consistent);
  CHECK(std::get<PermutationPValue>(r.calibration).n_perm == 499);
}

TEST_CASE("factorization: gamma coupled forms are dependent") {
  int rejected = 0;
  std::vector<int> flags(10, 0);
  parallel_for(10, [&flags](std::size_t i) {
    const PairedSample pairs = simulate_L1L2(DistSpec::gamma(2.0, 1.0), 0.5, 1, 1, 100000,
                                             rng::derive_seed(140, "gamma_power", i));
    const TestResult r =
        lt_factorization_test(pairs, default_factorization_grid(), 199, 0.01, 141 + i);
    flags[i] = r.decision == Decision::Rejected ? 1 : 0;
  });
  for (int f : flags) rejected += f;
  CHECK(rejected == 10);
}

TEST_CASE("factorization: null p-values are uniform on already-shuffled pairs") {
  const int runs = 200;
  std::vector<double> pvalues(runs);
  parallel_for(runs, [&pvalues](std::size_t i) {
    // independent columns constructed directly: coupling already broken
    PairedSample shuffled{
        sample(DistSpec::exponential(1.0), 1000, rng::derive_seed(150, "left", i)).values,
        sample(DistSpec::exponential(1.0), 1000, rng::derive_seed(150, "right", i)).values,
        Coupling::Coupled, DistSpec::exponential(1.0), 150};
    const TestResult r =
        lt_factorization_test(shuffled, default_factorization_grid(), 199, 0.05, 151 + i);
    pvalues[i] = pvalue_of(r);
  });
  // KS against uniform at alpha = 0.01: critical value 1.628/sqrt(200)
  CHECK(oracles::ks_uniform01(pvalues) < 1.628 / std::sqrt(200.0));
}

TEST_CASE("factorization statistic is exactly invariant under paired rescaling") {
  const PairedSample pairs = simulate_L1L2(DistSpec::exponential(1.0), 0.5, 1, 1, 5000, 160);
  // data scaled by t with the transform grid scaled by 1/t reproduces the
  // statistic bit for bit (t a power of two)
  const double t = 2.0;
  const PairedSample scaled = scale_pairs(pairs, t);
  const EvalGrid base_grid = default_factorization_grid();
  std::vector<double> pts;
  for (double s : base_grid.points()) pts.push_back(s / t);
  const EvalGrid scaled_grid(std::move(pts));
  const TestResult base =
      lt_factorization_test(pairs, default_factorization_grid(), 199, 0.05, 161);
  const TestResult mirrored = lt_factorization_test(scaled, scaled_grid, 199, 0.05, 161);
  CHECK(base.statistic == mirrored.statistic);
  CHECK(pvalue_of(base) == pvalue_of(mirrored));
}

TEST_CASE("regression: exponential data is consistent") {
  const PairedSample pairs = simulate_pair_transform(DistSpec::exponential(1.0), 0.5, 100000, 172);
  const TestResult r = regression_constancy_test(pairs, 0.5, 10, 0.01, 399, 171);
  CHECK(r.decision == Decision::Consistent);
  CHECK(std::get<MonteCarloQuantile>(r.calibration).n_mc == 399);
}

TEST_CASE("regression: the uniform law fails constancy (conditional-mean oracle first)") {
  // brute-force conditional means E[right | left in bin] for Uniform01, p = 1/2
  const int cells = 1200;
  const double w = 1.0 / (static_cast<double>(cells) * cells);
  double num[5] = {0, 0, 0, 0, 0};
  double den[5] = {0, 0, 0, 0, 0};
  for (int ix = 0; ix < cells; ++ix) {
    const double x = (ix + 0.5) / cells;
    for (int iy = 0; iy < cells; ++iy) {
      const double y = (iy + 0.5) / cells;
      for (int eps = 0; eps < 2; ++eps) {
        const double left = 0.5 * x + (eps ? y : 0.0);
        const double right = 0.5 * x + (eps ? 0.0 : y);
        const int bin = std::min(4, static_cast<int>(left / 0.3));
        num[bin] += 0.5 * w * right;
        den[bin] += 0.5 * w;
      }
    }
  }
  double lo = 1e300;
  double hi = -1e300;
  for (int b = 0; b < 5; ++b) {
    const double cond = num[b] / den[b];
    lo = std::min(lo, cond);
    hi = std::max(hi, cond);
  }
  CHECK(hi - lo > 0.1);  // population-level non-constancy confirmed

  const PairedSample pairs = simulate_pair_transform(DistSpec::uniform01(), 0.5, 100000, 172);
  const TestResult r = regression_constancy_test(pairs, 0.5, 10, 0.01, 199, 173);
  CHECK(r.decision == Decision::Rejected);
}

TEST_CASE("regression statistic is scale-free") {
  // exact equality under power-of-two data scalings
  const PairedSample pairs = simulate_pair_transform(DistSpec::exponential(1.0), 0.5, 20000, 180);
  const double stat = regression_statistic(pairs, 10);
  REQUIRE(regression_statistic(scale_pairs(pairs, 2.0), 10) == stat);
  REQUIRE(regression_statistic(scale_pairs(pairs, 0.5), 10) == stat);

  // equivalently: the statistic does not depend on the exponential rate at all
  // (rate 1/2 and 2 draws are exact scalings of the rate-1 draws, same seed)
  const PairedSample half = simulate_pair_transform(DistSpec::exponential(0.5), 0.5, 20000, 180);
  const PairedSample twice = simulate_pair_transform(DistSpec::exponential(2.0), 0.5, 20000, 180);
  REQUIRE(regression_statistic(half, 10) == stat);
  REQUIRE(regression_statistic(twice, 10) == stat);
}

TEST_CASE("regression: bins and calibration are validated") {
  const PairedSample pairs = simulate_pair_transform(DistSpec::exponential(1.0), 0.5, 20000, 181);
  CHECK_THROWS_AS(regression_statistic(pairs, 4), ParameterDomainError);
  const PairedSample indep = simulate_ab_forms(DistSpec::exponential(1.0), 0.5, 0.2, 0.8, 20000, 7);
  const RegressionNullCalibration cal = calibrate_regression_null(0.5, 20000, 10, 49, 77);
  CHECK_THROWS_AS(regression_constancy_test(indep, 0.5, 10, 0.05, cal), MisuseError);
  const RegressionNullCalibration wrong = calibrate_regression_null(0.5, 10000, 10, 49, 77);
  CHECK_THROWS_AS(regression_constancy_test(pairs, 0.5, 10, 0.05, wrong), MisuseError);
}

TEST_CASE("p-invariance: exponential consistent, uniform rejected with CDF oracle") {
  CHECK(p_invariance_test(DistSpec::exponential(1.0), 0.2, 0.8, 100000, 0.01, 190).decision ==
        Decision::Consistent);

  // oracle: numeric mixed-form CDFs at p = 0.2 and 0.8 stay > 0.01 apart
  const DistSpec uni = DistSpec::uniform01();
  double sup = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double z = i * 0.01;
    sup = std::max(sup, std::abs(oracles::mixed_cdf(uni, 0.2, z) - oracles::mixed_cdf(uni, 0.8, z)));
  }
  CHECK(sup > 0.01);

  CHECK(p_invariance_test(uni, 0.2, 0.8, 100000, 0.01, 191).decision == Decision::Rejected);
}

TEST_CASE("p-invariance: equal p values reproduce the identical stream") {
  const TestResult r = p_invariance_test(DistSpec::exponential(1.0), 0.4, 0.4, 20000, 0.01, 192);
  CHECK(r.statistic == 0.0);
  CHECK(r.decision == Decision::Consistent);
  // distinct seeds at equal p stay consistent as an ordinary null comparison
  const TestResult r2 = p_invariance_test(DistSpec::exponential(1.0), 0.4, 0.4, 20000, 0.01, 193);
  CHECK(r2.decision == Decision::Consistent);
}

TEST_CASE("power against gamma grows with the sample size") {
  const int reps = 50;
  const std::size_t sizes[3] = {1000, 10000, 100000};
  double rates[3] = {0, 0, 0};
  for (int si = 0; si < 3; ++si) {
    std::vector<int> flags(reps, 0);
    const std::size_t n = sizes[si];
    parallel_for(reps, [&flags, n, si](std::size_t i) {
      const std::uint64_t seed = rng::derive_seed(200 + static_cast<std::uint64_t>(si), "mono", i);
      const SampleBatch mixed =
          simulate_mixed(DistSpec::gamma(2.0, 1.0), 0.3, n, rng::derive_seed(seed, "m", 0));
      const SampleBatch fresh =
          sample(DistSpec::gamma(2.0, 1.0), n, rng::derive_seed(seed, "f", 1));
      flags[i] = ks_two_sample(mixed, fresh, 0.01).decision == Decision::Rejected ? 1 : 0;
    });
    for (int f : flags) rates[si] += f;
    rates[si] /= reps;
  }
  CHECK(rates[0] <= rates[1]);
  CHECK(rates[1] <= rates[2]);
  CHECK(rates[2] > 0.95);
}

TEST_SUITE_END();
