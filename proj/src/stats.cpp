// SPDX-License-Identifier: Apache-2.0
#include "expchar/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "expchar/errors.hpp"
#include "expchar/parallel.hpp"
#include "expchar/rng.hpp"

namespace expchar {

namespace {

Decision decide(double pvalue, double alpha) {
  return pvalue < alpha ? Decision::Rejected : Decision::Consistent;
}

void require_not_all_equal(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] != v[0]) return;
  throw DegenerateSampleError(std::string(what) + ": all values are equal");
}

/// Row-major n x g matrix of exp(-grid[j] * data[i]).
std::vector<double> transform_rows(const std::vector<double>& data, const EvalGrid& grid) {
  const std::size_t g = grid.size();
  std::vector<double> rows(data.size() * g);
  parallel_for((data.size() + 8191) / 8192, [&](std::size_t chunk) {
    const std::size_t lo = chunk * 8192;
    const std::size_t hi = std::min(data.size(), lo + 8192);
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < g; ++j) rows[i * g + j] = std::exp(-grid[j] * data[i]);
  });
  return rows;
}

/// Factorization statistic for one ordering of the right rows.
double factorization_stat(const std::vector<double>& rows_l, const std::vector<double>& rows_r,
                          const std::vector<std::uint32_t>& order, std::size_t n, std::size_t g,
                          const std::vector<double>& marg_l, const std::vector<double>& marg_r) {
  std::vector<double> joint(g * g, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* el = &rows_l[i * g];
    const double* er = &rows_r[static_cast<std::size_t>(order[i]) * g];
    for (std::size_t a = 0; a < g; ++a) {
      const double va = el[a];
      double* out = &joint[a * g];
      for (std::size_t b = 0; b < g; ++b) out[b] += va * er[b];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  double stat = 0.0;
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < g; ++b)
      stat = std::max(stat, std::abs(joint[a * g + b] * inv_n - marg_l[a] * marg_r[b]));
  return stat;
}

}  // namespace

EvalGrid default_factorization_grid() { return EvalGrid::logspace(0.05, 3.0, 7); }

TestResult lt_factorization_test(const PairedSample& pairs, const EvalGrid& grid, int n_perm,
                                 double alpha, std::uint64_t seed) {
  const std::size_t n = pairs.n();
  if (n < 1000) throw ParameterDomainError("lt_factorization_test: n must be >= 1000");
  if (n_perm < 199) throw ParameterDomainError("lt_factorization_test: n_perm must be >= 199");
  require_not_all_equal(pairs.left, "lt_factorization_test left column");
  require_not_all_equal(pairs.right, "lt_factorization_test right column");

  const std::size_t g = grid.size();
  const std::vector<double> rows_l = transform_rows(pairs.left, grid);
  const std::vector<double> rows_r = transform_rows(pairs.right, grid);

  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> marg_l(g, 0.0);
  std::vector<double> marg_r(g, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      marg_l[j] += rows_l[i * g + j];
      marg_r[j] += rows_r[i * g + j];
    }
  for (std::size_t j = 0; j < g; ++j) {
    marg_l[j] *= inv_n;
    marg_r[j] *= inv_n;
  }

  std::vector<std::uint32_t> identity(n);
  std::iota(identity.begin(), identity.end(), 0u);
  const double observed = factorization_stat(rows_l, rows_r, identity, n, g, marg_l, marg_r);

  std::vector<std::uint8_t> exceeds(static_cast<std::size_t>(n_perm), 0);
  parallel_for(static_cast<std::size_t>(n_perm), [&](std::size_t r) {
    rng::Engine eng(rng::derive_seed(seed, "factorization_perm", r));
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(eng.open01() * static_cast<double>(i + 1));
      std::swap(order[i], order[std::min(j, i)]);
    }
    const double stat = factorization_stat(rows_l, rows_r, order, n, g, marg_l, marg_r);
    exceeds[r] = stat >= observed ? 1 : 0;
  });

  int count = 0;
  for (std::uint8_t e : exceeds) count += e;
  const double pvalue = (1.0 + count) / (static_cast<double>(n_perm) + 1.0);

  return TestResult{"lt_factorization", observed, PermutationPValue{pvalue, n_perm},
                    alpha,             decide(pvalue, alpha), seed, n};
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 1000; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_asymptotic_pvalue(double d, std::size_t n1, std::size_t n2) {
  const double ne = static_cast<double>(n1) * static_cast<double>(n2) /
                    static_cast<double>(n1 + n2);
  const double sq = std::sqrt(ne);
  return kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d);
}

double ks_statistic(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) throw ParameterDomainError("ks_statistic: empty sample");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  const double inv_nx = 1.0 / static_cast<double>(x.size());
  const double inv_ny = 1.0 / static_cast<double>(y.size());
  while (i < x.size() && j < y.size()) {
    const double vx = x[i];
    const double vy = y[j];
    if (vx <= vy) ++i;
    if (vy <= vx) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) * inv_nx - static_cast<double>(j) * inv_ny));
  }
  return d;
}

TestResult ks_two_sample(const SampleBatch& x, const SampleBatch& y, double alpha) {
  const double d = ks_statistic(x.values, y.values);
  const double pvalue = ks_asymptotic_pvalue(d, x.n(), y.n());
  return TestResult{"ks_two_sample", d,      AsymptoticPValue{pvalue}, alpha,
                    decide(pvalue, alpha),   x.seed, x.n()};
}

TestResult ks_two_sample(const PairedSample& pairs, double alpha) {
  if (pairs.coupling == Coupling::Coupled)
    throw MisuseError(
        "ks_two_sample: columns share underlying draws (Coupled); distributional equality "
        "tests need independent streams");
  const double d = ks_statistic(pairs.left, pairs.right);
  const double pvalue = ks_asymptotic_pvalue(d, pairs.left.size(), pairs.right.size());
  return TestResult{"ks_two_sample", d,       AsymptoticPValue{pvalue}, alpha,
                    decide(pvalue, alpha),    pairs.seed, pairs.n()};
}

double regression_statistic(const PairedSample& pairs, int n_bins) {
  const std::size_t n = pairs.n();
  if (n_bins < 5) throw ParameterDomainError("regression_statistic: n_bins must be >= 5");
  if (static_cast<std::size_t>(n_bins) > n)
    throw BinningError("regression_statistic: more bins than observations");

  // Equal-count bins on the conditioning (left) column.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t i, std::uint32_t j) {
    return pairs.left[i] < pairs.left[j];
  });

  double grand_sum = 0.0;
  for (double v : pairs.right) grand_sum += v;
  const double grand_mean = grand_sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : pairs.right) ss += (v - grand_mean) * (v - grand_mean);
  const double grand_sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (grand_sd == 0.0)
    throw DegenerateSampleError("regression_statistic: response has zero variance");

  double max_gap = 0.0;
  for (int b = 0; b < n_bins; ++b) {
    const std::size_t lo = n * static_cast<std::size_t>(b) / static_cast<std::size_t>(n_bins);
    const std::size_t hi = n * static_cast<std::size_t>(b + 1) / static_cast<std::size_t>(n_bins);
    if (hi == lo) throw BinningError("regression_statistic: empty bin");
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += pairs.right[order[i]];
    const double gap = std::abs(sum / static_cast<double>(hi - lo) - grand_mean);
    max_gap = std::max(max_gap, gap);
  }
  return max_gap / (grand_sd * std::sqrt(static_cast<double>(n_bins) / static_cast<double>(n)));
}

RegressionNullCalibration calibrate_regression_null(double p, std::size_t n, int n_bins, int n_mc,
                                                    std::uint64_t seed) {
  if (n_mc < 19) throw ParameterDomainError("calibrate_regression_null: n_mc must be >= 19");
  RegressionNullCalibration cal{p, n, n_bins, std::vector<double>(static_cast<std::size_t>(n_mc))};
  parallel_for(static_cast<std::size_t>(n_mc), [&](std::size_t r) {
    const std::uint64_t sub = rng::derive_seed(seed, "regression_null", r);
    const PairedSample null_pairs =
        simulate_pair_transform(DistSpec::exponential(1.0), p, n, sub);
    cal.null_stats[r] = regression_statistic(null_pairs, n_bins);
  });
  std::sort(cal.null_stats.begin(), cal.null_stats.end());
  return cal;
}

TestResult regression_constancy_test(const PairedSample& pairs, double p, int n_bins, double alpha,
                                     const RegressionNullCalibration& calibration) {
  if (pairs.coupling != Coupling::Coupled)
    throw MisuseError("regression_constancy_test: needs the coupled pair of forms");
  if (pairs.n() < 10000)
    throw ParameterDomainError("regression_constancy_test: n must be >= 10^4");
  if (calibration.n != pairs.n() || calibration.n_bins != n_bins || calibration.p != p)
    throw MisuseError("regression_constancy_test: calibration does not match (p, n, n_bins)");

  const double stat = regression_statistic(pairs, n_bins);
  const auto& null_stats = calibration.null_stats;
  const int n_mc = static_cast<int>(null_stats.size());

  // Upper empirical quantile at 1 - alpha.
  std::size_t rank =
      static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(n_mc)));
  if (rank > 0) --rank;
  const double quantile = null_stats[std::min(rank, null_stats.size() - 1)];

  const std::size_t n_ge = static_cast<std::size_t>(
      null_stats.end() - std::lower_bound(null_stats.begin(), null_stats.end(), stat));
  const double pvalue = (1.0 + static_cast<double>(n_ge)) / (static_cast<double>(n_mc) + 1.0);

  const Decision decision = stat > quantile ? Decision::Rejected : Decision::Consistent;
  return TestResult{"regression_constancy",
                    stat,
                    MonteCarloQuantile{quantile, n_mc, pvalue},
                    alpha,
                    decision,
                    pairs.seed,
                    pairs.n()};
}

TestResult regression_constancy_test(const PairedSample& pairs, double p, int n_bins, double alpha,
                                     int n_mc, std::uint64_t seed) {
  const RegressionNullCalibration cal =
      calibrate_regression_null(p, pairs.n(), n_bins, n_mc, seed);
  TestResult result = regression_constancy_test(pairs, p, n_bins, alpha, cal);
  result.seed = seed;
  return result;
}

TestResult p_invariance_test(const DistSpec& spec, double p1, double p2, std::size_t n,
                             double alpha, std::uint64_t seed) {
  // Stream seeds derive from the bits of each p: equal p values reproduce the
  // identical sample (D = 0 exactly), distinct values give independent streams.
  const SampleBatch x =
      simulate_mixed(spec, p1, n, rng::derive_seed(seed, "p_invariance", std::bit_cast<std::uint64_t>(p1)));
  const SampleBatch y =
      simulate_mixed(spec, p2, n, rng::derive_seed(seed, "p_invariance", std::bit_cast<std::uint64_t>(p2)));
  const double d = ks_statistic(x.values, y.values);
  const double pvalue = ks_asymptotic_pvalue(d, n, n);
  return TestResult{"p_invariance", d,    AsymptoticPValue{pvalue}, alpha,
                    decide(pvalue, alpha), seed, n};
}

}  // namespace expchar
