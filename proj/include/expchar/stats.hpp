// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "expchar/forms.hpp"
#include "expchar/grid.hpp"

namespace expchar {

enum class Decision { Consistent, Rejected };

struct PermutationPValue {
  double pvalue;
  int n_perm;
};
struct AsymptoticPValue {
  double pvalue;
};
struct MonteCarloQuantile {
  double quantile;  // null quantile at level alpha
  int n_mc;
  double pvalue;  // Monte Carlo p-value, for reporting
};
using Calibration = std::variant<PermutationPValue, AsymptoticPValue, MonteCarloQuantile>;

/// A test statistic, its calibration reference, the decision at level alpha,
/// and the metadata needed to reproduce the run.
struct TestResult {
  std::string test;
  double statistic = 0.0;
  Calibration calibration;
  double alpha = 0.0;
  Decision decision = Decision::Consistent;
  std::uint64_t seed = 0;
  std::size_t n = 0;
};

/// Independence test for a coupled pair of forms: the statistic is the
/// largest gap, over the (s,t) grid, between the empirical joint transform
/// and the product of the empirical marginal transforms. Calibrated by
/// permuting the right column (breaks the coupling, preserves marginals);
/// p = (1 + #{perm >= observed}) / (n_perm + 1).
TestResult lt_factorization_test(const PairedSample& pairs, const EvalGrid& grid, int n_perm,
                                 double alpha, std::uint64_t seed);

/// Default 7x7 transform grid on [0.05, 3].
EvalGrid default_factorization_grid();

/// Two-sample Kolmogorov-Smirnov with the asymptotic p-value.
TestResult ks_two_sample(const SampleBatch& x, const SampleBatch& y, double alpha);

/// Column-vs-column variant; refuses Coupled inputs, whose row dependence
/// would invalidate the calibration.
TestResult ks_two_sample(const PairedSample& pairs, double alpha);

/// Max standardized gap between equal-count-bin means of the right column
/// (binned on the left column) and the grand mean. Scale-free.
double regression_statistic(const PairedSample& pairs, int n_bins);

/// Null reference for the regression statistic: n_mc replicates under the
/// exponential law with matched (p, n, n_bins). Scale equivariance makes the
/// reference valid for every rate, so one calibration serves many runs.
struct RegressionNullCalibration {
  double p = 0.5;
  std::size_t n = 0;
  int n_bins = 0;
  std::vector<double> null_stats;  // sorted ascending
};

RegressionNullCalibration calibrate_regression_null(double p, std::size_t n, int n_bins, int n_mc,
                                                    std::uint64_t seed);

/// Regression-constancy test against a precomputed null calibration.
TestResult regression_constancy_test(const PairedSample& pairs, double p, int n_bins, double alpha,
                                     const RegressionNullCalibration& calibration);

/// Self-calibrating variant: runs its own n_mc null replicates.
TestResult regression_constancy_test(const PairedSample& pairs, double p, int n_bins, double alpha,
                                     int n_mc, std::uint64_t seed);

/// KS between the mixed form at p1 and at p2 (independent streams; the stream
/// seed is derived from the bits of each p, so p1 == p2 reproduces the
/// identical sample).
TestResult p_invariance_test(const DistSpec& spec, double p1, double p2, std::size_t n,
                             double alpha, std::uint64_t seed);

/// sup |F1 - F2| of the two empirical CDFs.
double ks_statistic(std::vector<double> x, std::vector<double> y);

/// Asymptotic two-sample KS p-value (Kolmogorov limit with the usual
/// finite-sample argument correction).
double ks_asymptotic_pvalue(double d, std::size_t n1, std::size_t n2);

/// Kolmogorov limiting survival function Q(lambda) = 2 sum (-1)^{j-1} e^{-2 j^2 lambda^2}.
double kolmogorov_survival(double lambda);

}  // namespace expchar
