// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

namespace expchar {

/// Truncated Taylor series: coeffs()[j] is the j-th derivative at 0 divided by j!.
/// Storing Taylor coefficients (not raw derivatives) keeps magnitudes O(lambda^j)
/// and avoids factorial overflow.
class TaylorSeries {
 public:
  explicit TaylorSeries(std::vector<double> coeffs);

  static TaylorSeries constant(double value, int order);
  static TaylorSeries one(int order) { return constant(1.0, order); }

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  double operator[](int j) const noexcept { return coeffs_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

 private:
  std::vector<double> coeffs_;
};

TaylorSeries series_add(const TaylorSeries& a, const TaylorSeries& b);
TaylorSeries series_mul(const TaylorSeries& a, const TaylorSeries& b);

/// Argument scaling f(s) -> f(alpha*s): c_j -> alpha^j c_j.
TaylorSeries series_scale_arg(const TaylorSeries& a, double alpha);

/// Truncated reciprocal; series_mul(a, series_reciprocal(a)) == one to order K.
/// Throws SingularSeriesError when the constant term is zero.
TaylorSeries series_reciprocal(const TaylorSeries& a);

/// Coefficient-wise scalar multiple.
TaylorSeries series_scale(const TaylorSeries& a, double v);

/// Termwise derivative; result has order K-1.
TaylorSeries series_derivative(const TaylorSeries& a);

/// Pivot multiplying the order-k Taylor coefficient in the geometric-sum
/// recursion: q*((1-p)^k + p - q^(k-1)).
double geometric_recursion_coefficient(double p, double q, int k);

/// Order-by-order solution of the geometric compound-sum identity in series
/// form: the unique series with c0 = 1, c1 = -lambda annihilating the identity
/// through the given order. Throws NonUniquenessError when the order-k pivot
/// vanishes (within 1e-12).
TaylorSeries solve_geometric_recursion(double p, double q, double lambda, int order);

/// Order-by-order solution of the regression-constancy identity for
/// phi = 1/f: phi(0) = 1, phi'(0) = lambda; all higher coefficients are forced
/// to zero, so the result is [1, lambda, 0, ..., 0] up to roundoff.
TaylorSeries solve_regression_recursion(double p, double lambda, int order);

/// Values p*B^j + (1-p)*A^j - 1 for j = 0..max_power, with A = a/c, B = b/c,
/// c = (1-p)a + pb. Exactly zero at j = 0 and j = 1 by construction; strictly
/// positive and increasing for j >= 2.
std::vector<std::pair<int, double>> verify_neq_condition(double p, double a, double b,
                                                         int max_power);

}  // namespace expchar
