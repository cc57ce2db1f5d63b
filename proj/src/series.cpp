// SPDX-License-Identifier: Apache-2.0
#include "expchar/series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "expchar/errors.hpp"

namespace expchar {

namespace {

constexpr double kDegeneratePivotTol = 1e-12;

void require_same_order(const TaylorSeries& a, const TaylorSeries& b, const char* op) {
  if (a.order() != b.order())
    throw std::invalid_argument(std::string(op) + ": truncation orders must match");
}

void require_params(double p, double q, double lambda) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterDomainError("p must lie in (0,1)");
  if (!(q > 0.0 && q < 1.0)) throw ParameterDomainError("q must lie in (0,1)");
  if (!(lambda > 0.0)) throw ParameterDomainError("lambda must be positive");
}

/// Adds a constant to the series (shifts c0 only).
TaylorSeries shift_constant(const TaylorSeries& a, double v) {
  std::vector<double> c = a.coeffs();
  c[0] += v;
  return TaylorSeries(std::move(c));
}

/// Series form of the geometric compound-sum identity,
///   f((1-p)s) * ((1-p) + p f(s)) * (1 - (1-q) f(qs)) - q f(qs),
/// truncated at f's order. Zero exactly when f solves the identity.
TaylorSeries geometric_identity(const TaylorSeries& f, double p, double q) {
  const TaylorSeries left = series_scale_arg(f, 1.0 - p);
  const TaylorSeries mid = shift_constant(series_scale(f, p), 1.0 - p);
  const TaylorSeries fq = series_scale_arg(f, q);
  const TaylorSeries right = shift_constant(series_scale(fq, -(1.0 - q)), 1.0);
  return series_add(series_mul(series_mul(left, mid), right), series_scale(fq, -q));
}

/// Series form (order K-1) of the regression-constancy identity for phi = 1/f:
///   phi'((1-p)t) * (p + (1-p) phi(t)) - lambda * phi((1-p)t).
TaylorSeries regression_identity(const TaylorSeries& phi, double p, double lambda) {
  const int k = phi.order() - 1;
  auto truncate = [k](const TaylorSeries& s) {
    std::vector<double> c(s.coeffs().begin(), s.coeffs().begin() + k + 1);
    return TaylorSeries(std::move(c));
  };
  const TaylorSeries dphi = series_scale_arg(series_derivative(phi), 1.0 - p);
  const TaylorSeries factor = truncate(shift_constant(series_scale(phi, 1.0 - p), p));
  const TaylorSeries lin = truncate(series_scale(series_scale_arg(phi, 1.0 - p), -lambda));
  return series_add(series_mul(dphi, factor), lin);
}

}  // namespace

TaylorSeries::TaylorSeries(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("TaylorSeries: needs at least c0");
}

TaylorSeries TaylorSeries::constant(double value, int order) {
  if (order < 0) throw std::invalid_argument("TaylorSeries: order must be >= 0");
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  c[0] = value;
  return TaylorSeries(std::move(c));
}

TaylorSeries series_add(const TaylorSeries& a, const TaylorSeries& b) {
  require_same_order(a, b, "series_add");
  std::vector<double> c(a.coeffs());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] += b.coeffs()[j];
  return TaylorSeries(std::move(c));
}

TaylorSeries series_mul(const TaylorSeries& a, const TaylorSeries& b) {
  require_same_order(a, b, "series_mul");
  const std::size_t n = a.coeffs().size();
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = a.coeffs()[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; i + j < n; ++j) c[i + j] += ai * b.coeffs()[j];
  }
  return TaylorSeries(std::move(c));
}

TaylorSeries series_scale_arg(const TaylorSeries& a, double alpha) {
  std::vector<double> c(a.coeffs());
  double pow_alpha = 1.0;
  for (std::size_t j = 1; j < c.size(); ++j) {
    pow_alpha *= alpha;
    c[j] *= pow_alpha;
  }
  return TaylorSeries(std::move(c));
}

TaylorSeries series_reciprocal(const TaylorSeries& a) {
  if (a.coeffs()[0] == 0.0)
    throw SingularSeriesError("series_reciprocal: constant term is zero");
  const std::size_t n = a.coeffs().size();
  std::vector<double> r(n, 0.0);
  r[0] = 1.0 / a.coeffs()[0];
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += a.coeffs()[j] * r[k - j];
    r[k] = -acc / a.coeffs()[0];
  }
  return TaylorSeries(std::move(r));
}

TaylorSeries series_scale(const TaylorSeries& a, double v) {
  std::vector<double> c(a.coeffs());
  for (double& x : c) x *= v;
  return TaylorSeries(std::move(c));
}

TaylorSeries series_derivative(const TaylorSeries& a) {
  if (a.order() == 0) return TaylorSeries::constant(0.0, 0);
  std::vector<double> c(a.coeffs().size() - 1);
  for (std::size_t j = 0; j < c.size(); ++j)
    c[j] = static_cast<double>(j + 1) * a.coeffs()[j + 1];
  return TaylorSeries(std::move(c));
}

double geometric_recursion_coefficient(double p, double q, int k) {
  return q * (std::pow(1.0 - p, k) + p - std::pow(q, k - 1));
}

TaylorSeries solve_geometric_recursion(double p, double q, double lambda, int order) {
  require_params(p, q, lambda);
  if (order < 0) throw std::invalid_argument("solve_geometric_recursion: order must be >= 0");

  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  c[0] = 1.0;
  if (order >= 1) c[1] = -lambda;

  for (int k = 2; k <= order; ++k) {
    const double pivot = geometric_recursion_coefficient(p, q, k);
    if (std::abs(pivot) <= kDegeneratePivotTol)
      throw NonUniquenessError(
          k, "solve_geometric_recursion: recursion pivot vanishes at order " + std::to_string(k) +
                 " (q^(k-1) == p + (1-p)^k); coefficient not uniquely determined");
    const TaylorSeries residual = geometric_identity(TaylorSeries(c), p, q);
    c[static_cast<std::size_t>(k)] = -residual[k] / pivot;
  }
  return TaylorSeries(std::move(c));
}

TaylorSeries solve_regression_recursion(double p, double lambda, int order) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterDomainError("p must lie in (0,1)");
  if (!(lambda > 0.0)) throw ParameterDomainError("lambda must be positive");
  if (order < 0) throw std::invalid_argument("solve_regression_recursion: order must be >= 0");

  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  c[0] = 1.0;
  if (order >= 1) c[1] = lambda;

  // The pivot m*(1-p)^(m-1) never vanishes for p in (0,1), so unlike the
  // geometric recursion this one cannot degenerate.
  for (int m = 2; m <= order; ++m) {
    const double pivot = static_cast<double>(m) * std::pow(1.0 - p, m - 1);
    const TaylorSeries residual = regression_identity(TaylorSeries(c), p, lambda);
    c[static_cast<std::size_t>(m)] = -residual[m - 1] / pivot;
  }
  return TaylorSeries(std::move(c));
}

std::vector<std::pair<int, double>> verify_neq_condition(double p, double a, double b,
                                                         int max_power) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterDomainError("p must lie in (0,1)");
  if (!(a > 0.0 && a < b && b < 1.0))
    throw ParameterDomainError("verify_neq_condition: need 0 < a < b < 1");
  if (max_power < 0) throw std::invalid_argument("verify_neq_condition: max_power must be >= 0");

  const double c = (1.0 - p) * a + p * b;
  const double A = a / c;
  const double B = b / c;

  std::vector<std::pair<int, double>> values;
  values.reserve(static_cast<std::size_t>(max_power) + 1);
  double pow_a = 1.0;
  double pow_b = 1.0;
  for (int j = 0; j <= max_power; ++j) {
    double v;
    if (j == 0) {
      v = 0.0;  // p + (1-p) - 1, identically zero
    } else if (j == 1) {
      // Same expression that defines c, so the quotient is exactly 1.
      v = ((1.0 - p) * a + p * b) / c - 1.0;
    } else {
      v = p * pow_b + (1.0 - p) * pow_a - 1.0;
    }
    values.emplace_back(j, v);
    pow_a *= A;
    pow_b *= B;
  }
  return values;
}

}  // namespace expchar
