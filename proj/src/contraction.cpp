// SPDX-License-Identifier: Apache-2.0
#include "expchar/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "expchar/errors.hpp"
#include "expchar/rng.hpp"

namespace expchar {

ContractionParams derive_params(double p, double a, double b) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterDomainError("derive_params: p must lie in (0,1)");
  if (!(a > 0.0 && a < b && b < 1.0))
    throw ParameterDomainError("derive_params: need 0 < a < b < 1");

  ContractionParams prm;
  prm.p = p;
  prm.a = a;
  prm.b = b;
  prm.c = (1.0 - p) * a + p * b;
  prm.A = a / prm.c;
  prm.B = b / prm.c;
  prm.V = (b - a) / (p * b + (1.0 - p) * a);
  if (!(prm.V > 1.0)) {
    std::ostringstream msg;
    msg << "derive_params: V = " << prm.V << " <= 1 for (p,a,b) = (" << p << "," << a << "," << b
        << "); the differentiability order k is undefined";
    throw ParameterDomainError(msg.str());
  }
  prm.k = static_cast<int>(std::floor(std::log(1.0 / p) / std::log(prm.V))) + 2;
  prm.gamma = std::log(1.0 / p) / std::log(prm.B);
  prm.rho = (1.0 + (1.0 - p) * std::pow(prm.A, prm.k)) / (p * std::pow(prm.B, prm.k));
  if (!(prm.rho < 1.0)) {
    std::ostringstream msg;
    msg << "derive_params: contraction factor rho = " << prm.rho << " >= 1 for (p,a,b) = (" << p
        << "," << a << "," << b << ")";
    throw ContractionFailureError(msg.str());
  }
  return prm;
}

GridFunction::GridFunction(EvalGrid grid, std::vector<double> values, double low_exponent,
                           double high_exponent)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      low_exp_(low_exponent),
      high_exp_(high_exponent) {
  const std::size_t n = grid_.size();
  if (values_.size() != n)
    throw std::invalid_argument("GridFunction: values must match grid size");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: values must be finite");
  if (n < 3) throw std::invalid_argument("GridFunction: need at least 3 grid points");

  // 3-point parabolic slope estimates; exact for quadratics, hence for lines.
  slopes_.resize(n);
  const auto& s = grid_.points();
  auto secant = [&](std::size_t i) { return (values_[i + 1] - values_[i]) / (s[i + 1] - s[i]); };
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = s[i] - s[i - 1];
    const double h1 = s[i + 1] - s[i];
    slopes_[i] = (h1 * secant(i - 1) + h0 * secant(i)) / (h0 + h1);
  }
  {
    const double h0 = s[1] - s[0];
    const double h1 = s[2] - s[1];
    slopes_[0] = ((2.0 * h0 + h1) * secant(0) - h0 * secant(1)) / (h0 + h1);
    const double g0 = s[n - 1] - s[n - 2];
    const double g1 = s[n - 2] - s[n - 3];
    const double d0 = secant(n - 2);
    const double d1 = secant(n - 3);
    slopes_[n - 1] = ((2.0 * g0 + g1) * d0 - g0 * d1) / (g0 + g1);
  }
}

GridFunction GridFunction::sample(const EvalGrid& grid, const std::function<double(double)>& fn,
                                  double low_exponent, double high_exponent) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = fn(grid[i]);
  return GridFunction(grid, std::move(values), low_exponent, high_exponent);
}

GridFunction GridFunction::zero(const EvalGrid& grid, double low_exponent, double high_exponent) {
  return GridFunction(grid, std::vector<double>(grid.size(), 0.0), low_exponent, high_exponent);
}

double GridFunction::operator()(double s) const {
  const auto& x = grid_.points();
  if (s <= x.front()) {
    // Exponent 0 marks a function bounded but non-vanishing at 0; the tangent
    // extension is exact for affine data where a constant would not be.
    if (low_exp_ == 0.0) return values_.front() + slopes_.front() * (s - x.front());
    return values_.front() * std::pow(s / x.front(), low_exp_);
  }
  if (s >= x.back())
    return values_.back() * std::pow(s / x.back(), high_exp_);

  const auto it = std::upper_bound(x.begin(), x.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double h = x[i + 1] - x[i];
  const double u = (s - x[i]) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] + h11 * h * slopes_[i + 1];
}

double metric_d(const GridFunction& z1, const GridFunction& z2, int k) {
  if (!(z1.grid() == z2.grid()))
    throw std::invalid_argument("metric_d: functions must share a grid");
  const double low = std::min(z1.low_exponent(), z2.low_exponent());
  const double high = std::max(z1.high_exponent(), z2.high_exponent());
  const double dk = static_cast<double>(k);
  if (!(low > dk))
    throw DivergenceError("metric_d: difference vanishes like s^" + std::to_string(low) +
                          " at 0, not integrable against s^-(k+1) with k = " + std::to_string(k));
  if (!(high < dk))
    throw DivergenceError("metric_d: difference grows like s^" + std::to_string(high) +
                          " at infinity, not integrable against s^-(k+1) with k = " +
                          std::to_string(k));

  // In x = log s the weighted integrand is G(x) = |z1 - z2| * s^-k. Uniform
  // log spacing makes the trapezoid rule Euler-Maclaurin clean: correcting
  // with the one-sided endpoint derivatives removes the O(h^2) term.
  const auto& s = z1.grid().points();
  const std::size_t n = s.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::abs(z1.values()[i] - z2.values()[i]) * std::pow(s[i], -dk);

  double core = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    core += 0.5 * (std::log(s[i + 1]) - std::log(s[i])) * (g[i] + g[i + 1]);

  const double h = (std::log(s.back()) - std::log(s.front())) / static_cast<double>(n - 1);
  const double dg_front = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h);
  const double dg_back = (3.0 * g[n - 1] - 4.0 * g[n - 2] + g[n - 3]) / (2.0 * h);
  core -= h * h / 12.0 * (dg_back - dg_front);

  // Envelope tails: |z| ~ value * (s/s_edge)^exponent beyond the grid.
  const double tail_low = g.front() / (low - dk);
  const double tail_high = g.back() / (dk - high);

  return std::max(0.0, core + tail_low + tail_high);
}

GridFunction apply_operator(const GridFunction& z, const ContractionParams& params) {
  const auto& s = z.grid().points();
  std::vector<double> out(s.size());
  const double inv_p = 1.0 / params.p;
  const double pc = 1.0 - params.p;
  const double inv_B = 1.0 / params.B;
  const double AoverB = params.A / params.B;
  for (std::size_t i = 0; i < s.size(); ++i)
    out[i] = inv_p * (z(s[i] * inv_B) - pc * z(s[i] * AoverB));
  return GridFunction(z.grid(), std::move(out), z.low_exponent(), z.high_exponent());
}

namespace {

/// Random admissible test function: a span of s^{k+1+m} e^{-beta s} for
/// m in {0,1,2}, beta in [0.5, 2]. Vanishes to the required order at 0 and
/// decays at infinity, so it lies in the metric's domain.
GridFunction random_test_function(const EvalGrid& grid, const ContractionParams& params,
                                  rng::Engine& eng) {
  double coef[3];
  double beta[3];
  for (int m = 0; m < 3; ++m) {
    coef[m] = 2.0 * eng.open01() - 1.0;
    beta[m] = 0.5 + 1.5 * eng.open01();
  }
  const double base = static_cast<double>(params.k + 1);
  auto fn = [&](double s) {
    double acc = 0.0;
    for (int m = 0; m < 3; ++m)
      acc += coef[m] * std::pow(s, base + m) * std::exp(-beta[m] * s);
    return acc;
  };
  return GridFunction::sample(grid, fn, base, params.gamma);
}

}  // namespace

double contraction_ratio(const GridFunction& z1, const GridFunction& z2,
                         const ContractionParams& params) {
  const double den = metric_d(z1, z2, params.k);
  if (den == 0.0) return 0.0;  // identical pair
  return metric_d(apply_operator(z1, params), apply_operator(z2, params), params.k) / den;
}

double verify_contraction(const ContractionParams& params, int n_pairs, std::uint64_t seed) {
  if (n_pairs < 1) throw ParameterDomainError("verify_contraction: n_pairs must be >= 1");
  const EvalGrid grid = default_contraction_grid();
  double max_ratio = 0.0;
  for (int pair = 0; pair < n_pairs; ++pair) {
    rng::Engine eng(rng::derive_seed(seed, "contraction_pair", static_cast<std::uint64_t>(pair)));
    const GridFunction z1 = random_test_function(grid, params, eng);
    const GridFunction z2 = random_test_function(grid, params, eng);
    max_ratio = std::max(max_ratio, contraction_ratio(z1, z2, params));
  }
  if (max_ratio > params.rho + kContractionRatioTol) {
    std::ostringstream msg;
    msg << "verify_contraction: observed ratio " << max_ratio << " exceeds rho + tolerance = "
        << params.rho + kContractionRatioTol
        << "; refine the evaluation grid or tighten the quadrature";
    throw ContractionViolationError(msg.str());
  }
  return max_ratio;
}

std::vector<double> iterate_to_fixed_point(const GridFunction& z0,
                                           const ContractionParams& params, int n_iter) {
  if (n_iter < 0) throw ParameterDomainError("iterate_to_fixed_point: n_iter must be >= 0");
  const GridFunction origin =
      GridFunction::zero(z0.grid(), z0.low_exponent(), z0.high_exponent());
  std::vector<double> norms;
  norms.reserve(static_cast<std::size_t>(n_iter) + 1);
  GridFunction z = z0;
  norms.push_back(metric_d(z, origin, params.k));
  for (int i = 0; i < n_iter; ++i) {
    z = apply_operator(z, params);
    norms.push_back(metric_d(z, origin, params.k));
  }
  return norms;
}

EvalGrid default_contraction_grid() { return EvalGrid::logspace(1e-4, 1e3, 512); }

}  // namespace expchar
