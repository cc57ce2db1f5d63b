// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "expchar/grid.hpp"

namespace expchar {

/// Inputs (p, a, b) with 0 < a < b < 1 and every constant derived from them.
struct ContractionParams {
  double p = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;      // (1-p)a + pb
  double A = 0.0;      // a/c < 1
  double B = 0.0;      // b/c > 1
  double V = 0.0;      // (b-a)/c, must exceed 1
  int k = 0;           // floor(log(1/p)/log V) + 2, always >= 3
  double gamma = 0.0;  // log(1/p)/log B, growth exponent at infinity
  double rho = 0.0;    // (1 + (1-p)A^k) / (p B^k), must be < 1
};

/// Derives all constants. Throws ParameterDomainError when V <= 1 (the
/// differentiability order k is undefined) and ContractionFailureError when
/// the derived factor rho is not below 1.
ContractionParams derive_params(double p, double a, double b);

/// A real function sampled on a positive grid. Off-grid evaluation inside
/// [s_min, s_max] uses local cubic Hermite interpolation with 3-point
/// parabolic slope estimates (linear in the sample values and exact for
/// affine data). Outside the grid the recorded power-law envelopes apply:
/// value(s_min)*(s/s_min)^low below, value(s_max)*(s/s_max)^high above.
/// A low exponent of exactly 0 extends by the endpoint tangent instead, so
/// functions bounded away from zero at the origin (the affine fixed points of
/// the operator) evaluate exactly.
class GridFunction {
 public:
  GridFunction(EvalGrid grid, std::vector<double> values, double low_exponent,
               double high_exponent);

  static GridFunction sample(const EvalGrid& grid, const std::function<double(double)>& fn,
                             double low_exponent, double high_exponent);
  static GridFunction zero(const EvalGrid& grid, double low_exponent, double high_exponent);

  double operator()(double s) const;

  const EvalGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double low_exponent() const noexcept { return low_exp_; }
  double high_exponent() const noexcept { return high_exp_; }

 private:
  EvalGrid grid_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  double low_exp_;
  double high_exp_;
};

/// Weighted distance d(z1, z2) = integral of |z1 - z2| s^{-(k+1)} ds over
/// (0, inf): log-space trapezoid over the grid with endpoint-derivative
/// correction, plus analytic tail contributions from the envelopes. Throws
/// DivergenceError when the envelopes make the integrand non-integrable
/// (needs low > k at 0 and high < k at infinity).
double metric_d(const GridFunction& z1, const GridFunction& z2, int k);

/// The linear operator (A z)(s) = (1/p) (z(s/B) - (1-p) z(s A/B)). Both
/// arguments shrink s, so evaluation never extrapolates above the grid.
GridFunction apply_operator(const GridFunction& z, const ContractionParams& params);

/// d(A z1, A z2) / d(z1, z2) for one pair; 0 for an identical pair.
double contraction_ratio(const GridFunction& z1, const GridFunction& z2,
                         const ContractionParams& params);

/// Draws n_pairs random admissible pairs (smooth combinations of
/// s^{k+1+m} e^{-beta s}) and returns the largest observed ratio
/// d(A z1, A z2) / d(z1, z2). Throws ContractionViolationError when the ratio
/// exceeds rho + 1e-3.
double verify_contraction(const ContractionParams& params, int n_pairs, std::uint64_t seed);

/// d-norms d(A^n z0, 0) for n = 0..n_iter; contraction forces geometric decay.
std::vector<double> iterate_to_fixed_point(const GridFunction& z0,
                                           const ContractionParams& params, int n_iter);

/// 512 log-spaced points on [1e-4, 1e3].
EvalGrid default_contraction_grid();

/// Tolerance added to rho when judging observed contraction ratios.
inline constexpr double kContractionRatioTol = 1e-3;

}  // namespace expchar
