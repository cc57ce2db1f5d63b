// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "expchar/rng.hpp"
#include "expchar/series.hpp"

namespace expchar {

// Positive-support families: the exponential null plus a fixed roster of
// counterexamples covering heavy tails (LogNormal), light tails (Uniform01),
// a discrete law (TwoPoint) and near-exponential shapes (Gamma, Weibull).

struct ExponentialFamily {
  double mean;  // E X; Laplace transform 1/(1 + mean*s)
};
struct GammaFamily {
  double shape, rate;
};
struct WeibullFamily {
  double shape, scale;
};
struct LogNormalFamily {
  double mu, sigma;
};
struct Uniform01Family {};
struct TwoPointFamily {
  double x1, x2, w;  // value x1 with probability w, else x2
};

class DistSpec {
 public:
  using Family = std::variant<ExponentialFamily, GammaFamily, WeibullFamily, LogNormalFamily,
                              Uniform01Family, TwoPointFamily>;

  explicit DistSpec(Family family);  // validates parameter domains

  static DistSpec exponential(double mean) { return DistSpec(ExponentialFamily{mean}); }
  static DistSpec gamma(double shape, double rate) { return DistSpec(GammaFamily{shape, rate}); }
  static DistSpec weibull(double shape, double scale) {
    return DistSpec(WeibullFamily{shape, scale});
  }
  static DistSpec log_normal(double mu, double sigma) {
    return DistSpec(LogNormalFamily{mu, sigma});
  }
  static DistSpec uniform01() { return DistSpec(Uniform01Family{}); }
  static DistSpec two_point(double x1, double x2, double w) {
    return DistSpec(TwoPointFamily{x1, x2, w});
  }

  const Family& family() const noexcept { return family_; }
  std::string family_name() const;
  double mean() const;

  bool operator==(const DistSpec& other) const noexcept;

 private:
  Family family_;
};

/// A sample together with everything needed to reproduce it bit-for-bit.
struct SampleBatch {
  std::vector<double> values;
  DistSpec spec;
  std::uint64_t seed;

  std::size_t n() const noexcept { return values.size(); }
};

/// One variate from the family, consuming the engine deterministically.
double draw(const DistSpec& spec, rng::Engine& eng);

/// n i.i.d. draws. Work is chunked with sub-seeds derived from (seed, chunk),
/// so the value sequence is identical under any thread count.
SampleBatch sample(const DistSpec& spec, std::size_t n, std::uint64_t seed);

/// Laplace transform E exp(-sX). Closed form where one exists; adaptive
/// quadrature (abs tol 1e-10) for Weibull and LogNormal.
double laplace(const DistSpec& spec, double s);

/// d/ds E exp(-sX) = -E[X exp(-sX)]; always negative.
double laplace_deriv(const DistSpec& spec, double s);

/// Taylor coefficients of the Laplace transform at 0: c_j = (-1)^j m_j / j!.
TaylorSeries lt_taylor(const DistSpec& spec, int order);

}  // namespace expchar
