// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "expchar/distributions.hpp"

namespace expchar {

/// Scalar parameters of the random-coefficient linear forms. The tighter
/// constraint 0 < a < b < 1 is checked at the contraction module boundary,
/// not here.
struct FormParams {
  double p = 0.5;
  double a = 1.0;
  double b = 1.0;
  double q = 0.5;

  /// Throws ParameterDomainError unless p, q lie in (0,1) and a, b > 0.
  void validate() const;
};

enum class Coupling { Coupled, IndependentStreams };

/// Two columns of equal length. Coupled rows share the underlying
/// (X, Y, switch) draws; IndependentStreams columns come from disjoint
/// sub-seeds and are mutually independent.
struct PairedSample {
  std::vector<double> left;
  std::vector<double> right;
  Coupling coupling;
  DistSpec spec;
  std::uint64_t seed;

  std::size_t n() const noexcept { return left.size(); }
};

/// Coupled rows (a*((1-p)X + eY), b*(pX + (1-e)Y)) with e the Bernoulli(p)
/// switch. Scaling a or b rescales the corresponding column exactly.
PairedSample simulate_L1L2(const DistSpec& spec, double p, double a, double b, std::size_t n,
                           std::uint64_t seed);

/// Coupled rows ((1-p)X + eY, pX + (1-e)Y); row sums conserve X + Y.
PairedSample simulate_pair_transform(const DistSpec& spec, double p, std::size_t n,
                                     std::uint64_t seed);

/// Samples of (1-p)X + eY.
SampleBatch simulate_mixed(const DistSpec& spec, double p, std::size_t n, std::uint64_t seed);

/// Left column samples aX + bY; right column samples
/// ((1-p)a + pb)X + (ae + b(1-e))Y from a disjoint sub-seed, so the columns
/// are independent. Requires 0 < a < b.
PairedSample simulate_ab_forms(const DistSpec& spec, double p, double a, double b, std::size_t n,
                               std::uint64_t seed);

/// q times the sum of nu i.i.d. draws, nu geometric on {1, 2, ...} with
/// P(nu = m) = q (1-q)^(m-1). Support starting at 1 keeps the compound sum
/// strictly positive, matching the fixed-point identity it realizes.
SampleBatch simulate_geometric_sum(const DistSpec& spec, double q, std::size_t n,
                                   std::uint64_t seed);

// Bundled-parameter conveniences.
inline PairedSample simulate_L1L2(const DistSpec& spec, const FormParams& prm, std::size_t n,
                                  std::uint64_t seed) {
  prm.validate();
  return simulate_L1L2(spec, prm.p, prm.a, prm.b, n, seed);
}
inline PairedSample simulate_ab_forms(const DistSpec& spec, const FormParams& prm, std::size_t n,
                                      std::uint64_t seed) {
  prm.validate();
  return simulate_ab_forms(spec, prm.p, prm.a, prm.b, n, seed);
}
inline SampleBatch simulate_geometric_sum(const DistSpec& spec, const FormParams& prm,
                                          std::size_t n, std::uint64_t seed) {
  prm.validate();
  return simulate_geometric_sum(spec, prm.q, n, seed);
}

}  // namespace expchar
