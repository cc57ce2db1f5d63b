// SPDX-License-Identifier: Apache-2.0
#include "expchar/forms.hpp"

#include <cmath>

#include "expchar/errors.hpp"
#include "expchar/parallel.hpp"

namespace expchar {

namespace {

constexpr std::size_t kChunk = 8192;

void require_prob(double p, const char* name) {
  if (!(p > 0.0 && p < 1.0))
    throw ParameterDomainError(std::string(name) + " must lie in (0,1)");
}

void require_count(std::size_t n) {
  if (n < 1) throw ParameterDomainError("n must be >= 1");
}

/// Runs body(engine, i) for every row, chunked with derived sub-seeds.
template <typename Body>
void chunked_rows(std::size_t n, std::uint64_t seed, const char* label, const Body& body) {
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  parallel_for(n_chunks, [&](std::size_t chunk) {
    rng::Engine eng(rng::derive_seed(seed, label, chunk));
    const std::size_t lo = chunk * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    for (std::size_t i = lo; i < hi; ++i) body(eng, i);
  });
}

}  // namespace

void FormParams::validate() const {
  require_prob(p, "p");
  require_prob(q, "q");
  if (!(a > 0.0) || !(b > 0.0)) throw ParameterDomainError("a and b must be positive");
}

PairedSample simulate_L1L2(const DistSpec& spec, double p, double a, double b, std::size_t n,
                           std::uint64_t seed) {
  require_prob(p, "p");
  if (!(a > 0.0) || !(b > 0.0)) throw ParameterDomainError("a and b must be positive");
  require_count(n);

  std::vector<double> left(n);
  std::vector<double> right(n);
  const double pc = 1.0 - p;
  chunked_rows(n, seed, "l1l2", [&](rng::Engine& eng, std::size_t i) {
    const double x = draw(spec, eng);
    const double y = draw(spec, eng);
    const bool e = eng.open01() < p;
    // Base rows are independent of (a, b); the single trailing multiply makes
    // the scaling equivariance exact.
    const double base_l = pc * x + (e ? y : 0.0);
    const double base_r = p * x + (e ? 0.0 : y);
    left[i] = a * base_l;
    right[i] = b * base_r;
  });
  return PairedSample{std::move(left), std::move(right), Coupling::Coupled, spec, seed};
}

PairedSample simulate_pair_transform(const DistSpec& spec, double p, std::size_t n,
                                     std::uint64_t seed) {
  return simulate_L1L2(spec, p, 1.0, 1.0, n, seed);
}

SampleBatch simulate_mixed(const DistSpec& spec, double p, std::size_t n, std::uint64_t seed) {
  require_prob(p, "p");
  require_count(n);
  std::vector<double> values(n);
  const double pc = 1.0 - p;
  chunked_rows(n, seed, "mixed", [&](rng::Engine& eng, std::size_t i) {
    const double x = draw(spec, eng);
    const double y = draw(spec, eng);
    const bool e = eng.open01() < p;
    values[i] = pc * x + (e ? y : 0.0);
  });
  return SampleBatch{std::move(values), spec, seed};
}

PairedSample simulate_ab_forms(const DistSpec& spec, double p, double a, double b, std::size_t n,
                               std::uint64_t seed) {
  require_prob(p, "p");
  if (!(a > 0.0 && a < b)) throw ParameterDomainError("simulate_ab_forms: need 0 < a < b");
  require_count(n);

  std::vector<double> left(n);
  std::vector<double> right(n);
  const double c = (1.0 - p) * a + p * b;
  chunked_rows(n, seed, "ab_left", [&](rng::Engine& eng, std::size_t i) {
    left[i] = a * draw(spec, eng) + b * draw(spec, eng);
  });
  chunked_rows(n, seed, "ab_right", [&](rng::Engine& eng, std::size_t i) {
    const double x = draw(spec, eng);
    const double y = draw(spec, eng);
    const bool e = eng.open01() < p;
    right[i] = c * x + (e ? a : b) * y;
  });
  return PairedSample{std::move(left), std::move(right), Coupling::IndependentStreams, spec, seed};
}

SampleBatch simulate_geometric_sum(const DistSpec& spec, double q, std::size_t n,
                                   std::uint64_t seed) {
  require_prob(q, "q");
  require_count(n);
  std::vector<double> values(n);
  const double log1mq = std::log1p(-q);
  chunked_rows(n, seed, "geom", [&](rng::Engine& eng, std::size_t i) {
    // nu = 1 + floor(log U / log(1-q)) has P(nu = m) = q (1-q)^(m-1), m >= 1.
    const double u = eng.open01();
    const long long nu = 1 + static_cast<long long>(std::floor(std::log(u) / log1mq));
    double sum = 0.0;
    for (long long j = 0; j < nu; ++j) sum += draw(spec, eng);
    values[i] = q * sum;
  });
  return SampleBatch{std::move(values), spec, seed};
}

}  // namespace expchar
