// SPDX-License-Identifier: Apache-2.0
#include "expchar/distributions.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>

#include "expchar/errors.hpp"
#include "expchar/parallel.hpp"

namespace expchar {

namespace {

constexpr std::size_t kSampleChunk = 8192;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ParameterDomainError(std::string(name) + " must be finite and positive");
}

void require_nonneg_arg(double s) {
  if (!(s >= 0.0) || !std::isfinite(s))
    throw ParameterDomainError("transform argument s must be finite and nonnegative");
}

/// Quantile of the family at u in (0,1); only needed for the quadrature-backed
/// transforms (Weibull, LogNormal).
double quantile01(const WeibullFamily& f, double u) {
  return f.scale * std::pow(-std::log1p(-u), 1.0 / f.shape);
}

double quantile01(const LogNormalFamily& f, double u) {
  // Phi^{-1}(u) = -sqrt(2) * erfc_inv(2u)
  const double z = -1.4142135623730950488 * boost::math::erfc_inv(2.0 * u);
  return std::exp(f.mu + f.sigma * z);
}

/// E g(Q(u)) over u in (0,1) by tanh-sinh; the substitution x = Q(u) moves the
/// awkward density endpoints (Weibull shape < 1 blows up at 0) into the
/// integrator's comfort zone.
template <typename Quantile, typename G>
double quantile_integral(const Quantile& q, const G& g) {
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  return integrator.integrate([&](double u) { return g(q(u)); }, 0.0, 1.0, 1e-12);
}

double gamma_draw(double shape, rng::Engine& eng) {
  if (shape < 1.0) {
    // Boost the shape and correct with a power of a uniform.
    return gamma_draw(shape + 1.0, eng) * std::pow(eng.open01(), 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x;
    double v;
    do {
      x = eng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = eng.open01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

/// (1 - (1+s)e^{-s}) / s^2, the negative uniform-transform derivative; series
/// expansion below the cancellation threshold.
double uniform_deriv_magnitude(double s) {
  if (s < 1e-2) {
    // sum_j (-1)^j (j+1)/(j+2)! s^j
    return 0.5 - s / 3.0 + s * s / 8.0 - s * s * s / 30.0 + s * s * s * s / 144.0;
  }
  return (1.0 - (1.0 + s) * std::exp(-s)) / (s * s);
}

}  // namespace

DistSpec::DistSpec(Family family) : family_(std::move(family)) {
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) {
          require_positive(f.mean, "exponential mean");
        } else if constexpr (std::is_same_v<T, GammaFamily>) {
          require_positive(f.shape, "gamma shape");
          require_positive(f.rate, "gamma rate");
        } else if constexpr (std::is_same_v<T, WeibullFamily>) {
          require_positive(f.shape, "weibull shape");
          require_positive(f.scale, "weibull scale");
        } else if constexpr (std::is_same_v<T, LogNormalFamily>) {
          if (!std::isfinite(f.mu)) throw ParameterDomainError("lognormal mu must be finite");
          require_positive(f.sigma, "lognormal sigma");
        } else if constexpr (std::is_same_v<T, TwoPointFamily>) {
          require_positive(f.x1, "twopoint x1");
          require_positive(f.x2, "twopoint x2");
          if (!(f.w > 0.0 && f.w < 1.0))
            throw ParameterDomainError("twopoint weight must lie in (0,1)");
        }
      },
      family_);
}

std::string DistSpec::family_name() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) return "exponential";
        if constexpr (std::is_same_v<T, GammaFamily>) return "gamma";
        if constexpr (std::is_same_v<T, WeibullFamily>) return "weibull";
        if constexpr (std::is_same_v<T, LogNormalFamily>) return "lognormal";
        if constexpr (std::is_same_v<T, Uniform01Family>) return "uniform01";
        if constexpr (std::is_same_v<T, TwoPointFamily>) return "twopoint";
      },
      family_);
}

double DistSpec::mean() const {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) return f.mean;
        if constexpr (std::is_same_v<T, GammaFamily>) return f.shape / f.rate;
        if constexpr (std::is_same_v<T, WeibullFamily>)
          return f.scale * std::tgamma(1.0 + 1.0 / f.shape);
        if constexpr (std::is_same_v<T, LogNormalFamily>)
          return std::exp(f.mu + 0.5 * f.sigma * f.sigma);
        if constexpr (std::is_same_v<T, Uniform01Family>) return 0.5;
        if constexpr (std::is_same_v<T, TwoPointFamily>)
          return f.w * f.x1 + (1.0 - f.w) * f.x2;
      },
      family_);
}

bool DistSpec::operator==(const DistSpec& other) const noexcept {
  if (family_.index() != other.family_.index()) return false;
  return std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        const auto& g = std::get<T>(other.family_);
        if constexpr (std::is_same_v<T, ExponentialFamily>) return f.mean == g.mean;
        if constexpr (std::is_same_v<T, GammaFamily>)
          return f.shape == g.shape && f.rate == g.rate;
        if constexpr (std::is_same_v<T, WeibullFamily>)
          return f.shape == g.shape && f.scale == g.scale;
        if constexpr (std::is_same_v<T, LogNormalFamily>)
          return f.mu == g.mu && f.sigma == g.sigma;
        if constexpr (std::is_same_v<T, Uniform01Family>) return true;
        if constexpr (std::is_same_v<T, TwoPointFamily>)
          return f.x1 == g.x1 && f.x2 == g.x2 && f.w == g.w;
      },
      family_);
}

double draw(const DistSpec& spec, rng::Engine& eng) {
  return std::visit(
      [&eng](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) {
          return -f.mean * std::log(eng.open01());
        } else if constexpr (std::is_same_v<T, GammaFamily>) {
          return gamma_draw(f.shape, eng) / f.rate;
        } else if constexpr (std::is_same_v<T, WeibullFamily>) {
          return f.scale * std::pow(-std::log(eng.open01()), 1.0 / f.shape);
        } else if constexpr (std::is_same_v<T, LogNormalFamily>) {
          return std::exp(f.mu + f.sigma * eng.normal());
        } else if constexpr (std::is_same_v<T, Uniform01Family>) {
          return eng.open01();
        } else {
          return eng.open01() < f.w ? f.x1 : f.x2;
        }
      },
      spec.family());
}

SampleBatch sample(const DistSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ParameterDomainError("sample: n must be >= 1");
  std::vector<double> values(n);
  const std::size_t n_chunks = (n + kSampleChunk - 1) / kSampleChunk;
  parallel_for(n_chunks, [&](std::size_t chunk) {
    rng::Engine eng(rng::derive_seed(seed, "sample", chunk));
    const std::size_t lo = chunk * kSampleChunk;
    const std::size_t hi = std::min(n, lo + kSampleChunk);
    for (std::size_t i = lo; i < hi; ++i) values[i] = draw(spec, eng);
  });
  return SampleBatch{std::move(values), spec, seed};
}

double laplace(const DistSpec& spec, double s) {
  require_nonneg_arg(s);
  if (s == 0.0) return 1.0;
  return std::visit(
      [s](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) {
          return 1.0 / (1.0 + f.mean * s);
        } else if constexpr (std::is_same_v<T, GammaFamily>) {
          return std::exp(-f.shape * std::log1p(s / f.rate));
        } else if constexpr (std::is_same_v<T, Uniform01Family>) {
          return -std::expm1(-s) / s;
        } else if constexpr (std::is_same_v<T, TwoPointFamily>) {
          return f.w * std::exp(-s * f.x1) + (1.0 - f.w) * std::exp(-s * f.x2);
        } else {
          return quantile_integral([&f](double u) { return quantile01(f, u); },
                                   [s](double x) { return std::exp(-s * x); });
        }
      },
      spec.family());
}

double laplace_deriv(const DistSpec& spec, double s) {
  require_nonneg_arg(s);
  return std::visit(
      [s, &spec](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) {
          const double d = 1.0 + f.mean * s;
          return -f.mean / (d * d);
        } else if constexpr (std::is_same_v<T, GammaFamily>) {
          return -(f.shape / f.rate) * std::exp(-(f.shape + 1.0) * std::log1p(s / f.rate));
        } else if constexpr (std::is_same_v<T, Uniform01Family>) {
          return -uniform_deriv_magnitude(s);
        } else if constexpr (std::is_same_v<T, TwoPointFamily>) {
          return -(f.w * f.x1 * std::exp(-s * f.x1) +
                   (1.0 - f.w) * f.x2 * std::exp(-s * f.x2));
        } else {
          if (s == 0.0) return -spec.mean();
          return -quantile_integral([&f](double u) { return quantile01(f, u); },
                                    [s](double x) { return x * std::exp(-s * x); });
        }
      },
      spec.family());
}

TaylorSeries lt_taylor(const DistSpec& spec, int order) {
  if (order < 0) throw ParameterDomainError("lt_taylor: order must be >= 0");
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  c[0] = 1.0;

  // c_j = -c_{j-1} * (m_j / m_{j-1}) / j, with the moment ratio in closed form
  // per family; keeps magnitudes O(mean^j) with no factorial blowup.
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, TwoPointFamily>) {
          double t1 = f.w;
          double t2 = 1.0 - f.w;
          for (int j = 1; j <= order; ++j) {
            t1 *= -f.x1 / j;
            t2 *= -f.x2 / j;
            c[static_cast<std::size_t>(j)] = t1 + t2;
          }
        } else {
          for (int j = 1; j <= order; ++j) {
            double ratio;  // m_j / m_{j-1}
            if constexpr (std::is_same_v<T, ExponentialFamily>) {
              ratio = static_cast<double>(j) * f.mean;
            } else if constexpr (std::is_same_v<T, GammaFamily>) {
              ratio = (f.shape + j - 1) / f.rate;
            } else if constexpr (std::is_same_v<T, WeibullFamily>) {
              ratio = f.scale * std::exp(std::lgamma(1.0 + static_cast<double>(j) / f.shape) -
                                         std::lgamma(1.0 + static_cast<double>(j - 1) / f.shape));
            } else if constexpr (std::is_same_v<T, LogNormalFamily>) {
              ratio = std::exp(f.mu + (2.0 * j - 1.0) * f.sigma * f.sigma / 2.0);
            } else {  // Uniform01
              ratio = static_cast<double>(j) / (j + 1.0);
            }
            const std::size_t sj = static_cast<std::size_t>(j);
            c[sj] = -c[sj - 1] * ratio / static_cast<double>(j);
            if (!std::isfinite(c[sj]))
              throw MomentDomainError("lt_taylor: coefficient overflows at order " +
                                      std::to_string(j));
          }
        }
      },
      spec.family());
  return TaylorSeries(std::move(c));
}

}  // namespace expchar
