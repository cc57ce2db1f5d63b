// SPDX-License-Identifier: Apache-2.0
#include "expchar/laplace.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "expchar/errors.hpp"

namespace expchar {

LTFunction::LTFunction(std::function<double(double)> value, std::function<double(double)> deriv,
                       Source source, std::optional<DistSpec> spec)
    : value_(std::move(value)), deriv_(std::move(deriv)), source_(source), spec_(std::move(spec)) {}

LTFunction LTFunction::analytic(const DistSpec& spec) {
  return LTFunction([spec](double s) { return laplace(spec, s); },
                    [spec](double s) { return laplace_deriv(spec, s); }, Source::Analytic, spec);
}

LTFunction LTFunction::empirical(const SampleBatch& batch) {
  if (batch.n() == 0) throw ParameterDomainError("LTFunction::empirical: empty sample");
  auto data = std::make_shared<const std::vector<double>>(batch.values);
  const double inv_n = 1.0 / static_cast<double>(data->size());
  auto value = [data, inv_n](double s) {
    if (s == 0.0) return 1.0;
    double acc = 0.0;
    for (double x : *data) acc += std::exp(-s * x);
    return acc * inv_n;
  };
  auto deriv = [data, inv_n](double s) {
    double acc = 0.0;
    for (double x : *data) acc += x * std::exp(-s * x);
    return -acc * inv_n;
  };
  return LTFunction(std::move(value), std::move(deriv), Source::Empirical, std::nullopt);
}

LTFunction LTFunction::exponential(double lambda) {
  return analytic(DistSpec::exponential(lambda));
}

double LTFunction::deriv(double s) const {
  if (!deriv_) throw MisuseError("LTFunction: derivative rule not available");
  return deriv_(s);
}

double residual_independence(const LTFunction& f, double p, double a, double b, double s,
                             double t) {
  // Substituting u = a*s, v = b*t first makes the (a,b,s,t) and
  // (1,1,as,bt) calls bit-identical, as the change of variables demands.
  const double u = a * s;
  const double v = b * t;
  const double pc = 1.0 - p;
  const double lhs = f(pc * u + p * v) * (p * f(u) + pc * f(v));
  const double rhs = f(pc * u) * (p * f(u) + pc) * f(p * v) * (p + pc * f(v));
  return lhs - rhs;
}

double residual_diagonal(const LTFunction& f, double p, double s) {
  const double pc = 1.0 - p;
  const double fs = f(s);
  const double lhs = fs * fs;
  const double rhs =
      f(p * s) * f(pc * s) * (p * pc * fs * fs + (p * p + pc * pc) * fs + p * pc);
  return lhs - rhs;
}

double residual_fixedpoint(const LTFunction& f, double p, double t) {
  const double pc = 1.0 - p;
  return f(t) - f(pc * t) * (p * f(t) + pc);
}

double residual_ab_forms(const LTFunction& f, double p, double a, double b, double s) {
  if (!(a > 0.0 && a < b)) throw ParameterDomainError("residual_ab_forms: need 0 < a < b");
  const double pc = 1.0 - p;
  const double c = pc * a + p * b;
  const double fas = f(a * s);
  const double fbs = f(b * s);
  return fas * fbs - f(c * s) * (p * fas + pc * fbs);
}

double residual_geometric(const LTFunction& f, double p, double q, double s) {
  const double pc = 1.0 - p;
  const double fqs = f(q * s);
  return f(pc * s) * (pc + p * f(s)) * (1.0 - (1.0 - q) * fqs) - q * fqs;
}

double residual_regression(const LTFunction& f, double p, double lambda, double t) {
  const double pc = 1.0 - p;
  const double lhs = -p * f.deriv(pc * t) * (p * f(t) + pc);
  const double rhs = lambda * p * f(pc * t) * f(t);
  return lhs - rhs;
}

double residual_p_invariance(const LTFunction& f, double p1, double p2, double t) {
  const double ft = f(t);
  const double g1 = f((1.0 - p1) * t) * (1.0 - p1 + p1 * ft);
  const double g2 = f((1.0 - p2) * t) * (1.0 - p2 + p2 * ft);
  return g1 - g2;
}

std::string_view equation_name(Equation eq) {
  switch (eq) {
    case Equation::Independence: return "independence";
    case Equation::Diagonal: return "diagonal";
    case Equation::FixedPoint: return "fixed_point";
    case Equation::AbForms: return "ab_forms";
    case Equation::Geometric: return "geometric";
    case Equation::Regression: return "regression";
    case Equation::PInvariance: return "p_invariance";
  }
  return "unknown";
}

namespace {

double eval_single(Equation eq, const LTFunction& f, const ResidualParams& prm, double s) {
  switch (eq) {
    case Equation::Diagonal: return residual_diagonal(f, prm.p, s);
    case Equation::FixedPoint: return residual_fixedpoint(f, prm.p, s);
    case Equation::AbForms: return residual_ab_forms(f, prm.p, prm.a, prm.b, s);
    case Equation::Geometric: return residual_geometric(f, prm.p, prm.q, s);
    case Equation::Regression: return residual_regression(f, prm.p, prm.lambda, s);
    case Equation::PInvariance: return residual_p_invariance(f, prm.p, prm.p2, s);
    case Equation::Independence: break;
  }
  throw std::invalid_argument("eval_single: two-variable residual");
}

ResidualReport aggregate(std::string name, std::vector<ResidualPoint> points) {
  ResidualReport report{std::move(name), std::move(points), 0.0, 0.0};
  double sq = 0.0;
  for (const auto& pt : report.points) {
    report.max_abs = std::max(report.max_abs, std::abs(pt.value));
    sq += pt.value * pt.value;
  }
  report.rms = report.points.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(report.points.size()));
  return report;
}

}  // namespace

ResidualReport scan(Equation eq, const LTFunction& f, const ResidualParams& params,
                    const EvalGrid& grid) {
  if (eq == Equation::Independence) return scan(eq, f, params, grid, grid);
  std::vector<ResidualPoint> points;
  points.reserve(grid.size());
  for (double s : grid.points())
    points.push_back({s, std::nullopt, eval_single(eq, f, params, s)});
  return aggregate(std::string(equation_name(eq)), std::move(points));
}

ResidualReport scan(Equation eq, const LTFunction& f, const ResidualParams& params,
                    const EvalGrid& s_grid, const EvalGrid& t_grid) {
  if (eq != Equation::Independence)
    throw std::invalid_argument("scan: two grids only apply to the independence residual");
  std::vector<ResidualPoint> points;
  points.reserve(s_grid.size() * t_grid.size());
  for (double s : s_grid.points())
    for (double t : t_grid.points())
      points.push_back({s, t, residual_independence(f, params.p, params.a, params.b, s, t)});
  return aggregate(std::string(equation_name(eq)), std::move(points));
}

EvalGrid default_scan_grid() { return EvalGrid::logspace(0.01, 10.0, 50); }

}  // namespace expchar
