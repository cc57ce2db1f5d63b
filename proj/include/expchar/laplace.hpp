// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "expchar/distributions.hpp"
#include "expchar/grid.hpp"

namespace expchar {

/// A Laplace transform as an evaluation rule, with an optional derivative
/// rule. Analytic variants wrap a family's closed form (or quadrature);
/// empirical variants average exp(-s x_i) over a sample. f(0) = 1 exactly in
/// both cases.
class LTFunction {
 public:
  enum class Source { Analytic, Empirical };

  static LTFunction analytic(const DistSpec& spec);
  static LTFunction empirical(const SampleBatch& batch);
  /// Shorthand for analytic(DistSpec::exponential(lambda)): 1/(1 + lambda*s).
  static LTFunction exponential(double lambda);

  double operator()(double s) const { return value_(s); }
  double deriv(double s) const;
  bool has_deriv() const noexcept { return static_cast<bool>(deriv_); }
  Source source() const noexcept { return source_; }
  const std::optional<DistSpec>& spec() const noexcept { return spec_; }

 private:
  LTFunction(std::function<double(double)> value, std::function<double(double)> deriv,
             Source source, std::optional<DistSpec> spec);

  std::function<double(double)> value_;
  std::function<double(double)> deriv_;
  Source source_;
  std::optional<DistSpec> spec_;
};

// Residual evaluators, one per characterization identity, all signed
// LHS - RHS with the LHS as the identity writes it. Each vanishes identically
// when f is the transform of an exponential law.

/// Joint-transform factorization gap of the coupled pair of forms.
double residual_independence(const LTFunction& f, double p, double a, double b, double s,
                             double t);

/// Diagonal (s = t) specialization of the factorization identity.
double residual_diagonal(const LTFunction& f, double p, double s);

/// Fixed-point identity of the mixed form: f(t) - f((1-p)t)(p f(t) + 1-p).
double residual_fixedpoint(const LTFunction& f, double p, double t);

/// Two-coefficient identity f(as)f(bs) = f(cs)(p f(as) + (1-p) f(bs)),
/// c = (1-p)a + pb. Requires 0 < a < b.
double residual_ab_forms(const LTFunction& f, double p, double a, double b, double s);

/// Geometric compound-sum identity.
double residual_geometric(const LTFunction& f, double p, double q, double s);

/// Regression-constancy identity; needs f' and the mean lambda = E X.
double residual_regression(const LTFunction& f, double p, double lambda, double t);

/// Gap between the mixed-form transform evaluated at p1 and at p2.
double residual_p_invariance(const LTFunction& f, double p1, double p2, double t);

enum class Equation {
  Independence,
  Diagonal,
  FixedPoint,
  AbForms,
  Geometric,
  Regression,
  PInvariance,
};

std::string_view equation_name(Equation eq);

/// Parameter bundle for scans; each equation reads the fields it needs.
struct ResidualParams {
  double p = 0.5;
  double a = 1.0;
  double b = 1.0;
  double q = 0.5;
  double lambda = 1.0;
  double p2 = 0.5;  // second p for the invariance gap
};

struct ResidualPoint {
  double s;
  std::optional<double> t;  // set for two-variable residuals
  double value;
};

struct ResidualReport {
  std::string equation;
  std::vector<ResidualPoint> points;
  double max_abs = 0.0;
  double rms = 0.0;
};

/// Evaluates one residual over the grid (Cartesian product with itself for the
/// two-variable independence residual) and aggregates.
ResidualReport scan(Equation eq, const LTFunction& f, const ResidualParams& params,
                    const EvalGrid& grid);

/// Two-grid variant for the independence residual.
ResidualReport scan(Equation eq, const LTFunction& f, const ResidualParams& params,
                    const EvalGrid& s_grid, const EvalGrid& t_grid);

/// 50 log-spaced points on [0.01, 10]: dense near 0 where moments separate
/// families, reaching moderate s where tails matter.
EvalGrid default_scan_grid();

}  // namespace expchar
