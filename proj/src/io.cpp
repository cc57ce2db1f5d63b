// SPDX-License-Identifier: Apache-2.0
#include "expchar/io.hpp"

#include <charconv>
#include <sstream>

#include "expchar/errors.hpp"

namespace expchar {

using nlohmann::json;

json spec_to_json(const DistSpec& spec) {
  json params = json::object();
  std::visit(
      [&params](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) {
          params["mean"] = f.mean;
        } else if constexpr (std::is_same_v<T, GammaFamily>) {
          params["shape"] = f.shape;
          params["rate"] = f.rate;
        } else if constexpr (std::is_same_v<T, WeibullFamily>) {
          params["shape"] = f.shape;
          params["scale"] = f.scale;
        } else if constexpr (std::is_same_v<T, LogNormalFamily>) {
          params["mu"] = f.mu;
          params["sigma"] = f.sigma;
        } else if constexpr (std::is_same_v<T, TwoPointFamily>) {
          params["x1"] = f.x1;
          params["x2"] = f.x2;
          params["w"] = f.w;
        }
      },
      spec.family());
  return json{{"family", spec.family_name()}, {"params", params}};
}

namespace {

double require_param(const json& params, const std::string& name) {
  if (!params.contains(name) || !params[name].is_number())
    throw ConfigError("distribution spec: missing numeric parameter '" + name + "'");
  return params[name].get<double>();
}

void reject_unknown_params(const json& params, std::initializer_list<const char*> known) {
  for (const auto& [key, value] : params.items()) {
    bool ok = false;
    for (const char* k : known)
      if (key == k) ok = true;
    if (!ok) throw ConfigError("distribution spec: unknown parameter '" + key + "'");
  }
}

}  // namespace

DistSpec spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw ConfigError("distribution spec: expected {\"family\": ..., \"params\": {...}}");
  const std::string family = j["family"].get<std::string>();
  const json params = j.value("params", json::object());
  for (const auto& [key, value] : j.items())
    if (key != "family" && key != "params")
      throw ConfigError("distribution spec: unknown field '" + key + "'");

  try {
    if (family == "exponential") {
      reject_unknown_params(params, {"mean"});
      return DistSpec::exponential(require_param(params, "mean"));
    }
    if (family == "gamma") {
      reject_unknown_params(params, {"shape", "rate"});
      return DistSpec::gamma(require_param(params, "shape"), require_param(params, "rate"));
    }
    if (family == "weibull") {
      reject_unknown_params(params, {"shape", "scale"});
      return DistSpec::weibull(require_param(params, "shape"), require_param(params, "scale"));
    }
    if (family == "lognormal") {
      reject_unknown_params(params, {"mu", "sigma"});
      return DistSpec::log_normal(require_param(params, "mu"), require_param(params, "sigma"));
    }
    if (family == "uniform01") {
      reject_unknown_params(params, {});
      return DistSpec::uniform01();
    }
    if (family == "twopoint") {
      reject_unknown_params(params, {"x1", "x2", "w"});
      return DistSpec::two_point(require_param(params, "x1"), require_param(params, "x2"),
                                 require_param(params, "w"));
    }
  } catch (const ParameterDomainError& e) {
    throw ConfigError(std::string("distribution spec: ") + e.what());
  }
  throw ConfigError("distribution spec: unknown family '" + family + "'");
}

json report_to_json(const ResidualReport& report) {
  json points = json::array();
  for (const auto& pt : report.points) {
    if (pt.t)
      points.push_back(json::array({pt.s, *pt.t, pt.value}));
    else
      points.push_back(json::array({pt.s, pt.value}));
  }
  return json{{"equation", report.equation},
              {"max_abs", report.max_abs},
              {"rms", report.rms},
              {"points", points}};
}

json result_to_json(const TestResult& result) {
  json calibration;
  std::visit(
      [&calibration](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, PermutationPValue>) {
          calibration = json{{"type", "permutation_pvalue"}, {"pvalue", c.pvalue},
                             {"n_perm", c.n_perm}};
        } else if constexpr (std::is_same_v<T, AsymptoticPValue>) {
          calibration = json{{"type", "asymptotic_pvalue"}, {"pvalue", c.pvalue}};
        } else {
          calibration = json{{"type", "monte_carlo_quantile"},
                             {"quantile", c.quantile},
                             {"n_mc", c.n_mc},
                             {"pvalue", c.pvalue}};
        }
      },
      result.calibration);
  return json{{"test", result.test},
              {"statistic", result.statistic},
              {"calibration", calibration},
              {"alpha", result.alpha},
              {"decision", result.decision == Decision::Rejected ? "rejected" : "consistent"},
              {"seed", result.seed},
              {"n", result.n}};
}

json params_to_json(const ContractionParams& p) {
  return json{{"p", p.p}, {"a", p.a},         {"b", p.b},   {"c", p.c},
              {"A", p.A}, {"B", p.B},         {"V", p.V},   {"k", p.k},
              {"gamma", p.gamma}, {"rho", p.rho}};
}

json series_to_json(const TaylorSeries& series) { return json(series.coeffs()); }

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string batch_to_csv(const SampleBatch& batch) {
  std::ostringstream out;
  out << "# spec: " << spec_to_json(batch.spec).dump() << "\n";
  out << "# seed: " << batch.seed << "\n";
  out << "# n: " << batch.n() << "\n";
  out << "value\n";
  for (double v : batch.values) out << format_double(v) << "\n";
  return out.str();
}

std::string paired_to_csv(const PairedSample& pairs) {
  std::ostringstream out;
  out << "# spec: " << spec_to_json(pairs.spec).dump() << "\n";
  out << "# seed: " << pairs.seed << "\n";
  out << "# coupling: "
      << (pairs.coupling == Coupling::Coupled ? "coupled" : "independent_streams") << "\n";
  out << "# n: " << pairs.n() << "\n";
  out << "left,right\n";
  for (std::size_t i = 0; i < pairs.n(); ++i)
    out << format_double(pairs.left[i]) << "," << format_double(pairs.right[i]) << "\n";
  return out.str();
}

std::string report_to_csv(const ResidualReport& report) {
  std::ostringstream out;
  out << "# equation: " << report.equation << "\n";
  out << "# max_abs: " << format_double(report.max_abs) << "\n";
  out << "# rms: " << format_double(report.rms) << "\n";
  const bool two_var = !report.points.empty() && report.points.front().t.has_value();
  out << (two_var ? "s,t,residual\n" : "s,residual\n");
  for (const auto& pt : report.points) {
    out << format_double(pt.s);
    if (pt.t) out << "," << format_double(*pt.t);
    out << "," << format_double(pt.value) << "\n";
  }
  return out.str();
}

std::string results_to_csv(const std::vector<TestResult>& results, const json& meta) {
  std::ostringstream out;
  out << "# config: " << meta.dump() << "\n";
  out << "test,statistic,calibration,pvalue,quantile,n_calibration,alpha,decision,seed,n\n";
  for (const TestResult& r : results) {
    std::string type;
    std::string pvalue;
    std::string quantile;
    std::string n_cal;
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, PermutationPValue>) {
            type = "permutation_pvalue";
            pvalue = format_double(c.pvalue);
            n_cal = std::to_string(c.n_perm);
          } else if constexpr (std::is_same_v<T, AsymptoticPValue>) {
            type = "asymptotic_pvalue";
            pvalue = format_double(c.pvalue);
          } else {
            type = "monte_carlo_quantile";
            pvalue = format_double(c.pvalue);
            quantile = format_double(c.quantile);
            n_cal = std::to_string(c.n_mc);
          }
        },
        r.calibration);
    out << r.test << "," << format_double(r.statistic) << "," << type << "," << pvalue << ","
        << quantile << "," << n_cal << "," << format_double(r.alpha) << ","
        << (r.decision == Decision::Rejected ? "rejected" : "consistent") << "," << r.seed << ","
        << r.n << "\n";
  }
  return out.str();
}

}  // namespace expchar
