// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <string>

#include "expchar/contraction.hpp"
#include "expchar/distributions.hpp"
#include "expchar/forms.hpp"
#include "expchar/laplace.hpp"
#include "expchar/series.hpp"
#include "expchar/stats.hpp"

namespace expchar {

/// {"family": <name>, "params": {<name>: <number>, ...}}
nlohmann::json spec_to_json(const DistSpec& spec);
DistSpec spec_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ResidualReport& report);
nlohmann::json result_to_json(const TestResult& result);
nlohmann::json params_to_json(const ContractionParams& params);
nlohmann::json series_to_json(const TaylorSeries& series);

/// Shortest-round-trip decimal text for a double; locale-free, deterministic.
std::string format_double(double v);

/// One numeric column with `#`-prefixed metadata lines, then a header row.
std::string batch_to_csv(const SampleBatch& batch);

/// Two numeric columns with spec/seed/coupling metadata lines.
std::string paired_to_csv(const PairedSample& pairs);

std::string report_to_csv(const ResidualReport& report);

/// One row per test result; meta is embedded as `# config: {...}`.
std::string results_to_csv(const std::vector<TestResult>& results, const nlohmann::json& meta);

}  // namespace expchar
