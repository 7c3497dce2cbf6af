// Copyright 2026 The funnelkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Scenario configuration, seeded verification suites and the JSON report.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "funnelkit/funnel.hpp"

namespace funnelkit {

inline constexpr const char* kReportSchema = "funnelkit.report/1";

struct ScenarioConfig {
  std::vector<int> tower_dims{2, 2, 4};
  std::uint64_t seed = 42;
  StateProfile profile = StateProfile::RandomFullRank;
  std::vector<std::string> suites;  // empty means every registered suite
  /// Per-suite factor applied to every residual tolerance of that suite.
  std::map<std::string, double> tolerance_overrides;
  /// Per-suite replacement of the suite's main sample count.
  std::map<std::string, int> sample_counts;
};

/// Parses and validates a scenario. Unknown keys, unknown suite ids and
/// ill-typed values raise ConfigurationError.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ScenarioConfig& config);

enum class CheckStatus { Pass, Fail, Skipped };
std::string to_string(CheckStatus status);

struct CheckResult {
  std::string id;
  CheckStatus status = CheckStatus::Fail;
  double residual = 0.0;
  double tolerance = 0.0;
  /// "<=" and "<" bound the residual from above; ">" asks for a value
  /// strictly above the threshold.
  std::string relation = "<=";
  nlohmann::json witness = nlohmann::json::object();
};

struct SuiteResult {
  std::string id;
  std::string anchor;
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct VerificationReport {
  ScenarioConfig config;
  std::vector<SuiteResult> suites;
  double wall_clock_seconds = 0.0;
  std::string engine_version;

  std::size_t failed_checks() const;
  int exit_code() const { return failed_checks() == 0 ? 0 : 1; }
  const SuiteResult* find(const std::string& suite) const;
  const CheckResult* find(const std::string& suite, const std::string& check) const;
};

/// Everything a suite needs; suites must draw randomness only from `seed`.
struct SuiteContext {
  const ScenarioConfig* config = nullptr;
  FunnelTower tower;
  StatePtr state;
  std::string suite;
  std::uint64_t seed = 0;

  int count(int fallback) const;
  double tolerance(double base) const;
};

struct SuiteInfo {
  std::string id;
  std::string anchor;
  std::string description;
  int default_count = 0;
  std::function<std::vector<CheckResult>(const SuiteContext&)> run;
};

/// Registered suites in their canonical order.
const std::vector<SuiteInfo>& suite_registry();

struct SuiteListing {
  std::string id;
  std::string anchor;
  std::string description;
};
std::vector<SuiteListing> list_suites();

/// Runs the configured suites in parallel. Results follow the order of
/// `config.suites`, or the registry order when that list is empty.
/// A tower or state that cannot be built marks every suite failed.
VerificationReport run(const ScenarioConfig& config);

/// Hex FNV-1a digest of the check ids, statuses and residual bit patterns.
std::string residual_digest(const SuiteResult& suite);

/// Report document; identical configs give identical documents apart from
/// "wall_clock_seconds".
nlohmann::json report_to_json(const VerificationReport& report);

struct DemoTables {
  std::string text;
  nlohmann::json data;
};

/// U_t probabilities, a tuned-isometry convergence schedule and completeness
/// sums for the configured scenario.
DemoTables emit_demo_tables(const ScenarioConfig& config);

std::string engine_version();

}  // namespace funnelkit
