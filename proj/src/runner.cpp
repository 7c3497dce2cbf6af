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

#include "funnelkit/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <future>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "funnelkit/errors.hpp"

#ifndef FUNNELKIT_VERSION
#define FUNNELKIT_VERSION "0.0.0"
#endif

namespace funnelkit {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {"tower_dims", "seed", "profile", "suites", "tolerance_overrides",
                                             "sample_counts"};
  return keys;
}

bool is_registered(const std::string& id) {
  for (const SuiteInfo& s : suite_registry()) {
    if (s.id == id) return true;
  }
  return false;
}

const SuiteInfo& suite_info(const std::string& id) {
  for (const SuiteInfo& s : suite_registry()) {
    if (s.id == id) return s;
  }
  throw ConfigurationError("unknown suite '" + id + "'");
}

void require_suite(const std::string& id, const std::string& where) {
  if (!is_registered(id)) throw ConfigurationError(where + ": unknown suite '" + id + "'");
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigurationError("scenario must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().count(key)) throw ConfigurationError("unknown configuration key '" + key + "'");
  }
  ScenarioConfig config;
  if (doc.contains("tower_dims")) {
    const json& dims = doc["tower_dims"];
    if (!dims.is_array() || dims.empty()) throw ConfigurationError("tower_dims must be a non-empty list");
    config.tower_dims.clear();
    for (const json& d : dims) {
      if (!d.is_number_integer()) throw ConfigurationError("tower_dims entries must be integers");
      const auto v = d.get<std::int64_t>();
      if (v < 1 || v > 4096) throw ConfigurationError("tower_dims entry out of range: " + std::to_string(v));
      config.tower_dims.push_back(static_cast<int>(v));
    }
  }
  if (doc.contains("seed")) {
    const json& seed = doc["seed"];
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
      throw ConfigurationError("seed must be a non-negative integer");
    }
    config.seed = seed.get<std::uint64_t>();
  }
  if (doc.contains("profile")) {
    if (!doc["profile"].is_string()) throw ConfigurationError("profile must be a string");
    config.profile = parse_profile(doc["profile"].get<std::string>());
  }
  if (doc.contains("suites")) {
    const json& suites = doc["suites"];
    if (!suites.is_array()) throw ConfigurationError("suites must be a list");
    std::set<std::string> seen;
    for (const json& s : suites) {
      if (!s.is_string()) throw ConfigurationError("suite identifiers must be strings");
      const std::string id = s.get<std::string>();
      require_suite(id, "suites");
      if (!seen.insert(id).second) throw ConfigurationError("suite '" + id + "' listed twice");
      config.suites.push_back(id);
    }
  }
  if (doc.contains("tolerance_overrides")) {
    const json& t = doc["tolerance_overrides"];
    if (!t.is_object()) throw ConfigurationError("tolerance_overrides must map suites to numbers");
    for (const auto& [id, value] : t.items()) {
      require_suite(id, "tolerance_overrides");
      if (!value.is_number() || !(value.get<double>() > 0.0)) {
        throw ConfigurationError("tolerance_overrides['" + id + "'] must be a positive number");
      }
      config.tolerance_overrides[id] = value.get<double>();
    }
  }
  if (doc.contains("sample_counts")) {
    const json& c = doc["sample_counts"];
    if (!c.is_object()) throw ConfigurationError("sample_counts must map suites to integers");
    for (const auto& [id, value] : c.items()) {
      require_suite(id, "sample_counts");
      if (!value.is_number_integer() || value.get<std::int64_t>() < 1 || value.get<std::int64_t>() > 100000) {
        throw ConfigurationError("sample_counts['" + id + "'] must be a positive integer");
      }
      config.sample_counts[id] = static_cast<int>(value.get<std::int64_t>());
    }
  }
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open configuration file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigurationError("configuration file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json config_to_json(const ScenarioConfig& config) {
  json out;
  out["tower_dims"] = config.tower_dims;
  out["seed"] = config.seed;
  out["profile"] = to_string(config.profile);
  out["suites"] = config.suites;
  out["tolerance_overrides"] = json::object();
  for (const auto& [k, v] : config.tolerance_overrides) out["tolerance_overrides"][k] = v;
  out["sample_counts"] = json::object();
  for (const auto& [k, v] : config.sample_counts) out["sample_counts"][k] = v;
  return out;
}

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Skipped:
      return "skipped";
  }
  return "fail";
}

bool SuiteResult::passed() const {
  for (const CheckResult& c : checks) {
    if (c.status == CheckStatus::Fail) return false;
  }
  return true;
}

std::size_t VerificationReport::failed_checks() const {
  std::size_t n = 0;
  for (const SuiteResult& s : suites) {
    for (const CheckResult& c : s.checks) n += c.status == CheckStatus::Fail ? 1 : 0;
  }
  return n;
}

const SuiteResult* VerificationReport::find(const std::string& suite) const {
  for (const SuiteResult& s : suites) {
    if (s.id == suite) return &s;
  }
  return nullptr;
}

const CheckResult* VerificationReport::find(const std::string& suite, const std::string& check) const {
  const SuiteResult* s = find(suite);
  if (!s) return nullptr;
  for (const CheckResult& c : s->checks) {
    if (c.id == check) return &c;
  }
  return nullptr;
}

int SuiteContext::count(int fallback) const {
  const auto it = config->sample_counts.find(suite);
  return it == config->sample_counts.end() ? fallback : it->second;
}

double SuiteContext::tolerance(double base) const {
  const auto it = config->tolerance_overrides.find(suite);
  return it == config->tolerance_overrides.end() ? base : base * it->second;
}

std::vector<SuiteListing> list_suites() {
  std::vector<SuiteListing> out;
  for (const SuiteInfo& s : suite_registry()) out.push_back({s.id, s.anchor, s.description});
  return out;
}

namespace {

CheckResult error_check(const std::string& id, const std::exception& e, const std::string& kind) {
  CheckResult c;
  c.id = id;
  c.status = CheckStatus::Fail;
  c.residual = std::numeric_limits<double>::infinity();
  c.tolerance = 0.0;
  c.witness = json{{"error", e.what()}, {"kind", kind}};
  return c;
}

SuiteResult run_suite(const SuiteInfo& info, const ScenarioConfig& config, const FunnelTower& tower,
                      const StatePtr& state) {
  SuiteResult result;
  result.id = info.id;
  result.anchor = info.anchor;
  SuiteContext ctx;
  ctx.config = &config;
  ctx.tower = tower;
  ctx.state = state;
  ctx.suite = info.id;
  ctx.seed = derive_seed(config.seed, info.id);
  try {
    result.checks = info.run(ctx);
  } catch (const Error& e) {
    result.checks.push_back(error_check("suite_error", e, "library"));
  } catch (const std::exception& e) {
    result.checks.push_back(error_check("suite_error", e, "unexpected"));
  }
  return result;
}

}  // namespace

VerificationReport run(const ScenarioConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport report;
  report.config = config;
  report.engine_version = engine_version();

  std::vector<std::string> ids = config.suites;
  if (ids.empty()) {
    for (const SuiteInfo& s : suite_registry()) ids.push_back(s.id);
  }
  for (const std::string& id : ids) require_suite(id, "run");

  std::optional<FunnelTower> tower;
  StatePtr state;
  try {
    tower = FunnelTower::build(config.tower_dims);
    state = GenericState::sample(*tower, derive_seed(config.seed, "reference"), config.profile);
  } catch (const Error& e) {
    for (const std::string& id : ids) {
      SuiteResult r;
      r.id = id;
      r.anchor = suite_info(id).anchor;
      r.checks.push_back(error_check("construction", e, "construction"));
      report.suites.push_back(std::move(r));
    }
  }
  if (state) {
    std::vector<std::future<SuiteResult>> jobs;
    for (const std::string& id : ids) {
      const SuiteInfo& info = suite_info(id);
      jobs.push_back(std::async(std::launch::async, [&info, &config, &tower, &state] {
        return run_suite(info, config, *tower, state);
      }));
    }
    for (auto& job : jobs) report.suites.push_back(job.get());
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string residual_digest(const SuiteResult& suite) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const CheckResult& c : suite.checks) {
    mix(c.id.data(), c.id.size());
    const std::string status = to_string(c.status);
    mix(status.data(), status.size());
    std::uint64_t bits = 0;
    std::memcpy(&bits, &c.residual, sizeof bits);
    mix(&bits, sizeof bits);
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

json report_to_json(const VerificationReport& report) {
  json out;
  out["schema"] = kReportSchema;
  out["engine_version"] = report.engine_version;
  out["scenario"] = config_to_json(report.config);
  json suites = json::array();
  std::size_t total = 0, passed = 0, failed = 0, skipped = 0;
  for (const SuiteResult& s : report.suites) {
    json checks = json::array();
    for (const CheckResult& c : s.checks) {
      checks.push_back(json{{"id", c.id},
                            {"status", to_string(c.status)},
                            {"residual", number_or_null(c.residual)},
                            {"tolerance", number_or_null(c.tolerance)},
                            {"relation", c.relation},
                            {"witness", c.witness}});
      ++total;
      passed += c.status == CheckStatus::Pass ? 1 : 0;
      failed += c.status == CheckStatus::Fail ? 1 : 0;
      skipped += c.status == CheckStatus::Skipped ? 1 : 0;
    }
    suites.push_back(json{{"id", s.id},
                          {"anchor", s.anchor},
                          {"status", s.passed() ? "pass" : "fail"},
                          {"residual_digest", residual_digest(s)},
                          {"checks", std::move(checks)}});
  }
  out["suites"] = std::move(suites);
  out["summary"] = json{{"checks", total}, {"passed", passed}, {"failed", failed}, {"skipped", skipped}};
  out["wall_clock_seconds"] = report.wall_clock_seconds;
  return out;
}

std::string engine_version() { return FUNNELKIT_VERSION; }

}  // namespace funnelkit
