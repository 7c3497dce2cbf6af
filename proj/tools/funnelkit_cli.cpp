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

// funnelkit command-line harness.
//
//   funnelkit verify --config <path> [--suite <id>]... [--seed <n>] [--out <path>]
//   funnelkit suites
//   funnelkit demo --config <path>
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "funnelkit/errors.hpp"
#include "funnelkit/runner.hpp"

namespace {

constexpr int kExitConfig = 2;

std::filesystem::path default_report_path() {
  const char* dir = std::getenv("FUNNELKIT_OUT_DIR");
  const std::filesystem::path base = dir && *dir ? std::filesystem::path(dir) : std::filesystem::current_path();
  return base / "funnelkit_report.json";
}

int verify(const std::string& config_path, const std::vector<std::string>& suites,
           const std::optional<std::uint64_t>& seed, const std::string& out_path) {
  funnelkit::ScenarioConfig config = funnelkit::load_config(config_path);
  if (!suites.empty()) {
    nlohmann::json patch = funnelkit::config_to_json(config);
    patch["suites"] = suites;
    config = funnelkit::parse_config(patch);
  }
  if (seed) config.seed = *seed;

  const funnelkit::VerificationReport report = funnelkit::run(config);
  const std::filesystem::path path = out_path.empty() ? default_report_path() : std::filesystem::path(out_path);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw funnelkit::ConfigurationError("cannot write report to '" + path.string() + "'");
  out << funnelkit::report_to_json(report).dump(2) << "\n";

  for (const funnelkit::SuiteResult& s : report.suites) {
    std::size_t failed = 0;
    for (const auto& c : s.checks) failed += c.status == funnelkit::CheckStatus::Fail ? 1 : 0;
    std::cout << (s.passed() ? "PASS " : "FAIL ") << s.id << " (" << s.checks.size() << " checks";
    if (failed) std::cout << ", " << failed << " failed";
    std::cout << ")\n";
    for (const auto& c : s.checks) {
      if (c.status != funnelkit::CheckStatus::Fail) continue;
      std::cout << "     " << c.id << ": residual " << c.residual << " " << c.relation << " " << c.tolerance
                << " violated; " << c.witness.dump() << "\n";
    }
  }
  std::cout << "report: " << path.string() << " (" << report.wall_clock_seconds << " s)\n";
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"funnelkit: state theory on finite funnels of matrix algebras"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::vector<std::string> suites;
  std::uint64_t seed_value = 0;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run verification suites and write a JSON report");
  verify_cmd->add_option("--config", config_path, "scenario file")->required();
  verify_cmd->add_option("--suite", suites, "restrict to these suites (repeatable)");
  CLI::Option* seed_opt = verify_cmd->add_option("--seed", seed_value, "override the scenario seed");
  verify_cmd->add_option("--out", out_path, "report path (default $FUNNELKIT_OUT_DIR/funnelkit_report.json)");

  CLI::App* suites_cmd = app.add_subcommand("suites", "list registered suites");

  std::string demo_config;
  CLI::App* demo_cmd = app.add_subcommand("demo", "print demonstration tables");
  demo_cmd->add_option("--config", demo_config, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*verify_cmd) {
      std::optional<std::uint64_t> seed;
      if (*seed_opt) seed = seed_value;
      return verify(config_path, suites, seed, out_path);
    }
    if (*suites_cmd) {
      for (const auto& s : funnelkit::list_suites()) {
        std::cout << s.id << "\t" << s.anchor << "\t" << s.description << "\n";
      }
      return 0;
    }
    if (*demo_cmd) {
      const funnelkit::DemoTables tables = funnelkit::emit_demo_tables(funnelkit::load_config(demo_config));
      std::cout << tables.text;
      return 0;
    }
  } catch (const funnelkit::ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
