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

// Acceptance gate: runs the default scenario (tower 2,2,4, seed 42) and
// grades each numbered criterion from the suite checks it depends on. Every
// check must pass at the tolerance pinned here and with the stated sample
// count. Prints one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "funnelkit/runner.hpp"

using namespace funnelkit;
using nlohmann::json;

namespace {

struct Requirement {
  std::string suite;
  std::string check;
  /// Pinned tolerance; nullopt for checks whose bound is computed per run.
  std::optional<double> tolerance;
  std::string relation = "<=";
};

struct CountRequirement {
  std::string suite;
  std::string check;
  std::string key;
  long minimum;
};

struct Criterion {
  int number;
  std::string title;
  std::vector<Requirement> checks;
  std::vector<CountRequirement> counts;
  /// Registry default sample counts the criterion relies on.
  std::vector<std::pair<std::string, int>> sample_counts;
};

std::vector<Criterion> criteria() {
  return {
      {1, "lift: phase recovery and injectivity",
       {{"lift", "phase_recovery", 1e-9}, {"lift", "ray_recovery", 1e-9}, {"lift", "injectivity_distance", 1e-6, ">"}},
       {{"lift", "injectivity_distance", "pairs", 100}},
       {{"lift", 100}}},
      {2, "transfer of null combinations",
       {{"transfer", "null_combinations_found", 0.0}, {"transfer", "operator_transfer", 1e-7}},
       {{"transfer", "null_combinations_found", "found", 20}},
       {{"transfer", 20}}},
      {3, "minimal extension projections",
       {{"extension", "compression_level_1", 1e-10}, {"extension", "compression_level_2", 1e-10}},
       {{"extension", "compression_level_1", "basis_size", 4}, {"extension", "compression_level_2", "basis_size", 16}},
       {}},
      {4, "extreme points",
       {{"extreme", "compression_rank_one", 1e-9},
        {"extreme", "phase_collapsed_decompositions", 0.0},
        {"extreme", "distinct_decompositions_rejected", 0.0},
        {"extreme", "rejection_distance", 1e-6, ">"}},
       {},
       {{"extreme", 50}}},
      {5, "transition probabilities and the trace-distance bound",
       {{"transition", "symmetry", 1e-12},
        {"transition", "range", 1e-12},
        {"transition", "fuchs_bound", 1e-12},
        {"transition", "pure_equality", 1e-9},
        {"transition", "mixed_strict_gap", 1e-3, ">"}},
       {{"transition", "pure_equality", "pairs", 50}},
       {{"transition", 200}}},
      {6, "Uhlmann fidelity comparison",
       {{"uhlmann", "transition_below_fidelity", 1e-10},
        {"uhlmann", "pure_equality", 1e-9},
        {"uhlmann", "mixed_strict_gap", 1e-3, ">"}},
       {},
       {{"uhlmann", 200}}},
      {7, "completeness of orthogonal families",
       {{"completeness", "tower_2_2_family_size", 0.0},
        {"completeness", "tower_2_2_completeness", 1e-8},
        {"completeness", "configured_family_size", 0.0},
        {"completeness", "configured_completeness", 1e-8}},
       {{"completeness", "tower_2_2_family_size", "size", 16},
        {"completeness", "configured_family_size", "size", 256},
        {"completeness", "tower_2_2_completeness", "probes", 20},
        {"completeness", "configured_completeness", "probes", 20}},
       {}},
      {8, "state algebra identities",
       {{"algebra", "associativity", 1e-10},
        {"algebra", "involution_compatibility", 1e-10},
        {"algebra", "triple_product", 1e-10},
        {"algebra", "quadruple_product", 1e-10},
        {"algebra", "minimality", 1e-10}},
       {},
       {{"algebra", 50}}},
      {9, "spectral theorem",
       {{"spectral", "reconstruction", 1e-9},
        {"spectral", "orthogonality", 1e-9},
        {"spectral", "convex_weights_nonnegative", -1e-10, ">"},
        {"spectral", "convex_weights_sum", 1e-9}},
       {},
       {{"spectral", 20}}},
      {10, "duality and faithfulness",
       {{"duality", "positivity", -1e-10, ">"},
        {"duality", "faithfulness_witnesses", 0.0},
        {"duality", "shifted_probes_used", 0.0}},
       {{"duality", "faithfulness_witnesses", "found", 30}, {"duality", "shifted_probes_used", "traceless", 1}},
       {{"duality", 50}}},
      {11, "W isomorphism",
       {{"w_iso", "gns_inner_products", 1e-10}, {"w_iso", "intertwining", 1e-9}},
       {},
       {{"w_iso", 30}}},
      {12, "dilation lemma",
       {{"dilation", "unitarity", 1e-12},
        {"dilation", "final_step_equals_v", 1e-12},
        {"dilation", "envelopes_nonincreasing", 0.0}},
       {},
       {}},
      {13, "tuned detector",
       {{"detector", "leak_below_epsilon", 1e-3, "<"},
        {"detector", "transition_near_target", 4e-3, "<"},
        {"detector", "observable_recovery", std::nullopt, "<"}},
       {{"detector", "leak_below_epsilon", "states", 10}},
       {}},
      {14, "U_t closed form",
       {{"ut_formula", "closed_form", 1e-12}},
       {{"ut_formula", "closed_form", "states", 10}},
       {}},
      {15, "vacuum detector",
       {{"vacuum", "vacuum_expectation", 1e-10},
        {"vacuum", "silent_on_vacuum", 1e-12},
        {"vacuum", "distance_witnesses", 0.0}},
       {{"vacuum", "responses_observed", "positive", 1}},
       {}},
      {16, "commensurability",
       {{"commensurability", "clock_shift_commensurable", 0.0},
        {"commensurability", "clock_shift_phase", 1e-12},
        {"commensurability", "random_pairs_not_commensurable", 0.0},
        {"commensurability", "random_pair_residual", 1e-3, ">"}},
       {{"commensurability", "random_pairs_not_commensurable", "pairs", 20}},
       {}},
  };
}

bool grade(const Criterion& c, const VerificationReport& report, std::string& why) {
  for (const Requirement& r : c.checks) {
    const CheckResult* check = report.find(r.suite, r.check);
    if (!check) {
      why = r.suite + "/" + r.check + " missing";
      return false;
    }
    if (check->status != CheckStatus::Pass) {
      why = r.suite + "/" + r.check + " failed: " + std::to_string(check->residual) + " " + check->relation + " " +
            std::to_string(check->tolerance);
      return false;
    }
    if (check->relation != r.relation || (r.tolerance && check->tolerance != *r.tolerance)) {
      why = r.suite + "/" + r.check + " graded against " + check->relation + " " +
            std::to_string(check->tolerance) + " instead of the pinned bound";
      return false;
    }
  }
  for (const CountRequirement& r : c.counts) {
    const CheckResult* check = report.find(r.suite, r.check);
    if (!check || !check->witness.contains(r.key) || check->witness.at(r.key).get<long>() < r.minimum) {
      why = r.suite + "/" + r.check + " sample count " + r.key + " below " + std::to_string(r.minimum);
      return false;
    }
  }
  for (const auto& [suite, minimum] : c.sample_counts) {
    for (const SuiteInfo& info : suite_registry()) {
      if (info.id == suite && info.default_count < minimum) {
        why = suite + " default sample count below " + std::to_string(minimum);
        return false;
      }
    }
  }
  return true;
}

bool same_outcome(const VerificationReport& a, const VerificationReport& b, std::string& why) {
  if (a.suites.size() != b.suites.size()) {
    why = "suite lists differ";
    return false;
  }
  for (std::size_t i = 0; i < a.suites.size(); ++i) {
    const SuiteResult& x = a.suites[i];
    const SuiteResult& y = b.suites[i];
    if (x.checks.size() != y.checks.size()) {
      why = x.id + ": check lists differ";
      return false;
    }
    for (std::size_t j = 0; j < x.checks.size(); ++j) {
      const CheckResult& p = x.checks[j];
      const CheckResult& q = y.checks[j];
      if (p.id != q.id || p.status != q.status || p.residual != q.residual || p.witness != q.witness) {
        why = x.id + "/" + p.id + " differs between runs";
        return false;
      }
    }
    if (residual_digest(x) != residual_digest(y)) {
      why = x.id + ": digest differs";
      return false;
    }
  }
  json ja = report_to_json(a), jb = report_to_json(b);
  ja.erase("wall_clock_seconds");
  jb.erase("wall_clock_seconds");
  if (ja.dump() != jb.dump()) {
    why = "report documents differ";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  const ScenarioConfig config;  // default scenario
  const VerificationReport first = run(config);
  std::printf("default scenario: tower (2,2,4), seed %llu, %zu suites, %.2f s\n",
              static_cast<unsigned long long>(config.seed), first.suites.size(), first.wall_clock_seconds);

  int failures = 0;
  for (const Criterion& c : criteria()) {
    std::string why;
    const bool ok = grade(c, first, why);
    failures += ok ? 0 : 1;
    std::printf("%s %2d %s%s%s\n", ok ? "PASS" : "FAIL", c.number, c.title.c_str(), ok ? "" : ": ", why.c_str());
  }

  const VerificationReport second = run(config);
  std::string why;
  const bool deterministic = same_outcome(first, second, why);
  failures += deterministic ? 0 : 1;
  std::printf("%s 17 determinism of the default scenario%s%s\n", deterministic ? "PASS" : "FAIL",
              deterministic ? "" : ": ", why.c_str());

  const double total = first.wall_clock_seconds;
  std::printf("runtime %.2f s (target 60 s)\n", total);
  std::printf("%d of 17 criteria passed\n", 17 - failures);
  return failures == 0 ? 0 : 1;
}
