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

#include <cstdarg>
#include <cstdio>
#include <sstream>

#include "funnelkit/primitives.hpp"
#include "funnelkit/runner.hpp"

namespace funnelkit {

using nlohmann::json;

namespace {

std::string row(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

std::string row(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return std::string(buf) + "\n";
}

}  // namespace

DemoTables emit_demo_tables(const ScenarioConfig& config) {
  const FunnelTower tower = FunnelTower::build(config.tower_dims);
  const StatePtr state = GenericState::sample(tower, derive_seed(config.seed, "reference"), config.profile);
  Rng rng(derive_seed(config.seed, "demo"));
  DemoTables out;
  std::ostringstream text;

  // U_t = E + t (1 - E)
  const int level = std::max(1, tower.levels() - 1);
  const Index dl = tower.dim(level);
  const LocalOperator e{level, rng.projection(dl, std::max<Index>(1, dl / 2))};
  const std::pair<const char*, Complex> phases[] = {
      {"1", 1.0}, {"i", kI}, {"-1", -1.0}, {"exp(0.3i)", std::polar(1.0, 0.3)}};
  text << "U_t transition probabilities (E rank " << std::max<Index>(1, dl / 2) << " in N_" << level << ")\n";
  text << row("%-6s %-10s %8s %10s %22s %22s %10s", "state", "t", "Re t", "omega_A(E)", "closed form", "operational",
              "|diff|");
  json ut = json::array();
  for (int s = 0; s < 3; ++s) {
    const ExcitationState a = make_excitation(
        state, LocalOperator{tower.levels(), rng.ginibre(tower.top_dim(), tower.top_dim())});
    const double p = evaluate(a, e).real();
    for (const auto& [name, t] : phases) {
      const double closed = ut_probability(e, Phase{t}, a);
      const double operational = transition_probability(a, apply(ut_unitary(tower, e, Phase{t}), a));
      text << row("%-6d %-10s %8.4f %10.6f %22.17g %22.17g %10.3g", s, name, t.real(), p, closed, operational,
                  std::abs(closed - operational));
      ut.push_back(json{{"state", s}, {"t", name}, {"re_t", t.real()}, {"omega_e", p}, {"closed_form", closed},
                        {"operational", operational}});
    }
  }
  out.data["ut_table"] = ut;

  // Tuned isometries V_m = V U_m* converging to E.
  const Index d = tower.top_dim();
  const Index r = std::max<Index>(1, d / 2);
  const CMatrix frame = rng.haar_unitary(d).leftCols(r);
  const CMatrix range = rng.haar_unitary(d).leftCols(r);
  const PartialIsometry v = make_partial_isometry(range * frame.adjoint());
  std::vector<CMatrix> schedule;
  for (Index m = 0; m <= r; ++m) schedule.push_back(frame.leftCols(m) * frame.leftCols(m).adjoint());
  const TunedFamily fam = tuned_isometries(v, schedule, rng.unit_vector(d), rng.unit_vector(d));
  text << "\nDetector convergence schedule (rank " << r << " partial isometry on C^" << d << ")\n";
  text << row("%-4s %14s %14s %14s", "m", "strong", "weak", "envelope");
  json det = json::array();
  for (const ConvergenceRow& c : fam.table) {
    text << row("%-4d %14.6e %14.6e %14.6e", c.m, c.strong, c.weak, c.envelope);
    det.push_back(json{{"m", c.m}, {"strong", c.strong}, {"weak", c.weak}, {"envelope", c.envelope}});
  }
  text << "envelope non-increasing: " << (fam.envelope_nonincreasing ? "yes" : "no") << "\n";
  out.data["detector_table"] = det;
  out.data["detector_envelope_nonincreasing"] = fam.envelope_nonincreasing;

  // Completeness sums.
  const auto it = config.sample_counts.find("completeness");
  const int probes = it == config.sample_counts.end() ? 20 : it->second;
  json comp = json::array();
  if (state->separating()) {
    const OrthogonalFamily family = build_complete_family(state);
    text << "\nCompleteness sums over a family of " << family.members.size() << " orthogonal states\n";
    text << row("%-6s %22s %12s", "probe", "sum", "|sum - 1|");
    for (int p = 0; p < probes; ++p) {
      const ExcitationState b = make_excitation(state, LocalOperator{tower.levels(), rng.ginibre(d, d)});
      const double sum = completeness_sum(family, b).sum;
      text << row("%-6d %22.17g %12.3e", p, sum, std::abs(sum - 1.0));
      comp.push_back(json{{"probe", p}, {"sum", sum}});
    }
  } else {
    text << "\nCompleteness sums unavailable: the reference state is not faithful\n";
  }
  out.data["completeness_table"] = comp;
  out.text = text.str();
  return out;
}

}  // namespace funnelkit
