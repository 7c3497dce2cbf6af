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

#include "funnelkit/transitions.hpp"

#include <algorithm>
#include <cmath>

#include "funnelkit/errors.hpp"

namespace funnelkit {

double transition_probability(const ExcitationState& a, const ExcitationState& b) {
  return std::norm(overlap(a, b));
}

double transition_probability_doubled(const ExcitationState& a, const ExcitationState& b) {
  return std::norm(a.doubled_vector().dot(b.doubled_vector()));
}

OrthogonalFamily build_complete_family(const StatePtr& state, const std::vector<LocalOperator>& generators) {
  if (!state->separating()) {
    throw CompletenessUnavailableError(
        "build_complete_family: reference state is not faithful, N Omega does not span the doubled space");
  }
  const FunnelTower& tower = state->tower();
  const Index d = tower.top_dim();
  std::vector<CVector> vectors;
  vectors.reserve(generators.size() + static_cast<std::size_t>(d * d));
  for (const LocalOperator& g : generators) {
    vectors.push_back(row_major_vec(embed_top(tower, g) * state->sqrt_lambda()));
  }
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      vectors.push_back(CVector::Zero(d * d));
      vectors.back().segment(i * d, d) = state->sqrt_lambda().row(j).transpose();
    }
  }
  const GramSchmidtResult gs = gram_schmidt(vectors);
  if (static_cast<Index>(gs.vectors.size()) != d * d) {
    throw InternalInvariantError("build_complete_family: orthonormal set has " + std::to_string(gs.vectors.size()) +
                                 " vectors, expected " + std::to_string(d * d));
  }
  OrthogonalFamily family;
  family.members.reserve(gs.vectors.size());
  const int top = tower.levels();
  for (const CVector& x : gs.vectors) {
    const CMatrix op = from_row_major(x, d, d) * state->inv_sqrt_lambda();
    family.members.push_back(make_excitation(state, LocalOperator{top, op}));
  }
  const Index n = static_cast<Index>(family.members.size());
  CMatrix w(d * d, n);
  for (Index m = 0; m < n; ++m) w.col(m) = row_major_vec(family.members[m].vector_form());
  family.overlaps = w.adjoint() * w;
  for (Index l = 0; l < n; ++l) {
    family.max_diagonal_deviation = std::max(family.max_diagonal_deviation, std::abs(family.overlaps(l, l) - 1.0));
    for (Index m = 0; m < n; ++m) {
      if (l != m) family.max_offdiagonal = std::max(family.max_offdiagonal, std::abs(family.overlaps(l, m)));
    }
  }
  return family;
}

CompletenessReport completeness_sum(const OrthogonalFamily& family, const ExcitationState& probe) {
  CompletenessReport report;
  report.terms.reserve(family.members.size());
  for (const ExcitationState& member : family.members) {
    report.terms.push_back(transition_probability(probe, member));
    report.sum += report.terms.back();
  }
  return report;
}

double uhlmann_fidelity(const ExcitationState& a, const ExcitationState& b) {
  const double f = trace_norm(psd_sqrt(a.density()) * psd_sqrt(b.density()));
  return f * f;
}

FuchsReport fuchs_bound_check(const ExcitationState& a, const ExcitationState& b) {
  FuchsReport report;
  report.transition = transition_probability(a, b);
  report.top_distance = norm_distance(a, b, NormScope::top());
  report.bound = 1.0 - 0.25 * report.top_distance * report.top_distance;
  report.gap = report.bound - report.transition;
  report.inequality_holds = report.gap >= -1e-12;
  const double bh = norm_distance(a, b, NormScope::full_bh());
  report.full_bh_residual = std::abs(report.transition - (1.0 - 0.25 * bh * bh));
  report.pure_reference = a.reference().profile() == StateProfile::Pure;
  report.equality_holds = std::abs(report.gap) <= kStateEqualityTolerance;
  return report;
}

LocalOperator orthogonal_direction(const GenericState& state, const LocalOperator& a, const LocalOperator& x) {
  const FunnelTower& tower = state.tower();
  const int level = std::max(a.level, x.level);
  const LocalOperator al{level, embed(tower, a, level)};
  const LocalOperator xl{level, embed(tower, x, level)};
  const Complex ax = omega_sesquilinear(state, al, xl);
  const double aa = omega_sesquilinear(state, al, al).real();
  if (!(aa > 1e-12)) throw DegenerateExcitationError("orthogonal_direction: A Omega vanishes");
  return LocalOperator{level, xl.matrix - (ax / aa) * al.matrix};
}

ContinuityReport local_continuity_probe(const StatePtr& state, const LocalOperator& a, const LocalOperator& b,
                                        const LocalOperator& x, ContinuitySchedule schedule, int steps) {
  if (steps < 1) throw ContractError("local_continuity_probe: steps must be positive");
  const FunnelTower& tower = state->tower();
  const int level = std::max(a.level, x.level);
  const CMatrix abase = embed(tower, a, level);
  const CMatrix xdir = embed(tower, x, level);
  const ExcitationState ea = make_excitation(state, a);
  const ExcitationState eb = make_excitation(state, b);
  const double base = transition_probability(ea, eb);
  const double power = schedule == ContinuitySchedule::InverseSquare ? 2.0 : 1.0;

  ContinuityReport report;
  for (int m = 1; m <= steps; ++m) {
    double s = 0.0;
    if (schedule == ContinuitySchedule::Inverse) s = 1.0 / m;
    if (schedule == ContinuitySchedule::InverseSquare) s = 1.0 / (static_cast<double>(m) * m);
    const ExcitationState em = make_excitation(state, LocalOperator{level, abase + s * xdir});
    ContinuityRow row;
    row.m = m;
    row.deviation = std::abs(transition_probability(em, eb) - base);
    report.rows.push_back(row);
    if (schedule != ContinuitySchedule::Constant) {
      report.fit_constant = std::max(report.fit_constant, std::pow(static_cast<double>(m), power) * row.deviation);
    }
  }
  double tail = 0.0;
  for (auto it = report.rows.rbegin(); it != report.rows.rend(); ++it) {
    tail = std::max(tail, it->deviation);
    it->envelope = tail;
  }
  report.final_deviation = report.rows.back().deviation;
  report.envelope_decreasing = report.rows.back().envelope <= report.rows.front().envelope;
  return report;
}

}  // namespace funnelkit
