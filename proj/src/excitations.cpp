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

#include "funnelkit/excitations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "funnelkit/errors.hpp"

namespace funnelkit {

namespace {

void require_same_reference(const ExcitationState& a, const ExcitationState& b) {
  if (a.reference_ptr() == b.reference_ptr()) return;
  const GenericState& x = a.reference();
  const GenericState& y = b.reference();
  if (x.tower() == y.tower() && x.lambda().rows() == y.lambda().rows() &&
      (x.lambda() - y.lambda()).norm() == 0.0) {
    return;
  }
  throw ContractError("excitations refer to different reference states");
}

CMatrix reduce_to_level(const FunnelTower& tower, const CMatrix& top, int level) {
  if (level == tower.levels()) return top;
  std::vector<int> keep(static_cast<std::size_t>(level));
  std::iota(keep.begin(), keep.end(), 0);
  return partial_trace(top, tower.factor_dims(), keep);
}

}  // namespace

Phase Phase::checked(Complex t) {
  if (std::abs(std::abs(t) - 1.0) > 1e-12) throw ContractError("phase must have unit modulus");
  return Phase{t};
}

CVector ExcitationState::doubled_vector() const {
  const Index d = state_->tower().top_dim();
  return kron(top_, identity(d)) * state_->omega_vector();
}

ExcitationState make_excitation(StatePtr state, const LocalOperator& a) {
  if (!state) throw ContractError("make_excitation: null reference state");
  const FunnelTower& tower = state->tower();
  CMatrix top = embed_top(tower, a);
  CMatrix vec = top * state->sqrt_lambda();
  const double norm2 = vec.squaredNorm();
  if (!(norm2 > 1e-12)) {
    throw DegenerateExcitationError("make_excitation: A Omega vanishes, omega(A*A) = " + std::to_string(norm2));
  }
  const Complex gauge = std::conj(leading_phase(vec)) / std::sqrt(norm2);
  ExcitationState out;
  out.state_ = std::move(state);
  out.op_ = LocalOperator{a.level, gauge * a.matrix};
  out.top_ = gauge * top;
  out.vector_ = gauge * vec;
  out.density_ = out.vector_ * out.vector_.adjoint();
  return out;
}

ExcitationState vacuum_excitation(StatePtr state) {
  const LocalOperator one = local_identity(state->tower(), 1);
  return make_excitation(std::move(state), one);
}

Complex omega_sesquilinear(const GenericState& state, const LocalOperator& x, const LocalOperator& y) {
  const FunnelTower& tower = state.tower();
  const int level = std::max(x.level, y.level);
  const CMatrix prod = embed(tower, x, level).adjoint() * embed(tower, y, level);
  return state.expectation(LocalOperator{level, prod});
}

Complex overlap(const ExcitationState& a, const ExcitationState& b) {
  require_same_reference(a, b);
  return (a.reference().lambda() * a.top_op().adjoint() * b.top_op()).trace();
}

Complex evaluate(const ExcitationState& a, const LocalOperator& c) {
  return (a.density() * embed_top(a.reference().tower(), c)).trace();
}

Complex evaluate_doubled(const ExcitationState& a, const LocalOperator& c) {
  const Index d = a.reference().tower().top_dim();
  const CVector v = a.doubled_vector();
  return v.dot(kron(embed_top(a.reference().tower(), c), identity(d)) * v);
}

Phase lift_phase(const ExcitationState& a, const ExcitationState& b, double delta_eq) {
  const double distance = norm_distance(a, b, NormScope::top());
  if (distance > delta_eq) {
    throw NotSameRayError("lift_phase: states differ, distance " + std::to_string(distance));
  }
  const Complex t = overlap(a, b);
  if (std::abs(std::abs(t) - 1.0) > 1e-8) {
    throw GenericityViolationError("lift_phase: equal states with |omega(A*B)| = " + std::to_string(std::abs(t)));
  }
  return Phase{t / std::abs(t)};
}

double ray_recovery_residual(const ExcitationState& a, const ExcitationState& b, Phase t) {
  return (b.top_op() - t.value * a.top_op()).norm() / a.top_op().norm();
}

namespace {

CMatrix normalized_top(const GenericState& state, const LocalOperator& a) {
  const CMatrix top = embed_top(state.tower(), a);
  const double norm2 = (top * state.sqrt_lambda()).squaredNorm();
  if (!(norm2 > 1e-12)) throw DegenerateExcitationError("lift_phase: A Omega vanishes");
  return top / std::sqrt(norm2);
}

}  // namespace

Phase lift_phase(const StatePtr& state, const LocalOperator& a, const LocalOperator& b, double delta_eq) {
  const ExcitationState ea = make_excitation(state, a);
  const ExcitationState eb = make_excitation(state, b);
  const double distance = norm_distance(ea, eb, NormScope::top());
  if (distance > delta_eq) {
    throw NotSameRayError("lift_phase: states differ, distance " + std::to_string(distance));
  }
  const CMatrix na = normalized_top(*state, a);
  const CMatrix nb = normalized_top(*state, b);
  const Complex t = (state->lambda() * na.adjoint() * nb).trace();
  if (std::abs(std::abs(t) - 1.0) > 1e-8) {
    throw GenericityViolationError("lift_phase: equal states with |omega(A*B)| = " + std::to_string(std::abs(t)));
  }
  return Phase{t / std::abs(t)};
}

double ray_recovery_residual(const StatePtr& state, const LocalOperator& a, const LocalOperator& b, Phase t) {
  const CMatrix na = normalized_top(*state, a);
  const CMatrix nb = normalized_top(*state, b);
  return (nb - t.value * na).norm() / na.norm();
}

ExcitationState superpose(StatePtr state, Complex ca, const LocalOperator& a, Complex cb, const LocalOperator& b) {
  const FunnelTower& tower = state->tower();
  const int level = std::max(a.level, b.level);
  const LocalOperator sum{level, ca * embed(tower, a, level) + cb * embed(tower, b, level)};
  const double norm2 = omega_sesquilinear(*state, sum, sum).real();
  if (!(norm2 > 1e-12)) {
    throw DegenerateSuperpositionError("superpose: combination vanishes on Omega");
  }
  return make_excitation(std::move(state), sum);
}

ExcitationState superpose(Complex ca, const ExcitationState& a, Complex cb, const ExcitationState& b) {
  require_same_reference(a, b);
  return superpose(a.reference_ptr(), ca, a.op(), cb, b.op());
}

double norm_distance(const ExcitationState& a, const ExcitationState& b, NormScope scope) {
  require_same_reference(a, b);
  const FunnelTower& tower = a.reference().tower();
  switch (scope.kind) {
    case NormScope::Kind::Level: {
      if (scope.level < 1 || scope.level > tower.levels()) throw ContractError("norm_distance: bad level");
      const CMatrix diff = a.density() - b.density();
      return trace_norm(reduce_to_level(tower, diff, scope.level));
    }
    case NormScope::Kind::Top:
      return trace_norm(a.density() - b.density());
    case NormScope::Kind::FullBH: {
      const double f = std::norm((a.vector_form().adjoint() * b.vector_form()).trace());
      return 2.0 * std::sqrt(std::max(0.0, 1.0 - f));
    }
  }
  return 0.0;
}

std::vector<Phase> align_phases(const std::vector<ExcitationState>& sequence, std::size_t reference) {
  if (reference >= sequence.size()) throw ContractError("align_phases: reference index out of range");
  std::vector<Phase> out;
  out.reserve(sequence.size());
  for (std::size_t m = 0; m < sequence.size(); ++m) {
    const Complex o = overlap(sequence[m], sequence[reference]);
    if (std::abs(o) <= 1e-9) {
      throw AlignmentError("align_phases: element " + std::to_string(m) + " is orthogonal to the reference");
    }
    out.push_back(Phase{o / std::abs(o)});
  }
  return out;
}

CMatrix functional_gram(const std::vector<ExcitationState>& states) {
  const Index n = static_cast<Index>(states.size());
  CMatrix g(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index k = j; k < n; ++k) {
      const Complex v = (states[j].density().adjoint() * states[k].density()).trace();
      g(j, k) = v;
      g(k, j) = std::conj(v);
    }
  }
  return g;
}

double combination_norm(const std::vector<Complex>& coefficients, const std::vector<ExcitationState>& states) {
  if (coefficients.size() != states.size() || states.empty()) {
    throw ContractError("combination: coefficient and state counts differ");
  }
  CMatrix sum = CMatrix::Zero(states[0].density().rows(), states[0].density().cols());
  for (std::size_t m = 0; m < states.size(); ++m) {
    require_same_reference(states[0], states[m]);
    sum += coefficients[m] * states[m].density();
  }
  return trace_norm(sum);
}

std::optional<NullCombination> find_null_combination(const std::vector<ExcitationState>& states,
                                                      double threshold) {
  if (states.size() < 2) return std::nullopt;
  const Index n = static_cast<Index>(states.size());
  const Index d = states[0].density().rows();
  CMatrix stacked(d * d, n);
  for (Index m = 0; m < n; ++m) {
    require_same_reference(states[0], states[static_cast<std::size_t>(m)]);
    stacked.col(m) = row_major_vec(states[static_cast<std::size_t>(m)].density());
  }
  Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  // Fewer rows than columns leaves trailing right singular vectors with no
  // singular value; they span part of the kernel exactly.
  const double smallest = s.size() < n ? 0.0 : s(s.size() - 1);
  if (smallest * smallest > threshold) return std::nullopt;
  CVector c = svd.matrixV().col(n - 1);
  c *= std::conj(leading_phase(c));
  NullCombination out;
  out.coefficients.assign(c.data(), c.data() + c.size());
  out.gram_eigenvalue = smallest * smallest;
  out.functional_norm = combination_norm(out.coefficients, states);
  return out;
}

TransferReport null_combination_transfer(const std::vector<Complex>& coefficients,
                                         const std::vector<ExcitationState>& states, int trials, Rng& rng) {
  const double norm = combination_norm(coefficients, states);
  if (norm > kStateEqualityTolerance) {
    throw NotNullCombinationError("null_combination_transfer: functional combination has norm " +
                                  std::to_string(norm));
  }
  const Index d = states[0].reference().tower().top_dim();
  TransferReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const CMatrix c = rng.ginibre(d, d);
    CMatrix sum = CMatrix::Zero(d, d);
    for (std::size_t m = 0; m < states.size(); ++m) {
      sum += coefficients[m] * (states[m].top_op().adjoint() * c * states[m].top_op());
    }
    const double residual = sum.norm() / c.norm();
    if (residual >= report.worst_residual) {
      report.worst_residual = residual;
      report.worst_witness = c;
    }
  }
  report.pass = report.worst_residual <= kTransferTolerance;
  return report;
}

ExtremalityReport extremality_check(const ExcitationState& a,
                                    const std::vector<std::pair<double, ExcitationState>>& candidates) {
  if (candidates.empty()) throw ContractError("extremality_check: empty decomposition");
  double total = 0.0;
  CMatrix mixture = CMatrix::Zero(a.density().rows(), a.density().cols());
  for (const auto& [p, state] : candidates) {
    if (!(p > 0.0)) throw ContractError("extremality_check: weights must be positive");
    require_same_reference(a, state);
    total += p;
    mixture += p * state.density();
  }
  if (std::abs(total - 1.0) > 1e-12) throw ContractError("extremality_check: weights must sum to 1");

  ExtremalityReport report;
  report.distance = trace_norm(mixture - a.density());
  report.represents = report.distance <= kStateEqualityTolerance;
  if (!report.represents) {
    report.pass = true;
    return report;
  }
  report.all_ray_equal = true;
  for (const auto& candidate : candidates) {
    try {
      report.phases.push_back(lift_phase(a, candidate.second));
    } catch (const Error&) {
      report.all_ray_equal = false;
    }
  }
  report.pass = report.all_ray_equal;
  return report;
}

CompressionReport compression_check(const ExcitationState& a, const MinimalExtensionProjection& e) {
  const FunnelTower& tower = a.reference().tower();
  if (a.level() > e.level) throw ContractError("compression_check: operator lies above the projection level");
  const CMatrix op = embed(tower, a.op(), e.level + 1);
  const CMatrix compressed = op.adjoint() * e.local * op;
  const RVector s = singular_values(compressed);
  CompressionReport report;
  report.leading_singular = s(0);
  report.second_singular = s.size() > 1 ? s(1) : 0.0;
  report.scale = (a.reference().lambda() * a.top_op() * a.top_op().adjoint()).trace().real();
  report.scale_residual = std::abs(report.leading_singular - report.scale);
  report.rank_one = report.second_singular <= kStateEqualityTolerance;
  return report;
}

}  // namespace funnelkit
