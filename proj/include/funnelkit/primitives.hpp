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

// Primitive observables: operations Ad U on excitations, whose measurable
// content is the transition probability |omega_A(U)|^2.
//
// Isometries with V*V = 1 are unitary in finite dimension, so the isometry
// constructions run on partial isometries whose initial and range projections
// have equal rank. Limits in the strong or weak operator topology become
// finite schedules E_1 <= ... <= E_M = F whose final step is exact.

#include <vector>

#include "funnelkit/transitions.hpp"

namespace funnelkit {

struct PrimitiveObservable {
  int level = 1;
  CMatrix unitary;
};

/// Throws ContractError unless U is unitary within 1e-12 (entrywise).
PrimitiveObservable make_observable(const FunnelTower& tower, int level, CMatrix unitary);
double unitarity_residual(const CMatrix& u);

struct PartialIsometry {
  CMatrix v;
  CMatrix initial;  // F = V* V
  CMatrix range;    // E = V V*
};

/// Validates V F = V, E V = V and idempotence of F, E within 1e-12.
PartialIsometry make_partial_isometry(CMatrix v);

/// max(||P^2 - P||, ||P - P*||) in the max-entry norm.
double projection_residual(const CMatrix& p);

/// Excitation of U A.
ExcitationState apply(const PrimitiveObservable& obs, const ExcitationState& a);
/// omega_A(U) on the top algebra.
Complex observable_expectation(const PrimitiveObservable& obs, const ExcitationState& a);

/// U_t = E + t (1 - E).
PrimitiveObservable ut_unitary(const FunnelTower& tower, const LocalOperator& e, Phase t);
/// omega_A(E)^2 + omega_A(1-E)^2 + 2 Re(t) omega_A(E) omega_A(1-E).
double ut_probability(const LocalOperator& e, Phase t, const ExcitationState& a);

struct DilationStep {
  CMatrix unitary;          // U_m = V E_m + W_m
  double unitarity = 0.0;   // residual of U_m
  double agreement = 0.0;   // ||(U_m - V) E_m||_F, zero by construction
};

/// Unitary dilations of V along an increasing schedule of projections
/// E_m <= F ending at F. W_m maps ran(1 - E_m) onto ran(1 - V E_m V*).
std::vector<DilationStep> dilate_to_unitaries(const PartialIsometry& v, const std::vector<CMatrix>& schedule);

struct ConvergenceRow {
  int m = 0;
  double strong = 0.0;    // ||(V_m* - E) x||
  double weak = 0.0;      // |<x, (V_m - E) y>|
  double envelope = 0.0;  // 2 ||(F - E_m) V* x|| (times ||y|| for the weak column)
};

struct TunedFamily {
  std::vector<PartialIsometry> members;  // V_m = V U_m*, all with range E
  std::vector<ConvergenceRow> table;
  double final_residual = 0.0;           // ||V_M - E||_F
  bool envelope_nonincreasing = false;
  bool bounded_by_envelope = false;
};

/// V_m = V U_m* for the dilations of V; every V_m has range projection
/// E = V V*, and V_M = E at the final step. `x`, `y` are probe vectors.
TunedFamily tuned_isometries(const PartialIsometry& v, const std::vector<CMatrix>& schedule, const CVector& x,
                             const CVector& y);

struct DetectorBoundReport {
  std::vector<double> values;    // |omega_A(V_m)|
  std::vector<double> epsilons;  // ||(V_m* - E) A Omega||
  double omega_e = 0.0;          // omega_A(E)
  double max_value = 0.0;
  double final_gap = 0.0;        // omega_A(E) - |omega_A(V_M)|
  bool bound_holds = false;      // |omega_A(V_m)| <= omega_A(E) + eps_m for all m
};

/// E and the family members act on the top space.
DetectorBoundReport detector_bound_probe(const CMatrix& e, const ExcitationState& a,
                                         const std::vector<PartialIsometry>& family);

struct SupCounterexample {
  CMatrix v;            // rank-one partial isometry with range E
  double value = 0.0;   // |omega_A(V)|
  double omega_e = 0.0; // omega_A(E)
  bool exceeds = false;
};

/// For a rank-one E = |e><e| the partial isometry |e><g| with g ~ rho_A e
/// reaches ||rho_A e|| >= omega_A(E), so the supremum over unrestricted
/// partial isometries is not omega_A(E).
SupCounterexample detector_sup_counterexample(const CMatrix& e, const ExcitationState& a);

struct TuningRow {
  double leak = 0.0;         // omega_{UA}(1 - E)
  double transition = 0.0;   // omega_A . omega_{UA}
  double target = 0.0;       // omega_A(E)^2
  double deviation = 0.0;    // |transition - target|
};

struct TunedDetector {
  PrimitiveObservable observable;
  std::vector<TuningRow> rows;
  /// max over states of max(leak, deviation / 4).
  double achieved = 0.0;
  /// True when the joint support fits, rank E >= dim E S + dim (1-E) S.
  bool exact = false;
};

/// Unitary U with omega_{UA}(1 - E) < eps and |omega_A . omega_{UA} -
/// omega_A(E)^2| < 4 eps for each state. V = P_T + J with T = E S, J an
/// isometry from (1 - E) S into E minus T, S the joint support of the states;
/// U is the final dilation of V. Throws TuningFailureError with the best
/// achieved epsilon when the bounds cannot be met.
TunedDetector tune_detector(const LocalOperator& e, double epsilon, const std::vector<ExcitationState>& states);

struct RecoveryReport {
  double estimate = 0.0;  // sum o_m sqrt(omega_A . omega_{U_m A})
  double exact = 0.0;     // tr(rho_A O)
  double error = 0.0;
  double bound = 0.0;     // M sqrt(4 eps) max |o_m|
  bool within = false;
};

/// Throws ContractError for non-commuting or non-projection inputs.
RecoveryReport recover_observable(const std::vector<LocalOperator>& projections, const std::vector<double>& weights,
                                  const ExcitationState& a, double epsilon);

/// Unitary diagonal in a basis where the diagonal weights w_i of `rho` are
/// at most 1/2 (eigenbasis, or the Fourier-rotated eigenbasis), with phases
/// solving sum w_i t_i = 0.
CMatrix balancing_unitary(const CMatrix& rho);

/// Phases t_i with sum w_i t_i = 0; requires max w_i <= sum w_i / 2. The
/// largest weight closes the polygon formed by the remaining ones, recursively.
std::vector<Complex> balancing_phases(const std::vector<double>& weights);

/// U in the top algebra with omega(U) = 0. Requires a faithful reference.
PrimitiveObservable vacuum_detector(const StatePtr& state);

struct VacuumResponse {
  double response = 0.0;  // omega_A . omega_{UA} = |omega_A(U)|^2
  double distance = 0.0;  // ||omega_A - omega||
  bool witness = false;   // response > 1e-9 implies distance >= |omega_A(U)| > 0
};

VacuumResponse vacuum_response(const PrimitiveObservable& detector, const ExcitationState& a);

struct Commensurability {
  bool commensurable = false;
  Complex phase{0.0, 0.0};  // t with U2 U1 = t U1 U2
  double residual = 0.0;    // ||U2 U1 - t U1 U2||_F
  bool commute = false;
};

Commensurability commensurable(const FunnelTower& tower, const PrimitiveObservable& u1, const PrimitiveObservable& u2);
/// Same test for bare unitaries of equal size.
Commensurability commensurable(const CMatrix& u1, const CMatrix& u2);

struct UnitarySplit {
  CMatrix h1;  // (U + U*) / 2
  CMatrix h2;  // i (U* - U) / 2
  double hermiticity = 0.0;
  double reconstruction = 0.0;  // ||H1 + i H2 - U||_F
  double commutator = 0.0;      // ||[H1, H2]||_F
};

UnitarySplit split_unitary(const CMatrix& u);

}  // namespace funnelkit
