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

// Transition probabilities omega_A . omega_B = |omega(A* B)|^2 between
// excitations and the structures built from them.

#include <optional>
#include <vector>

#include "funnelkit/excitations.hpp"

namespace funnelkit {

/// |omega(A* B)|^2 from the reduced overlap tr(Lambda A* B).
double transition_probability(const ExcitationState& a, const ExcitationState& b);
/// |<A Omega, B Omega>|^2 evaluated on the doubled space.
double transition_probability_doubled(const ExcitationState& a, const ExcitationState& b);

struct OrthogonalFamily {
  std::vector<ExcitationState> members;
  CMatrix overlaps;  // omega(A_l* A_m)
  double max_offdiagonal = 0.0;
  double max_diagonal_deviation = 0.0;
};

/// Complete orthogonal family of D^2 excitations. Generators (user supplied
/// first, then the matrix units of the top algebra in lexicographic order) are
/// mapped to vectors A Omega, orthonormalized, and mapped back through
/// Lambda^{-1/2}. Throws CompletenessUnavailableError when Lambda is not
/// separating.
OrthogonalFamily build_complete_family(const StatePtr& state, const std::vector<LocalOperator>& generators = {});

struct CompletenessReport {
  std::vector<double> terms;  // omega_B . omega_{A_m}
  double sum = 0.0;
};

CompletenessReport completeness_sum(const OrthogonalFamily& family, const ExcitationState& probe);

/// (tr |sqrt(rho_A) sqrt(rho_B)|)^2 on the top algebra.
double uhlmann_fidelity(const ExcitationState& a, const ExcitationState& b);

struct FuchsReport {
  double transition = 0.0;
  double top_distance = 0.0;
  double bound = 0.0;  // 1 - ||omega_A - omega_B||^2 / 4
  double gap = 0.0;    // bound - transition
  bool inequality_holds = false;
  /// |transition - (1 - d^2/4)| with d the full B(H) distance of the vector
  /// states; zero up to round-off for every Lambda.
  double full_bh_residual = 0.0;
  bool pure_reference = false;
  /// For a pure reference the top-algebra bound is attained.
  bool equality_holds = false;
};

FuchsReport fuchs_bound_check(const ExcitationState& a, const ExcitationState& b);

enum class ContinuitySchedule { Constant, Inverse, InverseSquare };

struct ContinuityRow {
  int m = 0;
  double deviation = 0.0;  // |omega_{A_m} . omega_B - omega_A . omega_B|
  double envelope = 0.0;   // sup over k >= m of the deviation
};

struct ContinuityReport {
  std::vector<ContinuityRow> rows;
  /// max m^p deviation_m with p = 1 (Inverse) or 2 (InverseSquare).
  double fit_constant = 0.0;
  bool envelope_decreasing = false;
  double final_deviation = 0.0;
};

/// A_m = A + s_m X with s_m = 0, 1/m or 1/m^2 for m = 1..steps, compared
/// against the fixed probe B.
ContinuityReport local_continuity_probe(const StatePtr& state, const LocalOperator& a, const LocalOperator& b,
                                        const LocalOperator& x, ContinuitySchedule schedule, int steps);

/// X - omega(A* X) A / omega(A* A): the part of X orthogonal to A Omega.
LocalOperator orthogonal_direction(const GenericState& state, const LocalOperator& a, const LocalOperator& x);

}  // namespace funnelkit
