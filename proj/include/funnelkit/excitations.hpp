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

// Excitations omega_A = omega o Ad A of the reference state, their lift to
// rays of operators, superposition, distances and convex structure.

#include <optional>
#include <utility>
#include <vector>

#include "funnelkit/funnel.hpp"

namespace funnelkit {

struct Phase {
  Complex value{1.0, 0.0};

  /// Throws ContractError unless |t| = 1 within 1e-12.
  static Phase checked(Complex t);
  double argument() const { return std::arg(value); }
};

class ExcitationState {
 public:
  const GenericState& reference() const noexcept { return *state_; }
  const StatePtr& reference_ptr() const noexcept { return state_; }
  /// Canonical representative: omega(A*A) = 1 and the first entry of A Omega
  /// with modulus above 1e-10 is real positive.
  const LocalOperator& op() const noexcept { return op_; }
  int level() const noexcept { return op_.level; }
  /// A embedded in the top algebra.
  const CMatrix& top_op() const noexcept { return top_; }
  /// rho_A = A Lambda A* on the top algebra.
  const CMatrix& density() const noexcept { return density_; }
  /// A Omega in matrix form, (A (x) 1) Lambda^{1/2}.
  const CMatrix& vector_form() const noexcept { return vector_; }
  /// A Omega on the doubled space, computed as kron(A, 1) Omega.
  CVector doubled_vector() const;

 private:
  friend ExcitationState make_excitation(StatePtr, const LocalOperator&);
  StatePtr state_;
  LocalOperator op_;
  CMatrix top_;
  CMatrix density_;
  CMatrix vector_;
};

/// Normalizes A by omega(A*A)^{-1/2} and applies the gauge. Throws
/// DegenerateExcitationError when A Omega vanishes.
ExcitationState make_excitation(StatePtr state, const LocalOperator& a);

/// The reference state itself, omega = omega_1.
ExcitationState vacuum_excitation(StatePtr state);

/// omega(X* Y) for arbitrary local operators.
Complex omega_sesquilinear(const GenericState& state, const LocalOperator& x, const LocalOperator& y);

/// omega(A* B) for the canonical representatives.
Complex overlap(const ExcitationState& a, const ExcitationState& b);

/// omega_A(C) = tr(rho_A C).
Complex evaluate(const ExcitationState& a, const LocalOperator& c);
/// omega_A(C) as <A Omega, (C (x) 1) A Omega> on the doubled space.
Complex evaluate_doubled(const ExcitationState& a, const LocalOperator& c);

inline constexpr double kStateEqualityTolerance = 1e-9;

/// Phase t with B = t A for two equal states; here t = omega(A* B).
/// Throws NotSameRayError when the states differ by more than `delta_eq` in
/// the top-algebra norm and GenericityViolationError when they coincide while
/// |omega(A* B)| is far from 1.
Phase lift_phase(const ExcitationState& a, const ExcitationState& b, double delta_eq = kStateEqualityTolerance);

/// ||B - t A||_F / ||A||_F for the phase returned by lift_phase.
double ray_recovery_residual(const ExcitationState& a, const ExcitationState& b, Phase t);

/// Same lift for bare operators: both are normalized by omega(X*X)^{-1/2}
/// without fixing their phase, so t carries the phase relating B to A.
Phase lift_phase(const StatePtr& state, const LocalOperator& a, const LocalOperator& b,
                 double delta_eq = kStateEqualityTolerance);
double ray_recovery_residual(const StatePtr& state, const LocalOperator& a, const LocalOperator& b, Phase t);

/// Excitation of cA A + cB B. The result depends on the concrete operators,
/// not only on their rays; the state overload uses canonical representatives.
ExcitationState superpose(StatePtr state, Complex ca, const LocalOperator& a, Complex cb, const LocalOperator& b);
ExcitationState superpose(Complex ca, const ExcitationState& a, Complex cb, const ExcitationState& b);

struct NormScope {
  enum class Kind { Level, Top, FullBH };
  Kind kind = Kind::Top;
  int level = 0;

  static NormScope at_level(int n) { return {Kind::Level, n}; }
  static NormScope top() { return {Kind::Top, 0}; }
  static NormScope full_bh() { return {Kind::FullBH, 0}; }
};

/// Norm distance of two excitations as functionals on N_level, on the top
/// algebra, or on all of B(H) of the doubled space (vector-state formula).
double norm_distance(const ExcitationState& a, const ExcitationState& b, NormScope scope = NormScope::top());

/// Phases t_m making omega((t_m A_m)* A_ref) real positive.
std::vector<Phase> align_phases(const std::vector<ExcitationState>& sequence, std::size_t reference);

struct NullCombination {
  std::vector<Complex> coefficients;  // unit 2-norm
  double gram_eigenvalue = 0.0;
  double functional_norm = 0.0;
};

/// Gram matrix <rho_j, rho_k>_HS of the excitation functionals.
CMatrix functional_gram(const std::vector<ExcitationState>& states);

/// Trace norm of sum_m c_m rho_{A_m}.
double combination_norm(const std::vector<Complex>& coefficients, const std::vector<ExcitationState>& states);

/// Kernel vector of the functional Gram matrix when its smallest eigenvalue
/// is below `threshold`, otherwise nullopt. The vector is taken from an SVD of
/// the stacked functionals rather than from the Gram matrix itself.
std::optional<NullCombination> find_null_combination(const std::vector<ExcitationState>& states,
                                                      double threshold = 1e-10);

struct TransferReport {
  double worst_residual = 0.0;  // max ||sum c_m A_m* C A_m||_F / ||C||_F
  int trials = 0;
  CMatrix worst_witness;
  bool pass = false;
};

inline constexpr double kTransferTolerance = 1e-7;

/// Checks that a null combination of functionals is also null at operator
/// level, sum c_m A_m* C A_m = 0, for `trials` random top-algebra C.
/// Throws NotNullCombinationError when the functional combination is not null.
TransferReport null_combination_transfer(const std::vector<Complex>& coefficients,
                                         const std::vector<ExcitationState>& states, int trials, Rng& rng);

struct ExtremalityReport {
  bool represents = false;  // the mixture equals omega_A within 1e-9
  double distance = 0.0;    // ||sum p_m omega_{A_m} - omega_A||
  bool all_ray_equal = false;
  std::vector<Phase> phases;
  bool pass = false;
};

ExtremalityReport extremality_check(const ExcitationState& a,
                                    const std::vector<std::pair<double, ExcitationState>>& candidates);

struct CompressionReport {
  double leading_singular = 0.0;
  double second_singular = 0.0;
  double scale = 0.0;  // omega(A A*)
  double scale_residual = 0.0;
  bool rank_one = false;
};

/// A* E_n A inside N_{n+1} is omega(A A*) times a rank-one projection.
CompressionReport compression_check(const ExcitationState& a, const MinimalExtensionProjection& e);

}  // namespace funnelkit
