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

// The *-algebra spanned by the excitations omega_A, with product
// (omega_A x omega_B)(C) = omega(A* B) omega(B* C A), realized alongside its
// kernel picture Psi = sum_m c_m |A_m Omega><A_m Omega| on the doubled space.

#include <vector>

#include "funnelkit/excitations.hpp"

namespace funnelkit {

/// Largest doubled-space dimension D^2 for which kernels are materialized.
inline constexpr Index kMaxKernelDimension = 1024;
inline constexpr std::size_t kDefaultTermBudget = 64;

struct AlgebraTerm {
  Complex coefficient;
  ExcitationState state;
};

class StateAlgebraElement {
 public:
  static StateAlgebraElement zero(StatePtr state);
  static StateAlgebraElement from_terms(StatePtr state, std::vector<AlgebraTerm> terms);
  static StateAlgebraElement from_excitation(const ExcitationState& a, Complex coefficient = 1.0);

  const GenericState& reference() const noexcept { return *state_; }
  const StatePtr& reference_ptr() const noexcept { return state_; }
  const std::vector<AlgebraTerm>& terms() const noexcept { return terms_; }
  /// Psi on the doubled space, built from kron(A_m, 1) Omega.
  const CMatrix& kernel() const noexcept { return kernel_; }
  double kernel_norm() const { return kernel_.norm(); }
  /// Zero test on the kernel; coefficient lists are not unique.
  bool is_zero(double tolerance = 1e-10) const { return kernel_norm() <= tolerance; }

  /// psi(C) = sum_m c_m omega_{A_m}(C).
  Complex evaluate(const LocalOperator& c) const;
  /// tr(Psi (C (x) 1)).
  Complex evaluate_kernel(const LocalOperator& c) const;

 private:
  StatePtr state_;
  std::vector<AlgebraTerm> terms_;
  CMatrix kernel_;
};

StateAlgebraElement add(const StateAlgebraElement& x, const StateAlgebraElement& y);
StateAlgebraElement scale(Complex c, const StateAlgebraElement& x);

/// Bilinear extension of the product. The result is returned in normal form
/// (see reduce_pairs); throws BudgetError when it needs more than `budget`
/// terms.
StateAlgebraElement times(const StateAlgebraElement& x, const StateAlgebraElement& y,
                          std::size_t budget = kDefaultTermBudget);

StateAlgebraElement dagger(const StateAlgebraElement& x);

/// Rewrites sum_{ij} K_ij |X_i Omega><X_j Omega| as a combination of at most
/// 2 r excitation terms, r = dim span{X_i Omega}: orthonormalize through the
/// Gram matrix omega(X_i* X_j), split K into Hermitian and anti-Hermitian
/// parts and diagonalize each.
StateAlgebraElement reduce_pairs(const StatePtr& state, const std::vector<LocalOperator>& basis, const CMatrix& k,
                                 std::size_t budget = kDefaultTermBudget);

struct SpectralDecomposition {
  std::vector<double> weights;
  std::vector<ExcitationState> states;  // mutually orthogonal
  double max_transition = 0.0;          // largest pairwise omega_{A_l} . omega_{A_m}
  double reconstruction_residual = 0.0; // ||sum r_m Psi_m - Psi||_F
  bool convex = false;                  // r_m >= -1e-10 and sum r_m = 1 +- 1e-9
};

/// Restricts Psi to span{B_m Omega}, orthonormalizes and diagonalizes.
/// Throws ContractError unless psi is symmetric within 1e-10.
SpectralDecomposition spectral_decompose(const StateAlgebraElement& x);

enum class Side { Left, Right };

/// (A x psi)(C) = psi(A C) or (psi x A)(C) = psi(C A), re-expressed as a
/// combination of excitations via polarization. With this convention
/// A x (B x psi) = (B A) x psi.
StateAlgebraElement bimodule_act(Side side, const LocalOperator& a, const StateAlgebraElement& x,
                                 std::size_t budget = kDefaultTermBudget);

/// omega_A(psi) = (omega_A x psi)(1) = sum_m c_m |omega(A* B_m)|^2.
Complex dual_state_apply(const ExcitationState& a, const StateAlgebraElement& x);
/// <A Omega, Psi A Omega>.
Complex dual_state_apply_kernel(const ExcitationState& a, const StateAlgebraElement& x);

/// omega(x) = omega_1(x) = (omega x x)(1) = sum_m c_m |omega(A_m)|^2.
Complex vacuum_functional(const StateAlgebraElement& x);

struct FaithfulnessWitness {
  ExcitationState a;
  ExcitationState b;
  Complex value;         // omega(omega_A x psi x omega_B)
  bool shifted = false;  // found with a probe c 1 + A_l
};

/// Searches states with omega(omega_A x psi x omega_B) != 0 following the
/// spectral recipe. Throws ContractError for ||Psi||_F <= 1e-8 and
/// FaithfulnessFailureError when no witness is found.
FaithfulnessWitness faithfulness_probe(const StateAlgebraElement& x);

/// W psi = sum_m c_m omega(A_m*) A_m Omega.
CVector w_isomorphism(const StateAlgebraElement& x);

/// <psi_1 | psi_2> = omega(psi_1^dagger x psi_2) from the term formula.
Complex gns_inner_product(const StateAlgebraElement& x, const StateAlgebraElement& y);

/// ||Psi_{x y} - Psi_x Psi_y||_F.
double product_kernel_residual(const StateAlgebraElement& product, const StateAlgebraElement& x,
                               const StateAlgebraElement& y);

}  // namespace funnelkit
