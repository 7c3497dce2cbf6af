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

// Finite truncation of a funnel of matrix algebras N_1 c N_2 c ... c N_L.
//
// Level n carries the algebra M_{D_n} with D_n = d_1 * k_2 * ... * k_n; it
// sits inside the top algebra M_D as a (x) 1. Every factor has dimension >= 2
// and each new factor must be able to purify the previous levels
// (k_{n+1} >= D_n), which is what makes pure extensions of restricted states
// exist at truncation.
//
// The reference state is a density matrix Lambda on C^D, realized in standard
// form as the vector Omega = vec(Lambda^{1/2}) on C^D (x) C^D, so that
// tr(Lambda A) == <Omega, (A (x) 1) Omega>.

#include <memory>
#include <string>
#include <vector>

#include "funnelkit/numkernel.hpp"

namespace funnelkit {

class FunnelTower {
 public:
  /// Validates the dimension list and the purification capacity rule.
  /// Throws ConfigurationError (CapacityError for the capacity rule).
  static FunnelTower build(std::vector<int> factor_dims);

  int levels() const noexcept { return static_cast<int>(factors_.size()); }
  /// Dimension of the tensor factor added at `level` (1-based).
  int factor_dim(int level) const;
  /// Cumulative dimension D_n of level n (1-based).
  Index dim(int level) const;
  Index top_dim() const noexcept { return cumulative_.back(); }
  const std::vector<int>& factor_dims() const noexcept { return factors_; }
  const std::vector<Index>& cumulative_dims() const noexcept { return cumulative_; }

  /// Factor dimensions of the doubled space C^D (x) C^D in tensor order.
  std::vector<int> doubled_factor_dims() const;

  bool operator==(const FunnelTower& other) const noexcept { return factors_ == other.factors_; }

 private:
  std::vector<int> factors_;
  std::vector<Index> cumulative_;
};

/// An element of N_n. Acts on the top space as matrix (x) 1.
struct LocalOperator {
  int level = 1;
  CMatrix matrix;
};

/// Validating constructor: `matrix` must be D_level x D_level.
LocalOperator make_local(const FunnelTower& tower, int level, CMatrix matrix);
LocalOperator local_identity(const FunnelTower& tower, int level);

/// Image of `op` in N_target (target >= op.level).
CMatrix embed(const FunnelTower& tower, const LocalOperator& op, int target_level);
inline CMatrix embed_top(const FunnelTower& tower, const LocalOperator& op) {
  return embed(tower, op, tower.levels());
}
LocalOperator lift(const FunnelTower& tower, const LocalOperator& op, int target_level);

enum class StateProfile { RandomFullRank, Pure, NearTracial };

std::string to_string(StateProfile profile);
StateProfile parse_profile(const std::string& name);

struct StateOptions {
  /// Separating threshold is sep_factor / D.
  double sep_factor = 1e-6;
  double near_tracial_delta = 0.1;
  int max_redraws = 16;
  int genericity_trials = 8;
};

class GenericState {
 public:
  static std::shared_ptr<const GenericState> sample(const FunnelTower& tower, std::uint64_t seed,
                                                    StateProfile profile, StateOptions options = {});
  /// Wraps an explicit density matrix (validated Hermitian, PSD, unit trace).
  static std::shared_ptr<const GenericState> from_density(const FunnelTower& tower, CMatrix lambda,
                                                          StateProfile profile = StateProfile::RandomFullRank,
                                                          StateOptions options = {});

  const FunnelTower& tower() const noexcept { return tower_; }
  StateProfile profile() const noexcept { return profile_; }
  const CMatrix& lambda() const noexcept { return lambda_; }
  const RVector& spectrum() const noexcept { return spectrum_; }
  const CMatrix& eigenbasis() const noexcept { return eigenbasis_; }
  const CMatrix& sqrt_lambda() const noexcept { return sqrt_lambda_; }
  /// Lambda^{-1/2}; throws ContractError when Lambda is rank deficient.
  const CMatrix& inv_sqrt_lambda() const;
  /// Omega as a doubled-space vector (length D^2, row-major).
  const CVector& omega_vector() const noexcept { return omega_; }

  double separating_threshold() const noexcept { return sep_threshold_; }
  double min_eigenvalue() const noexcept { return spectrum_(spectrum_.size() - 1); }
  /// False for rank-deficient Lambda (e.g. the pure profile): the separating
  /// property is waived and flagged rather than enforced.
  bool separating() const noexcept { return min_eigenvalue() >= sep_threshold_; }

  /// omega(A) = tr(Lambda A) for A in any level.
  Complex expectation(const LocalOperator& a) const;
  /// omega(A) evaluated as <Omega, (A (x) 1) Omega> on the doubled space.
  Complex expectation_doubled(const LocalOperator& a) const;
  /// Restriction of Lambda to the first `level` factors.
  CMatrix reduced(int level) const;

 private:
  GenericState() = default;
  void finalize(const StateOptions& options);

  FunnelTower tower_;
  StateProfile profile_ = StateProfile::RandomFullRank;
  CMatrix lambda_;
  RVector spectrum_;
  CMatrix eigenbasis_;
  CMatrix sqrt_lambda_;
  CMatrix inv_sqrt_lambda_;
  CVector omega_;
  double sep_threshold_ = 0.0;
};

using StatePtr = std::shared_ptr<const GenericState>;

struct LevelGenericity {
  int level = 0;
  /// sigma_min / sigma_max of the map (A, B) -> (A (x) 1) Lambda (B (x) 1)*
  /// restricted to A, B in N_level; zero means two distinct rays at this level
  /// can give the same excitation functional.
  double injectivity_ratio = 0.0;
  double min_pair_distance = 0.0;
  double extension_residual = 0.0;
  bool pass = false;
};

struct GenericityReport {
  bool pass = false;
  bool separating = false;
  double min_eigenvalue = 0.0;
  std::vector<LevelGenericity> levels;
  std::vector<std::string> failures;
};

/// Finite stand-in for genericity of the reference state. Checks the
/// separating threshold, the injectivity of the excitation map at every level
/// below the top, that `trials` random pairs of distinct rays per level give
/// distinct functionals on the top algebra, and that every minimal extension
/// projection is valid.
GenericityReport check_genericity(const GenericState& state, int trials, std::uint64_t seed = 0);

inline constexpr double kInjectivityThreshold = 1e-8;
inline constexpr double kPairDistanceThreshold = 1e-6;

struct MinimalExtensionProjection {
  int level = 0;
  /// Purification of the level-n restriction in C^{D_{n+1}}.
  CVector psi;
  /// |psi><psi| as an element of N_{n+1}.
  CMatrix local;
  /// The same projection embedded in the top algebra.
  CMatrix projector;
};

/// Rank-one projection E_n in N_{n+1} with E_n C E_n = omega(C) E_n for every
/// C in N_n. Eigenvectors of the restriction (descending eigenvalues, each
/// phase-fixed so its leading entry is real positive) are paired with the
/// standard basis of the (n+1)-th factor.
MinimalExtensionProjection minimal_extension_projection(const GenericState& state, int level);

/// max over matrix units C of N_n of ||E_n C E_n - omega(C) E_n||_F.
double extension_residual(const GenericState& state, const MinimalExtensionProjection& e);

/// Matrix units 1_{D_n} (x) e_ij of the relative commutant of N_n in N_{n+1}.
std::vector<LocalOperator> relative_commutant_basis(const FunnelTower& tower, int level);

/// Matrix-unit basis e_ij of N_n.
std::vector<LocalOperator> matrix_unit_basis(const FunnelTower& tower, int level);

}  // namespace funnelkit
