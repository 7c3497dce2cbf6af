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

#include <gtest/gtest.h>

#include <cmath>

#include "funnelkit/errors.hpp"
#include "support.hpp"

using namespace funnelkit;

TEST(Excitations, CanonicalRepresentative) {
  const StatePtr s = fktest::default_state(21);
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int level = 1 + trial % 3;
    const ExcitationState a = fktest::random_excitation(s, level, rng);
    EXPECT_NEAR(omega_sesquilinear(*s, a.op(), a.op()).real(), 1.0, 1e-12);
    EXPECT_NEAR(a.density().trace().real(), 1.0, 1e-12);
    // First entry of A Omega above 1e-10 is real positive.
    const Complex lead = leading_phase(a.vector_form());
    EXPECT_NEAR(std::abs(lead - Complex(1.0, 0.0)), 0.0, 1e-12);
    EXPECT_LE((a.doubled_vector() - fktest::oracle_vector(*s, a.top_op())).norm(), 1e-10);
  }
}

TEST(Excitations, GaugeIsRayInvariant) {
  const StatePtr s = fktest::default_state(22);
  Rng rng(22);
  const LocalOperator a = fktest::random_local(s->tower(), 2, rng);
  for (int trial = 0; trial < 10; ++trial) {
    const Complex c = std::polar(0.1 + 3.0 * rng.uniform(), 6.283185307179586 * rng.uniform());
    const ExcitationState x = make_excitation(s, a);
    const ExcitationState y = make_excitation(s, LocalOperator{2, c * a.matrix});
    EXPECT_LE(fktest::max_abs(x.op().matrix - y.op().matrix), 1e-12);
  }
}

TEST(Excitations, DegenerateOperatorRejected) {
  const StatePtr s = fktest::default_state(23);
  EXPECT_THROW(make_excitation(s, LocalOperator{1, CMatrix::Zero(2, 2)}), DegenerateExcitationError);
  const StatePtr pure = fktest::default_state(23, StateProfile::Pure);
  // A operator killing the support of a pure Lambda annihilates Omega.
  const CMatrix p = CMatrix::Identity(16, 16) - pure->lambda();
  EXPECT_THROW(make_excitation(pure, LocalOperator{3, p}), DegenerateExcitationError);
}

TEST(Excitations, EvaluationTwoRoutes) {
  const StatePtr s = fktest::default_state(24);
  Rng rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const ExcitationState a = fktest::random_excitation(s, 1 + trial % 3, rng);
    const LocalOperator c = fktest::random_local(s->tower(), 1 + (trial + 1) % 3, rng);
    const Complex oracle = (a.top_op().adjoint() * embed_top(s->tower(), c) * a.top_op() * s->lambda()).trace();
    EXPECT_LE(std::abs(evaluate(a, c) - oracle), 1e-12);
    EXPECT_LE(std::abs(evaluate_doubled(a, c) - oracle), 1e-12);
  }
}

// Property: the lift recovers the phase of B = t A for random (A, t).
TEST(Excitations, LiftRecoversPhase) {
  const StatePtr s = fktest::default_state(25);
  Rng rng(25);
  for (int trial = 0; trial < 50; ++trial) {
    const int level = 1 + trial % 2;
    const LocalOperator a = fktest::random_local(s->tower(), level, rng);
    const Complex t = std::polar(1.0, 6.283185307179586 * rng.uniform());
    const LocalOperator b{level, t * a.matrix};
    const Phase got = lift_phase(s, a, b);
    EXPECT_LE(std::abs(got.value - t), 1e-9);
    EXPECT_LE(ray_recovery_residual(s, a, b, got), 1e-9);
    // Canonical representatives of one ray coincide.
    const ExcitationState ea = make_excitation(s, a), eb = make_excitation(s, b);
    EXPECT_LE(std::abs(lift_phase(ea, eb).value - 1.0), 1e-9);
  }
}

TEST(Excitations, LiftRejectsDistinctRays) {
  const StatePtr s = fktest::default_state(26);
  Rng rng(26);
  const ExcitationState a = fktest::random_excitation(s, 1, rng), b = fktest::random_excitation(s, 1, rng);
  EXPECT_THROW(lift_phase(a, b), NotSameRayError);
  EXPECT_THROW(Phase::checked(Complex(1.1, 0.0)), ContractError);
}

// Property: Top distance is the trace norm of rho_A - rho_B, and it dominates
// |omega_A(C) - omega_B(C)| for every contraction C, with equality at the
// sign of the difference.
TEST(Excitations, NormDistanceVariationalSweep) {
  const StatePtr s = fktest::default_state(27);
  Rng rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    const ExcitationState a = fktest::random_excitation(s, 1 + trial % 3, rng);
    const ExcitationState b = fktest::random_excitation(s, 1 + (trial + 2) % 3, rng);
    const double dist = norm_distance(a, b, NormScope::top());
    const CMatrix diff = a.density() - b.density();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(diff);
    EXPECT_NEAR(dist, es.eigenvalues().cwiseAbs().sum(), 1e-12);
    for (int k = 0; k < 20; ++k) {
      CMatrix c = rng.ginibre(16, 16);
      c /= operator_norm(c);
      EXPECT_LE(std::abs((diff * c).trace()), dist + 1e-12);
    }
    const CMatrix sign = es.eigenvectors() *
                         es.eigenvalues().unaryExpr([](double x) { return x >= 0 ? 1.0 : -1.0; }).cast<Complex>()
                             .asDiagonal() *
                         es.eigenvectors().adjoint();
    EXPECT_NEAR(std::abs((diff * sign).trace()), dist, 1e-12);

    // Level scope uses the reduction to the first factors.
    const CMatrix red = fktest::naive_trace_right(diff, 4, 4);
    Eigen::SelfAdjointEigenSolver<CMatrix> er(red);
    EXPECT_NEAR(norm_distance(a, b, NormScope::at_level(2)), er.eigenvalues().cwiseAbs().sum(), 1e-12);
    EXPECT_LE(norm_distance(a, b, NormScope::at_level(2)), dist + 1e-12);
    EXPECT_LE(dist, norm_distance(a, b, NormScope::full_bh()) + 1e-12);
  }
}

TEST(Excitations, FullBHDistanceMatchesProjectorOracle) {
  const StatePtr s = fktest::small_state(28);
  Rng rng(28);
  for (int trial = 0; trial < 5; ++trial) {
    const ExcitationState a = fktest::random_excitation(s, 2, rng), b = fktest::random_excitation(s, 1, rng);
    const CVector va = fktest::oracle_vector(*s, a.top_op()), vb = fktest::oracle_vector(*s, b.top_op());
    const CMatrix diff = va * va.adjoint() - vb * vb.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(diff);
    EXPECT_NEAR(norm_distance(a, b, NormScope::full_bh()), es.eigenvalues().cwiseAbs().sum(), 1e-10);
  }
}

TEST(Excitations, SuperpositionCancellation) {
  const StatePtr s = fktest::default_state(29);
  Rng rng(29);
  const LocalOperator a = fktest::random_local(s->tower(), 2, rng);
  const LocalOperator b{2, Complex(0.0, 2.0) * a.matrix};
  EXPECT_THROW(superpose(s, 1.0, a, Complex(0.0, 0.5), b), DegenerateSuperpositionError);
  const ExcitationState ea = make_excitation(s, a), eb = make_excitation(s, b);
  // Equal rays: canonical representatives coincide, so 1 and -1 cancel.
  EXPECT_THROW(superpose(1.0, ea, -1.0, eb), DegenerateSuperpositionError);
  const LocalOperator c = fktest::random_local(s->tower(), 2, rng);
  const ExcitationState sum = superpose(s, 1.0, a, 1.0, c);
  const ExcitationState direct = make_excitation(s, LocalOperator{2, a.matrix + c.matrix});
  EXPECT_LE(norm_distance(sum, direct), 1e-12);
}

TEST(Excitations, AlignPhasesMakesOverlapsPositive) {
  const StatePtr s = fktest::default_state(30);
  Rng rng(30);
  const ExcitationState ref = fktest::random_excitation(s, 2, rng);
  std::vector<ExcitationState> seq{ref};
  for (int m = 1; m <= 6; ++m) {
    const CMatrix perturbed = ref.op().matrix + (1.0 / (m * m)) * rng.ginibre(4, 4);
    const Complex theta = std::polar(1.0, 0.7 * m);
    seq.push_back(make_excitation(s, LocalOperator{2, theta * perturbed}));
  }
  const std::vector<Phase> t = align_phases(seq, 0);
  for (std::size_t m = 0; m < seq.size(); ++m) {
    const Complex o = std::conj(t[m].value) * overlap(seq[m], ref);
    EXPECT_GT(o.real(), 0.0);
    EXPECT_LE(std::abs(o.imag()), 1e-12);
  }
  // Equal rays align onto the same vector.
  const LocalOperator base = fktest::random_local(s->tower(), 1, rng);
  const ExcitationState e0 = make_excitation(s, base);
  std::vector<ExcitationState> rotated{e0};
  const Complex phase = std::polar(1.0, 1.1);
  rotated.push_back(make_excitation(s, LocalOperator{1, phase * base.matrix}));
  const std::vector<Phase> tr = align_phases(rotated, 0);
  EXPECT_LE((tr[1].value * rotated[1].vector_form() - e0.vector_form()).norm(), 1e-12);
}

TEST(Excitations, NullCombinationAndTransfer) {
  const StatePtr s = fktest::default_state(31);
  Rng rng(31);
  std::vector<ExcitationState> states;
  for (int m = 0; m < 17; ++m) states.push_back(fktest::random_excitation(s, 1, rng));
  const auto null = find_null_combination(states);
  ASSERT_TRUE(null.has_value());
  EXPECT_NEAR(Eigen::Map<const CVector>(null->coefficients.data(), 17).norm(), 1.0, 1e-12);
  // Oracle: the combination of densities vanishes entrywise.
  CMatrix sum = CMatrix::Zero(16, 16);
  for (int m = 0; m < 17; ++m) sum += null->coefficients[m] * states[m].density();
  EXPECT_LE(fktest::max_abs(sum), 1e-12);
  EXPECT_LE(combination_norm(null->coefficients, states), 1e-9);
  const TransferReport tr = null_combination_transfer(null->coefficients, states, 20, rng);
  EXPECT_TRUE(tr.pass);
  EXPECT_LE(tr.worst_residual, 1e-7);
  // Independent check of the operator-level identity for one C.
  const CMatrix c = rng.ginibre(16, 16);
  CMatrix op = CMatrix::Zero(16, 16);
  for (int m = 0; m < 17; ++m) op += null->coefficients[m] * states[m].top_op().adjoint() * c * states[m].top_op();
  EXPECT_LE(op.norm() / c.norm(), 1e-7);

  std::vector<ExcitationState> few(states.begin(), states.begin() + 3);
  EXPECT_FALSE(find_null_combination(few).has_value());
  EXPECT_THROW(null_combination_transfer({1.0, 1.0, 1.0}, few, 5, rng), NotNullCombinationError);
}

TEST(Excitations, ExtremalityAndCompression) {
  const StatePtr s = fktest::default_state(32);
  Rng rng(32);
  const ExcitationState a = fktest::random_excitation(s, 1, rng);
  const ExcitationState same = make_excitation(s, LocalOperator{1, Complex(0.0, -3.0) * a.op().matrix});
  const ExtremalityReport collapsed = extremality_check(a, {{0.4, a}, {0.6, same}});
  EXPECT_TRUE(collapsed.represents);
  EXPECT_TRUE(collapsed.all_ray_equal);
  EXPECT_TRUE(collapsed.pass);
  const ExcitationState other = fktest::random_excitation(s, 1, rng);
  const ExtremalityReport distinct = extremality_check(a, {{0.5, a}, {0.5, other}});
  EXPECT_FALSE(distinct.represents);
  EXPECT_GT(distinct.distance, 1e-6);
  EXPECT_THROW(extremality_check(a, {{0.3, a}, {0.3, other}}), ContractError);

  for (int level = 1; level < 3; ++level) {
    const MinimalExtensionProjection e = minimal_extension_projection(*s, level);
    const ExcitationState x = fktest::random_excitation(s, level, rng);
    const CompressionReport c = compression_check(x, e);
    EXPECT_TRUE(c.rank_one);
    EXPECT_LE(c.second_singular, 1e-9);
    // Oracle: omega(A A*) from the density directly.
    const Complex oracle = (s->lambda() * x.top_op() * x.top_op().adjoint()).trace();
    EXPECT_NEAR(c.scale, oracle.real(), 1e-12);
    EXPECT_NEAR(c.leading_singular, oracle.real(), 1e-9);
  }
}
