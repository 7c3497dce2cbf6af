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

#include <numeric>

#include "funnelkit/errors.hpp"
#include "funnelkit/primitives.hpp"
#include "support.hpp"

using namespace funnelkit;

namespace {

constexpr double kTwoPi = 6.283185307179586;

PartialIsometry random_partial_isometry(Rng& rng, Index d, Index rank) {
  const CMatrix u = rng.haar_unitary(d), w = rng.haar_unitary(d);
  return make_partial_isometry(u.leftCols(rank) * w.leftCols(rank).adjoint());
}

// Increasing projections onto the first m columns of an orthonormal basis of
// the initial space, ending at F.
std::vector<CMatrix> frame_schedule(const PartialIsometry& v) {
  const CMatrix basis = range_basis(v.initial);
  std::vector<CMatrix> out;
  for (Index m = 1; m <= basis.cols(); ++m) out.push_back(basis.leftCols(m) * basis.leftCols(m).adjoint());
  return out;
}

}  // namespace

TEST(Primitives, ObservableValidation) {
  const FunnelTower t = FunnelTower::build({2, 2});
  Rng rng(71);
  EXPECT_NO_THROW(make_observable(t, 2, rng.haar_unitary(4)));
  EXPECT_THROW(make_observable(t, 2, 1.01 * rng.haar_unitary(4)), ContractError);
  EXPECT_THROW(make_observable(t, 1, rng.haar_unitary(4)), ContractError);
  EXPECT_THROW(make_partial_isometry(rng.ginibre(3, 3)), ContractError);
}

// Property: the closed form of |omega_A(U_t)|^2 matches the operational path
// for random E, t and A.
TEST(Primitives, UtClosedForm) {
  const StatePtr s = fktest::default_state(72);
  Rng rng(72);
  for (int trial = 0; trial < 20; ++trial) {
    const int level = 1 + trial % 3;
    const Index dl = s->tower().dim(level);
    const LocalOperator e{level, rng.projection(dl, 1 + trial % (dl - 1))};
    const Phase t = Phase::checked(std::polar(1.0, kTwoPi * rng.uniform()));
    const ExcitationState a = fktest::random_excitation(s, 1 + (trial + 1) % 3, rng);
    const PrimitiveObservable u = ut_unitary(s->tower(), e, t);
    EXPECT_LE(unitarity_residual(u.unitary), 1e-12);
    const CMatrix utop = embed_top(s->tower(), LocalOperator{u.level, u.unitary});
    const double oracle = std::norm((a.density() * utop).trace());
    EXPECT_NEAR(ut_probability(e, t, a), oracle, 1e-12);
    EXPECT_NEAR(transition_probability(a, apply(u, a)), oracle, 1e-12);
    EXPECT_LE(std::abs(observable_expectation(u, a) - (a.density() * utop).trace()), 1e-12);
  }
}

TEST(Primitives, DilationAlongSchedule) {
  Rng rng(73);
  for (int trial = 0; trial < 5; ++trial) {
    const PartialIsometry v = random_partial_isometry(rng, 6, 2 + trial % 3);
    const std::vector<CMatrix> schedule = frame_schedule(v);
    const std::vector<DilationStep> steps = dilate_to_unitaries(v, schedule);
    ASSERT_EQ(steps.size(), schedule.size());
    for (std::size_t m = 0; m < steps.size(); ++m) {
      const CMatrix& u = steps[m].unitary;
      EXPECT_LE(fktest::max_abs(u.adjoint() * u - CMatrix::Identity(6, 6)), 1e-12);
      EXPECT_LE(fktest::max_abs((u - v.v) * schedule[m]), 1e-12);
    }
    EXPECT_LE(fktest::max_abs(steps.back().unitary * v.initial - v.v), 1e-12);
  }
  const PartialIsometry v = random_partial_isometry(rng, 4, 2);
  EXPECT_THROW(dilate_to_unitaries(v, {}), ContractError);
  EXPECT_THROW(dilate_to_unitaries(v, {CMatrix::Identity(4, 4)}), ContractError);
}

TEST(Primitives, DilatingAProjectionIsIdentityOffRange) {
  Rng rng(74);
  const CMatrix p = rng.projection(5, 2);
  const std::vector<DilationStep> steps = dilate_to_unitaries(make_partial_isometry(p), {p});
  EXPECT_LE(fktest::max_abs(steps.back().unitary - CMatrix::Identity(5, 5)), 1e-12);
}

TEST(Primitives, TunedIsometriesConverge) {
  Rng rng(75);
  for (int trial = 0; trial < 5; ++trial) {
    const PartialIsometry v = random_partial_isometry(rng, 8, 4);
    const CVector x = rng.unit_vector(8), y = rng.unit_vector(8);
    const TunedFamily fam = tuned_isometries(v, frame_schedule(v), x, y);
    EXPECT_LE(fam.final_residual, 1e-12);
    EXPECT_TRUE(fam.envelope_nonincreasing);
    EXPECT_TRUE(fam.bounded_by_envelope);
    for (const PartialIsometry& m : fam.members) EXPECT_LE(fktest::max_abs(m.range - v.range), 1e-12);
    for (const ConvergenceRow& row : fam.table) EXPECT_LE(row.strong, row.envelope + 1e-12);
  }
}

TEST(Primitives, DetectorBoundAndSupremum) {
  const StatePtr s = fktest::default_state(76);
  Rng rng(76);
  const ExcitationState a = fktest::random_excitation(s, 3, rng);
  const PartialIsometry v = random_partial_isometry(rng, 16, 6);
  const TunedFamily fam = tuned_isometries(v, frame_schedule(v), a.vector_form().col(0), a.vector_form().col(1));
  const DetectorBoundReport r = detector_bound_probe(v.range, a, fam.members);
  EXPECT_TRUE(r.bound_holds);
  EXPECT_LE(std::abs(r.final_gap), 1e-12);
  EXPECT_NEAR(r.omega_e, (a.density() * v.range).trace().real(), 1e-12);

  const CVector e = rng.unit_vector(16);
  const SupCounterexample sup = detector_sup_counterexample(e * e.adjoint(), a);
  EXPECT_TRUE(sup.exceeds);
  EXPECT_NEAR(sup.value, (a.density() * e).norm(), 1e-12);
  EXPECT_GT(sup.value, sup.omega_e);
}

TEST(Primitives, TuneDetectorOnSmallSupport) {
  const StatePtr s = fktest::default_state(77);
  Rng rng(77);
  const CVector a = rng.unit_vector(4);
  std::vector<ExcitationState> states;
  for (int j = 0; j < 4; ++j) {
    const CVector b = rng.unit_vector(4);
    states.push_back(make_excitation(s, LocalOperator{2, a * b.adjoint()}));
  }
  const LocalOperator e{3, rng.projection(16, 8)};
  const TunedDetector det = tune_detector(e, 1e-3, states);
  EXPECT_TRUE(det.exact);
  ASSERT_EQ(det.rows.size(), states.size());
  for (std::size_t j = 0; j < states.size(); ++j) {
    const TuningRow& row = det.rows[j];
    EXPECT_LT(row.leak, 1e-3);
    EXPECT_LT(row.deviation, 4e-3);
    const double p = (states[j].density() * e.matrix).trace().real();
    EXPECT_NEAR(row.target, p * p, 1e-12);
  }
  EXPECT_THROW(tune_detector(e, 1e-15, states), TuningFailureError);
  // A full-support state cannot be pushed into a rank-8 projection.
  const ExcitationState full = fktest::random_excitation(s, 3, rng);
  try {
    tune_detector(e, 1e-3, {full});
    FAIL() << "expected a tuning failure";
  } catch (const TuningFailureError& err) {
    EXPECT_GT(err.best_epsilon(), 1e-3);
  }
}

TEST(Primitives, ObservableRecovery) {
  const StatePtr s = fktest::default_state(78);
  Rng rng(78);
  const CMatrix u = rng.haar_unitary(16);
  std::vector<LocalOperator> proj{LocalOperator{3, u.leftCols(6) * u.leftCols(6).adjoint()},
                                  LocalOperator{3, u.middleCols(6, 5) * u.middleCols(6, 5).adjoint()},
                                  LocalOperator{3, u.rightCols(5) * u.rightCols(5).adjoint()}};
  const CVector x = rng.unit_vector(16), y = rng.unit_vector(16);
  const ExcitationState a = make_excitation(s, LocalOperator{3, x * y.adjoint()});
  const std::vector<double> w{1.0, -0.5, 2.0};
  const RecoveryReport r = recover_observable(proj, w, a, 1e-3);
  CMatrix o = CMatrix::Zero(16, 16);
  for (int m = 0; m < 3; ++m) o += w[m] * proj[m].matrix;
  EXPECT_NEAR(r.exact, (a.density() * o).trace().real(), 1e-12);
  EXPECT_TRUE(r.within);
  EXPECT_LE(r.error, r.bound);
  EXPECT_THROW(recover_observable({proj[0], LocalOperator{3, rng.projection(16, 3)}}, {1.0, 1.0}, a, 1e-3),
               ContractError);
}

// Property: balancing phases close the weighted polygon.
TEST(Primitives, BalancingPhases) {
  Rng rng(79);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 7;
    std::vector<double> w(n);
    for (double& x : w) x = rng.uniform() + 1e-3;
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    const auto largest = std::max_element(w.begin(), w.end());
    if (*largest > total / 2) *largest = total - *largest;  // now at most half
    const std::vector<Complex> t = balancing_phases(w);
    Complex sum = 0.0;
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(std::abs(t[i]), 1.0, 1e-12);
      sum += w[i] * t[i];
    }
    EXPECT_LE(std::abs(sum), 1e-12);
  }
  EXPECT_THROW(balancing_phases({0.9, 0.05, 0.05}), ConstructionError);
}

TEST(Primitives, VacuumDetector) {
  for (std::uint64_t seed : {80u, 81u}) {
    const StatePtr s = fktest::default_state(seed);
    const PrimitiveObservable u = vacuum_detector(s);
    EXPECT_LE(unitarity_residual(u.unitary), 1e-12);
    EXPECT_LE(std::abs((s->lambda() * u.unitary).trace()), 1e-10);
    Rng rng(seed);
    for (int trial = 0; trial < 10; ++trial) {
      const VacuumResponse r = vacuum_response(u, fktest::random_excitation(s, 1 + trial % 3, rng));
      if (r.response > 1e-9) EXPECT_GE(r.distance + 1e-12, std::sqrt(r.response));
    }
    EXPECT_LE(vacuum_response(u, vacuum_excitation(s)).response, 1e-20);
  }
  // Two-level reference with a dominant weight uses the rotated basis.
  const CMatrix rho = (CMatrix(2, 2) << 0.8, 0.0, 0.0, 0.2).finished();
  const CMatrix b = balancing_unitary(rho);
  EXPECT_LE(std::abs((rho * b).trace()), 1e-12);
  EXPECT_LE(unitarity_residual(b), 1e-12);
}

TEST(Primitives, Commensurability) {
  const Complex w = std::polar(1.0, kTwoPi / 3.0);
  CMatrix shift = CMatrix::Zero(3, 3), clock = CMatrix::Zero(3, 3);
  for (int j = 0; j < 3; ++j) {
    shift((j + 1) % 3, j) = 1.0;
    clock(j, j) = std::pow(w, j);
  }
  const Commensurability c = commensurable(shift, clock);
  EXPECT_TRUE(c.commensurable);
  EXPECT_FALSE(c.commute);
  EXPECT_LE(std::abs(c.phase - w), 1e-12);
  EXPECT_LE((clock * shift - c.phase * shift * clock).norm(), 1e-12);

  Rng rng(82);
  for (int trial = 0; trial < 20; ++trial) {
    const Commensurability r = commensurable(rng.haar_unitary(3), rng.haar_unitary(3));
    EXPECT_FALSE(r.commensurable);
    EXPECT_GT(r.residual, 1e-3);
  }
  CMatrix d1 = CMatrix::Zero(4, 4), d2 = CMatrix::Zero(4, 4);
  for (int j = 0; j < 4; ++j) {
    d1(j, j) = std::polar(1.0, kTwoPi * rng.uniform());
    d2(j, j) = std::polar(1.0, kTwoPi * rng.uniform());
  }
  const Commensurability diag = commensurable(d1, d2);
  EXPECT_TRUE(diag.commute);
  EXPECT_TRUE(diag.commensurable);
}

TEST(Primitives, SplitUnitary) {
  Rng rng(83);
  const UnitarySplit sp = split_unitary(rng.haar_unitary(5));
  EXPECT_LE(sp.hermiticity, 1e-12);
  EXPECT_LE(sp.reconstruction, 1e-12);
  EXPECT_LE(sp.commutator, 1e-12);
}
