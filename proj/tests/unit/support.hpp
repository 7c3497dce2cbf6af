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

// Shared fixtures and brute-force oracles for the unit tests. The oracles use
// explicit index loops so they do not share code paths with the library.

#include <cstdint>
#include <vector>

#include "funnelkit/excitations.hpp"
#include "funnelkit/funnel.hpp"
#include "funnelkit/numkernel.hpp"

namespace fktest {

using namespace funnelkit;

inline CMatrix naive_kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Trace over the right factor of C^p (x) C^q.
inline CMatrix naive_trace_right(const CMatrix& m, Index p, Index q) {
  CMatrix out = CMatrix::Zero(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j)
      for (Index k = 0; k < q; ++k) out(i, j) += m(i * q + k, j * q + k);
  return out;
}

/// Trace over the left factor of C^p (x) C^q.
inline CMatrix naive_trace_left(const CMatrix& m, Index p, Index q) {
  CMatrix out = CMatrix::Zero(q, q);
  for (Index k = 0; k < q; ++k)
    for (Index l = 0; l < q; ++l)
      for (Index i = 0; i < p; ++i) out(k, l) += m(i * q + k, i * q + l);
  return out;
}

/// Omega on the doubled space from an independent square root (Schur form).
inline CVector oracle_omega(const CMatrix& lambda) {
  Eigen::ComplexEigenSolver<CMatrix> es(lambda);
  CMatrix s = CMatrix::Zero(lambda.rows(), lambda.cols());
  for (Index i = 0; i < lambda.rows(); ++i) s(i, i) = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  const CMatrix v = es.eigenvectors();
  const CMatrix root = v * s * v.inverse();
  const Index d = lambda.rows();
  CVector out(d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) out(i * d + j) = root(i, j);
  return out;
}

/// A Omega on the doubled space from explicit Kronecker products.
inline CVector oracle_vector(const GenericState& state, const CMatrix& top) {
  const Index d = state.tower().top_dim();
  return naive_kron(top, CMatrix::Identity(d, d)) * oracle_omega(state.lambda());
}

inline double oracle_transition(const GenericState& state, const CMatrix& a, const CMatrix& b) {
  const CVector va = oracle_vector(state, a), vb = oracle_vector(state, b);
  return std::norm(va.dot(vb)) / (va.squaredNorm() * vb.squaredNorm());
}

inline StatePtr small_state(std::uint64_t seed, StateProfile profile = StateProfile::RandomFullRank) {
  return GenericState::sample(FunnelTower::build({2, 2}), seed, profile);
}

inline StatePtr default_state(std::uint64_t seed, StateProfile profile = StateProfile::RandomFullRank) {
  return GenericState::sample(FunnelTower::build({2, 2, 4}), seed, profile);
}

inline LocalOperator random_local(const FunnelTower& tower, int level, Rng& rng) {
  return make_local(tower, level, rng.ginibre(tower.dim(level), tower.dim(level)));
}

inline ExcitationState random_excitation(const StatePtr& state, int level, Rng& rng) {
  return make_excitation(state, random_local(state->tower(), level, rng));
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace fktest
