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

#include "funnelkit/funnel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "funnelkit/errors.hpp"

namespace funnelkit {

FunnelTower FunnelTower::build(std::vector<int> factor_dims) {
  if (factor_dims.empty()) throw ConfigurationError("tower: dimension list is empty");
  FunnelTower tower;
  Index cumulative = 1;
  for (std::size_t i = 0; i < factor_dims.size(); ++i) {
    const int level = static_cast<int>(i) + 1;
    const int k = factor_dims[i];
    if (k < 2) {
      throw ConfigurationError("tower: factor dimension at level " + std::to_string(level) +
                                   " is " + std::to_string(k) + ", must be >= 2",
                               level);
    }
    if (i > 0 && k < cumulative) {
      throw CapacityError("tower: capacity rule violated at level " + std::to_string(level) + " (k_" +
                              std::to_string(level) + "=" + std::to_string(k) + " < D_" +
                              std::to_string(level - 1) + "=" + std::to_string(cumulative) + ")",
                          level);
    }
    cumulative *= k;
    if (cumulative * cumulative > kMaxTotalDimension * kMaxTotalDimension / 16) {
      throw SizingError("tower: doubled space dimension exceeds the configured maximum");
    }
    tower.cumulative_.push_back(cumulative);
  }
  tower.factors_ = std::move(factor_dims);
  return tower;
}

int FunnelTower::factor_dim(int level) const {
  if (level < 1 || level > levels()) throw ContractError("tower: level out of range");
  return factors_[static_cast<std::size_t>(level - 1)];
}

Index FunnelTower::dim(int level) const {
  if (level < 1 || level > levels()) throw ContractError("tower: level out of range");
  return cumulative_[static_cast<std::size_t>(level - 1)];
}

std::vector<int> FunnelTower::doubled_factor_dims() const {
  std::vector<int> dims = factors_;
  dims.insert(dims.end(), factors_.begin(), factors_.end());
  return dims;
}

LocalOperator make_local(const FunnelTower& tower, int level, CMatrix matrix) {
  const Index d = tower.dim(level);
  if (matrix.rows() != d || matrix.cols() != d) {
    throw ContractError("local operator at level " + std::to_string(level) + " must be " +
                        std::to_string(d) + "x" + std::to_string(d));
  }
  if (!matrix.allFinite()) throw ContractError("local operator has non-finite entries");
  return LocalOperator{level, std::move(matrix)};
}

LocalOperator local_identity(const FunnelTower& tower, int level) {
  return LocalOperator{level, identity(tower.dim(level))};
}

CMatrix embed(const FunnelTower& tower, const LocalOperator& op, int target_level) {
  if (target_level < op.level) throw ContractError("embed: target level below operator level");
  const Index d = tower.dim(op.level);
  if (op.matrix.rows() != d || op.matrix.cols() != d) {
    throw ContractError("embed: operator size does not match its level");
  }
  if (target_level == op.level) return op.matrix;
  return kron(op.matrix, identity(tower.dim(target_level) / d));
}

LocalOperator lift(const FunnelTower& tower, const LocalOperator& op, int target_level) {
  return LocalOperator{target_level, embed(tower, op, target_level)};
}

std::string to_string(StateProfile profile) {
  switch (profile) {
    case StateProfile::RandomFullRank:
      return "random_full_rank";
    case StateProfile::Pure:
      return "pure";
    case StateProfile::NearTracial:
      return "near_tracial";
  }
  return "unknown";
}

StateProfile parse_profile(const std::string& name) {
  if (name == "random_full_rank") return StateProfile::RandomFullRank;
  if (name == "pure") return StateProfile::Pure;
  if (name == "near_tracial") return StateProfile::NearTracial;
  throw ConfigurationError("unknown state profile '" + name + "'");
}

namespace {

CMatrix random_spectrum_density(Rng& rng, Index d) {
  const CMatrix u = rng.haar_unitary(d);
  RVector p(d);
  for (Index i = 0; i < d; ++i) {
    double x = rng.uniform();
    while (x <= 0.0) x = rng.uniform();
    p(i) = -std::log(x);
  }
  p /= p.sum();
  CMatrix lambda = u * p.cast<Complex>().asDiagonal() * u.adjoint();
  return 0.5 * (lambda + lambda.adjoint());
}

}  // namespace

void GenericState::finalize(const StateOptions& options) {
  const Index d = tower_.top_dim();
  if (lambda_.rows() != d || lambda_.cols() != d) {
    throw ContractError("reference density has the wrong size for the tower");
  }
  if (std::abs(lambda_.trace().real() - 1.0) > 1e-12 || std::abs(lambda_.trace().imag()) > 1e-12) {
    throw ContractError("reference density must have unit trace");
  }
  const HermEig eig = herm_eig(lambda_);
  if (eig.eigenvalues(d - 1) < -1e-12) throw ContractError("reference density is not positive");
  spectrum_ = eig.eigenvalues;
  eigenbasis_ = eig.eigenvectors;
  sep_threshold_ = options.sep_factor / static_cast<double>(d);
  const RVector clamped = spectrum_.cwiseMax(0.0);
  sqrt_lambda_ = eigenbasis_ * clamped.cwiseSqrt().cast<Complex>().asDiagonal() * eigenbasis_.adjoint();
  if (separating()) {
    inv_sqrt_lambda_ =
        eigenbasis_ * clamped.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * eigenbasis_.adjoint();
  }
  omega_ = row_major_vec(sqrt_lambda_);
}

std::shared_ptr<const GenericState> GenericState::from_density(const FunnelTower& tower, CMatrix lambda,
                                                               StateProfile profile, StateOptions options) {
  auto state = std::shared_ptr<GenericState>(new GenericState());
  state->tower_ = tower;
  state->profile_ = profile;
  if (hermiticity_residual(lambda) > tol::kContract * std::max(1.0, lambda.norm())) {
    throw ContractError("reference density is not Hermitian");
  }
  state->lambda_ = 0.5 * (lambda + lambda.adjoint());
  state->finalize(options);
  return state;
}

std::shared_ptr<const GenericState> GenericState::sample(const FunnelTower& tower, std::uint64_t seed,
                                                         StateProfile profile, StateOptions options) {
  const Index d = tower.top_dim();
  if (profile == StateProfile::Pure) {
    Rng rng(derive_seed(seed, "state/pure"));
    const CVector v = rng.unit_vector(d);
    return from_density(tower, v * v.adjoint(), profile, options);
  }
  for (int attempt = 0; attempt <= options.max_redraws; ++attempt) {
    Rng rng(derive_seed(seed, "state/" + to_string(profile) + "/" + std::to_string(attempt)));
    CMatrix lambda = random_spectrum_density(rng, d);
    if (profile == StateProfile::NearTracial) {
      const double delta = options.near_tracial_delta;
      lambda = ((1.0 - delta) / static_cast<double>(d)) * identity(d) + delta * lambda;
    }
    lambda /= lambda.trace().real();
    auto state = from_density(tower, std::move(lambda), profile, options);
    if (!state->separating()) continue;
    if (check_genericity(*state, options.genericity_trials, derive_seed(seed, "state/selftest")).pass) {
      return state;
    }
  }
  throw SamplingError("could not draw a generic " + to_string(profile) + " state after " +
                      std::to_string(options.max_redraws + 1) + " attempts");
}

const CMatrix& GenericState::inv_sqrt_lambda() const {
  if (!separating()) throw ContractError("reference density is rank deficient; Lambda^{-1/2} is unavailable");
  return inv_sqrt_lambda_;
}

Complex GenericState::expectation(const LocalOperator& a) const {
  return (lambda_ * embed_top(tower_, a)).trace();
}

Complex GenericState::expectation_doubled(const LocalOperator& a) const {
  const Index d = tower_.top_dim();
  const CMatrix big = kron(embed_top(tower_, a), identity(d));
  return omega_.dot(big * omega_);
}

CMatrix GenericState::reduced(int level) const {
  if (level == tower_.levels()) return lambda_;
  std::vector<int> keep(static_cast<std::size_t>(level));
  std::iota(keep.begin(), keep.end(), 0);
  return partial_trace(lambda_, tower_.factor_dims(), keep);
}

// ---------------------------------------------------------------------------

MinimalExtensionProjection minimal_extension_projection(const GenericState& state, int level) {
  const FunnelTower& tower = state.tower();
  if (level < 1 || level >= tower.levels()) {
    throw ContractError("minimal_extension_projection: level must satisfy 1 <= n < L");
  }
  const Index dn = tower.dim(level);
  const Index k = tower.factor_dim(level + 1);
  const HermEig eig = herm_eig(state.reduced(level));
  Index rank = 0;
  for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > 1e-14) ++rank;
  }
  if (rank > k) {
    throw CapacityError("minimal_extension_projection: rank of the restriction exceeds the next factor",
                        level + 1);
  }
  MinimalExtensionProjection out;
  out.level = level;
  out.psi = CVector::Zero(dn * k);
  for (Index i = 0; i < rank; ++i) {
    CVector e = eig.eigenvectors.col(i);
    e *= std::conj(leading_phase(e));
    const double weight = std::sqrt(std::max(eig.eigenvalues(i), 0.0));
    for (Index x = 0; x < dn; ++x) out.psi(x * k + i) += weight * e(x);
  }
  out.psi /= out.psi.norm();
  out.local = out.psi * out.psi.adjoint();
  out.projector = embed(tower, LocalOperator{level + 1, out.local}, tower.levels());
  return out;
}

double extension_residual(const GenericState& state, const MinimalExtensionProjection& e) {
  const FunnelTower& tower = state.tower();
  double worst = 0.0;
  for (const LocalOperator& c : matrix_unit_basis(tower, e.level)) {
    const CMatrix c_next = embed(tower, c, e.level + 1);
    const Complex w = state.expectation(c);
    worst = std::max(worst, (e.local * c_next * e.local - w * e.local).norm());
  }
  return worst;
}

std::vector<LocalOperator> matrix_unit_basis(const FunnelTower& tower, int level) {
  const Index d = tower.dim(level);
  std::vector<LocalOperator> out;
  out.reserve(static_cast<std::size_t>(d * d));
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      CMatrix m = CMatrix::Zero(d, d);
      m(i, j) = 1.0;
      out.push_back(LocalOperator{level, std::move(m)});
    }
  }
  return out;
}

std::vector<LocalOperator> relative_commutant_basis(const FunnelTower& tower, int level) {
  if (level < 1 || level >= tower.levels()) {
    throw ContractError("relative_commutant_basis: level must satisfy 1 <= n < L");
  }
  const Index dn = tower.dim(level);
  const Index k = tower.factor_dim(level + 1);
  std::vector<LocalOperator> out;
  out.reserve(static_cast<std::size_t>(k * k));
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      CMatrix unit = CMatrix::Zero(k, k);
      unit(i, j) = 1.0;
      out.push_back(LocalOperator{level + 1, kron(identity(dn), unit)});
    }
  }
  return out;
}

namespace {

// The blocks Lambda^{ab}_{pq} = Lambda((p, a), (q, b)) with p, q indexing N_n
// and a, b the remaining factors. The excitation map on N_n (x) conj(N_n) is
// injective exactly when these blocks span M_{D_n}.
double injectivity_ratio(const GenericState& state, int level) {
  const Index d = state.tower().top_dim();
  const Index dn = state.tower().dim(level);
  const Index rest = d / dn;
  CMatrix blocks(dn * dn, rest * rest);
  for (Index a = 0; a < rest; ++a)
    for (Index b = 0; b < rest; ++b)
      for (Index p = 0; p < dn; ++p)
        for (Index q = 0; q < dn; ++q) blocks(p * dn + q, a * rest + b) = state.lambda()(p * rest + a, q * rest + b);
  const RVector s = singular_values(blocks);
  if (s.size() < dn * dn || s(0) <= 0.0) return 0.0;
  return s(dn * dn - 1) / s(0);
}

}  // namespace

GenericityReport check_genericity(const GenericState& state, int trials, std::uint64_t seed) {
  GenericityReport report;
  const FunnelTower& tower = state.tower();
  report.min_eigenvalue = state.min_eigenvalue();
  report.separating = state.separating();
  if (!report.separating) report.failures.push_back("separating: min eigenvalue below threshold");

  Rng rng(derive_seed(seed, "genericity"));
  for (int level = 1; level < tower.levels(); ++level) {
    LevelGenericity lv;
    lv.level = level;
    lv.injectivity_ratio = injectivity_ratio(state, level);

    const Index dn = tower.dim(level);
    lv.min_pair_distance = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
      const bool unitary = (t % 2) == 1;
      CMatrix a = unitary ? rng.haar_unitary(dn) : rng.ginibre(dn, dn);
      CMatrix b = unitary ? rng.haar_unitary(dn) : rng.ginibre(dn, dn);
      auto density = [&](const CMatrix& m) {
        const CMatrix top = embed_top(tower, LocalOperator{level, m});
        CMatrix rho = top * state.lambda() * top.adjoint();
        const double norm = rho.trace().real();
        return CMatrix(rho / norm);
      };
      const CMatrix ra = density(a);
      const CMatrix rb = density(b);
      lv.min_pair_distance = std::min(lv.min_pair_distance, trace_norm(ra - rb));
    }
    if (trials <= 0) lv.min_pair_distance = 0.0;

    try {
      lv.extension_residual = extension_residual(state, minimal_extension_projection(state, level));
    } catch (const Error&) {
      lv.extension_residual = std::numeric_limits<double>::infinity();
    }

    lv.pass = lv.injectivity_ratio > kInjectivityThreshold &&
              (trials <= 0 || lv.min_pair_distance > kPairDistanceThreshold) && lv.extension_residual <= 1e-10;
    if (!lv.pass) report.failures.push_back("level " + std::to_string(level) + ": lift check failed");
    report.levels.push_back(lv);
  }
  report.pass = report.separating && report.failures.empty();
  return report;
}

}  // namespace funnelkit
