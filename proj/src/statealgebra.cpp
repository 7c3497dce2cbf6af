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

#include "funnelkit/statealgebra.hpp"

#include <algorithm>
#include <cmath>

#include "funnelkit/errors.hpp"

namespace funnelkit {

namespace {

void require_same_reference(const StateAlgebraElement& x, const StateAlgebraElement& y) {
  if (x.reference_ptr() != y.reference_ptr()) {
    throw ContractError("state algebra elements refer to different reference states");
  }
}

Index doubled_dim(const GenericState& state) {
  const Index d = state.tower().top_dim();
  if (d * d > kMaxKernelDimension) {
    throw SizingError("state algebra: doubled space of dimension " + std::to_string(d * d) + " exceeds " +
                      std::to_string(kMaxKernelDimension));
  }
  return d * d;
}

}  // namespace

StateAlgebraElement StateAlgebraElement::zero(StatePtr state) {
  StateAlgebraElement out;
  const Index n = doubled_dim(*state);
  out.state_ = std::move(state);
  out.kernel_ = CMatrix::Zero(n, n);
  return out;
}

StateAlgebraElement StateAlgebraElement::from_terms(StatePtr state, std::vector<AlgebraTerm> terms) {
  StateAlgebraElement out = zero(std::move(state));
  for (const AlgebraTerm& t : terms) {
    if (t.state.reference_ptr() != out.state_) {
      throw ContractError("state algebra term refers to a different reference state");
    }
    const CVector v = t.state.doubled_vector();
    out.kernel_.noalias() += t.coefficient * v * v.adjoint();
  }
  out.terms_ = std::move(terms);
  return out;
}

StateAlgebraElement StateAlgebraElement::from_excitation(const ExcitationState& a, Complex coefficient) {
  return from_terms(a.reference_ptr(), {AlgebraTerm{coefficient, a}});
}

Complex StateAlgebraElement::evaluate(const LocalOperator& c) const {
  Complex sum = 0.0;
  for (const AlgebraTerm& t : terms_) sum += t.coefficient * funnelkit::evaluate(t.state, c);
  return sum;
}

Complex StateAlgebraElement::evaluate_kernel(const LocalOperator& c) const {
  // tr(Psi (C (x) 1)) = tr(tr_2(Psi) C)
  const int d = static_cast<int>(state_->tower().top_dim());
  const int dims[] = {d, d};
  const int keep[] = {0};
  return (partial_trace(kernel_, dims, keep) * embed_top(state_->tower(), c)).trace();
}

StateAlgebraElement add(const StateAlgebraElement& x, const StateAlgebraElement& y) {
  require_same_reference(x, y);
  std::vector<AlgebraTerm> terms = x.terms();
  terms.insert(terms.end(), y.terms().begin(), y.terms().end());
  return StateAlgebraElement::from_terms(x.reference_ptr(), std::move(terms));
}

StateAlgebraElement scale(Complex c, const StateAlgebraElement& x) {
  std::vector<AlgebraTerm> terms = x.terms();
  for (AlgebraTerm& t : terms) t.coefficient *= c;
  return StateAlgebraElement::from_terms(x.reference_ptr(), std::move(terms));
}

StateAlgebraElement dagger(const StateAlgebraElement& x) {
  std::vector<AlgebraTerm> terms = x.terms();
  for (AlgebraTerm& t : terms) t.coefficient = std::conj(t.coefficient);
  return StateAlgebraElement::from_terms(x.reference_ptr(), std::move(terms));
}

StateAlgebraElement reduce_pairs(const StatePtr& state, const std::vector<LocalOperator>& basis, const CMatrix& k,
                                 std::size_t budget) {
  const Index n = static_cast<Index>(basis.size());
  if (k.rows() != n || k.cols() != n) throw ContractError("reduce_pairs: coefficient matrix does not match basis");
  if (n == 0) return StateAlgebraElement::zero(state);
  const FunnelTower& tower = state->tower();
  int level = 1;
  for (const LocalOperator& b : basis) level = std::max(level, b.level);

  std::vector<CMatrix> ops;
  ops.reserve(basis.size());
  CMatrix vecs(tower.top_dim() * tower.top_dim(), n);
  for (Index i = 0; i < n; ++i) {
    ops.push_back(embed(tower, basis[static_cast<std::size_t>(i)], level));
    vecs.col(i) = row_major_vec(embed(tower, LocalOperator{level, ops.back()}, tower.levels()) * state->sqrt_lambda());
  }
  const HermEig gram = herm_eig(vecs.adjoint() * vecs);
  const double gmax = gram.eigenvalues(0);
  if (!(gmax > 1e-24)) return StateAlgebraElement::zero(state);
  Index r = 0;
  while (r < n && gram.eigenvalues(r) > 1e-14 * gmax) ++r;

  CMatrix t(r, n);
  std::vector<CMatrix> q;
  q.reserve(static_cast<std::size_t>(r));
  for (Index a = 0; a < r; ++a) {
    const double g = gram.eigenvalues(a);
    t.row(a) = std::sqrt(g) * gram.eigenvectors.col(a).adjoint();
    CMatrix qa = CMatrix::Zero(ops[0].rows(), ops[0].cols());
    for (Index i = 0; i < n; ++i) qa += (gram.eigenvectors(i, a) / std::sqrt(g)) * ops[static_cast<std::size_t>(i)];
    q.push_back(std::move(qa));
  }
  const CMatrix m = t * k * t.adjoint();
  const double drop = 1e-14 * std::max(1.0, m.norm());

  std::vector<AlgebraTerm> terms;
  auto emit = [&](const CMatrix& h, Complex unit) {
    const HermEig eig = herm_eig(0.5 * (h + h.adjoint()));
    for (Index j = 0; j < r; ++j) {
      const double lambda = eig.eigenvalues(j);
      if (std::abs(lambda) <= drop) continue;
      CMatrix y = CMatrix::Zero(ops[0].rows(), ops[0].cols());
      for (Index a = 0; a < r; ++a) y += eig.eigenvectors(a, j) * q[static_cast<std::size_t>(a)];
      terms.push_back(AlgebraTerm{unit * lambda, make_excitation(state, LocalOperator{level, y})});
    }
  };
  emit(0.5 * (m + m.adjoint()), Complex(1.0, 0.0));
  emit((m - m.adjoint()) / Complex(0.0, 2.0), kI);
  if (terms.size() > budget) {
    throw BudgetError("state algebra: normal form needs " + std::to_string(terms.size()) + " terms, budget is " +
                          std::to_string(budget),
                      terms.size());
  }
  return StateAlgebraElement::from_terms(state, std::move(terms));
}

StateAlgebraElement times(const StateAlgebraElement& x, const StateAlgebraElement& y, std::size_t budget) {
  require_same_reference(x, y);
  const std::size_t n1 = x.terms().size();
  const std::size_t n2 = y.terms().size();
  std::vector<LocalOperator> basis;
  basis.reserve(n1 + n2);
  for (const AlgebraTerm& t : x.terms()) basis.push_back(t.state.op());
  for (const AlgebraTerm& t : y.terms()) basis.push_back(t.state.op());
  const Index n = static_cast<Index>(n1 + n2);
  CMatrix k = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const AlgebraTerm& a = x.terms()[i];
      const AlgebraTerm& b = y.terms()[j];
      k(static_cast<Index>(i), static_cast<Index>(n1 + j)) = a.coefficient * b.coefficient * overlap(a.state, b.state);
    }
  }
  return reduce_pairs(x.reference_ptr(), basis, k, budget);
}

SpectralDecomposition spectral_decompose(const StateAlgebraElement& x) {
  const double asym = (x.kernel() - x.kernel().adjoint()).norm();
  if (asym > 1e-10) {
    throw ContractError("spectral_decompose: element is not symmetric, ||Psi - Psi*|| = " + std::to_string(asym));
  }
  const std::size_t n = x.terms().size();
  std::vector<LocalOperator> basis;
  CMatrix k = CMatrix::Zero(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    basis.push_back(x.terms()[i].state.op());
    k(static_cast<Index>(i), static_cast<Index>(i)) = x.terms()[i].coefficient;
  }
  // Symmetrize so that only the Hermitian branch of the normal form fires.
  const StateAlgebraElement reduced = reduce_pairs(x.reference_ptr(), basis, 0.5 * (k + k.adjoint()),
                                                   std::max<std::size_t>(2 * n, 1));

  SpectralDecomposition out;
  CMatrix rebuilt = CMatrix::Zero(x.kernel().rows(), x.kernel().cols());
  double total = 0.0;
  bool nonnegative = true;
  for (const AlgebraTerm& t : reduced.terms()) {
    const double r = t.coefficient.real();
    out.weights.push_back(r);
    out.states.push_back(t.state);
    total += r;
    nonnegative = nonnegative && r >= -1e-10;
    const CVector v = t.state.doubled_vector();
    rebuilt.noalias() += r * v * v.adjoint();
  }
  for (std::size_t l = 0; l < out.states.size(); ++l) {
    for (std::size_t m = l + 1; m < out.states.size(); ++m) {
      out.max_transition = std::max(out.max_transition, std::norm(overlap(out.states[l], out.states[m])));
    }
  }
  out.reconstruction_residual = (rebuilt - x.kernel()).norm();
  out.convex = nonnegative && std::abs(total - 1.0) <= 1e-9;
  return out;
}

StateAlgebraElement bimodule_act(Side side, const LocalOperator& a, const StateAlgebraElement& x, std::size_t budget) {
  const FunnelTower& tower = x.reference().tower();
  const std::size_t n = x.terms().size();
  std::vector<LocalOperator> basis(2 * n);
  CMatrix k = CMatrix::Zero(static_cast<Index>(2 * n), static_cast<Index>(2 * n));
  for (std::size_t m = 0; m < n; ++m) {
    const LocalOperator& xm = x.terms()[m].state.op();
    const int level = std::max(a.level, xm.level);
    const CMatrix am = embed(tower, a, level);
    const CMatrix xl = embed(tower, xm, level);
    if (side == Side::Left) {
      // Psi (A (x) 1) = sum c |X><A* X|
      basis[m] = LocalOperator{level, xl};
      basis[n + m] = LocalOperator{level, am.adjoint() * xl};
    } else {
      // (A (x) 1) Psi = sum c |A X><X|
      basis[m] = LocalOperator{level, am * xl};
      basis[n + m] = LocalOperator{level, xl};
    }
    k(static_cast<Index>(m), static_cast<Index>(n + m)) = x.terms()[m].coefficient;
  }
  return reduce_pairs(x.reference_ptr(), basis, k, budget);
}

Complex dual_state_apply(const ExcitationState& a, const StateAlgebraElement& x) {
  Complex sum = 0.0;
  for (const AlgebraTerm& t : x.terms()) sum += t.coefficient * std::norm(overlap(a, t.state));
  return sum;
}

Complex dual_state_apply_kernel(const ExcitationState& a, const StateAlgebraElement& x) {
  const CVector v = a.doubled_vector();
  return v.dot(x.kernel() * v);
}

Complex vacuum_functional(const StateAlgebraElement& x) {
  Complex sum = 0.0;
  for (const AlgebraTerm& t : x.terms()) sum += t.coefficient * std::norm(x.reference().expectation(t.state.op()));
  return sum;
}

namespace {

// omega(omega_A x psi x omega_B) = sum_m c_m omega(A) omega(A* B_m) omega(B_m* B) omega(B*)
Complex chain_value(const ExcitationState& a, const StateAlgebraElement& x, const ExcitationState& b) {
  const GenericState& s = x.reference();
  const Complex wa = s.expectation(a.op());
  const Complex wb = std::conj(s.expectation(b.op()));
  Complex sum = 0.0;
  for (const AlgebraTerm& t : x.terms()) sum += t.coefficient * overlap(a, t.state) * overlap(t.state, b);
  return wa * sum * wb;
}

}  // namespace

FaithfulnessWitness faithfulness_probe(const StateAlgebraElement& x) {
  if (!(x.kernel_norm() > 1e-8)) throw ContractError("faithfulness_probe: element is zero");
  const StateAlgebraElement xd = dagger(x);
  const StateAlgebraElement sym = scale(0.5, add(x, xd));
  const StateAlgebraElement anti = scale(Complex(0.0, -0.5), add(x, scale(-1.0, xd)));
  const StateAlgebraElement& part = sym.kernel_norm() >= anti.kernel_norm() ? sym : anti;
  SpectralDecomposition sd = spectral_decompose(part);

  std::vector<std::size_t> order(sd.states.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t m) { return std::abs(sd.weights[l]) > std::abs(sd.weights[m]); });

  for (std::size_t l : order) {
    const ExcitationState& al = sd.states[l];
    const Complex v = chain_value(al, x, al);
    if (std::abs(v) > 1e-9) return FaithfulnessWitness{al, al, v, false};
  }
  const FunnelTower& tower = x.reference().tower();
  const Complex shifts[] = {1.0, -1.0, kI, 0.5, 2.0};
  for (std::size_t l : order) {
    const LocalOperator& op = sd.states[l].op();
    for (Complex c : shifts) {
      const LocalOperator shifted{op.level, c * identity(tower.dim(op.level)) + op.matrix};
      try {
        const ExcitationState a = make_excitation(x.reference_ptr(), shifted);
        const Complex v = chain_value(a, x, a);
        if (std::abs(v) > 1e-9) return FaithfulnessWitness{a, a, v, true};
      } catch (const DegenerateExcitationError&) {
      }
    }
  }
  throw FaithfulnessFailureError("faithfulness_probe: no witness found, the reference state may not be generic");
}

CVector w_isomorphism(const StateAlgebraElement& x) {
  const Index n = x.kernel().rows();
  CVector out = CVector::Zero(n);
  for (const AlgebraTerm& t : x.terms()) {
    const Complex w = std::conj(x.reference().expectation(t.state.op()));
    out += (t.coefficient * w) * row_major_vec(t.state.vector_form());
  }
  return out;
}

Complex gns_inner_product(const StateAlgebraElement& x, const StateAlgebraElement& y) {
  require_same_reference(x, y);
  const GenericState& s = x.reference();
  Complex sum = 0.0;
  for (const AlgebraTerm& a : x.terms()) {
    const Complex wa = s.expectation(a.state.op());
    for (const AlgebraTerm& b : y.terms()) {
      const Complex wb = std::conj(s.expectation(b.state.op()));
      sum += std::conj(a.coefficient) * b.coefficient * wa * overlap(a.state, b.state) * wb;
    }
  }
  return sum;
}

double product_kernel_residual(const StateAlgebraElement& product, const StateAlgebraElement& x,
                               const StateAlgebraElement& y) {
  return (product.kernel() - x.kernel() * y.kernel()).norm();
}

}  // namespace funnelkit
