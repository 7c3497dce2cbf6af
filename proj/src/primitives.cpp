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

#include "funnelkit/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "funnelkit/errors.hpp"

namespace funnelkit {

namespace {

double max_entry(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Orthonormal basis of the range of a projection.
CMatrix projection_basis(const CMatrix& p) {
  const HermEig eig = herm_eig(0.5 * (p + p.adjoint()));
  Index r = 0;
  while (r < eig.eigenvalues.size() && eig.eigenvalues(r) > 0.5) ++r;
  return eig.eigenvectors.leftCols(r);
}

// Orthonormal basis of the column span of m, singular values above `cut`.
CMatrix column_span(const CMatrix& m, double cut) {
  if (m.cols() == 0) return CMatrix(m.rows(), 0);
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

void require_projection(const CMatrix& p, const char* what) {
  if (p.rows() != p.cols() || projection_residual(p) > 1e-10) {
    throw ContractError(std::string(what) + ": not an orthogonal projection");
  }
}

}  // namespace

double unitarity_residual(const CMatrix& u) {
  const CMatrix one = identity(u.rows());
  return std::max(max_entry(u.adjoint() * u - one), max_entry(u * u.adjoint() - one));
}

PrimitiveObservable make_observable(const FunnelTower& tower, int level, CMatrix unitary) {
  if (level < 1 || level > tower.levels() || unitary.rows() != tower.dim(level) ||
      unitary.cols() != tower.dim(level)) {
    throw ContractError("make_observable: unitary does not match level " + std::to_string(level));
  }
  const double r = unitarity_residual(unitary);
  if (r > 1e-12) throw ContractError("make_observable: unitarity residual " + std::to_string(r));
  return PrimitiveObservable{level, std::move(unitary)};
}

double projection_residual(const CMatrix& p) {
  return std::max(max_entry(p * p - p), max_entry(p - p.adjoint()));
}

PartialIsometry make_partial_isometry(CMatrix v) {
  PartialIsometry out;
  out.initial = v.adjoint() * v;
  out.range = v * v.adjoint();
  const double r = std::max({max_entry(v * out.initial - v), max_entry(out.range * v - v),
                             projection_residual(out.initial), projection_residual(out.range)});
  if (r > 1e-12) throw ContractError("make_partial_isometry: residual " + std::to_string(r));
  out.v = std::move(v);
  return out;
}

ExcitationState apply(const PrimitiveObservable& obs, const ExcitationState& a) {
  const FunnelTower& tower = a.reference().tower();
  const int level = std::max(obs.level, a.level());
  const CMatrix ua = embed(tower, LocalOperator{obs.level, obs.unitary}, level) * embed(tower, a.op(), level);
  return make_excitation(a.reference_ptr(), LocalOperator{level, ua});
}

Complex observable_expectation(const PrimitiveObservable& obs, const ExcitationState& a) {
  return evaluate(a, LocalOperator{obs.level, obs.unitary});
}

PrimitiveObservable ut_unitary(const FunnelTower& tower, const LocalOperator& e, Phase t) {
  require_projection(e.matrix, "ut_unitary");
  const CMatrix one = identity(e.matrix.rows());
  return make_observable(tower, e.level, e.matrix + t.value * (one - e.matrix));
}

double ut_probability(const LocalOperator& e, Phase t, const ExcitationState& a) {
  require_projection(e.matrix, "ut_probability");
  const double p = evaluate(a, e).real();
  const double q = 1.0 - p;
  return p * p + q * q + 2.0 * t.value.real() * p * q;
}

std::vector<DilationStep> dilate_to_unitaries(const PartialIsometry& v, const std::vector<CMatrix>& schedule) {
  const Index n = v.v.rows();
  if (v.v.cols() != n) throw ContractError("dilate_to_unitaries: V must be square");
  if (schedule.empty()) throw ContractError("dilate_to_unitaries: empty schedule");
  const CMatrix one = identity(n);
  for (std::size_t m = 0; m < schedule.size(); ++m) {
    const CMatrix& em = schedule[m];
    require_projection(em, "dilate_to_unitaries");
    if (max_entry(v.initial * em - em) > 1e-10) throw ContractError("dilate_to_unitaries: E_m is not below F");
    if (m > 0 && max_entry(em * schedule[m - 1] - schedule[m - 1]) > 1e-10) {
      throw ContractError("dilate_to_unitaries: schedule is not increasing");
    }
  }
  if (max_entry(schedule.back() - v.initial) > 1e-10) {
    throw ContractError("dilate_to_unitaries: schedule does not end at the initial projection");
  }

  std::vector<DilationStep> steps;
  for (const CMatrix& em : schedule) {
    const CMatrix ve = v.v * em;
    const CMatrix from = one - em;
    const CMatrix to = one - ve * ve.adjoint();
    const CMatrix p = projection_basis(from);
    // Reuse the same basis when the two complements coincide, so that the
    // dilation of a projection is the identity off its range.
    const CMatrix q = max_entry(from - to) <= 1e-12 ? p : projection_basis(to);
    if (p.cols() != q.cols()) {
      throw InternalInvariantError("dilate_to_unitaries: complement ranks differ (" + std::to_string(p.cols()) +
                                   " vs " + std::to_string(q.cols()) + ")");
    }
    DilationStep step;
    step.unitary = ve + q * p.adjoint();
    step.unitarity = unitarity_residual(step.unitary);
    step.agreement = ((step.unitary - v.v) * em).norm();
    steps.push_back(std::move(step));
  }
  return steps;
}

TunedFamily tuned_isometries(const PartialIsometry& v, const std::vector<CMatrix>& schedule, const CVector& x,
                             const CVector& y) {
  const std::vector<DilationStep> steps = dilate_to_unitaries(v, schedule);
  const CMatrix& e = v.range;
  const CVector vx = v.v.adjoint() * x;
  TunedFamily out;
  out.envelope_nonincreasing = true;
  out.bounded_by_envelope = true;
  for (std::size_t m = 0; m < steps.size(); ++m) {
    const CMatrix vm = v.v * steps[m].unitary.adjoint();
    ConvergenceRow row;
    row.m = static_cast<int>(m + 1);
    row.strong = ((vm.adjoint() - e) * x).norm();
    row.weak = std::abs(x.dot((vm - e) * y));
    row.envelope = 2.0 * ((v.initial - schedule[m]) * vx).norm();
    out.bounded_by_envelope = out.bounded_by_envelope && row.strong <= row.envelope + 1e-12 &&
                              row.weak <= row.envelope * y.norm() + 1e-12;
    if (!out.table.empty() && row.envelope > out.table.back().envelope + 1e-12) out.envelope_nonincreasing = false;
    out.table.push_back(row);
    out.members.push_back(make_partial_isometry(vm));
  }
  out.final_residual = (out.members.back().v - e).norm();
  return out;
}

DetectorBoundReport detector_bound_probe(const CMatrix& e, const ExcitationState& a,
                                         const std::vector<PartialIsometry>& family) {
  require_projection(e, "detector_bound_probe");
  if (e.rows() != a.density().rows()) throw ContractError("detector_bound_probe: E must act on the top space");
  DetectorBoundReport out;
  out.omega_e = (a.density() * e).trace().real();
  out.bound_holds = true;
  const CMatrix& vec = a.vector_form();
  for (const PartialIsometry& v : family) {
    if (v.v.rows() != e.rows() || max_entry(v.range - e) > 1e-10) {
      throw ContractError("detector_bound_probe: family member with a different range projection");
    }
    const double value = std::abs((a.density() * v.v).trace());
    const double eps = ((v.v.adjoint() - e) * vec).norm();
    out.values.push_back(value);
    out.epsilons.push_back(eps);
    out.max_value = std::max(out.max_value, value);
    out.bound_holds = out.bound_holds && value <= out.omega_e + eps + 1e-12;
  }
  if (!out.values.empty()) out.final_gap = out.omega_e - out.values.back();
  return out;
}

SupCounterexample detector_sup_counterexample(const CMatrix& e, const ExcitationState& a) {
  require_projection(e, "detector_sup_counterexample");
  const CMatrix basis = projection_basis(e);
  if (basis.cols() != 1) throw ContractError("detector_sup_counterexample: E must have rank one");
  const CVector ev = basis.col(0);
  const CVector re = a.density() * ev;
  SupCounterexample out;
  out.omega_e = ev.dot(re).real();
  const double norm = re.norm();
  if (norm <= 1e-14) {
    out.v = ev * ev.adjoint();
    out.value = out.omega_e;
    return out;
  }
  const CVector g = re / norm;
  out.v = ev * g.adjoint();
  out.value = std::abs((a.density() * out.v).trace());
  out.exceeds = out.value > out.omega_e + 1e-12;
  return out;
}

TunedDetector tune_detector(const LocalOperator& e, double epsilon, const std::vector<ExcitationState>& states) {
  if (!(epsilon > 0.0)) throw ContractError("tune_detector: epsilon must be positive");
  if (states.empty()) throw ContractError("tune_detector: no target states");
  const GenericState& ref = states[0].reference();
  const FunnelTower& tower = ref.tower();
  const Index d = tower.top_dim();
  const CMatrix etop = embed_top(tower, e);
  require_projection(etop, "tune_detector");
  const CMatrix one = identity(d);

  CMatrix support = CMatrix::Zero(d, d);
  for (const ExcitationState& s : states) {
    if (s.reference_ptr() != states[0].reference_ptr()) {
      throw ContractError("tune_detector: states refer to different reference states");
    }
    support += s.density();
  }
  const CMatrix sb = column_span(support, 1e-10 * support.trace().real());
  const CMatrix tb = column_span(etop * sb, 1e-10);
  const CMatrix rb = column_span((one - etop) * sb, 1e-10);
  const CMatrix pt = tb * tb.adjoint();
  const CMatrix spare = projection_basis(etop - pt);
  const Index k = std::min(rb.cols(), spare.cols());

  const CMatrix v = pt + spare.leftCols(k) * rb.leftCols(k).adjoint();
  const PartialIsometry pv = make_partial_isometry(v);
  std::vector<CMatrix> schedule;
  if (tb.cols() > 0 && max_entry(pt - pv.initial) > 1e-12) schedule.push_back(pt);
  schedule.push_back(pv.initial);
  const std::vector<DilationStep> steps = dilate_to_unitaries(pv, schedule);

  TunedDetector out;
  out.observable = make_observable(tower, tower.levels(), steps.back().unitary);
  out.exact = k == rb.cols();
  const LocalOperator complement{tower.levels(), one - etop};
  const LocalOperator etop_op{tower.levels(), etop};
  for (const ExcitationState& s : states) {
    const ExcitationState us = apply(out.observable, s);
    TuningRow row;
    row.leak = std::max(0.0, evaluate(us, complement).real());
    row.transition = transition_probability(s, us);
    const double p = evaluate(s, etop_op).real();
    row.target = p * p;
    row.deviation = std::abs(row.transition - row.target);
    out.achieved = std::max({out.achieved, row.leak, row.deviation / 4.0});
    out.rows.push_back(row);
  }
  if (epsilon < 1e-12) {
    throw TuningFailureError("tune_detector: epsilon below the numeric floor 1e-12", out.achieved);
  }
  for (const TuningRow& row : out.rows) {
    if (!(row.leak < epsilon && row.deviation < 4.0 * epsilon)) {
      throw TuningFailureError("tune_detector: best achieved epsilon " + std::to_string(out.achieved) +
                                   " (joint support does not fit into E)",
                               out.achieved);
    }
  }
  return out;
}

RecoveryReport recover_observable(const std::vector<LocalOperator>& projections, const std::vector<double>& weights,
                                  const ExcitationState& a, double epsilon) {
  if (projections.empty() || projections.size() != weights.size()) {
    throw ContractError("recover_observable: projection and weight counts differ");
  }
  const FunnelTower& tower = a.reference().tower();
  std::vector<CMatrix> tops;
  for (const LocalOperator& p : projections) {
    tops.push_back(embed_top(tower, p));
    require_projection(tops.back(), "recover_observable");
  }
  for (std::size_t i = 0; i < tops.size(); ++i) {
    for (std::size_t j = i + 1; j < tops.size(); ++j) {
      if ((tops[i] * tops[j] - tops[j] * tops[i]).norm() > 1e-10) {
        throw ContractError("recover_observable: projections do not commute");
      }
    }
  }
  RecoveryReport out;
  double wmax = 0.0;
  for (std::size_t m = 0; m < projections.size(); ++m) {
    const TunedDetector det = tune_detector(projections[m], epsilon, {a});
    out.estimate += weights[m] * std::sqrt(transition_probability(a, apply(det.observable, a)));
    out.exact += weights[m] * evaluate(a, projections[m]).real();
    wmax = std::max(wmax, std::abs(weights[m]));
  }
  out.error = std::abs(out.estimate - out.exact);
  out.bound = static_cast<double>(projections.size()) * std::sqrt(4.0 * epsilon) * wmax;
  out.within = out.error < out.bound + 1e-12;
  return out;
}

std::vector<Complex> balancing_phases(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n < 2) throw ConstructionError("balancing_phases: need at least two weights");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::max(0.0, weights[i]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return w[i] > w[j]; });
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + w[order[i]];
  if (w[order[0]] > 0.5 * suffix[0] * (1.0 + 1e-12)) {
    throw ConstructionError("balancing_phases: largest weight exceeds half of the total");
  }

  std::vector<Complex> t(n, Complex(1.0, 0.0));
  // Realizes phases for order[start..] whose weighted sum has modulus rho and
  // returns that sum.
  auto realize = [&](auto&& self, std::size_t start, double rho) -> Complex {
    const double a = w[order[start]];
    if (start + 1 == n) return Complex(a, 0.0);
    const double hr = suffix[start + 1];
    const double lr = start + 2 == n ? hr : std::max(0.0, 2.0 * w[order[start + 1]] - hr);
    const double lo = std::max(lr, std::abs(rho - a));
    const double hi = std::min(hr, rho + a);
    const double rest = hi >= lo ? hi : lo;
    const Complex z = self(self, start + 1, rest);
    const double zr = std::abs(z);
    Complex ta(1.0, 0.0);
    if (a <= 0.0) {
      ta = 1.0;
    } else if (zr <= 1e-300) {
      ta = 1.0;
    } else if (rho <= 1e-300) {
      ta = -z / zr;
    } else {
      const double c = std::clamp((rho * rho + zr * zr - a * a) / (2.0 * rho * zr), -1.0, 1.0);
      const Complex s = rho * (z / zr) * std::polar(1.0, std::acos(c));
      ta = s - z;
      ta /= std::abs(ta);
    }
    t[order[start]] = ta;
    return z + a * ta;
  };
  const Complex total = realize(realize, 0, 0.0);
  if (std::abs(total) > 1e-10 * std::max(1.0, suffix[0])) {
    throw ConstructionError("balancing_phases: polygon did not close, residual " + std::to_string(std::abs(total)));
  }
  return t;
}

CMatrix balancing_unitary(const CMatrix& rho) {
  const Index d = rho.rows();
  const HermEig eig = herm_eig(rho);
  CMatrix basis = eig.eigenvectors;
  const double total = rho.trace().real();
  if (eig.eigenvalues(0) > 0.5 * total) {
    CMatrix fourier(d, d);
    for (Index j = 0; j < d; ++j) {
      for (Index k = 0; k < d; ++k) {
        fourier(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                                   2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(d));
      }
    }
    basis = basis * fourier;
  }
  const CMatrix diag = basis.adjoint() * rho * basis;
  std::vector<double> w(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) w[static_cast<std::size_t>(i)] = diag(i, i).real();
  const std::vector<Complex> t = balancing_phases(w);
  CVector tv(d);
  for (Index i = 0; i < d; ++i) tv(i) = t[static_cast<std::size_t>(i)];
  return basis * tv.asDiagonal() * basis.adjoint();
}

PrimitiveObservable vacuum_detector(const StatePtr& state) {
  if (!state->separating()) throw ContractError("vacuum_detector: reference state must be faithful");
  const FunnelTower& tower = state->tower();
  const CMatrix u = balancing_unitary(state->lambda());
  const double r = std::abs((state->lambda() * u).trace());
  if (r > 1e-10) throw ConstructionError("vacuum_detector: |omega(U)| = " + std::to_string(r));
  return make_observable(tower, tower.levels(), u);
}

VacuumResponse vacuum_response(const PrimitiveObservable& detector, const ExcitationState& a) {
  VacuumResponse out;
  const double value = std::abs(observable_expectation(detector, a));
  out.response = value * value;
  out.distance = norm_distance(a, vacuum_excitation(a.reference_ptr()), NormScope::top());
  out.witness = out.response <= 1e-9 || (out.distance > 0.0 && out.distance + 1e-12 >= value);
  return out;
}

Commensurability commensurable(const CMatrix& u1, const CMatrix& u2) {
  if (u1.rows() != u2.rows() || u1.cols() != u2.cols()) throw ContractError("commensurable: size mismatch");
  const CMatrix ab = u1 * u2;
  const CMatrix ba = u2 * u1;
  Commensurability out;
  out.phase = (ab.adjoint() * ba).trace() / static_cast<double>(u1.rows());
  out.residual = (ba - out.phase * ab).norm();
  out.commensurable = out.residual <= 1e-10 && std::abs(std::abs(out.phase) - 1.0) <= 1e-10;
  out.commute = out.commensurable && std::abs(out.phase - 1.0) <= 1e-10;
  return out;
}

Commensurability commensurable(const FunnelTower& tower, const PrimitiveObservable& u1,
                               const PrimitiveObservable& u2) {
  const int level = std::max(u1.level, u2.level);
  return commensurable(embed(tower, LocalOperator{u1.level, u1.unitary}, level),
                       embed(tower, LocalOperator{u2.level, u2.unitary}, level));
}

UnitarySplit split_unitary(const CMatrix& u) {
  UnitarySplit out;
  out.h1 = 0.5 * (u + u.adjoint());
  out.h2 = 0.5 * kI * (u.adjoint() - u);
  out.hermiticity = std::max(hermiticity_residual(out.h1), hermiticity_residual(out.h2));
  out.reconstruction = (out.h1 + kI * out.h2 - u).norm();
  out.commutator = (out.h1 * out.h2 - out.h2 * out.h1).norm();
  return out;
}

}  // namespace funnelkit
