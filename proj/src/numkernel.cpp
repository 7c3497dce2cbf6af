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

#include "funnelkit/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "funnelkit/errors.hpp"

namespace funnelkit {

CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

CMatrix kron(const CMatrix& a, const CMatrix& b, Index max_dimension) {
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  if (rows > max_dimension || cols > max_dimension) {
    throw SizingError("kron: result " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " exceeds the maximum dimension " + std::to_string(max_dimension));
  }
  CMatrix out(rows, cols);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double hermiticity_residual(const CMatrix& m) { return (m - m.adjoint()).norm(); }

bool all_finite(const CMatrix& m) { return m.allFinite(); }

HermEig herm_eig(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ContractError("herm_eig: matrix is not square");
  if (hermiticity_residual(m) > tol::kContract * m.norm()) {
    throw ContractError("herm_eig: matrix is not Hermitian");
  }
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw ContractError("herm_eig: eigensolver failed");
  HermEig out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

CMatrix partial_trace(const CMatrix& m, std::span<const int> dims, std::span<const int> keep) {
  const std::size_t k = dims.size();
  Index total = 1;
  for (int d : dims) {
    if (d < 1) throw ContractError("partial_trace: factor dimensions must be positive");
    total *= d;
  }
  if (m.rows() != total || m.cols() != total) {
    throw ContractError("partial_trace: product of factor dimensions does not match the matrix");
  }
  std::vector<bool> kept(k, false);
  for (int idx : keep) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= k) {
      throw ContractError("partial_trace: kept factor index out of range");
    }
    kept[static_cast<std::size_t>(idx)] = true;
  }

  // Strides of each factor inside the full row-major index.
  std::vector<Index> stride(k, 1);
  for (std::size_t f = k; f-- > 1;) stride[f - 1] = stride[f] * dims[f];

  std::vector<std::size_t> kept_f, traced_f;
  for (std::size_t f = 0; f < k; ++f) (kept[f] ? kept_f : traced_f).push_back(f);

  auto offsets = [&](const std::vector<std::size_t>& factors) {
    Index count = 1;
    for (auto f : factors) count *= dims[f];
    std::vector<Index> off(static_cast<std::size_t>(count), 0);
    for (Index c = 0; c < count; ++c) {
      Index rem = c, o = 0;
      for (std::size_t p = factors.size(); p-- > 0;) {
        const Index d = dims[factors[p]];
        o += (rem % d) * stride[factors[p]];
        rem /= d;
      }
      off[static_cast<std::size_t>(c)] = o;
    }
    return off;
  };
  const auto keep_off = offsets(kept_f);
  const auto trace_off = offsets(traced_f);

  const Index n = static_cast<Index>(keep_off.size());
  CMatrix out = CMatrix::Zero(n, n);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) {
      Complex acc{0.0, 0.0};
      for (Index t : trace_off) acc += m(keep_off[r] + t, keep_off[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

RVector singular_values(const CMatrix& m) {
  if (m.size() == 0) return RVector();
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues();
}

double trace_norm(const CMatrix& m) { return singular_values(m).sum(); }

double operator_norm(const CMatrix& m) {
  const RVector s = singular_values(m);
  return s.size() ? s(0) : 0.0;
}

GramSchmidtResult gram_schmidt(std::span<const CVector> vectors, double tolerance) {
  GramSchmidtResult out;
  bool any_nonzero = false;
  for (std::size_t idx = 0; idx < vectors.size(); ++idx) {
    const CVector& v = vectors[idx];
    const double norm0 = v.norm();
    if (norm0 > 0.0) any_nonzero = true;
    if (norm0 == 0.0) {
      out.dropped.push_back(idx);
      continue;
    }
    CVector w = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const CVector& q : out.vectors) w -= q.dot(w) * q;
    }
    const double residual = w.norm();
    if (residual <= tolerance * norm0) {
      out.dropped.push_back(idx);
      continue;
    }
    out.vectors.push_back(w / residual);
  }
  out.all_zero = !any_nonzero;
  return out;
}

CMatrix psd_sqrt(const CMatrix& m) {
  const HermEig eig = herm_eig(m);
  RVector s = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors * s.asDiagonal() * eig.eigenvectors.adjoint();
}

CMatrix range_basis(const CMatrix& psd, double threshold) {
  const HermEig eig = herm_eig(psd);
  const double top = eig.eigenvalues.size() ? std::max(eig.eigenvalues(0), 0.0) : 0.0;
  Index count = 0;
  while (count < eig.eigenvalues.size() && top > 0.0 && eig.eigenvalues(count) > threshold * top) {
    ++count;
  }
  return eig.eigenvectors.leftCols(count);
}

CVector row_major_vec(const CMatrix& m) {
  CVector v(m.size());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

CMatrix from_row_major(const CVector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw ContractError("from_row_major: size mismatch");
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

Complex leading_phase(const CMatrix& m, double threshold) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const double a = std::abs(m(i, j));
      if (a > threshold) return m(i, j) / a;
    }
  }
  return {1.0, 0.0};
}

// ---------------------------------------------------------------------------
// Rng

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

CVector Rng::gaussian_vector(Index n) {
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = complex_normal();
  return v;
}

CVector Rng::unit_vector(Index n) {
  CVector v = gaussian_vector(n);
  return v / v.norm();
}

CMatrix Rng::ginibre(Index rows, Index cols) {
  CMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = complex_normal();
  return g;
}

CMatrix Rng::haar_unitary(Index n) {
  const CMatrix g = ginibre(n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

CMatrix Rng::hermitian(Index n) {
  const CMatrix g = ginibre(n, n);
  return 0.5 * (g + g.adjoint());
}

CMatrix Rng::density(Index n) {
  const CMatrix g = ginibre(n, n);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

CMatrix Rng::projection(Index n, Index rank) {
  if (rank < 0 || rank > n) throw ContractError("Rng::projection: rank out of range");
  const CMatrix u = haar_unitary(n);
  const CMatrix cols = u.leftCols(rank);
  return cols * cols.adjoint();
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  // FNV-1a over the tag, folded into the seed with a splitmix64 finalizer.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace funnelkit
