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

// Dense complex linear algebra shared by every other module.
//
// Tensor products follow one global convention: row-major lexicographic
// indices with the left factor varying slowest, so
//   kron(a, b)(i * q + k, j * q + l) == a(i, j) * b(k, l).
// The same convention flattens a D x D matrix M into the doubled-space vector
// v[i * D + j] == M(i, j); under it (A (x) 1) vec(M) == vec(A M).

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace funnelkit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

namespace tol {
/// Relative tolerance of precondition checks.
inline constexpr double kContract = 1e-10;
/// Default tolerance of equality assertions.
inline constexpr double kEquality = 1e-9;
}  // namespace tol

/// Largest row or column count any kernel operation will materialize.
inline constexpr Index kMaxTotalDimension = 4096;

CMatrix identity(Index n);

/// Kronecker product; throws SizingError when the result would exceed
/// `max_dimension` rows or columns.
CMatrix kron(const CMatrix& a, const CMatrix& b, Index max_dimension = kMaxTotalDimension);

struct HermEig {
  RVector eigenvalues;   // descending
  CMatrix eigenvectors;  // orthonormal columns, same order
};

/// Eigendecomposition of a Hermitian matrix. Eigenvectors inside a degenerate
/// cluster are implementation-defined.
HermEig herm_eig(const CMatrix& m);

/// Reduced matrix on the factors listed in `keep` (0-based, any order; the
/// result keeps the factors in ascending order).
CMatrix partial_trace(const CMatrix& m, std::span<const int> dims, std::span<const int> keep);

/// Sum of singular values.
double trace_norm(const CMatrix& m);

/// Largest singular value.
double operator_norm(const CMatrix& m);

RVector singular_values(const CMatrix& m);

struct GramSchmidtResult {
  std::vector<CVector> vectors;
  std::vector<std::size_t> dropped;  // input positions judged dependent
  bool all_zero = false;
};

/// Modified Gram-Schmidt with one re-orthogonalization pass. A vector whose
/// residual falls below `tolerance` times its input norm is dropped.
GramSchmidtResult gram_schmidt(std::span<const CVector> vectors, double tolerance = 1e-10);

/// ||m - m*||_F.
double hermiticity_residual(const CMatrix& m);

bool all_finite(const CMatrix& m);

/// Square root of a positive semidefinite Hermitian matrix; tiny negative
/// eigenvalues from round-off are clamped to zero.
CMatrix psd_sqrt(const CMatrix& m);

/// Orthonormal basis (columns) of the range of a Hermitian positive
/// semidefinite matrix, eigenvalues above `threshold` times the largest.
CMatrix range_basis(const CMatrix& psd, double threshold = 1e-10);

CVector row_major_vec(const CMatrix& m);
CMatrix from_row_major(const CVector& v, Index rows, Index cols);

/// Phase of the first entry (row-major order) with modulus above
/// `threshold`; 1 if there is none.
Complex leading_phase(const CMatrix& m, double threshold = 1e-10);

/// Seedable random source on top of std::mt19937_64. Uniform and normal
/// variates are derived by hand (53-bit mantissa, Box-Muller) because the
/// standard distributions are not specified bit-for-bit across libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();
  double normal();
  Complex complex_normal();

  CVector gaussian_vector(Index n);
  CVector unit_vector(Index n);
  CMatrix ginibre(Index rows, Index cols);
  CMatrix haar_unitary(Index n);
  CMatrix hermitian(Index n);
  CMatrix density(Index n);
  CMatrix projection(Index n, Index rank);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derives an independent stream seed from a base seed and a tag.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

}  // namespace funnelkit
