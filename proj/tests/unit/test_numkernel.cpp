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

#include <array>
#include <set>

#include "funnelkit/errors.hpp"
#include "support.hpp"

using namespace funnelkit;
using fktest::naive_kron;

TEST(NumKernel, KronMatchesIndexFormula) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = rng.ginibre(1 + trial % 3, 2 + trial % 2);
    const CMatrix b = rng.ginibre(3, 1 + trial % 4);
    EXPECT_LE(fktest::max_abs(kron(a, b) - naive_kron(a, b)), 1e-15);
  }
}

TEST(NumKernel, KronRejectsOversize) {
  EXPECT_THROW(kron(CMatrix::Identity(64, 64), CMatrix::Identity(64, 64), 1024), SizingError);
}

TEST(NumKernel, RowMajorVecIntertwinesLeftAction) {
  Rng rng(12);
  const CMatrix a = rng.ginibre(4, 4), m = rng.ginibre(4, 4);
  const CVector lhs = naive_kron(a, CMatrix::Identity(4, 4)) * row_major_vec(m);
  EXPECT_LE((lhs - row_major_vec(a * m)).norm(), 1e-13);
  EXPECT_LE(fktest::max_abs(from_row_major(row_major_vec(m), 4, 4) - m), 0.0);
}

TEST(NumKernel, PartialTraceAgreesWithLoops) {
  Rng rng(13);
  const CMatrix m = rng.ginibre(12, 12);
  const std::array<int, 2> dims{3, 4};
  const std::array<int, 1> left{0}, right{1};
  EXPECT_LE(fktest::max_abs(partial_trace(m, dims, left) - fktest::naive_trace_right(m, 3, 4)), 1e-13);
  EXPECT_LE(fktest::max_abs(partial_trace(m, dims, right) - fktest::naive_trace_left(m, 3, 4)), 1e-13);
}

TEST(NumKernel, PartialTraceOfProductState) {
  Rng rng(14);
  const CMatrix a = rng.density(2), b = rng.density(3), c = rng.density(2);
  const std::array<int, 3> dims{2, 3, 2};
  const std::array<int, 2> keep{0, 2};
  const CMatrix reduced = partial_trace(kron(kron(a, b), c), dims, keep);
  EXPECT_LE(fktest::max_abs(reduced - kron(a, c)), 1e-14);
}

TEST(NumKernel, TraceNormIsSumOfSingularValues) {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix m = rng.ginibre(5, 5);
    // Oracle: sqrt of the eigenvalues of m* m.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m.adjoint() * m);
    double oracle = 0.0;
    for (Index i = 0; i < 5; ++i) oracle += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    EXPECT_NEAR(trace_norm(m), oracle, 1e-12);
    EXPECT_NEAR(operator_norm(m), std::sqrt(es.eigenvalues()(4)), 1e-12);
  }
  const CMatrix h = rng.hermitian(4);
  EXPECT_NEAR(trace_norm(h), herm_eig(h).eigenvalues.cwiseAbs().sum(), 1e-12);
}

TEST(NumKernel, HermEigDescendingAndReconstructs) {
  Rng rng(16);
  const CMatrix h = rng.hermitian(6);
  const HermEig e = herm_eig(h);
  for (Index i = 1; i < 6; ++i) EXPECT_GE(e.eigenvalues(i - 1), e.eigenvalues(i));
  const CMatrix back = e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
  EXPECT_LE(fktest::max_abs(back - h), 1e-13);
}

TEST(NumKernel, GramSchmidtProperties) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<CVector> input;
    const int n = 2 + trial % 5;
    for (int i = 0; i < n; ++i) input.push_back(rng.gaussian_vector(6));
    // Force one dependency.
    input.push_back(input[0] * Complex(0.5, -1.0) + input[1] * 2.0);
    const GramSchmidtResult gs = gram_schmidt(input);
    ASSERT_EQ(gs.vectors.size(), static_cast<std::size_t>(std::min(n, 6)));
    for (std::size_t i = 0; i < gs.vectors.size(); ++i)
      for (std::size_t j = 0; j < gs.vectors.size(); ++j)
        EXPECT_NEAR(std::abs(gs.vectors[i].dot(gs.vectors[j])), i == j ? 1.0 : 0.0, 1e-12);
    EXPECT_FALSE(gs.dropped.empty());
  }
  const std::vector<CVector> zeros{CVector::Zero(3), CVector::Zero(3)};
  EXPECT_TRUE(gram_schmidt(zeros).all_zero);
}

TEST(NumKernel, PsdSqrtAndRangeBasis) {
  Rng rng(18);
  const CMatrix g = rng.ginibre(5, 2);
  const CMatrix p = g * g.adjoint();
  const CMatrix r = psd_sqrt(p);
  EXPECT_LE(fktest::max_abs(r * r - p), 1e-12);
  EXPECT_LE(hermiticity_residual(r), 1e-12);
  const CMatrix basis = range_basis(p);
  ASSERT_EQ(basis.cols(), 2);
  EXPECT_LE(fktest::max_abs(basis * basis.adjoint() * g - g), 1e-12);
}

TEST(NumKernel, LeadingPhase) {
  CMatrix m = CMatrix::Zero(2, 2);
  EXPECT_EQ(leading_phase(m), Complex(1.0, 0.0));
  m(0, 1) = Complex(0.0, -3.0);
  m(1, 0) = 5.0;
  EXPECT_NEAR(std::abs(leading_phase(m) - Complex(0.0, -1.0)), 0.0, 1e-15);
}

TEST(NumKernel, RngIsDeterministicAndStreamsDiffer) {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  Rng c(99);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = c.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = c.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.05);
  EXPECT_NEAR(sq / n, 1.0, 0.05);

  std::set<std::uint64_t> seeds;
  for (const char* tag : {"reference", "lift", "transfer", "algebra"}) seeds.insert(derive_seed(42, tag));
  seeds.insert(derive_seed(43, "lift"));
  EXPECT_EQ(seeds.size(), 5u);
  EXPECT_EQ(derive_seed(42, "lift"), derive_seed(42, "lift"));
}

TEST(NumKernel, RandomMatrixFamilies) {
  Rng rng(20);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix u = rng.haar_unitary(5);
    EXPECT_LE(fktest::max_abs(u.adjoint() * u - CMatrix::Identity(5, 5)), 1e-13);
    const CMatrix rho = rng.density(5);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-13);
    EXPECT_GE(herm_eig(rho).eigenvalues.minCoeff(), -1e-14);
    const CMatrix p = rng.projection(5, 2);
    EXPECT_LE(fktest::max_abs(p * p - p), 1e-13);
    EXPECT_NEAR(p.trace().real(), 2.0, 1e-13);
  }
}
