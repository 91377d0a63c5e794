// Copyright 2026 The precond Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>

#include <Eigen/QR>
#include <gtest/gtest.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "generators.hpp"
#include "precond/error.hpp"
#include "precond/matrix_kernels.hpp"

namespace precond {
namespace {

using testing::property_rng;
using testing::random_dim;
using testing::random_psd;

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

TEST(SymMatrix, SymmetrizesOnConstruction) {
  const SymMatrix s(m2(1, 2, 4, 3));
  EXPECT_EQ(s(0, 1), 3.0);
  EXPECT_EQ(s(0, 1), s(1, 0));
}

TEST(SymMatrix, RejectsNonSquare) {
  EXPECT_THROW(SymMatrix(Matrix::Zero(2, 3)), InvalidInput);
}

TEST(SymEig, Identity) {
  const auto e = sym_eig(SymMatrix::identity(2));
  EXPECT_DOUBLE_EQ(e.values(0), 1.0);
  EXPECT_DOUBLE_EQ(e.values(1), 1.0);
  EXPECT_LE((e.vectors.transpose() * e.vectors - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SymEig, TwoByTwo) {
  const auto e = sym_eig(SymMatrix(m2(2, 1, 1, 2)));
  EXPECT_NEAR(e.values(0), 3.0, 1e-12);
  EXPECT_NEAR(e.values(1), 1.0, 1e-12);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(e.vectors(0, 0)), r, 1e-12);
  EXPECT_NEAR(e.vectors(0, 0), e.vectors(1, 0), 1e-12);
  EXPECT_NEAR(e.vectors(0, 1), -e.vectors(1, 1), 1e-12);
}

TEST(SymEig, DiagonalDescending) {
  const auto e = sym_eig(SymMatrix(m2(0, 0, 0, 5)));
  EXPECT_DOUBLE_EQ(e.values(0), 5.0);
  EXPECT_DOUBLE_EQ(e.values(1), 0.0);
}

TEST(SymEig, NonFiniteIsInvalid) {
  EXPECT_THROW(sym_eig(SymMatrix(m2(1, std::nan(""), std::nan(""), 1))), InvalidInput);
  EXPECT_THROW(sym_eig(SymMatrix(m2(std::numeric_limits<double>::infinity(), 0, 0, 1))),
               InvalidInput);
}

TEST(SymEig, InvariantsOnRandomInputs) {
  auto rng = property_rng(11);
  for (int c = 0; c < 100; ++c) {
    const Index d = random_dim(rng, 1, 16);
    const Matrix a = testing::random_sym(rng, d);
    const auto e = sym_eig(SymMatrix(a));
    for (Index i = 1; i < d; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
    EXPECT_LE((e.vectors.transpose() * e.vectors - Matrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-8);
    const Matrix back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LE((back - a).norm(), 1e-8 * std::max(1.0, a.norm()));
  }
}

TEST(PsdMatrix, RejectsIndefinite) {
  EXPECT_THROW(PsdMatrix(m2(1, 0, 0, -1)), InvalidInput);
}

TEST(PsdMatrix, ClampsTinyNegativeEigenvalues) {
  const PsdMatrix p(m2(1, 0, 0, -1e-12));
  EXPECT_EQ(p.eig().values(1), 0.0);
}

TEST(PsdPower, DiagonalSqrt) {
  const Matrix r = psd_power(PsdMatrix(m2(4, 0, 0, 9)), 0.5).dense();
  EXPECT_NEAR(r(0, 0), 2.0, 1e-14);
  EXPECT_NEAR(r(1, 1), 3.0, 1e-14);
  EXPECT_EQ(r(0, 1), 0.0);
}

TEST(PsdPower, PseudoInverseSqrt) {
  const Matrix r = psd_power(PsdMatrix(m2(4, 0, 0, 0)), -0.5).dense();
  EXPECT_NEAR(r(0, 0), 0.5, 1e-14);
  EXPECT_EQ(r(1, 1), 0.0);
}

TEST(PsdPower, TwoByTwoSqrt) {
  const Matrix r = psd_power(PsdMatrix(m2(2, 1, 1, 2)), 0.5).dense();
  // Independent oracle: (sqrt3 +- 1)/2 from the eigenpairs.
  const double a = (std::sqrt(3.0) + 1.0) / 2.0;
  const double b = (std::sqrt(3.0) - 1.0) / 2.0;
  EXPECT_NEAR(r(0, 0), a, 1e-12);
  EXPECT_NEAR(r(0, 1), b, 1e-12);
  EXPECT_NEAR(r(0, 0), 1.36603, 1e-5);
  EXPECT_NEAR(r(0, 1), 0.36603, 1e-5);
  EXPECT_LE((r * r - m2(2, 1, 1, 2)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PsdPower, ResultIsCachedAndConsistent) {
  const PsdMatrix p = psd_power(PsdMatrix(m2(2, 1, 1, 2)), -1.0);
  const Matrix back = p.eig().vectors * p.eig().values.asDiagonal() * p.eig().vectors.transpose();
  EXPECT_LE((back - p.dense()).cwiseAbs().maxCoeff(), 1e-14);
  for (Index i = 1; i < p.dim(); ++i) EXPECT_GE(p.eig().values(i - 1), p.eig().values(i));
}

TEST(PsdPowerProperty, SqrtOfSqrtIsQuarterPower) {
  auto rng = property_rng(12);
  for (int c = 0; c < 200; ++c) {
    const Index d = random_dim(rng, 1, 16);
    const PsdMatrix a(random_psd(rng, d, random_dim(rng, 1, d)));
    const Matrix twice = psd_power(psd_power(a, 0.5), 0.5).dense();
    const Matrix direct = psd_power(a, 0.25).dense();
    EXPECT_LE((twice - direct).norm(), 1e-8 * std::max(1.0, a.dense().norm()));
  }
}

TEST(PsdPowerProperty, PseudoInverseIsIdentityOnRange) {
  auto rng = property_rng(13);
  for (int c = 0; c < 200; ++c) {
    const Index d = random_dim(rng, 2, 12);
    const Index r = random_dim(rng, 1, d);
    // Spectrum in [1, 2] on a random r-dimensional range.
    const Matrix q = Eigen::HouseholderQR<Matrix>(rng.normal_matrix(d, d)).householderQ();
    Vector lam = Vector::Zero(d);
    for (Index i = 0; i < r; ++i) lam(i) = rng.uniform(1.0, 2.0);
    const PsdMatrix a(Matrix(q * lam.asDiagonal() * q.transpose()));
    const Matrix proj = q.leftCols(r) * q.leftCols(r).transpose();
    const Matrix prod = psd_power(a, -1.0).dense() * a.dense();
    EXPECT_LE((prod - proj).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(PsdPowerApply, MatchesDensePower) {
  auto rng = property_rng(14);
  for (int c = 0; c < 50; ++c) {
    const Index d = random_dim(rng, 1, 10);
    const PsdMatrix a(random_psd(rng, d, random_dim(rng, 1, d)));
    const Matrix x = rng.normal_matrix(d, 3);
    for (double p : {0.5, -0.5, 0.25, -0.25, -1.0}) {
      const Matrix want = psd_power(a, p).dense() * x;
      EXPECT_LE((psd_power_apply(a, p, x) - want).norm(), 1e-10 * std::max(1.0, want.norm()));
    }
  }
}

TEST(Loewner, Examples) {
  EXPECT_TRUE(loewner_leq(SymMatrix::identity(2), SymMatrix::identity(2, 2.0), 1e-9));
  EXPECT_FALSE(loewner_leq(SymMatrix(m2(1, 0, 0, 0)), SymMatrix(m2(0, 0, 0, 1)), 1e-9));
}

TEST(Loewner, DimensionMismatch) {
  EXPECT_THROW(loewner_leq(SymMatrix::identity(2), SymMatrix::identity(3), 1e-9), InvalidInput);
}

TEST(LoewnerProperty, ReflexiveAndTransitiveOnChains) {
  auto rng = property_rng(15);
  for (int c = 0; c < 200; ++c) {
    const Index d = random_dim(rng, 1, 10);
    const Matrix a = testing::random_sym(rng, d);
    const Matrix b = a + random_psd(rng, d, random_dim(rng, 1, d));
    const Matrix cc = b + random_psd(rng, d, random_dim(rng, 1, d));
    const SymMatrix sa(a), sb(b), sc(cc);
    EXPECT_TRUE(loewner_leq(sa, sa, 1e-9));
    EXPECT_TRUE(loewner_leq(sa, sb, 1e-9));
    EXPECT_TRUE(loewner_leq(sb, sc, 1e-9));
    EXPECT_TRUE(loewner_leq(sa, sc, 1e-9));
  }
}

TEST(KronLeftApply, Identity) {
  const Matrix g = m2(1, 2, 3, 4);
  EXPECT_EQ(kron_left_apply(PsdMatrix::identity(2), g), g);
}

TEST(KronLeftApply, RowScaling) {
  const Matrix r = kron_left_apply(PsdMatrix(m2(2, 0, 0, 3)), Matrix::Ones(2, 2));
  EXPECT_EQ(r, m2(2, 2, 3, 3));
}

TEST(KronLeftApply, MatchesExplicitKroneckerProduct) {
  auto rng = property_rng(16);
  for (int c = 0; c < 20; ++c) {
    const PsdMatrix hl(random_psd(rng, 3, 3));
    const Matrix g = rng.normal_matrix(3, 2);
    const Matrix big = Eigen::kroneckerProduct(hl.dense(), Matrix::Identity(2, 2)).eval();
    // Row-major vec so that (A (x) I) vec(X) = vec(A X).
    const Vector want = big * vec(g);
    EXPECT_LE((vec(kron_left_apply(hl, g)) - want).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(KronLeftApply, DimensionMismatch) {
  EXPECT_THROW(kron_left_apply(PsdMatrix::identity(3), Matrix::Ones(2, 2)), InvalidInput);
}

TEST(Kron, MatchesEigenKroneckerProduct) {
  auto rng = property_rng(17);
  const Matrix a = rng.normal_matrix(2, 3);
  const Matrix b = rng.normal_matrix(3, 2);
  const Matrix want = Eigen::kroneckerProduct(a, b).eval();
  EXPECT_EQ(kron(a, b), want);
}

TEST(Vec, RowMajorRoundTrip) {
  Matrix x(2, 3);
  x << 1, 2, 3, 4, 5, 6;
  const Vector v = vec(x);
  for (Index i = 0; i < 6; ++i) EXPECT_EQ(v(i), static_cast<double>(i + 1));
  EXPECT_EQ(unvec(v, 2, 3), x);
  EXPECT_THROW(unvec(v, 4, 2), InvalidInput);
}

TEST(LeftPartialTrace, MatchesKroneckerIdentity) {
  auto rng = property_rng(18);
  const Matrix b = random_psd(rng, 3, 3);
  const Matrix c = random_psd(rng, 2, 2);
  // tr_R(B (x) C) = tr(C) B.
  const Matrix pt = left_partial_trace(kron(b, c), 3, 2);
  EXPECT_LE((pt - c.trace() * b).cwiseAbs().maxCoeff(), 1e-12);
}

}  // namespace
}  // namespace precond
