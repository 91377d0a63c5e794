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
#include <vector>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "generators.hpp"
#include "precond/cone_oracle.hpp"
#include "precond/cones.hpp"
#include "precond/error.hpp"

namespace precond {
namespace {

using testing::all_kinds;
using testing::property_rng;
using testing::random_basic_cone;
using testing::random_pd;
using testing::random_psd;

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

Matrix diag2(double a, double b) { return v2(a, b).asDiagonal(); }

double inner_inverse(const Matrix& m, const Matrix& h) {
  return m.cwiseProduct(h.inverse()).sum();
}

// adaptive_norm(S) = eta Tr P(S) for the oracle minimizer P, since P / Tr P
// solves the trace-constrained problem.
double oracle_adaptive_norm(const ConeSpec& cone, const Matrix& s) {
  const auto fam = SubspaceFamily::for_cone(cone);
  return oracle_minimize_subspace(fam, PsdMatrix(s), 1.0).h.trace();
}

TEST(StatUpdate, DiagonalAccumulates) {
  const auto cone = ConeSpec::diagonal(2);
  const auto s = stat_update(cone, zero_stat(cone), v2(2, 3));
  EXPECT_EQ(s.diag, v2(4, 9));
}

TEST(StatUpdate, ScalarDecayWithZeroGradient) {
  const auto cone = ConeSpec::scalar(2);
  GradStat s = zero_stat(cone);
  s.scalar = 5.0;
  EXPECT_DOUBLE_EQ(stat_update(cone, s, v2(0, 0), 0.5).scalar, 2.5);
}

TEST(StatUpdate, KroneckerLeftNormalizesByRightDim) {
  const auto cone = ConeSpec::kronecker_left(2, 2);
  Matrix g(2, 2);
  g << 1, 0, 0, 2;
  const auto s = stat_update(cone, zero_stat(cone), vec(g));
  EXPECT_EQ(s.matrix.dense(), diag2(0.5, 2.0));
}

TEST(StatUpdate, DimensionMismatch) {
  const auto cone = ConeSpec::full(3);
  EXPECT_THROW(stat_update(cone, zero_stat(cone), v2(1, 1)), InvalidInput);
}

TEST(StatUpdate, DecayFoldsIntoEpsScale) {
  const auto cone = ConeSpec::scalar(1);
  GradStat s = zero_stat(cone);
  for (int t = 0; t < 3; ++t) s = stat_update(cone, s, Vector::Zero(1), 0.5);
  EXPECT_DOUBLE_EQ(s.eps_scale, 0.125);
}

TEST(SolvePreconditioner, FullIdentityFixedPoint) {
  const auto cone = ConeSpec::full(2);
  const auto s = stat_from_dense(cone, PsdMatrix::identity(2));
  const auto h = solve_preconditioner(cone, s, 0.0, 1.0);
  EXPECT_LE((dense(cone, h) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SolvePreconditioner, DiagonalMatchesOracle) {
  const auto cone = ConeSpec::diagonal(2);
  GradStat s = zero_stat(cone);
  s.diag = v2(4, 9);
  const Matrix h = dense(cone, solve_preconditioner(cone, s, 0.0, 1.0));
  EXPECT_EQ(h, diag2(2, 3));
  const auto oracle = oracle_minimize_subspace(SubspaceFamily::diagonal(2),
                                               PsdMatrix(diag2(4, 9)), 1.0);
  EXPECT_LE((oracle.h.dense() - h).norm(), 1e-6);
}

TEST(SolvePreconditioner, ScalarMatchesOracle) {
  const auto cone = ConeSpec::scalar(2);
  const auto s = stat_from_dense(cone, PsdMatrix(diag2(1, 5)));
  EXPECT_DOUBLE_EQ(s.scalar, 6.0);
  const auto h = solve_preconditioner(cone, s, 0.0, 1.0);
  EXPECT_NEAR(h.scalar, std::sqrt(3.0), 1e-15);
  const auto oracle = oracle_minimize_subspace(SubspaceFamily::scalar(2),
                                               PsdMatrix(diag2(1, 5)), 1.0);
  EXPECT_NEAR(oracle.h.dense()(0, 0), std::sqrt(3.0), 1e-6);
}

TEST(SolvePreconditioner, EpsEntersAsAmbientIdentity) {
  // Full: (1/eta)(eps I + M)^{1/2}; KroneckerLeft adds eps I_{d_L} to L.
  const auto full = ConeSpec::full(2);
  const auto h = solve_preconditioner(full, zero_stat(full), 4.0, 2.0);
  EXPECT_NEAR(h.matrix.dense()(0, 0), 1.0, 1e-15);
  const auto kl = ConeSpec::kronecker_left(2, 3);
  const auto hk = solve_preconditioner(kl, zero_stat(kl), 4.0, 2.0);
  EXPECT_NEAR(dense(kl, hk)(5, 5), 1.0, 1e-15);
}

TEST(DomainNorm, Examples) {
  EXPECT_DOUBLE_EQ(domain_norm(ConeSpec::full(3), (Vector(3) << 3, 4, 0).finished()), 5.0);
  Matrix x(2, 2);
  x << 3, 0, 0, 4;
  EXPECT_NEAR(domain_norm(ConeSpec::kronecker_left(2, 2), vec(x)), 2.82843, 1e-5);
  const auto ds = ConeSpec::direct_sum({ConeSpec::diagonal(2), ConeSpec::scalar(2)});
  EXPECT_NEAR(domain_norm(ds, (Vector(4) << 1, -3, 3, 4).finished()), 3.53553, 1e-5);
}

TEST(DomainNorm, DimensionMismatch) {
  EXPECT_THROW(domain_norm(ConeSpec::full(3), v2(1, 1)), InvalidInput);
}

TEST(AdaptiveNorm, FullDiagonal) {
  EXPECT_NEAR(adaptive_norm(ConeSpec::full(2), PsdMatrix(diag2(4, 9))), 5.0, 1e-14);
}

TEST(AdaptiveNorm, ScalarMatchesOracle) {
  const auto cone = ConeSpec::scalar(2);
  const double closed = adaptive_norm(cone, PsdMatrix(diag2(4, 9)));
  EXPECT_NEAR(closed, 5.09902, 1e-5);
  EXPECT_NEAR(closed, oracle_adaptive_norm(cone, diag2(4, 9)), 1e-6);
}

TEST(AdaptiveNorm, KroneckerLeftFromPartialTrace) {
  const auto cone = ConeSpec::kronecker_left(2, 2);
  const double closed = adaptive_norm(cone, PsdMatrix(diag2(1, 4)));
  EXPECT_NEAR(closed, 4.24264, 1e-5);
  // Ambient S = C (x) I / d_R has left partial trace C.
  const Matrix s = kron(diag2(1, 4), Matrix::Identity(2, 2)) / 2.0;
  EXPECT_NEAR(adaptive_norm(cone, PsdMatrix(s)), closed, 1e-12);
  EXPECT_NEAR(closed, oracle_adaptive_norm(cone, s), 1e-6);
}

TEST(AdaptiveNorm, RejectsNonPsd) {
  EXPECT_THROW(adaptive_norm(ConeSpec::full(2), PsdMatrix(diag2(1, -1))), InvalidInput);
}

TEST(AdaptiveNorm, StatMatchesDenseOnAllKinds) {
  auto rng = property_rng(21);
  for (ConeKind kind : all_kinds()) {
    for (int c = 0; c < 20; ++c) {
      const auto cone = random_basic_cone(rng, kind, 8);
      GradStat s = zero_stat(cone);
      Matrix m = Matrix::Zero(cone.dim(), cone.dim());
      for (int t = 0; t < 4; ++t) {
        const Vector g = rng.normal_vector(cone.dim());
        s = stat_update(cone, s, g);
        m += g * g.transpose();
      }
      EXPECT_NEAR(adaptive_norm(cone, s), adaptive_norm(cone, PsdMatrix(m)),
                  1e-9 * std::max(1.0, adaptive_norm(cone, s)))
          << cone.name();
    }
  }
}

TEST(HSmoothness, Examples) {
  const SymMatrix a(diag2(1, 2));
  EXPECT_DOUBLE_EQ(h_smoothness(ConeSpec::scalar(2), a), 4.0);
  EXPECT_DOUBLE_EQ(h_smoothness(ConeSpec::full(2), a), 3.0);
  // 1 1^T / 3 lifted by I_2 on the diagonal cone.
  const SymMatrix b(Matrix::Constant(3, 3, 1.0 / 3.0));
  EXPECT_NEAR(h_smoothness(ConeSpec::diagonal(6), b), 6.0, 1e-12);
}

TEST(HSmoothness, KroneckerLeftTakesLeftFactor) {
  const auto cone = ConeSpec::kronecker_left(2, 3);
  EXPECT_DOUBLE_EQ(h_smoothness(cone, SymMatrix(diag2(1, 2))), 9.0);
  EXPECT_NEAR(h_smoothness(cone, SymMatrix(diag2(1, -2))), 9.0, 1e-12);
  EXPECT_THROW(h_smoothness(cone, SymMatrix::identity(6)), InvalidInput);
}

TEST(HSmoothness, IndefiniteUsesAbsoluteValue) {
  const SymMatrix a(diag2(1, -3));
  EXPECT_NEAR(h_smoothness(ConeSpec::full(2), a), 4.0, 1e-12);
  EXPECT_NEAR(h_smoothness(ConeSpec::scalar(2), a), 6.0, 1e-12);
}

TEST(HSmoothness, DiagonalUnsupportedForGeneralMatrices) {
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  EXPECT_THROW(h_smoothness(ConeSpec::diagonal(2), SymMatrix(a)), Unsupported);
}

TEST(HSmoothness, DiagonalRankOneAgainstWitness) {
  auto rng = property_rng(22);
  for (int c = 0; c < 50; ++c) {
    const Index d = testing::random_dim(rng, 2, 6);
    const Vector v = rng.normal_vector(d);
    const double h = h_smoothness(ConeSpec::diagonal(d), SymMatrix(Matrix(v * v.transpose())));
    // D_ii = |v_i| * sum |v| is feasible: D - v v^T is PSD.
    const double s = v.cwiseAbs().sum();
    const Matrix dmat = (v.cwiseAbs() * s).asDiagonal();
    EXPECT_GE(min_eigenvalue(SymMatrix(Matrix(dmat - v * v.transpose()))), -1e-9);
    EXPECT_NEAR(h, dmat.trace(), 1e-9 * h);
    // Any feasible D satisfies Tr D >= s^2 via the sign vector.
    const Vector sg = v.cwiseSign();
    EXPECT_NEAR(sg.dot(v * v.transpose() * sg), h, 1e-9 * h);
  }
}

TEST(DualWitness, FullIsEuclidean) {
  const Vector g = v2(3, 4);
  const auto w = dual_witness_check(ConeSpec::full(2), g);
  EXPECT_LE((w.witness - g / 5.0).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(w.gap, 1e-12);
}

TEST(DualWitness, Diagonal) {
  const auto w = dual_witness_check(ConeSpec::diagonal(2), v2(1, 1));
  EXPECT_NEAR(w.norm, 2.0, 1e-14);
  EXPECT_NEAR(v2(1, 1).dot(w.witness), 2.0, 1e-12);
}

TEST(DualWitness, Scalar) {
  const auto w = dual_witness_check(ConeSpec::scalar(3), (Vector(3) << 1, 2, 2).finished());
  EXPECT_NEAR(w.norm, std::sqrt(3.0) * 3.0, 1e-12);
  EXPECT_LE(w.gap, 1e-9);
}

TEST(DualWitness, ZeroGradientIsInvalid) {
  EXPECT_THROW(dual_witness_check(ConeSpec::full(2), v2(0, 0)), InvalidInput);
}

TEST(DualWitness, GapSmallOnRandomCones) {
  auto rng = property_rng(23);
  for (ConeKind kind : all_kinds()) {
    for (int c = 0; c < 40; ++c) {
      const auto cone = random_basic_cone(rng, kind, 8);
      const auto w = dual_witness_check(cone, rng.normal_vector(cone.dim()));
      EXPECT_LE(w.gap, 1e-6 * w.norm) << cone.name();
      EXPECT_NEAR(domain_norm(cone, w.witness), 1.0, 1e-9) << cone.name();
    }
  }
}

class ConeProperty : public ::testing::TestWithParam<ConeKind> {};

TEST_P(ConeProperty, Balance) {
  auto rng = property_rng(100 + static_cast<int>(GetParam()));
  for (int c = 0; c < 200; ++c) {
    const auto cone = random_basic_cone(rng, GetParam(), 12);
    const Matrix m = random_pd(rng, cone.dim());
    for (double eta : {0.1, 1.0, 10.0}) {
      const auto h = solve_preconditioner(cone, stat_from_dense(cone, PsdMatrix(m)), 0.0, eta);
      const double lhs = inner_inverse(m, dense(cone, h));
      const double rhs = eta * eta * trace(cone, h);
      EXPECT_NEAR(lhs, rhs, 1e-8 * std::abs(rhs)) << cone.name();
    }
  }
}

TEST_P(ConeProperty, OperatorMonotone) {
  auto rng = property_rng(200 + static_cast<int>(GetParam()));
  for (int c = 0; c < 200; ++c) {
    const auto cone = random_basic_cone(rng, GetParam(), 8);
    const Index d = cone.dim();
    const Matrix m = random_pd(rng, d);
    const Matrix mp = m + random_psd(rng, d, testing::random_dim(rng, 1, d));
    const Matrix p = dense(cone, solve_preconditioner(cone, stat_from_dense(cone, PsdMatrix(m)), 0.0, 1.0));
    const Matrix pp = dense(cone, solve_preconditioner(cone, stat_from_dense(cone, PsdMatrix(mp)), 0.0, 1.0));
    EXPECT_GE(min_eigenvalue(SymMatrix(Matrix(pp - p))), -1e-8) << cone.name();
    EXPECT_TRUE(in_pattern(cone, pp - p)) << cone.name();
  }
}

TEST_P(ConeProperty, ScalingLaw) {
  auto rng = property_rng(300 + static_cast<int>(GetParam()));
  for (int c = 0; c < 50; ++c) {
    const auto cone = random_basic_cone(rng, GetParam(), 8);
    const Matrix m = random_pd(rng, cone.dim());
    const double alpha = rng.uniform(0.1, 5.0);
    const Matrix p = dense(cone, solve_preconditioner(cone, stat_from_dense(cone, PsdMatrix(m)), 0.0, 1.0));
    const Matrix pa = dense(cone, solve_preconditioner(
        cone, stat_from_dense(cone, PsdMatrix(Matrix(alpha * alpha * m))), 0.0, 1.0));
    EXPECT_LE((pa - alpha * p).norm(), 1e-10 * (alpha * p).norm()) << cone.name();
  }
}

TEST_P(ConeProperty, NormDuality) {
  auto rng = property_rng(400 + static_cast<int>(GetParam()));
  for (int c = 0; c < 500; ++c) {
    const auto cone = random_basic_cone(rng, GetParam(), 8);
    const Vector g = rng.normal_vector(cone.dim());
    const Vector x = rng.normal_vector(cone.dim());
    const double bound = adaptive_norm(cone, PsdMatrix(Matrix(g * g.transpose()))) *
                         domain_norm(cone, x);
    EXPECT_LE(g.dot(x), bound * (1.0 + 1e-12) + 1e-12) << cone.name();
  }
}

INSTANTIATE_TEST_SUITE_P(AllKinds, ConeProperty, ::testing::ValuesIn(all_kinds()),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(DirectSum, ComposesBlockwise) {
  auto rng = property_rng(24);
  for (int c = 0; c < 100; ++c) {
    const auto cone = random_basic_cone(rng, ConeKind::DirectSum, 10);
    const Vector x = rng.normal_vector(cone.dim());
    const Matrix s = random_psd(rng, cone.dim(), cone.dim());
    double max_block = 0.0;
    double sum_block = 0.0;
    const auto offs = cone.block_offsets();
    for (size_t i = 0; i < cone.blocks().size(); ++i) {
      const auto& b = cone.blocks()[i];
      max_block = std::max(max_block, domain_norm(b, x.segment(offs[i], b.dim())));
      sum_block += adaptive_norm(b, PsdMatrix(Matrix(s.block(offs[i], offs[i], b.dim(), b.dim()))));
    }
    EXPECT_EQ(domain_norm(cone, x), max_block);
    EXPECT_EQ(adaptive_norm(cone, PsdMatrix(s)), sum_block);
  }
}

TEST(NestedCones, LargerConeTradesNorms) {
  // scalar < diagonal < full: adaptive norm shrinks, domain norm grows.
  auto rng = property_rng(25);
  for (int c = 0; c < 100; ++c) {
    const Index d = testing::random_dim(rng, 2, 8);
    Matrix s = Matrix::Zero(d, d);
    for (int t = 0; t < 5; ++t) {
      const Vector g = rng.normal_vector(d);
      s += g * g.transpose();
    }
    const PsdMatrix ps(s);
    const Vector x = rng.normal_vector(d);
    const auto sc = ConeSpec::scalar(d), dg = ConeSpec::diagonal(d), fu = ConeSpec::full(d);
    EXPECT_LE(adaptive_norm(dg, ps), adaptive_norm(sc, ps) * (1 + 1e-12));
    EXPECT_LE(adaptive_norm(fu, ps), adaptive_norm(dg, ps) * (1 + 1e-12));
    EXPECT_LE(domain_norm(sc, x), domain_norm(dg, x) * (1 + 1e-12));
    EXPECT_LE(domain_norm(dg, x), domain_norm(fu, x) * (1 + 1e-12));
  }
}

TEST(ConeSpec, Names) {
  EXPECT_EQ(ConeSpec::kronecker_left(2, 3).name(), "kron_left(2x3)");
  EXPECT_EQ(ConeSpec::direct_sum({ConeSpec::full(2), ConeSpec::scalar(3)}).name(),
            "sum[full(2),scalar(3)]");
  EXPECT_EQ(ConeSpec::kronecker_left(2, 3).dim(), 6);
  EXPECT_THROW(ConeSpec::scalar(0), InvalidInput);
  EXPECT_THROW(ConeSpec::direct_sum({}), InvalidInput);
}

}  // namespace
}  // namespace precond
