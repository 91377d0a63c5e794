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

#include <algorithm>
#include <cmath>
#include <functional>
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

Matrix tri_m() {
  Matrix m(3, 3);
  m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  return m;
}

Matrix tri_mp() {
  Matrix m = tri_m();
  m(0, 0) = 10000;
  return m;
}

Matrix g1(double e) { return Eigen::Vector4d(1, e, e, e).asDiagonal(); }
Matrix g2(double e) { return Eigen::Vector4d(1, e, e, 1).asDiagonal(); }

double golden(const std::function<double(double)>& f, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  for (int i = 0; i < 200; ++i) {
    const double c = b - r * (b - a), d = a + r * (b - a);
    if (f(c) < f(d)) b = d; else a = c;
  }
  return 0.5 * (a + b);
}

// Independent minimizer for diagonal 2x2 (x) 2x2 data. With U = a(p, 1-p),
// V = b(q, 1-q) and k = ab the objective is F(p,q)/k + k, so k = sqrt(F) and
// the value is 2 sqrt(F). F is convex in each argument.
Matrix brute_kron_diag(const Eigen::Vector4d& m) {
  auto f = [&](double p, double q) {
    return m(0) / (p * q) + m(1) / (p * (1 - q)) + m(2) / ((1 - p) * q) +
           m(3) / ((1 - p) * (1 - q));
  };
  auto best_p = [&](double q) { return golden([&](double p) { return f(p, q); }, 1e-12, 1 - 1e-12); };
  auto g = [&](double q) { return f(best_p(q), q); };
  double q0 = 0.5, g0 = g(0.5);
  for (int i = 1; i < 1000; ++i) {
    const double q = i / 1000.0;
    if (g(q) < g0) { g0 = g(q); q0 = q; }
  }
  const double q = golden(g, std::max(1e-12, q0 - 1e-3), std::min(1 - 1e-12, q0 + 1e-3));
  const double p = best_p(q);
  const double k = std::sqrt(f(p, q));
  return (k * Eigen::Vector4d(p * q, p * (1 - q), (1 - p) * q, (1 - p) * (1 - q))).asDiagonal();
}

Matrix limit_g1() { return Eigen::Vector4d(1, 0, 0, 0).asDiagonal(); }

TEST(SubspaceFamily, RejectsMissingIdentity) {
  Matrix e = Matrix::Zero(2, 2);
  e(0, 0) = 1;
  EXPECT_THROW(SubspaceFamily(2, {e}), InvalidInput);
}

TEST(SubspaceFamily, RejectsDependentBasis) {
  EXPECT_THROW(SubspaceFamily(2, {Matrix::Identity(2, 2), 2.0 * Matrix::Identity(2, 2)}),
               InvalidInput);
}

TEST(SubspaceFamily, CoordinatesRoundTrip) {
  auto rng = property_rng(31);
  const auto fam = SubspaceFamily::tridiagonal(4);
  const Vector theta = rng.normal_vector(fam.size());
  EXPECT_LE((fam.coordinates(fam.combine(theta)) - theta).norm(), 1e-12);
}

TEST(OracleSubspace, DiagonalExample) {
  const auto r = oracle_minimize_subspace(SubspaceFamily::diagonal(2),
                                          PsdMatrix(Matrix(Eigen::Vector2d(4, 9).asDiagonal())), 1.0);
  EXPECT_LE((r.h.dense() - Matrix(Eigen::Vector2d(2, 3).asDiagonal())).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(OracleSubspace, TridiagonalExample) {
  Matrix expected(3, 3);
  expected << 1.382548, 0.297594, 0, 0.297594, 1.318491, 0.297594, 0, 0.297594, 1.382548;
  const auto r = oracle_minimize_subspace(SubspaceFamily::tridiagonal(3), PsdMatrix(tri_m()), 1.0);
  EXPECT_LE((r.h.dense() - expected).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(OracleSubspace, TridiagonalPerturbedExample) {
  Matrix expected(3, 3);
  expected << 100.000004, 0.007229, 0, 0.007229, 1.365999, 0.366002, 0, 0.366002, 1.366032;
  const auto r = oracle_minimize_subspace(SubspaceFamily::tridiagonal(3), PsdMatrix(tri_mp()), 1.0);
  EXPECT_NEAR(r.h.dense()(2, 2), 1.366032, 1e-3);
  EXPECT_LE((r.h.dense() - expected).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(OracleSubspace, ReportsStationarityAndRestart) {
  const auto r = oracle_minimize_subspace(SubspaceFamily::tridiagonal(3), PsdMatrix(tri_m()), 1.0);
  EXPECT_LE(r.stationarity, 1e-10 * std::sqrt(3.0));
  EXPECT_LE(r.restart_gap, 1e-10 * std::max(1.0, r.objective));
}

TEST(OracleSubspace, IterationCap) {
  OracleOptions opts;
  opts.max_iter = 1;
  try {
    oracle_minimize_subspace(SubspaceFamily::tridiagonal(3), PsdMatrix(tri_mp()), 1.0, opts);
    FAIL() << "expected NotConverged";
  } catch (const NotConverged& e) {
    EXPECT_EQ(e.best().rows(), 3);
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(OracleSubspace, SingularInputIsShifted) {
  const Matrix m = Eigen::Vector3d(1, 0, 4).asDiagonal();
  const auto r = oracle_minimize_subspace(SubspaceFamily::diagonal(3), PsdMatrix(m), 1.0);
  EXPECT_NEAR(r.h.dense()(0, 0), 1.0, 1e-4);
  EXPECT_NEAR(r.h.dense()(2, 2), 2.0, 1e-4);
  EXPECT_GT(r.h.dense()(1, 1), 0.0);
  EXPECT_LT(r.h.dense()(1, 1), 1e-3);
}

TEST(OracleSubspace, ObjectiveNonincreasing) {
  auto rng = property_rng(32);
  for (int c = 0; c < 30; ++c) {
    const Index d = testing::random_dim(rng, 2, 6);
    const auto r = oracle_minimize_subspace(SubspaceFamily::tridiagonal(d),
                                            PsdMatrix(random_pd(rng, d)), rng.uniform(0.2, 3.0));
    // Rounding-level increases are allowed at the last digits.
    for (size_t i = 1; i < r.trace.size(); ++i)
      EXPECT_LE(r.trace[i], r.trace[i - 1] * (1 + 1e-14));
  }
}

TEST(OracleSubspace, BalanceAtConvergence) {
  auto rng = property_rng(33);
  for (int c = 0; c < 40; ++c) {
    const Index d = testing::random_dim(rng, 2, 6);
    const double eta = rng.uniform(0.2, 3.0);
    const Matrix m = random_pd(rng, d);
    const auto fam = c % 2 ? SubspaceFamily::tridiagonal(d) : SubspaceFamily::full(d);
    const auto r = oracle_minimize_subspace(fam, PsdMatrix(m), eta);
    const Matrix h = r.h.dense();
    const double lhs = m.cwiseProduct(h.inverse()).sum();
    const double rhs = eta * eta * h.trace();
    EXPECT_NEAR(lhs, rhs, 1e-5 * rhs);
  }
}

TEST(OracleSubspace, AgreesWithClosedForms) {
  auto rng = property_rng(34);
  for (ConeKind kind : all_kinds()) {
    for (int c = 0; c < 20; ++c) {
      const auto cone = random_basic_cone(rng, kind, 8);
      const Matrix m = random_pd(rng, cone.dim());
      const double eta = rng.uniform(0.2, 3.0);
      const Matrix closed = dense(cone, solve_preconditioner(cone, stat_from_dense(cone, PsdMatrix(m)), 0.0, eta));
      const auto r = oracle_minimize_subspace(SubspaceFamily::for_cone(cone), PsdMatrix(m), eta);
      EXPECT_LE(testing::rel_err(r.h.dense(), closed), 1e-6) << cone.name();
    }
  }
}

TEST(OracleKronPair, IdentityExample) {
  const auto r = oracle_minimize_kron_pair({2, 2}, PsdMatrix::identity(4), 1.0);
  EXPECT_LE((r.product() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(r.u.trace(), r.v.trace(), 1e-9);
}

TEST(OracleKronPair, BalancedDataExample) {
  const auto r = oracle_minimize_kron_pair({2, 2}, PsdMatrix(g2(1e-4)), 1.0);
  const Matrix lim = std::sqrt(0.5) * Matrix::Identity(4, 4);
  EXPECT_LE((r.product() - lim).norm(), 5e-2);
  EXPECT_LE((r.product() - brute_kron_diag(Eigen::Vector4d(1, 1e-4, 1e-4, 1))).norm(), 1e-6);
}

TEST(OracleKronPair, SkewedDataMatchesIndependentMinimizer) {
  for (double e : {1e-2, 1e-3, 1e-4}) {
    const auto r = oracle_minimize_kron_pair({2, 2}, PsdMatrix(g1(e)), 1.0);
    const Matrix brute = brute_kron_diag(Eigen::Vector4d(1, e, e, e));
    EXPECT_LE((r.product() - brute).norm(), 1e-6) << e;
    EXPECT_LE(r.multistart_spread, 1e-9) << e;
  }
}

TEST(OracleKronPair, SkewedDataApproachesLimitSlowly) {
  // The distance to diag(1,0,0,0) shrinks like eps^(1/3); at eps = 1e-4 it
  // is still about 0.069.
  const double d4 = (oracle_minimize_kron_pair({2, 2}, PsdMatrix(g1(1e-4)), 1.0).product() - limit_g1()).norm();
  const double d6 = (oracle_minimize_kron_pair({2, 2}, PsdMatrix(g1(1e-6)), 1.0).product() - limit_g1()).norm();
  const double brute4 = (brute_kron_diag(Eigen::Vector4d(1, 1e-4, 1e-4, 1e-4)) - limit_g1()).norm();
  EXPECT_NEAR(d4, brute4, 1e-6);
  EXPECT_LT(d6, d4);
  EXPECT_LT(d6, 5e-2);
  EXPECT_NEAR(d4 / d6, std::pow(100.0, 1.0 / 3.0), 0.5);
}

TEST(OracleKronPair, GaugeInvariantObjective) {
  auto rng = property_rng(35);
  for (int c = 0; c < 10; ++c) {
    const Matrix m = random_pd(rng, 6);
    const auto r = oracle_minimize_kron_pair({2, 3}, PsdMatrix(m), 1.0);
    const Matrix h = r.product();
    const double obj = m.cwiseProduct(h.inverse()).sum() + h.trace();
    EXPECT_NEAR(obj, r.objective, 1e-9 * obj);
    EXPECT_NEAR(r.u.trace(), r.v.trace(), 1e-9 * r.u.trace());
    // Stationary in the overall scale.
    EXPECT_NEAR(m.cwiseProduct(h.inverse()).sum(), h.trace(), 1e-6 * h.trace());
  }
}

TEST(MonotonicityProbe, DiagonalNeverViolates) {
  auto rng = property_rng(36);
  for (int c = 0; c < 30; ++c) {
    const Index d = testing::random_dim(rng, 2, 6);
    const Matrix m = random_pd(rng, d);
    const Matrix mp = m + testing::random_psd(rng, d, 1);
    const auto rep = monotonicity_probe(SubspaceFamily::diagonal(d), PsdMatrix(m), PsdMatrix(mp), 1.0, 1e-9);
    EXPECT_FALSE(rep.violated);
    EXPECT_TRUE(rep.entries.empty());
    EXPECT_GE(rep.min_eig_diff, -1e-9);
  }
}

TEST(MonotonicityProbe, TridiagonalViolatesLastEntry) {
  const auto rep = monotonicity_probe(SubspaceFamily::tridiagonal(3), PsdMatrix(tri_m()),
                                      PsdMatrix(tri_mp()), 1.0, 1e-9);
  EXPECT_TRUE(rep.violated);
  EXPECT_LT(rep.min_eig_diff, 0.0);
  ASSERT_FALSE(rep.entries.empty());
  EXPECT_EQ(rep.entries.back(), std::make_pair(Index{2}, Index{2}));
  EXPECT_GT(rep.p(2, 2), rep.pp(2, 2));
}

TEST(MonotonicityProbe, KronPairViolatesFirstEntry) {
  const auto rep = monotonicity_probe(KroneckerPairFamily{2, 2}, PsdMatrix(g1(1e-4)),
                                      PsdMatrix(g2(1e-4)), 1.0, 1e-9);
  EXPECT_TRUE(rep.violated);
  ASSERT_FALSE(rep.entries.empty());
  EXPECT_EQ(rep.entries.front(), std::make_pair(Index{0}, Index{0}));
  EXPECT_GT(rep.p(0, 0), rep.pp(0, 0));
}

TEST(MonotonicityProbe, RequiresOrderedInputs) {
  EXPECT_THROW(monotonicity_probe(SubspaceFamily::diagonal(3), PsdMatrix(tri_mp()),
                                  PsdMatrix(tri_m()), 1.0, 1e-9),
               InvalidInput);
}

}  // namespace
}  // namespace precond
