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


#include <benchmark/benchmark.h>

#include "precond/cone_oracle.hpp"
#include "precond/cones.hpp"
#include "precond/matrix_kernels.hpp"
#include "precond/optimizers.hpp"
#include "precond/problems.hpp"
#include "precond/rng.hpp"

namespace {

using namespace precond;

PsdMatrix random_pd(Index d, std::uint64_t seed) {
  Rng rng(seed, StreamRole::Property);
  const Matrix a = rng.normal_matrix(d, d);
  return PsdMatrix(Matrix(a * a.transpose() + 0.1 * Matrix::Identity(d, d)));
}

void BM_PsdPowerHalf(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  const PsdMatrix m = random_pd(d, 1);
  for (auto _ : state) {
    PsdMatrix copy(m.sym());
    benchmark::DoNotOptimize(psd_power(copy, 0.5));
  }
}
BENCHMARK(BM_PsdPowerHalf)->RangeMultiplier(4)->Range(4, 256);

void BM_SolveFull(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  const ConeSpec cone = ConeSpec::full(d);
  const GradStat stat = stat_from_dense(cone, random_pd(d, 2));
  for (auto _ : state) benchmark::DoNotOptimize(solve_preconditioner(cone, stat, 0.0, 1.0));
}
BENCHMARK(BM_SolveFull)->RangeMultiplier(4)->Range(4, 256);

void BM_SolveKroneckerLeft(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  const ConeSpec cone = ConeSpec::kronecker_left(d, d);
  Rng rng(3, StreamRole::Property);
  GradStat stat = zero_stat(cone);
  for (int t = 0; t < 4; ++t) stat = stat_update(cone, stat, rng.normal_vector(d * d), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_preconditioner(cone, stat, 0.0, 1.0));
}
BENCHMARK(BM_SolveKroneckerLeft)->RangeMultiplier(2)->Range(8, 128);

void BM_OracleFull(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  const auto family = SubspaceFamily::full(d);
  const PsdMatrix m = random_pd(d, 4);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_minimize_subspace(family, m, 1.0));
}
BENCHMARK(BM_OracleFull)->DenseRange(2, 8, 2);

template <ConeKind Kind>
void BM_AdaRegStep(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  const QuadraticProblem p = build_paper_problem(d, 0);
  OptimizerConfig cfg;
  switch (Kind) {
    case ConeKind::Scalar:
      cfg.cone = ConeSpec::scalar(d * d);
      break;
    case ConeKind::Diagonal:
      cfg.cone = ConeSpec::diagonal(d * d);
      break;
    default:
      cfg.cone = ConeSpec::kronecker_left(d, d);
      cfg.mode = Mode::OneSidedShampoo;
      break;
  }
  cfg.eta = 0.1;
  OptimizerState s = init_state(cfg, Vector::Zero(d * d));
  for (auto _ : state) benchmark::DoNotOptimize(step(cfg, s, p.grad(s.x)));
}
BENCHMARK(BM_AdaRegStep<ConeKind::Scalar>)->Arg(20)->Arg(100);
BENCHMARK(BM_AdaRegStep<ConeKind::Diagonal>)->Arg(20)->Arg(100);
BENCHMARK(BM_AdaRegStep<ConeKind::KroneckerLeft>)->Arg(20)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
