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

#ifndef PRECOND_TOOLS_EXPERIMENT_HPP
#define PRECOND_TOOLS_EXPERIMENT_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "precond/optimizers.hpp"
#include "precond/problems.hpp"

namespace precond::tools {

// Non-finite values or a failed direct/reduced cross-check; exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CellSpec {
  OptimizerName optimizer = OptimizerName::AdaGradNorm;
  double lr = 1.0;
  std::size_t lr_index = 0;
  std::uint64_t seed = 0;
};

struct CellResult {
  CellSpec spec;
  std::string cone;
  std::vector<StepRecord> records;
  bool diverged = false;
  // Max relative loss gap between the direct and reduced full-matrix runs
  // over the whole run, or -1 when only one path ran.
  double cross_check = -1.0;
};

// Largest ambient dimension for which the direct full-matrix path runs.
inline constexpr Index kDirectFullLimit = 4096;
// At or below this ambient dimension the auto route runs both paths.
inline constexpr Index kCrossCheckLimit = 400;
// At eps = 0 the statistic is rank-deficient and its newest directions sit
// near the numerical-rank cutoff, where rounding is amplified by 1/sqrt(lambda).
// A 1e-15 perturbation of the problem changes the loss by O(1) after ~10
// steps at lr >= 1. The check therefore covers the first steps only.
inline constexpr std::int64_t kCrossCheckSteps = 5;
inline constexpr double kCrossCheckTol = 1e-8;

QuadraticProblem build_problem(const RunConfig& cfg, std::uint64_t seed);
std::map<std::uint64_t, QuadraticProblem> build_problems(const RunConfig& cfg);

// Cone label used in the CSV for an optimizer on this shape.
std::string cone_label(const RunConfig& cfg, OptimizerName o);

// Runs one (optimizer, lr, seed) cell from cfg.init. Records are truncated at
// the first non-finite value and `diverged` is set.
CellResult run_cell(const RunConfig& cfg, const QuadraticProblem& problem,
                    const CellSpec& spec);

// Loss used by the average-iterate criterion: plain for adareg, weighted
// otherwise.
double avg_criterion_loss(const RunConfig& cfg, const StepRecord& r);

}  // namespace precond::tools

#endif  // PRECOND_TOOLS_EXPERIMENT_HPP
