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

#ifndef PRECOND_TOOLS_SWEEP_HPP
#define PRECOND_TOOLS_SWEEP_HPP

#include <string>
#include <vector>

#include "config.hpp"
#include "experiment.hpp"

namespace precond::tools {

struct LrSummary {
  OptimizerName optimizer;
  double lr = 0.0;
  std::size_t lr_index = 0;
  double mean_last = 0.0;  // mean over seeds of the final last-iterate loss
  double mean_avg = 0.0;   // same for the average-iterate criterion
  int diverged = 0;        // cells that hit a non-finite value
};

struct Selection {
  OptimizerName optimizer;
  std::string criterion;  // "last" or "avg"
  double lr = 0.0;
  double mean_loss = 0.0;
};

struct SweepResult {
  std::vector<CellResult> cells;  // sorted by (optimizer, lr index, seed)
  std::vector<LrSummary> summary;
  std::vector<Selection> selected;

  const Selection& winner(OptimizerName o, const std::string& criterion) const;
};

// Worker count: flag if positive, else PRECOND_WORKERS, else 1.
int resolve_workers(int flag);

// Runs every (optimizer, lr, seed) cell with a bounded worker pool. The
// result does not depend on the worker count. Diverged cells count as +inf
// loss; ties go to the smaller lr.
SweepResult run_sweep(const RunConfig& cfg, int workers);

// Final-loss selection from cells already run (exposed for tests).
SweepResult summarize(const RunConfig& cfg, std::vector<CellResult> cells);

}  // namespace precond::tools

#endif  // PRECOND_TOOLS_SWEEP_HPP
