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


#ifndef PRECOND_TOOLS_REPORT_HPP
#define PRECOND_TOOLS_REPORT_HPP

#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"

namespace precond::tools {

// One cone evaluated on a shared gradient stream.
struct BoundRow {
  std::string optimizer;
  std::string cone;
  double d_norm = 0.0;   // max_t |x_t - x*| in the cone's domain norm
  double g_norm = 0.0;   // adaptive norm of sum_t g_t g_t^T
  double product = 0.0;  // D G
  double rhs = 0.0;      // regret bound at the stream's eta
  // G no larger and D no smaller than for every cone this one contains.
  bool nested_ok = true;
};

// Gradient stream: AdaGrad-Norm on the config's problem (first seed) for
// `steps` steps at learning rate `lr`.
std::vector<BoundRow> bound_table(const RunConfig& cfg, double lr, std::int64_t steps);

struct RateTableRow {
  std::string optimizer;
  std::string cone;
  double extremal_numerator = 0.0;
  double extremal_rate = 0.0;  // numerator / T
  double instance_numerator = 0.0;
};

std::vector<RateTableRow> rate_comparison(const RunConfig& cfg, std::int64_t steps);

struct ReportFiles {
  std::vector<std::string> written;
};

// Reads every input first; nothing is written when any input is invalid.
ReportFiles write_report(const std::vector<std::string>& inputs, const std::string& out_dir,
                         const RunConfig& cfg);

}  // namespace precond::tools

#endif  // PRECOND_TOOLS_REPORT_HPP
