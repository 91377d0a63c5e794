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

#ifndef PRECOND_TOOLS_CONFIG_HPP
#define PRECOND_TOOLS_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "precond/optimizers.hpp"
#include "precond/problems.hpp"

namespace precond::tools {

// Bad configuration. The message names the offending key; exit code 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class Preset { Ci, Desk, Paper };
enum class FullRoute { Auto, Direct, Reduced };
enum class Init { Zero, Optimum };

// Optimizer families runnable on the matrix quadratic.
enum class OptimizerName {
  AdaGradNorm,      // scalar cone over all d_L d_R entries
  AdaGrad,          // diagonal cone
  OneSidedShampoo,  // kronecker-left cone
  FullMatrix,       // full cone
  TwoSidedShampoo,
};

const char* to_string(Preset p);
const char* to_string(OptimizerName o);
OptimizerName parse_optimizer(const std::string& s);

struct RunConfig {
  Preset preset = Preset::Ci;
  Index d_left = 20;
  Index d_right = 20;
  SpectrumSpec spectrum;
  bool normalize_trace = false;
  double noise_variance = 0.0;  // isotropic gradient noise, 0 = exact
  std::vector<OptimizerName> optimizers = {
      OptimizerName::AdaGradNorm, OptimizerName::AdaGrad,
      OptimizerName::OneSidedShampoo, OptimizerName::FullMatrix};
  Mode mode = Mode::AdaReg;  // AdaReg, WeightedAdaReg or EmaAdaReg
  double beta2 = 1.0;
  double eps = 0.0;
  double lr = 1.0;         // run
  std::vector<double> grid;  // sweep
  std::int64_t steps = 30;
  std::vector<std::uint64_t> seeds = {0, 1};
  bool record_timing = false;
  FullRoute full_route = FullRoute::Auto;
  Init init = Init::Zero;  // X0 = 0 or X0 = X*

  // Throws ConfigError.
  void validate() const;
};

// Defaults for a preset: ci (d=20, 30 steps, 2 seeds, 8-point grid),
// desk (100, 100, 5, 20), paper (1000, 100, 5, 60). Grids are log-spaced
// over [1e-4, 1e2].
RunConfig preset_config(Preset p);

std::vector<double> log_grid(double lo, double hi, int points);

// Parses a flat YAML mapping. `preset` is applied first, other keys
// override it. Unknown keys and wrong types throw ConfigError.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& yaml_text);

}  // namespace precond::tools

#endif  // PRECOND_TOOLS_CONFIG_HPP
