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

#ifndef PRECOND_TOOLS_VERIFY_HPP
#define PRECOND_TOOLS_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace precond::tools {

struct PropertyResult {
  std::string name;
  bool pass = true;
  std::int64_t n_cases = 0;
  double max_residual = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyResult> properties;
  bool pass() const;
};

nlohmann::json to_json(const SuiteReport& r);

// Suite names: all, cones, counterexamples, regret, equivalences, bounds.
bool is_suite(const std::string& name);
// Runs a suite at ci scale. Throws std::invalid_argument for unknown names.
SuiteReport run_suite(const std::string& name);

// Individual checks, sized by the caller. Residuals are the worst observed
// relative error or constraint violation.

// Closed form vs subspace oracle, one result per cone kind, and the
// balance identity of the closed form on the same instances.
std::vector<PropertyResult> check_oracle_agreement(int per_kind, int max_dim, double tol,
                                                   double balance_tol, std::uint64_t seed);
std::vector<PropertyResult> check_monotonicity(int per_kind, int max_dim, double tol,
                                               std::uint64_t seed);
PropertyResult check_norm_duality(int cases, std::uint64_t seed);
std::vector<PropertyResult> check_tridiagonal_counterexample(double tol);

struct KronCounterexampleOptions {
  std::vector<double> eps = {1e-3, 1e-4, 1e-5};
  double violation_eps = 1e-4;
  double limit_tol = 5e-2;
  // Require every eps to be within limit_tol of the limit, not only the
  // smallest one.
  bool strict = true;
};
std::vector<PropertyResult> check_kron_counterexample(const KronCounterexampleOptions& opts);

// Realized regret against the bound, one result per cone kind plus
// one-sided Shampoo.
std::vector<PropertyResult> check_regret(int per_cone, int steps, int max_dim,
                                         std::uint64_t seed);
PropertyResult check_bound_dominance(int cases, std::uint64_t seed);
PropertyResult check_cyclic_stream(double tol);
PropertyResult check_ema_equivalence(int steps, double tol, std::uint64_t seed);
PropertyResult check_weighted_reduction(int steps, double tol, std::uint64_t seed);
PropertyResult check_one_sided_equivalence(int steps, double tol, std::uint64_t seed);
PropertyResult check_reduction(int d, int steps, double tol, std::uint64_t seed);
PropertyResult check_gradients(int cases, double tol, std::uint64_t seed);
PropertyResult check_rate_table();

struct StochasticBoundOptions {
  int d = 20;
  double noise_variance = 0.01;
  int steps = 400;
  int seeds = 20;
  int required = 19;
};
// One result per cone (scalar and kronecker-left).
std::vector<PropertyResult> check_stochastic_bound(const StochasticBoundOptions& opts);

}  // namespace precond::tools

#endif  // PRECOND_TOOLS_VERIFY_HPP
