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

#ifndef PRECOND_OPTIMIZERS_HPP
#define PRECOND_OPTIMIZERS_HPP

#include <cstdint>
#include <string>

#include "precond/cones.hpp"
#include "precond/matrix_kernels.hpp"

namespace precond {

enum class Mode {
  AdaReg,
  WeightedAdaReg,
  EmaAdaReg,
  OneSidedShampoo,
  TwoSidedShampoo,
};

const char* to_string(Mode mode);

struct DomainSpec {
  enum class Kind { Unconstrained, Box };
  Kind kind = Kind::Unconstrained;
  Vector lower;
  Vector upper;

  static DomainSpec unconstrained() { return {}; }
  static DomainSpec box(Vector lower, Vector upper);
};

struct OptimizerConfig {
  ConeSpec cone = ConeSpec::scalar(1);
  double eta = 1.0;
  double eps = 0.0;
  double beta2 = 1.0;
  Mode mode = Mode::AdaReg;
  DomainSpec domain;
  // Matrix shape for TwoSidedShampoo. Other modes read it from the cone.
  Index d_left = 0;
  Index d_right = 0;

  // Throws InvalidInput when the fields are inconsistent.
  void validate() const;
  Index dim() const;
};

struct OptimizerState {
  Vector x;  // x_t, the point the next gradient is taken at
  GradStat stat;
  SymMatrix L;  // two-sided only, eps folded in
  SymMatrix R;
  ConeElement h;  // last preconditioner
  std::int64_t t = 0;
  Vector mean_plain;
  Vector mean_weighted;
  double weight_weighted = 0.0;  // sum of the weighted-average weights
};

struct StepRecord {
  std::int64_t t = 0;
  // Filled by the driver that owns the loss.
  double loss_last = 0.0;
  double loss_avg_plain = 0.0;
  double loss_avg_weighted = 0.0;
  double grad_norm = 0.0;
  double trace_H = 0.0;
  std::int64_t elapsed_ns = 0;
};

OptimizerState init_state(const OptimizerConfig& cfg, const Vector& x0);

// Each step consumes the gradient at state.x and advances t by one.
StepRecord adareg_step(const OptimizerConfig& cfg, OptimizerState& state,
                       const Vector& g);
StepRecord weighted_step(const OptimizerConfig& cfg, OptimizerState& state,
                         const Vector& g);
StepRecord ema_step(const OptimizerConfig& cfg, OptimizerState& state,
                    const Vector& g);
// G is d_L x d_R; the state iterate stores vec(X) row-major.
StepRecord one_sided_shampoo_step(const OptimizerConfig& cfg,
                                  OptimizerState& state, const Matrix& g);
StepRecord two_sided_shampoo_step(const OptimizerConfig& cfg,
                                  OptimizerState& state, const Matrix& g);

// Dispatches on cfg.mode; g is the ambient gradient vector.
StepRecord step(const OptimizerConfig& cfg, OptimizerState& state,
                const Vector& g);

// Means over x_1 .. x_t; the weighted one uses beta2^{(t-s)/2}.
Vector average_plain(const OptimizerState& state);
Vector average_weighted(const OptimizerState& state);

// H-metric projection. Box needs a scalar or diagonal metric.
Vector project(const DomainSpec& domain, const ConeSpec& cone,
               const ConeElement& metric, const Vector& x);

// Parameters of the weighted recursion that reproduces EMA with (eta, eps).
struct EmaRescale {
  double eta;
  double eps;
};
EmaRescale ema_rescale(double eta, double eps, double beta2);

}  // namespace precond

#endif  // PRECOND_OPTIMIZERS_HPP
