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

#include "precond/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "precond/error.hpp"

namespace precond {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start)
      .count();
}

void check_gradient(const OptimizerState& state, const Vector& g) {
  if (g.size() != state.x.size()) {
    throw InvalidInput("gradient has length " + std::to_string(g.size()) +
                       ", iterate has " + std::to_string(state.x.size()));
  }
  if (!g.allFinite()) throw InvalidInput("non-finite gradient");
}

void check_mode(const OptimizerConfig& cfg, Mode expected, const char* op) {
  if (cfg.mode != expected) {
    throw InvalidInput(std::string(op) + " called with mode " + to_string(cfg.mode));
  }
}

// Folds x_t into both running means before the iterate moves. The update
// form keeps the mean of a constant sequence exact.
void accumulate_average(const OptimizerConfig& cfg, OptimizerState& state) {
  const double w = std::sqrt(cfg.beta2);
  const double n = static_cast<double>(state.t + 1);
  state.mean_plain += (state.x - state.mean_plain) / n;
  state.weight_weighted = w * state.weight_weighted + 1.0;
  state.mean_weighted += (state.x - state.mean_weighted) / state.weight_weighted;
}

StepRecord cone_step(const OptimizerConfig& cfg, OptimizerState& state,
                     const Vector& g, double decay, double eta, double eps) {
  check_gradient(state, g);
  const auto start = Clock::now();
  accumulate_average(cfg, state);
  state.stat = stat_update(cfg.cone, state.stat, g, decay);
  state.h = solve_preconditioner(cfg.cone, state.stat, eps, eta);
  state.x = project(cfg.domain, cfg.cone, state.h,
                    state.x - apply_pinv(cfg.cone, state.h, g));
  ++state.t;
  StepRecord rec;
  rec.t = state.t;
  rec.grad_norm = g.norm();
  rec.trace_H = trace(cfg.cone, state.h);
  rec.elapsed_ns = since(start);
  return rec;
}

}  // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::AdaReg:
      return "adareg";
    case Mode::WeightedAdaReg:
      return "weighted";
    case Mode::EmaAdaReg:
      return "ema";
    case Mode::OneSidedShampoo:
      return "one_sided_shampoo";
    case Mode::TwoSidedShampoo:
      return "two_sided_shampoo";
  }
  return "unknown";
}

DomainSpec DomainSpec::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) {
    throw InvalidInput("box bounds have different lengths");
  }
  if ((lower.array() > upper.array()).any()) {
    throw InvalidInput("box needs lower <= upper elementwise");
  }
  DomainSpec d;
  d.kind = Kind::Box;
  d.lower = std::move(lower);
  d.upper = std::move(upper);
  return d;
}

Index OptimizerConfig::dim() const {
  return mode == Mode::TwoSidedShampoo ? d_left * d_right : cone.dim();
}

void OptimizerConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidInput("eta must be > 0");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidInput("eps must be >= 0");
  if (!(beta2 > 0.0 && beta2 <= 1.0)) throw InvalidInput("beta2 must lie in (0, 1]");
  switch (mode) {
    case Mode::AdaReg:
    case Mode::OneSidedShampoo:
    case Mode::TwoSidedShampoo:
      if (beta2 != 1.0) {
        throw InvalidInput(std::string(to_string(mode)) + " requires beta2 = 1");
      }
      break;
    case Mode::EmaAdaReg:
      if (beta2 == 1.0) throw InvalidInput("ema requires beta2 < 1");
      break;
    case Mode::WeightedAdaReg:
      break;
  }
  if (mode == Mode::OneSidedShampoo && cone.kind() != ConeKind::KroneckerLeft) {
    throw InvalidInput("one-sided shampoo requires a kronecker-left cone");
  }
  if (mode == Mode::TwoSidedShampoo && (d_left < 1 || d_right < 1)) {
    throw InvalidInput("two-sided shampoo requires d_left, d_right >= 1");
  }
  if (domain.kind == DomainSpec::Kind::Box && domain.lower.size() != dim()) {
    throw InvalidInput("box bounds do not match the parameter dimension");
  }
}

EmaRescale ema_rescale(double eta, double eps, double beta2) {
  if (!(beta2 > 0.0 && beta2 < 1.0)) {
    throw InvalidInput("ema requires beta2 in (0, 1)");
  }
  return {eta / std::sqrt(1.0 - beta2), eps / (1.0 - beta2)};
}

OptimizerState init_state(const OptimizerConfig& cfg, const Vector& x0) {
  cfg.validate();
  if (x0.size() != cfg.dim()) {
    throw InvalidInput("initial point has length " + std::to_string(x0.size()) +
                       ", expected " + std::to_string(cfg.dim()));
  }
  OptimizerState s;
  s.x = x0;
  s.mean_plain = Vector::Zero(x0.size());
  s.mean_weighted = Vector::Zero(x0.size());
  if (cfg.mode == Mode::TwoSidedShampoo) {
    s.L = SymMatrix::identity(cfg.d_left, cfg.eps);
    s.R = SymMatrix::identity(cfg.d_right, cfg.eps);
  } else {
    s.stat = zero_stat(cfg.cone);
  }
  return s;
}

StepRecord adareg_step(const OptimizerConfig& cfg, OptimizerState& state,
                       const Vector& g) {
  check_mode(cfg, Mode::AdaReg, "adareg_step");
  return cone_step(cfg, state, g, 1.0, cfg.eta, cfg.eps);
}

StepRecord weighted_step(const OptimizerConfig& cfg, OptimizerState& state,
                         const Vector& g) {
  check_mode(cfg, Mode::WeightedAdaReg, "weighted_step");
  return cone_step(cfg, state, g, cfg.beta2, cfg.eta, cfg.eps);
}

StepRecord ema_step(const OptimizerConfig& cfg, OptimizerState& state,
                    const Vector& g) {
  check_mode(cfg, Mode::EmaAdaReg, "ema_step");
  const EmaRescale r = ema_rescale(cfg.eta, cfg.eps, cfg.beta2);
  return cone_step(cfg, state, g, cfg.beta2, r.eta, r.eps);
}

StepRecord one_sided_shampoo_step(const OptimizerConfig& cfg,
                                  OptimizerState& state, const Matrix& g) {
  check_mode(cfg, Mode::OneSidedShampoo, "one_sided_shampoo_step");
  const Index dl = cfg.cone.left_dim();
  const Index dr = cfg.cone.right_dim();
  if (g.rows() != dl || g.cols() != dr) {
    throw InvalidInput("one_sided_shampoo_step: G must be " + std::to_string(dl) +
                       "x" + std::to_string(dr));
  }
  const Vector gv = vec(g);
  check_gradient(state, gv);
  const auto start = Clock::now();
  accumulate_average(cfg, state);
  state.stat = stat_update(cfg.cone, state.stat, gv, 1.0);
  const PsdMatrix shifted(SymMatrix(state.stat.matrix.dense() +
                                    cfg.eps * Matrix::Identity(dl, dl)));
  // H_L = (1/eta) (eps I + L)^{1/2}.
  EigenDecomposition root = psd_power(shifted, 0.5).eig();
  root.values /= cfg.eta;
  state.h.kind = ConeKind::KroneckerLeft;
  state.h.matrix = PsdMatrix::from_eig(std::move(root));
  const Matrix x = unvec(state.x, dl, dr) - psd_power_apply(state.h.matrix, -1.0, g);
  state.x = project(cfg.domain, cfg.cone, state.h, vec(x));
  ++state.t;
  StepRecord rec;
  rec.t = state.t;
  rec.grad_norm = gv.norm();
  rec.trace_H = state.h.matrix.trace() * static_cast<double>(dr);
  rec.elapsed_ns = since(start);
  return rec;
}

StepRecord two_sided_shampoo_step(const OptimizerConfig& cfg,
                                  OptimizerState& state, const Matrix& g) {
  check_mode(cfg, Mode::TwoSidedShampoo, "two_sided_shampoo_step");
  const Index dl = cfg.d_left;
  const Index dr = cfg.d_right;
  if (g.rows() != dl || g.cols() != dr) {
    throw InvalidInput("two_sided_shampoo_step: G must be " + std::to_string(dl) +
                       "x" + std::to_string(dr));
  }
  const Vector gv = vec(g);
  check_gradient(state, gv);
  if (cfg.domain.kind != DomainSpec::Kind::Unconstrained) {
    throw Unsupported("two-sided shampoo supports unconstrained domains only");
  }
  const auto start = Clock::now();
  accumulate_average(cfg, state);
  state.L = SymMatrix(state.L.dense() + g * g.transpose());
  state.R = SymMatrix(state.R.dense() + g.transpose() * g);
  const PsdMatrix l(state.L);
  const PsdMatrix r(state.R);
  const Matrix left = psd_power_apply(l, -0.25, g);
  const Matrix update = psd_power_apply(r, -0.25, Matrix(left.transpose())).transpose();
  state.x = vec(unvec(state.x, dl, dr) - cfg.eta * update);
  ++state.t;
  StepRecord rec;
  rec.t = state.t;
  rec.grad_norm = gv.norm();
  rec.trace_H = psd_power(l, 0.25).trace() * psd_power(r, 0.25).trace() / cfg.eta;
  rec.elapsed_ns = since(start);
  return rec;
}

StepRecord step(const OptimizerConfig& cfg, OptimizerState& state,
                const Vector& g) {
  switch (cfg.mode) {
    case Mode::AdaReg:
      return adareg_step(cfg, state, g);
    case Mode::WeightedAdaReg:
      return weighted_step(cfg, state, g);
    case Mode::EmaAdaReg:
      return ema_step(cfg, state, g);
    case Mode::OneSidedShampoo:
      return one_sided_shampoo_step(
          cfg, state, unvec(g, cfg.cone.left_dim(), cfg.cone.right_dim()));
    case Mode::TwoSidedShampoo:
      return two_sided_shampoo_step(cfg, state, unvec(g, cfg.d_left, cfg.d_right));
  }
  throw InvalidInput("unknown optimizer mode");
}

Vector average_plain(const OptimizerState& state) {
  if (state.t == 0) return state.x;
  return state.mean_plain;
}

Vector average_weighted(const OptimizerState& state) {
  if (state.t == 0) return state.x;
  return state.mean_weighted;
}

namespace {

bool coordinatewise_metric(const ConeSpec& cone) {
  switch (cone.kind()) {
    case ConeKind::Scalar:
    case ConeKind::Diagonal:
      return true;
    case ConeKind::DirectSum:
      for (const auto& b : cone.blocks()) {
        if (!coordinatewise_metric(b)) return false;
      }
      return true;
    default:
      return false;
  }
}

}  // namespace

Vector project(const DomainSpec& domain, const ConeSpec& cone,
               const ConeElement& /*metric*/, const Vector& x) {
  if (domain.kind == DomainSpec::Kind::Unconstrained) return x;
  if (!coordinatewise_metric(cone)) {
    throw Unsupported("box projection needs a scalar or diagonal metric, got " +
                      cone.name());
  }
  if (domain.lower.size() != x.size()) {
    throw InvalidInput("box bounds do not match the iterate length");
  }
  return x.cwiseMax(domain.lower).cwiseMin(domain.upper);
}

}  // namespace precond
