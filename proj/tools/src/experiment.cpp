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

#include "experiment.hpp"

#include <cmath>

#include "precond/error.hpp"

namespace precond::tools {

namespace {

bool finite(const StepRecord& r) {
  return std::isfinite(r.loss_last) && std::isfinite(r.loss_avg_plain) &&
         std::isfinite(r.loss_avg_weighted) && std::isfinite(r.grad_norm) &&
         std::isfinite(r.trace_H);
}

OptimizerConfig optimizer_config(const RunConfig& cfg, OptimizerName o, double lr,
                                 Index full_dim) {
  OptimizerConfig oc;
  oc.eta = lr;
  oc.eps = cfg.eps;
  oc.beta2 = cfg.beta2;
  oc.mode = cfg.mode;
  const Index d = cfg.d_left * cfg.d_right;
  switch (o) {
    case OptimizerName::AdaGradNorm:
      oc.cone = ConeSpec::scalar(d);
      break;
    case OptimizerName::AdaGrad:
      oc.cone = ConeSpec::diagonal(d);
      break;
    case OptimizerName::OneSidedShampoo:
      oc.cone = ConeSpec::kronecker_left(cfg.d_left, cfg.d_right);
      if (cfg.mode == Mode::AdaReg) oc.mode = Mode::OneSidedShampoo;
      break;
    case OptimizerName::FullMatrix:
      oc.cone = ConeSpec::full(full_dim);
      break;
    case OptimizerName::TwoSidedShampoo:
      oc.mode = Mode::TwoSidedShampoo;
      oc.d_left = cfg.d_left;
      oc.d_right = cfg.d_right;
      break;
  }
  return oc;
}

Matrix start_point(const RunConfig& cfg, const QuadraticProblem& p) {
  return cfg.init == Init::Optimum ? p.xstar : Matrix::Zero(p.d_left, p.d_right);
}

// Ambient run on vec(X).
CellResult run_direct(const RunConfig& cfg, const QuadraticProblem& p, const CellSpec& spec) {
  CellResult res;
  res.spec = spec;
  res.cone = cone_label(cfg, spec.optimizer);
  const OptimizerConfig oc = optimizer_config(cfg, spec.optimizer, spec.lr, p.dim());
  OptimizerState state = init_state(oc, vec(start_point(cfg, p)));
  const bool noisy = cfg.noise_variance > 0.0;
  const NoiseSpec noise = noisy ? NoiseSpec::isotropic(p.dim(), cfg.noise_variance) : NoiseSpec();
  Rng rng(spec.seed, StreamRole::Noise);
  for (std::int64_t t = 0; t < cfg.steps; ++t) {
    Vector g = p.grad(state.x);
    if (noisy) g += noise.sample(rng);
    StepRecord r = step(oc, state, g);
    r.loss_last = p.loss(state.x);
    r.loss_avg_plain = p.loss(average_plain(state));
    r.loss_avg_weighted = p.loss(average_weighted(state));
    if (!cfg.record_timing) r.elapsed_ns = 0;
    if (!finite(r)) {
      res.diverged = true;
      break;
    }
    res.records.push_back(r);
  }
  return res;
}

// Full-matrix run on the d_L-variable reduced problem.
CellResult run_reduced(const RunConfig& cfg, const QuadraticProblem& p, const CellSpec& spec) {
  CellResult res;
  res.spec = spec;
  res.cone = cone_label(cfg, spec.optimizer);
  const ReducedProblem rp = reduced_full_matrix_problem(p, start_point(cfg, p));
  const OptimizerConfig oc = optimizer_config(cfg, spec.optimizer, spec.lr, rp.dim());
  OptimizerState state = init_state(oc, Vector::Zero(rp.dim()));
  double eta = oc.eta, eps = oc.eps;
  if (oc.mode == Mode::EmaAdaReg) {
    const EmaRescale e = ema_rescale(oc.eta, oc.eps, oc.beta2);
    eta = e.eta;
    eps = e.eps;
  }
  const double dead = static_cast<double>(rp.dead_dims);
  for (std::int64_t t = 0; t < cfg.steps; ++t) {
    StepRecord r = step(oc, state, rp.grad(state.x));
    // The unexcited directions carry sqrt(eps_t) / eta each.
    r.trace_H += dead * std::sqrt(eps * state.stat.eps_scale) / eta;
    r.loss_last = rp.loss(state.x);
    r.loss_avg_plain = rp.loss(average_plain(state));
    r.loss_avg_weighted = rp.loss(average_weighted(state));
    if (!cfg.record_timing) r.elapsed_ns = 0;
    if (!finite(r)) {
      res.diverged = true;
      break;
    }
    res.records.push_back(r);
  }
  return res;
}

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max(1e-12, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

QuadraticProblem build_problem(const RunConfig& cfg, std::uint64_t seed) {
  ProblemOptions opts;
  opts.spectrum = cfg.spectrum;
  opts.normalize_trace = cfg.normalize_trace;
  return build_quadratic(cfg.d_left, cfg.d_right, seed, opts);
}

std::map<std::uint64_t, QuadraticProblem> build_problems(const RunConfig& cfg) {
  std::map<std::uint64_t, QuadraticProblem> out;
  for (auto s : cfg.seeds) out.emplace(s, build_problem(cfg, s));
  return out;
}

std::string cone_label(const RunConfig& cfg, OptimizerName o) {
  const Index d = cfg.d_left * cfg.d_right;
  switch (o) {
    case OptimizerName::AdaGradNorm:
      return ConeSpec::scalar(d).name();
    case OptimizerName::AdaGrad:
      return ConeSpec::diagonal(d).name();
    case OptimizerName::OneSidedShampoo:
      return ConeSpec::kronecker_left(cfg.d_left, cfg.d_right).name();
    case OptimizerName::FullMatrix:
      return ConeSpec::full(d).name();
    case OptimizerName::TwoSidedShampoo:
      return "kron_pair(" + std::to_string(cfg.d_left) + "x" + std::to_string(cfg.d_right) + ")";
  }
  return "?";
}

CellResult run_cell(const RunConfig& cfg, const QuadraticProblem& problem, const CellSpec& spec) {
  if (spec.optimizer != OptimizerName::FullMatrix) return run_direct(cfg, problem, spec);
  const Index d = problem.dim();
  FullRoute route = cfg.full_route;
  if (route == FullRoute::Auto && cfg.noise_variance > 0.0) route = FullRoute::Direct;
  if (route == FullRoute::Direct) {
    if (d > kDirectFullLimit) {
      throw ConfigError("full_route", "direct full-matrix run needs d_left * d_right <= " +
                                          std::to_string(kDirectFullLimit));
    }
    return run_direct(cfg, problem, spec);
  }
  if (route == FullRoute::Reduced && cfg.noise_variance > 0.0) {
    throw ConfigError("full_route", "the reduction is exact only without gradient noise");
  }
  CellResult reduced = run_reduced(cfg, problem, spec);
  // Small positive eps makes the direct run unstable in the unexcited
  // directions, so the cross-check runs at eps = 0 only. Past the first few
  // steps the gap is recorded, not enforced.
  if (route == FullRoute::Auto && d <= kCrossCheckLimit && cfg.eps == 0.0) {
    const CellResult direct = run_direct(cfg, problem, spec);
    const size_t n = std::min(direct.records.size(), reduced.records.size());
    const size_t head = std::min<size_t>(n, static_cast<size_t>(kCrossCheckSteps));
    if (n < std::min<size_t>(static_cast<size_t>(cfg.steps), static_cast<size_t>(kCrossCheckSteps))) {
      throw NumericError("full-matrix direct and reduced runs disagree on early divergence");
    }
    double early = 0.0, worst = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const auto& a = direct.records[i];
      const auto& b = reduced.records[i];
      const double gap = std::max({rel_gap(a.loss_last, b.loss_last),
                                   rel_gap(a.loss_avg_plain, b.loss_avg_plain),
                                   rel_gap(a.loss_avg_weighted, b.loss_avg_weighted)});
      worst = std::max(worst, gap);
      if (i < head) early = std::max(early, gap);
    }
    if (early > kCrossCheckTol) {
      throw NumericError("full-matrix direct and reduced runs differ by " + std::to_string(early) +
                         " within the first " + std::to_string(head) + " steps");
    }
    reduced.cross_check = worst;
  }
  return reduced;
}

double avg_criterion_loss(const RunConfig& cfg, const StepRecord& r) {
  return cfg.mode == Mode::AdaReg ? r.loss_avg_plain : r.loss_avg_weighted;
}

}  // namespace precond::tools
