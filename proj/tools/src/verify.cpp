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

#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "precond/cone_oracle.hpp"
#include "precond/cones.hpp"
#include "precond/error.hpp"
#include "precond/optimizers.hpp"
#include "precond/problems.hpp"
#include "precond/rng.hpp"

namespace precond::tools {

namespace {

#ifndef PRECOND_VERSION
#define PRECOND_VERSION "0.0.0"
#endif
constexpr const char* kSchemaVersion = "1";
constexpr const char* kVersion = PRECOND_VERSION;

const std::vector<ConeKind> kKinds = {ConeKind::Scalar, ConeKind::Diagonal, ConeKind::Full,
                                      ConeKind::KroneckerLeft, ConeKind::DirectSum};

Index draw_dim(Rng& rng, Index lo, Index hi) { return static_cast<Index>(rng.integer(lo, hi)); }

Matrix draw_psd(Rng& rng, Index d, Index rank) {
  const Matrix a = rng.normal_matrix(d, rank);
  return a * a.transpose();
}

Matrix draw_pd(Rng& rng, Index d) { return draw_psd(rng, d, d) + 0.1 * Matrix::Identity(d, d); }

ConeSpec draw_cone(Rng& rng, ConeKind kind, Index max_dim) {
  switch (kind) {
    case ConeKind::Scalar:
      return ConeSpec::scalar(draw_dim(rng, 1, max_dim));
    case ConeKind::Diagonal:
      return ConeSpec::diagonal(draw_dim(rng, 1, max_dim));
    case ConeKind::Full:
      return ConeSpec::full(draw_dim(rng, 1, max_dim));
    case ConeKind::KroneckerLeft: {
      const Index dl = draw_dim(rng, 1, std::min<Index>(4, max_dim));
      return ConeSpec::kronecker_left(dl, draw_dim(rng, 1, std::max<Index>(1, max_dim / dl)));
    }
    case ConeKind::DirectSum: {
      std::vector<ConeSpec> blocks;
      Index left = max_dim;
      while (left >= 1 && blocks.size() < 3) {
        const auto k = static_cast<ConeKind>(rng.integer(0, 3));
        ConeSpec c = draw_cone(rng, k, std::min<Index>(left, 4));
        left -= c.dim();
        blocks.push_back(std::move(c));
        if (blocks.size() >= 2 && rng.uniform() < 0.5) break;
      }
      if (blocks.size() < 2) blocks.push_back(ConeSpec::scalar(1));
      return ConeSpec::direct_sum(std::move(blocks));
    }
  }
  return ConeSpec::scalar(1);
}

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1e-300, b.norm()); }

PropertyResult make(std::string name) {
  PropertyResult r;
  r.name = std::move(name);
  return r;
}

void record(PropertyResult& r, double residual, bool ok) {
  ++r.n_cases;
  r.max_residual = std::max(r.max_residual, residual);
  r.pass = r.pass && ok;
}

template <typename F>
void guarded(PropertyResult& r, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = e.what();
  }
}

Matrix dense_solution(const ConeSpec& cone, const Matrix& m, double eta) {
  return dense(cone, solve_preconditioner(cone, stat_from_dense(cone, PsdMatrix(m)), 0.0, eta));
}

// Dense EMA reference: M_0 = eps I, M_t = b M + (1-b) g g^T, H_t the cone
// restriction of M_t^{1/2} / eta computed directly from M_t.
Matrix reference_h(ConeKind kind, const Matrix& m, double eta) {
  const Index d = m.rows();
  if (kind == ConeKind::Scalar) return std::sqrt(m.trace() / d) / eta * Matrix::Identity(d, d);
  if (kind == ConeKind::Diagonal) return Matrix(m.diagonal().cwiseSqrt().asDiagonal()) / eta;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Vector l = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().transpose() / eta;
}

}  // namespace

bool SuiteReport::pass() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.pass; });
}

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json props = nlohmann::json::array();
  for (const auto& p : r.properties) {
    nlohmann::json j = {{"name", p.name},
                        {"pass", p.pass},
                        {"n_cases", p.n_cases},
                        {"max_residual", p.max_residual}};
    if (!p.detail.empty()) j["detail"] = p.detail;
    props.push_back(std::move(j));
  }
  return {{"suite", r.suite},
          {"properties", props},
          {"versions", {{"spec", kSchemaVersion}, {"build", kVersion}}}};
}

std::vector<PropertyResult> check_oracle_agreement(int per_kind, int max_dim, double tol,
                                                   double balance_tol, std::uint64_t seed) {
  Rng rng(seed, StreamRole::Property);
  std::vector<PropertyResult> out;
  PropertyResult balance = make("balance_identity");
  for (ConeKind kind : kKinds) {
    PropertyResult r = make(std::string("oracle_agreement/") + to_string(kind));
    for (int c = 0; c < per_kind; ++c) {
      const ConeSpec cone = draw_cone(rng, kind, max_dim);
      const Matrix m = draw_pd(rng, cone.dim());
      const double eta = std::exp(rng.uniform(std::log(0.2), std::log(5.0)));
      guarded(r, [&] {
        const Matrix closed = dense_solution(cone, m, eta);
        const auto oracle = oracle_minimize_subspace(SubspaceFamily::for_cone(cone), PsdMatrix(m), eta);
        const double e = rel(oracle.h.dense(), closed);
        record(r, e, e <= tol);
        const double lhs = m.cwiseProduct(closed.inverse()).sum();
        const double rhs = eta * eta * closed.trace();
        const double be = std::abs(lhs - rhs) / rhs;
        record(balance, be, be <= balance_tol);
      });
    }
    out.push_back(std::move(r));
  }
  out.push_back(std::move(balance));
  return out;
}

std::vector<PropertyResult> check_monotonicity(int per_kind, int max_dim, double tol,
                                               std::uint64_t seed) {
  Rng rng(seed, StreamRole::Property);
  std::vector<PropertyResult> out;
  for (ConeKind kind : kKinds) {
    PropertyResult r = make(std::string("operator_monotone/") + to_string(kind));
    for (int c = 0; c < per_kind; ++c) {
      const ConeSpec cone = draw_cone(rng, kind, max_dim);
      const Index d = cone.dim();
      const Matrix m = rng.uniform() < 0.2 ? draw_psd(rng, d, draw_dim(rng, 1, d)) : draw_pd(rng, d);
      const Matrix mp = m + draw_psd(rng, d, draw_dim(rng, 1, d));
      guarded(r, [&] {
        const Matrix diff = dense_solution(cone, mp, 1.0) - dense_solution(cone, m, 1.0);
        const double lmin = min_eigenvalue(SymMatrix(diff));
        const double scale = std::max(1.0, diff.norm());
        record(r, std::max(0.0, -lmin / scale), lmin >= -tol * scale && in_pattern(cone, diff));
      });
    }
    out.push_back(std::move(r));
  }
  return out;
}

PropertyResult check_norm_duality(int cases, std::uint64_t seed) {
  Rng rng(seed, StreamRole::Property);
  PropertyResult r = make("norm_duality");
  for (int c = 0; c < cases; ++c) {
    const ConeSpec cone = draw_cone(rng, kKinds[static_cast<size_t>(c) % kKinds.size()], 8);
    const Vector g = rng.normal_vector(cone.dim());
    const Vector x = rng.normal_vector(cone.dim());
    guarded(r, [&] {
      const double bound = adaptive_norm(cone, PsdMatrix(Matrix(g * g.transpose()))) * domain_norm(cone, x);
      const double excess = (g.dot(x) - bound) / std::max(1.0, bound);
      const auto w = dual_witness_check(cone, g);
      const double gap = w.gap / std::max(1.0, w.norm);
      record(r, std::max(excess, gap), excess <= 1e-12 && gap <= 1e-6);
    });
  }
  return r;
}

std::vector<PropertyResult> check_tridiagonal_counterexample(double tol) {
  Matrix m(3, 3);
  m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  Matrix mp = m;
  mp(0, 0) = 10000;
  Matrix pm(3, 3), pmp(3, 3);
  pm << 1.382548, 0.297594, 0, 0.297594, 1.318491, 0.297594, 0, 0.297594, 1.382548;
  pmp << 100.000004, 0.007229, 0, 0.007229, 1.365999, 0.366002, 0, 0.366002, 1.366032;
  PropertyResult entries = make("tridiagonal/displayed_entries");
  PropertyResult violation = make("tridiagonal/violation_at_3_3");
  guarded(entries, [&] {
    const auto rep = monotonicity_probe(SubspaceFamily::tridiagonal(3), PsdMatrix(m), PsdMatrix(mp), 1.0, 1e-9);
    const double e1 = (rep.p - pm).cwiseAbs().maxCoeff();
    const double e2 = (rep.pp - pmp).cwiseAbs().maxCoeff();
    record(entries, e1, e1 <= tol);
    record(entries, e2, e2 <= tol);
    const bool has = std::find(rep.entries.begin(), rep.entries.end(),
                               std::make_pair(Index{2}, Index{2})) != rep.entries.end();
    record(violation, rep.p(2, 2) - rep.pp(2, 2), rep.violated && has && rep.min_eig_diff < 0.0);
  });
  return {entries, violation};
}

std::vector<PropertyResult> check_kron_counterexample(const KronCounterexampleOptions& opts) {
  const auto g1 = [](double e) { return Matrix(Eigen::Vector4d(1, e, e, e).asDiagonal()); };
  const auto g2 = [](double e) { return Matrix(Eigen::Vector4d(1, e, e, 1).asDiagonal()); };
  const Matrix lim1 = Eigen::Vector4d(1, 0, 0, 0).asDiagonal();
  const Matrix lim2 = std::sqrt(0.5) * Matrix::Identity(4, 4);
  const KroneckerPairFamily fam{2, 2};

  PropertyResult violation = make("kron_pair/violation_at_1_1");
  guarded(violation, [&] {
    const auto rep = monotonicity_probe(fam, PsdMatrix(g1(opts.violation_eps)),
                                        PsdMatrix(g2(opts.violation_eps)), 1.0, 1e-9);
    const bool has = std::find(rep.entries.begin(), rep.entries.end(),
                               std::make_pair(Index{0}, Index{0})) != rep.entries.end();
    record(violation, rep.p(0, 0) - rep.pp(0, 0), rep.violated && has);
  });

  std::vector<PropertyResult> out = {violation};
  for (int which = 1; which <= 2; ++which) {
    PropertyResult r = make(which == 1 ? "kron_pair/g1_limit" : "kron_pair/g2_limit");
    guarded(r, [&] {
      std::vector<double> dist;
      for (double e : opts.eps) {
        const Matrix m = which == 1 ? g1(e) : g2(e);
        const Matrix& lim = which == 1 ? lim1 : lim2;
        dist.push_back((oracle_minimize_kron_pair(fam, PsdMatrix(m), 1.0).product() - lim).norm());
      }
      // eps is listed from large to small; distances must shrink.
      bool monotone = true;
      for (size_t i = 1; i < dist.size(); ++i) monotone = monotone && dist[i] <= dist[i - 1] + 1e-12;
      for (size_t i = 0; i < dist.size(); ++i) {
        const bool checked = opts.strict || i + 1 == dist.size();
        record(r, dist[i], !checked || dist[i] <= opts.limit_tol);
      }
      r.pass = r.pass && monotone;
      std::string d;
      for (size_t i = 0; i < dist.size(); ++i) {
        d += (i ? ", " : "") + std::string("eps=") + std::to_string(opts.eps[i]) + ": " + std::to_string(dist[i]);
      }
      r.detail = "distance to limit " + d + (monotone ? "" : " (not monotone)");
    });
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<PropertyResult> check_regret(int per_cone, int steps, int max_dim, std::uint64_t seed) {
  Rng rng(seed, StreamRole::Losses);
  std::vector<PropertyResult> out;
  for (ConeKind kind : kKinds) {
    PropertyResult r = make(std::string("regret/") + to_string(kind));
    for (int inst = 0; inst < per_cone; ++inst) {
      const ConeSpec cone = draw_cone(rng, kind, std::max(2, max_dim));
      OptimizerConfig cfg;
      cfg.cone = cone;
      cfg.eta = std::exp(rng.uniform(std::log(0.05), std::log(5.0)));
      cfg.eps = rng.uniform() < 0.5 ? 0.0 : 1e-3;
      const auto stream = make_online_stream(cone.dim(), steps, rng);
      const Vector xstar = rng.normal_vector(cone.dim());
      guarded(r, [&] {
        OptimizerState s = init_state(cfg, Vector::Zero(cone.dim()));
        std::vector<Vector> xs, gs;
        double regret = 0.0;
        for (const auto& loss : stream) {
          const Vector g = loss.grad(s.x);
          xs.push_back(s.x);
          gs.push_back(g);
          regret += loss.value(s.x) - loss.value(xstar);
          adareg_step(cfg, s, g);
        }
        const auto b = regret_bound_rhs(cone, xs, xstar, gs, cfg.eta, cfg.eps, regret);
        record(r, b.lhs / std::max(1e-300, b.rhs), b.flag);
      });
    }
    out.push_back(std::move(r));
  }
  PropertyResult r = make("regret/one_sided_shampoo");
  for (int inst = 0; inst < per_cone; ++inst) {
    const Index dl = draw_dim(rng, 1, 3);
    const Index dr = draw_dim(rng, 1, std::max<Index>(1, max_dim / dl));
    OptimizerConfig cfg;
    cfg.cone = ConeSpec::kronecker_left(dl, dr);
    cfg.mode = Mode::OneSidedShampoo;
    cfg.eta = std::exp(rng.uniform(std::log(0.05), std::log(5.0)));
    cfg.eps = rng.uniform() < 0.5 ? 0.0 : 1e-3;
    const auto stream = make_online_stream(dl * dr, steps, rng);
    const Matrix xstar = rng.normal_matrix(dl, dr);
    guarded(r, [&] {
      OptimizerState s = init_state(cfg, Vector::Zero(dl * dr));
      std::vector<Matrix> xs, gs;
      double regret = 0.0;
      for (const auto& loss : stream) {
        const Vector g = loss.grad(s.x);
        xs.push_back(unvec(s.x, dl, dr));
        gs.push_back(unvec(g, dl, dr));
        regret += loss.value(s.x) - loss.value(vec(xstar));
        one_sided_shampoo_step(cfg, s, gs.back());
      }
      const auto b = one_sided_bound_rhs(dl, dr, xs, xstar, gs, cfg.eta, cfg.eps, regret);
      record(r, b.lhs / std::max(1e-300, b.rhs), b.flag);
    });
  }
  out.push_back(std::move(r));
  return out;
}

PropertyResult check_bound_dominance(int cases, std::uint64_t seed) {
  Rng rng(seed, StreamRole::Property);
  PropertyResult r = make("two_sided_dominates_one_sided");
  for (int c = 0; c < cases; ++c) {
    const Index dl = draw_dim(rng, 1, 6), dr = draw_dim(rng, 1, 6);
    Matrix l = Matrix::Zero(dl, dl), rr = Matrix::Zero(dr, dr);
    const auto steps = rng.integer(1, 10);
    for (std::int64_t t = 0; t < steps; ++t) {
      const Matrix g = rng.normal_matrix(dl, dr);
      l += g * g.transpose();
      rr += g.transpose() * g;
    }
    guarded(r, [&] {
      const double two = psd_power(PsdMatrix(l), 0.25).trace() * psd_power(PsdMatrix(rr), 0.25).trace();
      const double one = psd_power(PsdMatrix(l), 0.5).trace();
      record(r, std::max(0.0, (one - two) / one), two >= one * (1 - 1e-12));
    });
  }
  return r;
}

PropertyResult check_cyclic_stream(double tol) {
  PropertyResult r = make("cyclic_stream_2x2");
  guarded(r, [&] {
    Matrix l = Matrix::Zero(2, 2), rr = Matrix::Zero(2, 2);
    for (const auto& g : make_cyclic_gradients(2, 2)) {
      l += g * g.transpose();
      rr += g.transpose() * g;
    }
    const double two = psd_power(PsdMatrix(l), 0.25).trace() * psd_power(PsdMatrix(rr), 0.25).trace();
    const double one = psd_power(PsdMatrix(l), 0.5).trace();
    record(r, std::abs(two - 8.0), std::abs(two - 8.0) <= tol);
    record(r, std::abs(one - 4.0), std::abs(one - 4.0) <= tol);
  });
  return r;
}

PropertyResult check_ema_equivalence(int steps, double tol, std::uint64_t seed) {
  Rng rng(seed, StreamRole::Property);
  PropertyResult r = make("ema_rescaling");
  for (ConeKind kind : {ConeKind::Scalar, ConeKind::Diagonal, ConeKind::Full}) {
    for (double beta : {0.5, 0.9, 0.95, 0.99}) {
      const Index d = 4;
      OptimizerConfig cfg;
      cfg.cone = kind == ConeKind::Scalar ? ConeSpec::scalar(d)
                 : kind == ConeKind::Diagonal ? ConeSpec::diagonal(d)
                                              : ConeSpec::full(d);
      cfg.mode = Mode::EmaAdaReg;
      cfg.beta2 = beta;
      cfg.eta = rng.uniform(0.1, 2.0);
      cfg.eps = 1e-3;
      const Vector x0 = rng.normal_vector(d);
      guarded(r, [&] {
        OptimizerState s = init_state(cfg, x0);
        Matrix m = cfg.eps * Matrix::Identity(d, d);
        Vector x = x0;
        double worst = 0.0;
        for (int t = 0; t < steps; ++t) {
          const Vector g = rng.normal_vector(d);
          m = beta * m + (1 - beta) * g * g.transpose();
          x -= reference_h(kind, m, cfg.eta).inverse() * g;
          ema_step(cfg, s, g);
          worst = std::max(worst, (s.x - x).cwiseAbs().maxCoeff());
        }
        record(r, worst, worst <= tol);
      });
    }
  }
  return r;
}

PropertyResult check_weighted_reduction(int steps, double tol, std::uint64_t seed) {
  Rng rng(seed, StreamRole::Property);
  PropertyResult r = make("weighted_to_plain");
  for (double beta : {0.5, 0.9, 0.99}) {
    for (ConeKind kind : kKinds) {
      const ConeSpec cone = draw_cone(rng, kind, 8);
      OptimizerConfig w, a;
      w.cone = a.cone = cone;
      w.mode = Mode::WeightedAdaReg;
      w.beta2 = beta;
      w.eta = a.eta = rng.uniform(0.2, 2.0);
      w.eps = a.eps = 1e-2;
      const Vector x0 = rng.normal_vector(cone.dim());
      guarded(r, [&] {
        OptimizerState sw = init_state(w, x0), sa = init_state(a, x0);
        double worst = 0.0;
        for (int t = 1; t <= steps; ++t) {
          const Vector g = rng.normal_vector(cone.dim());
          weighted_step(w, sw, g);
          adareg_step(a, sa, std::pow(beta, -0.5 * t) * g);
          worst = std::max(worst, (sw.x - sa.x).cwiseAbs().maxCoeff());
        }
        record(r, worst, worst <= tol);
      });
    }
  }
  return r;
}

PropertyResult check_one_sided_equivalence(int steps, double tol, std::uint64_t seed) {
  Rng rng(seed, StreamRole::Property);
  PropertyResult r = make("one_sided_equals_kronecker_left");
  OptimizerConfig sh, ad;
  sh.cone = ad.cone = ConeSpec::kronecker_left(3, 2);
  sh.mode = Mode::OneSidedShampoo;
  sh.eta = ad.eta = 0.7;
  sh.eps = ad.eps = 1e-3;
  const Vector x0 = rng.normal_vector(6);
  guarded(r, [&] {
    OptimizerState ss = init_state(sh, x0), sa = init_state(ad, x0);
    double worst = 0.0;
    for (int t = 0; t < steps; ++t) {
      const Matrix g = rng.normal_matrix(3, 2);
      one_sided_shampoo_step(sh, ss, g);
      adareg_step(ad, sa, vec(g));
      worst = std::max(worst, (ss.x - sa.x).cwiseAbs().maxCoeff());
    }
    record(r, worst, worst <= tol);
  });
  return r;
}

PropertyResult check_reduction(int d, int steps, double tol, std::uint64_t seed) {
  PropertyResult r = make("full_matrix_reduction");
  guarded(r, [&] {
    std::vector<double> sigma;
    for (int i = 1; i <= d; ++i) sigma.push_back(1.0 / (i * i));
    ProblemOptions po;
    po.spectrum = SpectrumSpec::explicit_values(sigma);
    const auto p = build_quadratic(d, d, seed, po);
    const Matrix x0 = Matrix::Zero(d, d);
    const auto rp = reduced_full_matrix_problem(p, x0);
    for (double eta : {0.1, 0.5, 2.0}) {
      OptimizerConfig a, b;
      a.cone = ConeSpec::full(p.dim());
      b.cone = ConeSpec::full(rp.dim());
      a.eta = b.eta = eta;
      OptimizerState sa = init_state(a, vec(x0)), sb = init_state(b, Vector::Zero(rp.dim()));
      double worst = 0.0;
      for (int t = 0; t < steps; ++t) {
        adareg_step(a, sa, p.grad(sa.x));
        adareg_step(b, sb, rp.grad(sb.x));
        worst = std::max(worst, std::abs(p.loss(sa.x) - rp.loss(sb.x)));
      }
      record(r, worst, worst <= tol);
      r.detail += (r.detail.empty() ? "" : ", ") + std::string("eta=") + std::to_string(eta) +
                  ": " + std::to_string(worst);
    }
  });
  return r;
}

PropertyResult check_gradients(int cases, double tol, std::uint64_t seed) {
  Rng rng(seed, StreamRole::Property);
  PropertyResult r = make("gradient_finite_difference");
  for (int c = 0; c < cases; ++c) {
    const Index dl = draw_dim(rng, 1, 8), dr = draw_dim(rng, 1, 8);
    const auto p = make_quadratic(PsdMatrix(draw_psd(rng, dl, dl)), rng.normal_matrix(dl, dr));
    const Matrix x = rng.normal_matrix(dl, dr);
    const Matrix dir = rng.normal_matrix(dl, dr);
    guarded(r, [&] {
      const double h = 1e-5;
      const double fd = (p.loss(Matrix(x + h * dir)) - p.loss(Matrix(x - h * dir))) / (2 * h);
      const double an = p.grad(x).cwiseProduct(dir).sum();
      const double e = std::abs(fd - an) / std::max(1.0, std::abs(an));
      record(r, e, e <= tol);
    });
  }
  return r;
}

PropertyResult check_rate_table() {
  PropertyResult r = make("rate_table_extremal");
  guarded(r, [&] {
    for (auto [dl, dr] : {std::pair<Index, Index>{4, 6}, {6, 4}, {5, 5}}) {
      const auto rows = rate_table_extremal(dl, dr);
      const double m = static_cast<double>(std::min(dl, dr));
      const double expect[] = {m, static_cast<double>(dl * dr), m * static_cast<double>(dr), 1.0};
      for (size_t i = 0; i < 4; ++i) {
        const double e = std::abs(rows[i].numerator - expect[i]) / expect[i];
        record(r, e, e <= 1e-9);
      }
    }
  });
  return r;
}

std::vector<PropertyResult> check_stochastic_bound(const StochasticBoundOptions& opts) {
  std::vector<PropertyResult> out;
  const Index d = opts.d;
  for (ConeKind kind : {ConeKind::Scalar, ConeKind::KroneckerLeft}) {
    PropertyResult r = make(std::string("stochastic_bound/") + to_string(kind));
    int held = 0;
    guarded(r, [&] {
      const ConeSpec cone = kind == ConeKind::Scalar ? ConeSpec::scalar(d * d)
                                                     : ConeSpec::kronecker_left(d, d);
      const NoiseSpec noise = NoiseSpec::isotropic(d * d, opts.noise_variance);
      const double sigma = adaptive_norm(cone, noise.sigma());
      for (int seed = 0; seed < opts.seeds; ++seed) {
        const auto p = build_paper_problem(d, static_cast<std::uint64_t>(seed));
        // f has Hessian 2 (H (x) I).
        const double hs = h_smoothness(cone, SymMatrix(Matrix(2.0 * p.hmat.dense())));
        const Vector xstar = vec(p.xstar);
        OptimizerConfig cfg;
        cfg.cone = cone;
        cfg.eta = std::sqrt(2.0) * domain_norm(cone, xstar);
        OptimizerState s = init_state(cfg, Vector::Zero(d * d));
        Rng rng(static_cast<std::uint64_t>(seed), StreamRole::Noise);
        double dmax = 0.0;
        for (int t = 0; t < opts.steps; ++t) {
          dmax = std::max(dmax, domain_norm(cone, s.x - xstar));
          adareg_step(cfg, s, p.grad(s.x) + noise.sample(rng));
        }
        const double sub = p.loss(average_plain(s));
        const double rhs = stochastic_bound_rhs(opts.steps, dmax, cfg.eta, hs, sigma, d * d, 0.0);
        ++r.n_cases;
        r.max_residual = std::max(r.max_residual, sub / rhs);
        if (sub <= rhs) ++held;
      }
      r.pass = held >= opts.required;
      r.detail = std::to_string(held) + "/" + std::to_string(opts.seeds) + " seeds within the bound";
    });
    out.push_back(std::move(r));
  }
  return out;
}

bool is_suite(const std::string& name) {
  static const std::vector<std::string> names = {"all", "cones", "counterexamples", "regret",
                                                 "equivalences", "bounds"};
  return std::find(names.begin(), names.end(), name) != names.end();
}

SuiteReport run_suite(const std::string& name) {
  if (!is_suite(name)) throw std::invalid_argument("unknown suite '" + name + "'");
  SuiteReport rep;
  rep.suite = name;
  auto add = [&](std::vector<PropertyResult> v) {
    for (auto& p : v) rep.properties.push_back(std::move(p));
  };
  const bool all = name == "all";
  if (all || name == "cones") {
    add(check_oracle_agreement(20, 8, 1e-6, 1e-8, 101));
    add(check_monotonicity(50, 8, 1e-8, 102));
    add({check_norm_duality(200, 103)});
  }
  if (all || name == "counterexamples") {
    add(check_tridiagonal_counterexample(1e-3));
    KronCounterexampleOptions k;
    k.strict = false;
    add(check_kron_counterexample(k));
  }
  if (all || name == "regret") add(check_regret(50, 50, 6, 104));
  if (all || name == "equivalences") {
    add({check_ema_equivalence(50, 1e-10, 105), check_weighted_reduction(50, 1e-10, 106),
         check_one_sided_equivalence(100, 1e-12, 107), check_reduction(3, 20, 1e-6, 108)});
  }
  if (all || name == "bounds") {
    add({check_bound_dominance(100, 109), check_cyclic_stream(1e-10), check_rate_table(),
         check_gradients(50, 1e-5, 110)});
  }
  return rep;
}

}  // namespace precond::tools
