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

#include "precond/cone_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "precond/error.hpp"

namespace precond {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

Matrix unit(Index d, Index i, Index j) {
  Matrix e = Matrix::Zero(d, d);
  e(i, j) = 1.0;
  e(j, i) = 1.0;
  return e;
}

// M itself when nonsingular, otherwise M + 1e-10 Tr(M)/d I.
Matrix regularized(const PsdMatrix& m) {
  const Index d = m.dim();
  const EigenDecomposition& e = m.eig();
  const double lmin = e.values(d - 1);
  if (lmin > kPinvCutoff * std::max(e.values(0), 0.0)) return m.dense();
  const double shift = 1e-10 * m.trace() / static_cast<double>(d);
  if (!(shift > 0.0)) {
    throw Infeasible("oracle: M has zero trace, no interior minimizer");
  }
  return m.dense() + shift * Matrix::Identity(d, d);
}

struct Evaluation {
  bool feasible = false;
  double f = std::numeric_limits<double>::infinity();
  Matrix w;  // H^{-1}
};

Evaluation evaluate(const Matrix& h, const Matrix& m, double eta) {
  Evaluation ev;
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() != Eigen::Success) return ev;
  const Index d = h.rows();
  ev.w = llt.solve(Matrix::Identity(d, d));
  ev.w = 0.5 * (ev.w + ev.w.transpose());
  ev.f = (m.cwiseProduct(ev.w)).sum() + eta * eta * h.trace();
  ev.feasible = std::isfinite(ev.f);
  return ev;
}

struct NewtonOutcome {
  Vector theta;
  double f = 0.0;
  double stationarity = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

NewtonOutcome damped_newton(const SubspaceFamily& fam, const Matrix& m,
                            double eta, Vector theta,
                            const OracleOptions& opts) {
  const Index d = fam.dim();
  const Index k = fam.size();
  const auto& basis = fam.basis();
  const double eta2 = eta * eta;
  const double target = opts.tol * eta2 * std::sqrt(static_cast<double>(d));
  Vector basis_trace(k);
  for (Index a = 0; a < k; ++a) basis_trace(a) = basis[static_cast<size_t>(a)].trace();
  const Eigen::LLT<Matrix> gram_llt(fam.gram());

  NewtonOutcome out;
  Evaluation ev = evaluate(fam.combine(theta), m, eta);
  if (!ev.feasible) throw Infeasible("oracle: starting point is not positive definite");
  out.trace.push_back(ev.f);

  std::vector<Matrix> bw(static_cast<size_t>(k));
  std::vector<Matrix> bz(static_cast<size_t>(k));
  for (int it = 0; it < opts.max_iter; ++it) {
    const Matrix z = ev.w * m * ev.w;
    Vector grad(k);
    for (Index a = 0; a < k; ++a) {
      const Matrix& b = basis[static_cast<size_t>(a)];
      grad(a) = eta2 * basis_trace(a) - b.cwiseProduct(z).sum();
    }
    out.stationarity = std::sqrt(std::max(0.0, grad.dot(gram_llt.solve(grad))));
    out.iterations = it;
    if (out.stationarity <= target) {
      out.converged = true;
      break;
    }
    // Hessian: 2 tr(B_a W B_b Z).
    for (Index a = 0; a < k; ++a) {
      bw[static_cast<size_t>(a)] = basis[static_cast<size_t>(a)] * ev.w;
      bz[static_cast<size_t>(a)] = basis[static_cast<size_t>(a)] * z;
    }
    Matrix hess(k, k);
    for (Index a = 0; a < k; ++a) {
      for (Index b = a; b < k; ++b) {
        const double v = 2.0 * bw[static_cast<size_t>(a)]
                                   .cwiseProduct(bz[static_cast<size_t>(b)].transpose())
                                   .sum();
        hess(a, b) = v;
        hess(b, a) = v;
      }
    }
    Vector step;
    Eigen::LDLT<Matrix> ldlt(hess);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      step = -ldlt.solve(grad);
    } else {
      step = -gram_llt.solve(grad);
    }
    double slope = grad.dot(step);
    if (!(slope < 0.0)) {
      step = -gram_llt.solve(grad);
      slope = grad.dot(step);
    }
    // Near the optimum the decrease drops below the rounding level of f.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(ev.f);
    double s = 1.0;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h, s *= 0.5) {
      const Vector trial = theta + s * step;
      Evaluation next = evaluate(fam.combine(trial), m, eta);
      if (next.feasible && next.f <= ev.f + kArmijo * s * slope + slack) {
        theta = trial;
        ev = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // line search stalled at rounding level
    out.trace.push_back(ev.f);
  }
  out.theta = theta;
  out.f = ev.f;
  return out;
}

void require_square_dim(const PsdMatrix& m, Index d, const char* op) {
  if (m.dim() != d) {
    throw InvalidInput(std::string(op) + ": M has dimension " +
                       std::to_string(m.dim()) + ", family expects " +
                       std::to_string(d));
  }
}

}  // namespace

SubspaceFamily::SubspaceFamily(Index dim, std::vector<Matrix> basis)
    : dim_(dim), basis_(std::move(basis)) {
  if (dim_ < 1 || basis_.empty()) {
    throw InvalidInput("subspace family needs d >= 1 and a nonempty basis");
  }
  for (auto& b : basis_) {
    if (b.rows() != dim_ || b.cols() != dim_) {
      throw InvalidInput("subspace family: basis matrix has wrong shape");
    }
    b = 0.5 * (b + b.transpose());
  }
  const Index k = size();
  gram_.resize(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b)
      gram_(a, b) = basis_[static_cast<size_t>(a)]
                        .cwiseProduct(basis_[static_cast<size_t>(b)])
                        .sum();
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) <= 1e-12 * es.eigenvalues()(k - 1)) {
    throw InvalidInput("subspace family: basis is linearly dependent");
  }
  const Matrix id = Matrix::Identity(dim_, dim_);
  const double residual = (id - combine(coordinates(id))).norm();
  if (residual > 1e-8 * std::sqrt(static_cast<double>(dim_))) {
    throw InvalidInput("subspace family: identity is not in the span");
  }
}

Matrix SubspaceFamily::combine(const Vector& theta) const {
  Matrix h = Matrix::Zero(dim_, dim_);
  for (Index a = 0; a < size(); ++a) h += theta(a) * basis_[static_cast<size_t>(a)];
  return h;
}

Vector SubspaceFamily::coordinates(const Matrix& a) const {
  Vector rhs(size());
  for (Index k = 0; k < size(); ++k)
    rhs(k) = basis_[static_cast<size_t>(k)].cwiseProduct(a).sum();
  return gram_.llt().solve(rhs);
}

SubspaceFamily SubspaceFamily::scalar(Index d) {
  return SubspaceFamily(d, {Matrix::Identity(d, d)});
}

SubspaceFamily SubspaceFamily::diagonal(Index d) {
  std::vector<Matrix> b;
  for (Index i = 0; i < d; ++i) b.push_back(unit(d, i, i));
  return SubspaceFamily(d, std::move(b));
}

SubspaceFamily SubspaceFamily::full(Index d) {
  std::vector<Matrix> b;
  for (Index i = 0; i < d; ++i) {
    b.push_back(unit(d, i, i));
    for (Index j = i + 1; j < d; ++j) b.push_back(unit(d, i, j) / std::sqrt(2.0));
  }
  return SubspaceFamily(d, std::move(b));
}

SubspaceFamily SubspaceFamily::tridiagonal(Index d) {
  std::vector<Matrix> b;
  for (Index i = 0; i < d; ++i) {
    b.push_back(unit(d, i, i));
    if (i + 1 < d) b.push_back(unit(d, i, i + 1) / std::sqrt(2.0));
  }
  return SubspaceFamily(d, std::move(b));
}

SubspaceFamily SubspaceFamily::kronecker_left(Index d_left, Index d_right) {
  const Matrix id = Matrix::Identity(d_right, d_right);
  const SubspaceFamily left = full(d_left);
  std::vector<Matrix> b;
  for (const auto& bl : left.basis()) b.push_back(kron(bl, id));
  return SubspaceFamily(d_left * d_right, std::move(b));
}

SubspaceFamily SubspaceFamily::direct_sum(const std::vector<SubspaceFamily>& blocks) {
  Index d = 0;
  for (const auto& f : blocks) d += f.dim();
  std::vector<Matrix> b;
  Index off = 0;
  for (const auto& f : blocks) {
    for (const auto& bb : f.basis()) {
      Matrix e = Matrix::Zero(d, d);
      e.block(off, off, f.dim(), f.dim()) = bb;
      b.push_back(std::move(e));
    }
    off += f.dim();
  }
  return SubspaceFamily(d, std::move(b));
}

SubspaceFamily SubspaceFamily::for_cone(const ConeSpec& cone) {
  switch (cone.kind()) {
    case ConeKind::Scalar:
      return scalar(cone.dim());
    case ConeKind::Diagonal:
      return diagonal(cone.dim());
    case ConeKind::Full:
      return full(cone.dim());
    case ConeKind::KroneckerLeft:
      return kronecker_left(cone.left_dim(), cone.right_dim());
    case ConeKind::DirectSum: {
      std::vector<SubspaceFamily> fams;
      for (const auto& b : cone.blocks()) fams.push_back(for_cone(b));
      return direct_sum(fams);
    }
  }
  throw InvalidInput("for_cone: unknown cone kind");
}

OracleResult oracle_minimize_subspace(const SubspaceFamily& family,
                                      const PsdMatrix& m, double eta,
                                      const OracleOptions& opts) {
  const Index d = family.dim();
  require_square_dim(m, d, "oracle_minimize_subspace");
  if (!(eta > 0.0)) throw InvalidInput("oracle: eta must be > 0");
  const Matrix mr = regularized(m);
  const double s = std::sqrt(mr.trace() / static_cast<double>(d)) / eta;
  const Matrix id = Matrix::Identity(d, d);

  const NewtonOutcome first =
      damped_newton(family, mr, eta, family.coordinates(s * id), opts);
  const Vector spread = Vector::LinSpaced(d, 0.5, 1.5);
  const Matrix second_start = s * (0.5 * id + Matrix(spread.asDiagonal()));
  const NewtonOutcome second =
      damped_newton(family, mr, eta, family.coordinates(second_start), opts);

  const NewtonOutcome& best = second.f < first.f ? second : first;
  OracleResult out;
  out.h = PsdMatrix(family.combine(best.theta));
  out.objective = best.f;
  out.stationarity = best.stationarity;
  out.iterations = first.iterations + second.iterations;
  out.restart_gap = std::abs(first.f - second.f);
  out.trace = first.trace;

  if (!first.converged || !second.converged) {
    throw NotConverged("oracle: stationarity " + std::to_string(best.stationarity) +
                           " above target after " +
                           std::to_string(opts.max_iter) + " iterations",
                       out.h.dense(), best.stationarity);
  }
  if (out.restart_gap > opts.tol * std::max(1.0, std::abs(out.objective))) {
    throw NotConverged("oracle: restart disagreement " +
                           std::to_string(out.restart_gap),
                       out.h.dense(), out.restart_gap);
  }
  return out;
}

Matrix KronPairResult::product() const { return kron(u.dense(), v.dense()); }

namespace {

// C[a,b] = sum_{i,j} M[(a,i),(b,j)] W[i,j]
Matrix contract_right(const Matrix& m, const Matrix& w, Index dl, Index dr) {
  Matrix c(dl, dl);
  for (Index a = 0; a < dl; ++a)
    for (Index b = 0; b < dl; ++b)
      c(a, b) = m.block(a * dr, b * dr, dr, dr).cwiseProduct(w).sum();
  return c;
}

// C[i,j] = sum_{a,b} M[(a,i),(b,j)] W[a,b]
Matrix contract_left(const Matrix& m, const Matrix& w, Index dl, Index dr) {
  Matrix c = Matrix::Zero(dr, dr);
  for (Index a = 0; a < dl; ++a)
    for (Index b = 0; b < dl; ++b) c += w(a, b) * m.block(a * dr, b * dr, dr, dr);
  return c;
}

Matrix spd_inverse(const Matrix& a) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw Infeasible("kron pair: factor lost positive definiteness");
  }
  return llt.solve(Matrix::Identity(a.rows(), a.cols()));
}

Matrix psd_sqrt(const Matrix& a) {
  return psd_power(PsdMatrix(a), 0.5).dense();
}

struct PairRun {
  Matrix u, v;
  double f = 0.0;
  int sweeps = 0;
  bool converged = false;
};

PairRun alternate(const Matrix& m, Index dl, Index dr, double eta, Matrix v,
                  const KronPairOptions& opts) {
  const double eta2 = eta * eta;
  PairRun run;
  run.v = std::move(v);
  double f_prev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opts.max_alternations; ++it) {
    const Matrix mv = contract_right(m, spd_inverse(run.v), dl, dr);
    run.u = psd_sqrt(mv) / (eta * std::sqrt(run.v.trace()));
    const Matrix u_inv = spd_inverse(run.u);
    const Matrix mu = contract_left(m, u_inv, dl, dr);
    run.v = psd_sqrt(mu) / (eta * std::sqrt(run.u.trace()));
    const double g = std::sqrt(run.v.trace() / run.u.trace());
    run.u *= g;
    run.v /= g;
    const Matrix mv2 = contract_right(m, spd_inverse(run.v), dl, dr);
    run.f = mv2.cwiseProduct(spd_inverse(run.u)).sum() +
            eta2 * run.u.trace() * run.v.trace();
    run.sweeps = it;
    if (f_prev - run.f < opts.tol * std::max(1.0, std::abs(run.f))) {
      run.converged = true;
      break;
    }
    f_prev = run.f;
  }
  return run;
}

}  // namespace

KronPairResult oracle_minimize_kron_pair(const KroneckerPairFamily& family,
                                         const PsdMatrix& m, double eta,
                                         const KronPairOptions& opts) {
  const Index dl = family.d_left;
  const Index dr = family.d_right;
  if (dl < 1 || dr < 1) throw InvalidInput("kron pair: d_L, d_R must be >= 1");
  require_square_dim(m, family.dim(), "oracle_minimize_kron_pair");
  if (!(eta > 0.0)) throw InvalidInput("kron pair: eta must be > 0");
  const Matrix mr = regularized(m);

  std::vector<Matrix> starts;
  starts.push_back(Matrix::Identity(dr, dr));
  starts.push_back(Vector::LinSpaced(dr, 0.25, 1.75).asDiagonal());
  const double c = 0.4 / static_cast<double>(dr);
  starts.push_back((1.0 - c) * Matrix::Identity(dr, dr) +
                   c * Matrix::Ones(dr, dr));
  const int n_starts = std::clamp(opts.starts, 1, static_cast<int>(starts.size()));

  PairRun best;
  best.f = std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  int total_sweeps = 0;
  bool all_converged = true;
  for (int s = 0; s < n_starts; ++s) {
    PairRun run = alternate(mr, dl, dr, eta, starts[static_cast<size_t>(s)], opts);
    total_sweeps += run.sweeps;
    all_converged = all_converged && run.converged;
    lo = std::min(lo, run.f);
    hi = std::max(hi, run.f);
    if (run.f < best.f) best = std::move(run);
  }
  KronPairResult out;
  out.u = PsdMatrix(best.u);
  out.v = PsdMatrix(best.v);
  out.objective = best.f;
  out.sweeps = total_sweeps;
  out.multistart_spread = hi - lo;
  if (!all_converged) {
    throw NotConverged("kron pair: alternation cap reached",
                       out.product(), out.multistart_spread);
  }
  return out;
}

namespace {

ViolationReport compare(Matrix p, Matrix pp, double tol) {
  ViolationReport r;
  r.min_eig_diff = min_eigenvalue(SymMatrix(pp - p));
  r.violated = r.min_eig_diff < -tol;
  for (Index i = 0; i < p.rows(); ++i) {
    if (p(i, i) > pp(i, i) + tol) r.entries.emplace_back(i, i);
  }
  r.p = std::move(p);
  r.pp = std::move(pp);
  return r;
}

void require_ordered(const PsdMatrix& m, const PsdMatrix& mp, double tol) {
  if (m.dim() != mp.dim()) throw InvalidInput("monotonicity_probe: dimension mismatch");
  if (!loewner_leq(m.sym(), mp.sym(), tol)) {
    throw InvalidInput("monotonicity_probe: M is not below M'");
  }
}

}  // namespace

ViolationReport monotonicity_probe(const SubspaceFamily& family,
                                   const PsdMatrix& m, const PsdMatrix& mp,
                                   double eta, double tol,
                                   const OracleOptions& opts) {
  require_ordered(m, mp, tol);
  return compare(oracle_minimize_subspace(family, m, eta, opts).h.dense(),
                 oracle_minimize_subspace(family, mp, eta, opts).h.dense(), tol);
}

ViolationReport monotonicity_probe(const KroneckerPairFamily& family,
                                   const PsdMatrix& m, const PsdMatrix& mp,
                                   double eta, double tol,
                                   const KronPairOptions& opts) {
  require_ordered(m, mp, tol);
  return compare(oracle_minimize_kron_pair(family, m, eta, opts).product(),
                 oracle_minimize_kron_pair(family, mp, eta, opts).product(), tol);
}

}  // namespace precond
