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

#include "precond/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "precond/error.hpp"

namespace precond {

namespace {

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

void require_shape(const QuadraticProblem& p, const Matrix& x) {
  if (x.rows() != p.d_left || x.cols() != p.d_right) {
    throw InvalidInput("quadratic: X is " + std::to_string(x.rows()) + "x" +
                       std::to_string(x.cols()) + ", expected " +
                       std::to_string(p.d_left) + "x" +
                       std::to_string(p.d_right));
  }
}

}  // namespace

SpectrumSpec SpectrumSpec::explicit_values(std::vector<double> v) {
  for (double s : v) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw InvalidInput("spectrum values must be finite and nonnegative");
    }
  }
  SpectrumSpec out;
  out.rule = Rule::Explicit;
  out.values = std::move(v);
  return out;
}

Vector SpectrumSpec::eigenvalues(Index d) const {
  Vector s(d);
  if (rule == Rule::Paper) {
    if (d < 11) throw InvalidInput("paper spectrum needs d >= 11");
    for (Index i = 1; i <= d; ++i) {
      const double k = static_cast<double>(i - 10);
      s(i - 1) = i <= 10 ? 1.0 : 1.0 / (k * k);
    }
    return s;
  }
  if (static_cast<Index>(values.size()) != d) {
    throw InvalidInput("explicit spectrum has " + std::to_string(values.size()) +
                       " values, expected " + std::to_string(d));
  }
  for (Index i = 0; i < d; ++i) s(i) = values[static_cast<size_t>(i)];
  return s;
}

double QuadraticProblem::loss(const Matrix& x) const {
  require_shape(*this, x);
  const Matrix e = x - xstar;
  return (hmat.dense() * e).cwiseProduct(e).sum();
}

Matrix QuadraticProblem::grad(const Matrix& x) const {
  require_shape(*this, x);
  return 2.0 * hmat.dense() * (x - xstar);
}

double QuadraticProblem::loss(const Vector& x) const {
  return loss(unvec(x, d_left, d_right));
}

Vector QuadraticProblem::grad(const Vector& x) const {
  return vec(grad(unvec(x, d_left, d_right)));
}

QuadraticProblem build_quadratic(Index d_left, Index d_right,
                                 std::uint64_t seed,
                                 const ProblemOptions& opts) {
  if (d_left < 1 || d_right < 1) throw InvalidInput("quadratic needs d_L, d_R >= 1");
  Vector sigma = opts.spectrum.eigenvalues(d_left);
  if (opts.normalize_trace) {
    const double s = sigma.sum();
    if (!(s > 0.0)) throw InvalidInput("cannot normalize a zero spectrum");
    sigma /= s;
  }
  Rng rng(seed, StreamRole::Problem);
  const Matrix gauss = rng.normal_matrix(d_left, d_left);
  Eigen::HouseholderQR<Matrix> qr(gauss);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d_left; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  QuadraticProblem p;
  p.d_left = d_left;
  p.d_right = d_right;
  p.sigma = sigma;
  p.u = q.transpose();
  p.hmat = PsdMatrix(SymMatrix(q * sigma.asDiagonal() * q.transpose()));
  p.xstar = rng.normal_matrix(d_left, d_right) /
            std::sqrt(static_cast<double>(d_left));
  return p;
}

QuadraticProblem build_paper_problem(Index d, std::uint64_t seed) {
  return build_quadratic(d, d, seed, {});
}

QuadraticProblem make_quadratic(const PsdMatrix& h, const Matrix& xstar) {
  if (xstar.rows() != h.dim()) {
    throw InvalidInput("make_quadratic: X* rows must match H");
  }
  QuadraticProblem p;
  p.d_left = xstar.rows();
  p.d_right = xstar.cols();
  p.hmat = h;
  p.sigma = h.eig().values;
  p.u = h.eig().vectors.transpose();
  p.xstar = xstar;
  return p;
}

std::pair<double, Matrix> loss_and_grad(const QuadraticProblem& p,
                                        const Matrix& x) {
  require_shape(p, x);
  const Matrix e = x - p.xstar;
  const Matrix he = p.hmat.dense() * e;
  return {he.cwiseProduct(e).sum(), 2.0 * he};
}

NoiseSpec::NoiseSpec(const PsdMatrix& sigma)
    : active_(true), sigma_(sigma), root_(psd_power(sigma, 0.5).dense()) {}

NoiseSpec NoiseSpec::isotropic(Index d, double variance) {
  if (!(variance >= 0.0)) throw InvalidInput("noise variance must be >= 0");
  return NoiseSpec(PsdMatrix::identity(d, variance));
}

Vector NoiseSpec::sample(Rng& rng) const {
  if (!active_) return {};
  return root_ * rng.normal_vector(root_.cols());
}

Matrix sample_stochastic_grad(const QuadraticProblem& p, const Matrix& x,
                              const NoiseSpec& noise, Rng& rng) {
  Matrix g = p.grad(x);
  if (!noise.active()) return g;
  if (noise.sigma().dim() != p.dim()) {
    throw InvalidInput("noise covariance dimension does not match the problem");
  }
  return g + unvec(noise.sample(rng), p.d_left, p.d_right);
}

double ReducedProblem::loss(const Vector& w) const {
  return sigma.dot((w - v).cwiseAbs2());
}

Vector ReducedProblem::grad(const Vector& w) const {
  return 2.0 * sigma.cwiseProduct(w - v);
}

ReducedProblem reduced_full_matrix_problem(const QuadraticProblem& p,
                                           const Matrix& x0) {
  require_shape(p, x0);
  // Row i of U (X* - X0) is rotated onto e_1 by an orthogonal V_i; a zero
  // row keeps e_1 and its coordinate never moves.
  const Matrix t = p.u * (p.xstar - x0);
  ReducedProblem r;
  r.sigma = p.sigma;
  r.v = t.rowwise().norm();
  r.dead_dims = p.dim() - p.d_left;
  return r;
}

std::vector<Matrix> make_cyclic_gradients(Index d_left, Index d_right) {
  if (d_left < 1 || d_right < 1) throw InvalidInput("cyclic stream needs d_L, d_R >= 1");
  const Index m = std::min(d_left, d_right);
  std::vector<Matrix> out;
  for (Index t = 1; t <= d_left * d_right; ++t) {
    Matrix g = Matrix::Zero(d_left, d_right);
    for (Index i = 0; i < d_left; ++i)
      for (Index j = 0; j < d_right; ++j)
        if ((((j - i) % m) + m) % m == t % m) g(i, j) = 1.0;
    out.push_back(std::move(g));
  }
  return out;
}

double OnlineLoss::value(const Vector& x) const {
  if (kind == Kind::Linear) return g.dot(x);
  return 0.5 * (a * (x - c)).squaredNorm();
}

Vector OnlineLoss::grad(const Vector& x) const {
  if (kind == Kind::Linear) return g;
  return a.transpose() * (a * (x - c));
}

std::vector<OnlineLoss> make_online_stream(Index d, Index steps, Rng& rng) {
  std::vector<OnlineLoss> out;
  out.reserve(static_cast<size_t>(steps));
  for (Index t = 0; t < steps; ++t) {
    OnlineLoss l;
    if (rng.uniform() < 0.5) {
      l.kind = OnlineLoss::Kind::Linear;
      l.g = rng.normal_vector(d);
    } else {
      l.kind = OnlineLoss::Kind::Quadratic;
      l.a = rng.normal_matrix(d, d) / std::sqrt(static_cast<double>(d));
      l.c = rng.normal_vector(d);
    }
    out.push_back(std::move(l));
  }
  return out;
}

namespace {

BoundReport finish(BoundReport r, double factor, double eps, Index d) {
  r.rhs = factor * (r.g_norm + static_cast<double>(d) * std::sqrt(eps));
  r.flag = r.lhs <= r.rhs + 1e-8 * std::abs(r.rhs);
  return r;
}

}  // namespace

BoundReport regret_bound_rhs(const ConeSpec& cone,
                             const std::vector<Vector>& iterates,
                             const Vector& xstar,
                             const std::vector<Vector>& grads, double eta,
                             double eps) {
  if (iterates.size() != grads.size()) {
    throw InvalidInput("regret_bound_rhs: iterates and gradients differ in length");
  }
  double lin = 0.0;
  for (size_t t = 0; t < grads.size(); ++t) lin += grads[t].dot(iterates[t] - xstar);
  return regret_bound_rhs(cone, iterates, xstar, grads, eta, eps, lin);
}

BoundReport regret_bound_rhs(const ConeSpec& cone,
                             const std::vector<Vector>& iterates,
                             const Vector& xstar,
                             const std::vector<Vector>& grads, double eta,
                             double eps, double realized_regret) {
  if (!(eta > 0.0)) throw InvalidInput("regret_bound_rhs: eta must be > 0");
  BoundReport r;
  for (const auto& x : iterates) r.d_norm = std::max(r.d_norm, domain_norm(cone, x - xstar));
  GradStat stat = zero_stat(cone);
  for (const auto& g : grads) stat = stat_update(cone, stat, g);
  r.g_norm = adaptive_norm(cone, stat);
  r.lhs = realized_regret;
  return finish(r, r.d_norm * r.d_norm / (2.0 * eta) + eta, eps, cone.dim());
}

BoundReport one_sided_bound_rhs(Index d_left, Index d_right,
                                const std::vector<Matrix>& iterates,
                                const Matrix& xstar,
                                const std::vector<Matrix>& grads, double eta,
                                double eps, double realized_regret) {
  if (!(eta > 0.0)) throw InvalidInput("one_sided_bound_rhs: eta must be > 0");
  BoundReport r;
  for (const auto& x : iterates) r.d_norm = std::max(r.d_norm, op_norm(x - xstar));
  Matrix c = Matrix::Zero(d_left, d_left);
  for (const auto& g : grads) c += g * g.transpose();
  r.g_norm = std::sqrt(static_cast<double>(d_right)) *
             psd_power(PsdMatrix(c), 0.5).trace();
  r.lhs = realized_regret;
  const double factor = r.d_norm * r.d_norm /
                            (2.0 * static_cast<double>(d_right) * eta) + eta;
  return finish(r, factor, eps, d_left * d_right);
}

double two_sided_bound_rhs(const PsdMatrix& lt, const PsdMatrix& rt,
                           double d_frob, int r, double eta) {
  if (r < 1) throw InvalidInput("two_sided_bound_rhs: r must be >= 1");
  if (!(eta > 0.0)) throw InvalidInput("two_sided_bound_rhs: eta must be > 0");
  return (d_frob * d_frob / (2.0 * eta) + static_cast<double>(r) * eta) *
         psd_power(lt, 0.25).trace() * psd_power(rt, 0.25).trace();
}

double stochastic_bound_rhs(std::int64_t steps, double d_norm, double eta,
                            double h_smooth, double sigma, Index dim,
                            double eps) {
  if (steps < 1) throw InvalidInput("stochastic_bound_rhs: steps must be >= 1");
  if (!(eta > 0.0)) throw InvalidInput("stochastic_bound_rhs: eta must be > 0");
  const double t = static_cast<double>(steps);
  const double c = d_norm * d_norm / (2.0 * eta) + eta;
  const double s = 2.0 * h_smooth * c * c +
                   2.0 * c * (std::sqrt(t) * sigma +
                              static_cast<double>(dim) * std::sqrt(eps));
  return s / t;
}

std::vector<RateRow> rate_table(const PsdMatrix& h, const Matrix& xstar) {
  const Index dl = xstar.rows();
  const Index dr = xstar.cols();
  if (h.dim() != dl) throw InvalidInput("rate_table: H and X* disagree in d_L");
  const Index d = dl * dr;
  const Vector x = vec(xstar);
  std::vector<RateRow> rows = {
      {"adagrad_norm", ConeSpec::scalar(d)},
      {"adagrad", ConeSpec::diagonal(d)},
      {"full_matrix_adagrad", ConeSpec::full(d)},
      {"one_sided_shampoo", ConeSpec::kronecker_left(dl, dr)},
  };
  for (auto& row : rows) {
    row.xstar_norm = domain_norm(row.cone, x);
    try {
      row.h_smooth = h_smoothness(row.cone, h.sym());
    } catch (const Unsupported&) {
      row.h_smooth = std::numeric_limits<double>::quiet_NaN();
    }
    row.numerator = row.xstar_norm * row.xstar_norm * row.h_smooth;
  }
  return rows;
}

std::vector<RateRow> rate_table_extremal(Index d_left, Index d_right) {
  if (d_left < 1 || d_right < 1) throw InvalidInput("rate_table_extremal: bad shape");
  const Index m = std::min(d_left, d_right);
  Matrix spike = Matrix::Zero(d_left, d_left);
  spike(0, 0) = 1.0;
  const Matrix flat = Matrix::Constant(d_left, d_left, 1.0 / static_cast<double>(d_left));
  Matrix corner = Matrix::Zero(d_left, d_right);
  corner(0, 0) = 1.0;
  Matrix partial_identity = Matrix::Zero(d_left, d_right);
  for (Index i = 0; i < m; ++i) partial_identity(i, i) = 1.0;

  const auto pick = [](const std::vector<RateRow>& rows, size_t i) { return rows[i]; };
  std::vector<RateRow> out;
  out.push_back(pick(rate_table(PsdMatrix(spike), partial_identity), 0));
  out.push_back(pick(rate_table(PsdMatrix(flat), corner), 1));
  out.push_back(pick(rate_table(PsdMatrix(spike), partial_identity), 2));
  out.push_back(pick(rate_table(PsdMatrix(spike), corner), 3));
  return out;
}

}  // namespace precond
