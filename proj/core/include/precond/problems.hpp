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

#ifndef PRECOND_PROBLEMS_HPP
#define PRECOND_PROBLEMS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "precond/cones.hpp"
#include "precond/matrix_kernels.hpp"
#include "precond/rng.hpp"

namespace precond {

struct SpectrumSpec {
  enum class Rule { Paper, Explicit };
  Rule rule = Rule::Paper;
  std::vector<double> values;  // Explicit only

  static SpectrumSpec paper() { return {}; }
  static SpectrumSpec explicit_values(std::vector<double> v);

  // sigma_1 .. sigma_10 = 1 and sigma_i = 1/(i-10)^2 beyond, for Paper.
  Vector eigenvalues(Index d) const;
};

// f(X) = <H, (X - X*)(X - X*)^T> with H = U^T diag(sigma) U.
struct QuadraticProblem {
  Index d_left = 0;
  Index d_right = 0;
  PsdMatrix hmat;
  Matrix u;  // rows are eigenvectors of hmat
  Vector sigma;
  Matrix xstar;

  Index dim() const { return d_left * d_right; }
  double loss(const Matrix& x) const;
  Matrix grad(const Matrix& x) const;
  // Vectorized (row-major) forms.
  double loss(const Vector& x) const;
  Vector grad(const Vector& x) const;
};

struct ProblemOptions {
  SpectrumSpec spectrum;
  bool normalize_trace = false;  // scale sigma to sum 1
};

// U from QR of a seeded Gaussian with sign-fixed diagonal; X* entries iid
// N(0, 1/d_left).
QuadraticProblem build_quadratic(Index d_left, Index d_right,
                                 std::uint64_t seed,
                                 const ProblemOptions& opts = {});
QuadraticProblem build_paper_problem(Index d, std::uint64_t seed);

// Problem with prescribed H and X*; the eigenbasis is computed.
QuadraticProblem make_quadratic(const PsdMatrix& h, const Matrix& xstar);

std::pair<double, Matrix> loss_and_grad(const QuadraticProblem& p,
                                        const Matrix& x);

// Gradient noise with exact covariance Sigma (ambient, row-major vec).
class NoiseSpec {
 public:
  NoiseSpec() = default;
  explicit NoiseSpec(const PsdMatrix& sigma);
  static NoiseSpec isotropic(Index d, double variance);

  bool active() const { return active_; }
  const PsdMatrix& sigma() const { return sigma_; }
  Vector sample(Rng& rng) const;

 private:
  bool active_ = false;
  PsdMatrix sigma_;
  Matrix root_;
};

Matrix sample_stochastic_grad(const QuadraticProblem& p, const Matrix& x,
                              const NoiseSpec& noise, Rng& rng);

// The d_left-variable problem that full-matrix AdaGrad actually sees:
// f(w) = sum_i sigma_i (w_i - v_i)^2 with v_i the row norms of U(X* - X0).
struct ReducedProblem {
  Vector sigma;
  Vector v;
  Index dead_dims = 0;  // coordinates that never receive a gradient

  Index dim() const { return sigma.size(); }
  double loss(const Vector& w) const;
  Vector grad(const Vector& w) const;
};

ReducedProblem reduced_full_matrix_problem(const QuadraticProblem& p,
                                           const Matrix& x0);

// G_t[i,j] = 1 iff (j - i) = t mod min(d_L, d_R), for t = 1 .. d_L d_R.
std::vector<Matrix> make_cyclic_gradients(Index d_left, Index d_right);

// Online convex loss: linear g^T x or quadratic 0.5 |A (x - c)|^2.
struct OnlineLoss {
  enum class Kind { Linear, Quadratic };
  Kind kind = Kind::Linear;
  Vector g;
  Matrix a;
  Vector c;

  double value(const Vector& x) const;
  Vector grad(const Vector& x) const;
};

// Mixed linear / quadratic stream, decided per step by a fair coin.
std::vector<OnlineLoss> make_online_stream(Index d, Index steps, Rng& rng);

struct BoundReport {
  double d_norm = 0.0;  // D
  double g_norm = 0.0;  // G
  double rhs = 0.0;
  double lhs = 0.0;     // realized regret (or linearized, see below)
  bool flag = false;    // lhs <= rhs + 1e-8 |rhs|
};

// (D^2 / 2 eta + eta)(G + d sqrt(eps)), D = max_t |x_t - x*|_H, G the
// adaptive norm of the gradients. lhs is sum_t g_t^T (x_t - x*), which
// bounds the realized regret of any convex stream from above.
BoundReport regret_bound_rhs(const ConeSpec& cone,
                             const std::vector<Vector>& iterates,
                             const Vector& xstar,
                             const std::vector<Vector>& grads, double eta,
                             double eps);

// Same with a realized regret supplied by the caller.
BoundReport regret_bound_rhs(const ConeSpec& cone,
                             const std::vector<Vector>& iterates,
                             const Vector& xstar,
                             const std::vector<Vector>& grads, double eta,
                             double eps, double realized_regret);

// (D_op^2 / (2 d_R eta) + eta)(sqrt(d_R) Tr[(sum G G^T)^{1/2}] + d sqrt(eps)).
BoundReport one_sided_bound_rhs(Index d_left, Index d_right,
                                const std::vector<Matrix>& iterates,
                                const Matrix& xstar,
                                const std::vector<Matrix>& grads, double eta,
                                double eps, double realized_regret);

// (D_F^2 / 2 eta + r eta) Tr(L^{1/4}) Tr(R^{1/4}).
double two_sided_bound_rhs(const PsdMatrix& lt, const PsdMatrix& rt,
                           double d_frob, int r, double eta);

// Expected suboptimality bound of the plain average after T steps for a
// run with learning rate eta and measured D:
//   c = D^2/(2 eta) + eta,  S = 2 H c^2 + 2 c (sqrt(T) sigma + d sqrt(eps)),
//   bound = S / T.
// With D = 2R and eta = sqrt(2) R this is
//   16 R^2 H / T + 4 sqrt(2) R sigma / sqrt(T) + 4 sqrt(2) d sqrt(eps) R / T.
double stochastic_bound_rhs(std::int64_t steps, double d_norm, double eta,
                            double h_smooth, double sigma, Index dim,
                            double eps);

struct RateRow {
  std::string optimizer;
  ConeSpec cone;
  double xstar_norm = 0.0;  // |x*|_H
  double h_smooth = 0.0;    // H(L, H) with Hessian H (x) I
  double numerator = 0.0;   // |x*|_H^2 H(L, H)
};

// Rate numerators for the four basic cones on a given instance.
std::vector<RateRow> rate_table(const PsdMatrix& h, const Matrix& xstar);

// Each row evaluated on its own worst-case instance with Tr(H) <= 1 and
// |X*|_op <= 1; numerators are min(d_L,d_R), d_L d_R, min(d_L,d_R) d_R, 1.
std::vector<RateRow> rate_table_extremal(Index d_left, Index d_right);

}  // namespace precond

#endif  // PRECOND_PROBLEMS_HPP
