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

#ifndef PRECOND_MATRIX_KERNELS_HPP
#define PRECOND_MATRIX_KERNELS_HPP

#include <memory>

#include <Eigen/Core>

namespace precond {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kPinvCutoff = 1e-12;

// Square matrix with exactly symmetric entries. Construction symmetrizes
// as (A + A^T) / 2.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& a);

  static SymMatrix zero(Index n);
  static SymMatrix identity(Index n, double scale = 1.0);
  static SymMatrix diagonal(const Vector& d);

  Index dim() const { return a_.rows(); }
  const Matrix& dense() const { return a_; }
  double operator()(Index i, Index j) const { return a_(i, j); }

 private:
  Matrix a_;
};

struct EigenDecomposition {
  Vector values;   // descending
  Matrix vectors;  // orthonormal columns
};

EigenDecomposition sym_eig(const SymMatrix& a);

// Symmetric matrix with a nonnegative spectrum and a cached
// eigendecomposition. Copies share the cache.
class PsdMatrix {
 public:
  PsdMatrix() = default;
  explicit PsdMatrix(const SymMatrix& a);
  explicit PsdMatrix(const Matrix& a) : PsdMatrix(SymMatrix(a)) {}

  // Trusted constructor: values must already be nonnegative and sorted.
  static PsdMatrix from_eig(EigenDecomposition e);
  static PsdMatrix identity(Index n, double scale = 1.0);
  static PsdMatrix diagonal(const Vector& d);

  Index dim() const { return base_.dim(); }
  const SymMatrix& sym() const { return base_; }
  const Matrix& dense() const { return base_.dense(); }
  const EigenDecomposition& eig() const { return *eig_; }
  double trace() const { return base_.dense().trace(); }
  double max_eigenvalue() const;

 private:
  SymMatrix base_;
  std::shared_ptr<const EigenDecomposition> eig_;
};

// V diag(f(lambda)) V^T for a power p. Eigenvalues at or below
// kPinvCutoff * lambda_max count as zero for every p, so negative powers are
// pseudo-inverses and positive powers share their range.
PsdMatrix psd_power(const PsdMatrix& a, double p);

// Same power applied to a vector or to the columns of a matrix, without
// forming the dense power.
Vector psd_power_apply(const PsdMatrix& a, double p, const Vector& x);
Matrix psd_power_apply(const PsdMatrix& a, double p, const Matrix& x);

// Scalar power with the same cutoff rule, given the largest eigenvalue.
double pinv_power(double lambda, double lambda_max, double p);

double min_eigenvalue(const SymMatrix& a);

// true iff lambda_min(B - A) >= -tol.
bool loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol);

// (H_L (x) I) vec(G) computed as H_L G.
Matrix kron_left_apply(const PsdMatrix& hl, const Matrix& g);

// Explicit Kronecker product. Intended for tests and small oracles.
Matrix kron(const Matrix& a, const Matrix& b);

// Row-major vectorization: entry (a, i) of a d_L x d_R matrix lands at
// a * d_R + i, so (A (x) I) vec(X) = vec(A X).
Vector vec(const Matrix& x);
Matrix unvec(const Vector& x, Index rows, Index cols);

// sum_i M[(a,i),(b,i)] for M of dimension d_L d_R.
Matrix left_partial_trace(const Matrix& m, Index d_left, Index d_right);

bool all_finite(const Matrix& a);

}  // namespace precond

#endif  // PRECOND_MATRIX_KERNELS_HPP
