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

#include "precond/matrix_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "precond/error.hpp"

namespace precond {

namespace {

std::string dims(Index r, Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

// Reorders (values, vectors) so that values are descending.
EigenDecomposition sorted_descending(const Vector& values,
                                     const Matrix& vectors) {
  const Index n = values.size();
  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) > values(b); });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(vectors.rows(), n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = values(order[static_cast<size_t>(k)]);
    out.vectors.col(k) = vectors.col(order[static_cast<size_t>(k)]);
  }
  return out;
}

Vector powered_values(const EigenDecomposition& e, double p) {
  const double lmax = e.values.size() > 0 ? e.values(0) : 0.0;
  Vector f(e.values.size());
  for (Index i = 0; i < f.size(); ++i) f(i) = pinv_power(e.values(i), lmax, p);
  return f;
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw InvalidInput("symmetric matrix must be square, got " +
                       dims(a.rows(), a.cols()));
  }
  a_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::zero(Index n) { return SymMatrix(Matrix::Zero(n, n)); }

SymMatrix SymMatrix::identity(Index n, double scale) {
  return SymMatrix(scale * Matrix::Identity(n, n));
}

SymMatrix SymMatrix::diagonal(const Vector& d) {
  return SymMatrix(Matrix(d.asDiagonal()));
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

EigenDecomposition sym_eig(const SymMatrix& a) {
  if (!all_finite(a.dense())) {
    throw InvalidInput("sym_eig: non-finite entries");
  }
  if (a.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.dense());
  if (solver.info() != Eigen::Success) {
    throw InvalidInput("sym_eig: eigensolver failed");
  }
  // Eigen returns ascending order.
  EigenDecomposition out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

PsdMatrix::PsdMatrix(const SymMatrix& a) : base_(a) {
  EigenDecomposition e = sym_eig(a);
  if (e.values.size() > 0) {
    const double lmax = e.values(0);
    const double lmin = e.values(e.values.size() - 1);
    if (lmin < -kPsdTolerance * std::max(1.0, lmax)) {
      throw InvalidInput("matrix is not PSD: min eigenvalue " +
                         std::to_string(lmin));
    }
    e.values = e.values.cwiseMax(0.0);
  }
  eig_ = std::make_shared<const EigenDecomposition>(std::move(e));
}

PsdMatrix PsdMatrix::from_eig(EigenDecomposition e) {
  PsdMatrix out;
  out.base_ = SymMatrix(e.vectors * e.values.asDiagonal() *
                        e.vectors.transpose());
  out.eig_ = std::make_shared<const EigenDecomposition>(std::move(e));
  return out;
}

PsdMatrix PsdMatrix::identity(Index n, double scale) {
  if (scale < 0) throw InvalidInput("identity scale must be nonnegative");
  return from_eig({Vector::Constant(n, scale), Matrix::Identity(n, n)});
}

PsdMatrix PsdMatrix::diagonal(const Vector& d) {
  if ((d.array() < 0).any()) {
    throw InvalidInput("diagonal PSD matrix needs nonnegative entries");
  }
  return PsdMatrix(SymMatrix::diagonal(d));
}

double PsdMatrix::max_eigenvalue() const {
  return eig_->values.size() > 0 ? eig_->values(0) : 0.0;
}

double pinv_power(double lambda, double lambda_max, double p) {
  if (lambda <= 0.0) return 0.0;
  if (lambda <= kPinvCutoff * lambda_max) return 0.0;
  if (p == 1.0) return lambda;
  if (p == -1.0) return 1.0 / lambda;
  if (p == 0.5) return std::sqrt(lambda);
  if (p == -0.5) return 1.0 / std::sqrt(lambda);
  return std::pow(lambda, p);
}

PsdMatrix psd_power(const PsdMatrix& a, double p) {
  if (!std::isfinite(p)) throw InvalidInput("psd_power: non-finite exponent");
  const EigenDecomposition& e = a.eig();
  return PsdMatrix::from_eig(sorted_descending(powered_values(e, p),
                                               e.vectors));
}

Vector psd_power_apply(const PsdMatrix& a, double p, const Vector& x) {
  if (x.size() != a.dim()) {
    throw InvalidInput("psd_power_apply: dimension mismatch");
  }
  const EigenDecomposition& e = a.eig();
  const Vector coeffs = e.vectors.transpose() * x;
  return e.vectors * powered_values(e, p).cwiseProduct(coeffs);
}

Matrix psd_power_apply(const PsdMatrix& a, double p, const Matrix& x) {
  if (x.rows() != a.dim()) {
    throw InvalidInput("psd_power_apply: dimension mismatch " +
                       dims(a.dim(), a.dim()) + " vs " +
                       dims(x.rows(), x.cols()));
  }
  const EigenDecomposition& e = a.eig();
  const Matrix coeffs = e.vectors.transpose() * x;
  return e.vectors * (powered_values(e, p).asDiagonal() * coeffs);
}

double min_eigenvalue(const SymMatrix& a) {
  if (a.dim() == 0) return 0.0;
  if (!all_finite(a.dense())) {
    throw InvalidInput("min_eigenvalue: non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.dense(),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol) {
  if (a.dim() != b.dim()) {
    throw InvalidInput("loewner_leq: dimension mismatch");
  }
  return min_eigenvalue(SymMatrix(b.dense() - a.dense())) >= -tol;
}

Matrix kron_left_apply(const PsdMatrix& hl, const Matrix& g) {
  if (g.rows() != hl.dim()) {
    throw InvalidInput("kron_left_apply: left factor is " +
                       dims(hl.dim(), hl.dim()) + ", G is " +
                       dims(g.rows(), g.cols()));
  }
  return hl.dense() * g;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector vec(const Matrix& x) {
  Vector out(x.size());
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::RowMajor>>(out.data(), x.rows(), x.cols()) = x;
  return out;
}

Matrix unvec(const Vector& x, Index rows, Index cols) {
  if (x.size() != rows * cols) {
    throw InvalidInput("unvec: length " + std::to_string(x.size()) +
                       " does not match " + dims(rows, cols));
  }
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(x.data(), rows, cols);
}

Matrix left_partial_trace(const Matrix& m, Index d_left, Index d_right) {
  if (m.rows() != d_left * d_right || m.cols() != d_left * d_right) {
    throw InvalidInput("left_partial_trace: dimension mismatch");
  }
  Matrix out = Matrix::Zero(d_left, d_left);
  for (Index a = 0; a < d_left; ++a) {
    for (Index b = 0; b < d_left; ++b) {
      double s = 0.0;
      for (Index i = 0; i < d_right; ++i) s += m(a * d_right + i, b * d_right + i);
      out(a, b) = s;
    }
  }
  return out;
}

}  // namespace precond
