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

#ifndef PRECOND_CONE_ORACLE_HPP
#define PRECOND_CONE_ORACLE_HPP

#include <utility>
#include <vector>

#include "precond/cones.hpp"
#include "precond/matrix_kernels.hpp"

namespace precond {

// Linear span of symmetric basis matrices containing the identity.
class SubspaceFamily {
 public:
  // Validates linear independence and that I lies in the span.
  SubspaceFamily(Index dim, std::vector<Matrix> basis);

  static SubspaceFamily scalar(Index d);
  static SubspaceFamily diagonal(Index d);
  static SubspaceFamily full(Index d);
  static SubspaceFamily tridiagonal(Index d);
  static SubspaceFamily kronecker_left(Index d_left, Index d_right);
  static SubspaceFamily direct_sum(const std::vector<SubspaceFamily>& blocks);
  static SubspaceFamily for_cone(const ConeSpec& cone);

  Index dim() const { return dim_; }
  Index size() const { return static_cast<Index>(basis_.size()); }
  const std::vector<Matrix>& basis() const { return basis_; }
  const Matrix& gram() const { return gram_; }

  Matrix combine(const Vector& theta) const;
  // Coefficients of the orthogonal projection of A onto the span.
  Vector coordinates(const Matrix& a) const;

 private:
  Index dim_;
  std::vector<Matrix> basis_;
  Matrix gram_;
};

struct KroneckerPairFamily {
  Index d_left;
  Index d_right;
  Index dim() const { return d_left * d_right; }
};

struct OracleOptions {
  double tol = 1e-10;
  int max_iter = 200;
};

struct OracleResult {
  PsdMatrix h;
  double objective = 0.0;
  double stationarity = 0.0;  // Frobenius norm of the projected gradient
  double restart_gap = 0.0;   // |objective - objective from second start|
  int iterations = 0;
  std::vector<double> trace;  // objective per accepted iterate
};

// Minimizes <M, H^{-1}> + eta^2 Tr(H) over H > 0 in the span.
OracleResult oracle_minimize_subspace(const SubspaceFamily& family,
                                      const PsdMatrix& m, double eta,
                                      const OracleOptions& opts = {});

struct KronPairOptions {
  double tol = 1e-14;
  int max_alternations = 20000;
  int starts = 3;
};

struct KronPairResult {
  PsdMatrix u;
  PsdMatrix v;
  double objective = 0.0;
  int sweeps = 0;
  double multistart_spread = 0.0;  // max - min objective across starts
  Matrix product() const;
};

// Alternating minimization over U (x) V. Local method; several starts.
KronPairResult oracle_minimize_kron_pair(const KroneckerPairFamily& family,
                                         const PsdMatrix& m, double eta,
                                         const KronPairOptions& opts = {});

struct ViolationReport {
  Matrix p;   // minimizer for M
  Matrix pp;  // minimizer for M'
  double min_eig_diff = 0.0;  // lambda_min(P(M') - P(M))
  bool violated = false;
  // Diagonal entries (0-based) where P(M)[i,i] > P(M')[i,i].
  std::vector<std::pair<Index, Index>> entries;
};

ViolationReport monotonicity_probe(const SubspaceFamily& family,
                                   const PsdMatrix& m, const PsdMatrix& mp,
                                   double eta, double tol,
                                   const OracleOptions& opts = {});
ViolationReport monotonicity_probe(const KroneckerPairFamily& family,
                                   const PsdMatrix& m, const PsdMatrix& mp,
                                   double eta, double tol,
                                   const KronPairOptions& opts = {});

}  // namespace precond

#endif  // PRECOND_CONE_ORACLE_HPP
