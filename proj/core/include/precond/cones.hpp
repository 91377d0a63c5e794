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

#ifndef PRECOND_CONES_HPP
#define PRECOND_CONES_HPP

#include <string>
#include <vector>

#include "precond/matrix_kernels.hpp"

namespace precond {

enum class ConeKind { Scalar, Diagonal, Full, KroneckerLeft, DirectSum };

const char* to_string(ConeKind kind);

// A well-structured preconditioner family. Immutable once built.
class ConeSpec {
 public:
  static ConeSpec scalar(Index d);
  static ConeSpec diagonal(Index d);
  static ConeSpec full(Index d);
  static ConeSpec kronecker_left(Index d_left, Index d_right);
  static ConeSpec direct_sum(std::vector<ConeSpec> blocks);

  ConeKind kind() const { return kind_; }
  Index dim() const { return dim_; }
  Index left_dim() const { return left_; }
  Index right_dim() const { return right_; }
  const std::vector<ConeSpec>& blocks() const { return blocks_; }

  // Offsets of each block in the ambient coordinates (DirectSum only).
  std::vector<Index> block_offsets() const;

  // e.g. "diagonal(4)", "kron_left(2x3)", "sum[full(2),scalar(3)]".
  std::string name() const;

 private:
  ConeSpec(ConeKind kind, Index dim) : kind_(kind), dim_(dim) {}

  ConeKind kind_ = ConeKind::Scalar;
  Index dim_ = 0;
  Index left_ = 0;
  Index right_ = 0;
  std::vector<ConeSpec> blocks_;
};

// A structured member of a cone. Only the field matching the kind is used.
struct ConeElement {
  ConeKind kind = ConeKind::Scalar;
  double scalar = 0.0;
  Vector diag;
  PsdMatrix matrix;  // Full: H. KroneckerLeft: the left factor H_L.
  std::vector<ConeElement> blocks;
};

// Sufficient statistic of the past gradients for a cone.
//   Scalar: sum ||g||^2.  Diagonal: sum g_i^2.  Full: sum g g^T.
//   KroneckerLeft: (1/d_R) sum G G^T.  DirectSum: per block.
// eps_scale is the factor currently multiplying the eps I offset; decay
// multiplies it together with the statistic.
struct GradStat {
  ConeKind kind = ConeKind::Scalar;
  double scalar = 0.0;
  Vector diag;
  SymMatrix matrix;
  std::vector<GradStat> blocks;
  double eps_scale = 1.0;
};

GradStat zero_stat(const ConeSpec& cone);

// decay * stat + structured statistic of g g^T.
GradStat stat_update(const ConeSpec& cone, const GradStat& stat,
                     const Vector& g, double decay = 1.0);

// Structured statistic of a dense ambient PSD matrix M, with no eps offset.
GradStat stat_from_dense(const ConeSpec& cone, const PsdMatrix& m);

// argmin over the cone of <eps_scale * eps I + M, H^{-1}> + eta^2 Tr(H).
ConeElement solve_preconditioner(const ConeSpec& cone, const GradStat& stat,
                                 double eps, double eta);

Matrix dense(const ConeSpec& cone, const ConeElement& h);
double trace(const ConeSpec& cone, const ConeElement& h);

// H x and H^+ x using the structured form.
Vector apply(const ConeSpec& cone, const ConeElement& h, const Vector& x);
Vector apply_pinv(const ConeSpec& cone, const ConeElement& h, const Vector& x);

// ||x||_H = sup over unit-trace cone members of sqrt(x^T H x).
double domain_norm(const ConeSpec& cone, const Vector& x);

// |||S|||_H = inf over unit-trace cone members of sqrt(<S, H^{-1}>).
// For KroneckerLeft, S may be ambient (dimension d) or the left partial
// trace C = sum G G^T (dimension d_L).
double adaptive_norm(const ConeSpec& cone, const PsdMatrix& s);
// Same quantity read from a statistic; the eps offset is excluded.
double adaptive_norm(const ConeSpec& cone, const GradStat& stat);

// Smallest Tr(H*) over cone members with -H* <= A <= H*.
// A of ambient dimension d is used as is. A of dimension d_L dividing d is
// read as the factored form B (x) I_{d / d_L}; KroneckerLeft requires it.
// Diagonal is analytic only for diagonal A and rank-one PSD A; anything
// else throws Unsupported.
double h_smoothness(const ConeSpec& cone, const SymMatrix& a);

struct DualWitness {
  Vector witness;
  double gap = 0.0;
  double norm = 0.0;  // adaptive_norm(g g^T)
};

DualWitness dual_witness_check(const ConeSpec& cone, const Vector& g);

// True when the dense matrix has the structural zero pattern of the cone
// (and the Kronecker block structure for KroneckerLeft).
bool in_pattern(const ConeSpec& cone, const Matrix& a, double tol = 0.0);

}  // namespace precond

#endif  // PRECOND_CONES_HPP
