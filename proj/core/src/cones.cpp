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

#include "precond/cones.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "precond/error.hpp"

namespace precond {

namespace {

void require_dim(const ConeSpec& cone, Index n, const char* op) {
  if (n != cone.dim()) {
    throw InvalidInput(std::string(op) + ": expected dimension " +
                       std::to_string(cone.dim()) + " for " + cone.name() +
                       ", got " + std::to_string(n));
  }
}

double sum_abs_eigenvalues(const SymMatrix& a) {
  return sym_eig(a).values.cwiseAbs().sum();
}

double max_abs_eigenvalue(const SymMatrix& a) {
  return sym_eig(a).values.cwiseAbs().maxCoeff();
}

double trace_sqrt(const PsdMatrix& s) {
  return psd_power(s, 0.5).trace();
}

// min Tr(D) over diagonal D with -D <= A <= D, when it has a closed form.
double diagonal_h_smoothness(const SymMatrix& a) {
  const Matrix& m = a.dense();
  const Matrix off = m - Matrix(m.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() == 0.0) return m.diagonal().cwiseAbs().sum();
  const EigenDecomposition e = sym_eig(a);
  const Index n = e.values.size();
  const double lmax = e.values(0);
  const double rest = n > 1 ? std::max(std::abs(e.values(1)),
                                       std::abs(e.values(n - 1)))
                            : 0.0;
  // Rank-one PSD A = v v^T: the optimum is D_ii = |v_i| * sum_j |v_j|.
  if (lmax > 0.0 && rest <= 1e-10 * lmax) {
    const Vector v = std::sqrt(lmax) * e.vectors.col(0);
    const double s = v.cwiseAbs().sum();
    return s * s;
  }
  throw Unsupported(
      "diagonal-cone smoothness has no closed form for this matrix");
}

}  // namespace

const char* to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::Scalar:
      return "scalar";
    case ConeKind::Diagonal:
      return "diagonal";
    case ConeKind::Full:
      return "full";
    case ConeKind::KroneckerLeft:
      return "kron_left";
    case ConeKind::DirectSum:
      return "sum";
  }
  return "unknown";
}

ConeSpec ConeSpec::scalar(Index d) {
  if (d < 1) throw InvalidInput("scalar cone needs d >= 1");
  return ConeSpec(ConeKind::Scalar, d);
}

ConeSpec ConeSpec::diagonal(Index d) {
  if (d < 1) throw InvalidInput("diagonal cone needs d >= 1");
  return ConeSpec(ConeKind::Diagonal, d);
}

ConeSpec ConeSpec::full(Index d) {
  if (d < 1) throw InvalidInput("full cone needs d >= 1");
  return ConeSpec(ConeKind::Full, d);
}

ConeSpec ConeSpec::kronecker_left(Index d_left, Index d_right) {
  if (d_left < 1 || d_right < 1) {
    throw InvalidInput("kronecker-left cone needs d_L, d_R >= 1");
  }
  ConeSpec out(ConeKind::KroneckerLeft, d_left * d_right);
  out.left_ = d_left;
  out.right_ = d_right;
  return out;
}

ConeSpec ConeSpec::direct_sum(std::vector<ConeSpec> blocks) {
  if (blocks.empty()) throw InvalidInput("direct sum needs at least one block");
  Index d = 0;
  for (const auto& b : blocks) d += b.dim();
  ConeSpec out(ConeKind::DirectSum, d);
  out.blocks_ = std::move(blocks);
  return out;
}

std::vector<Index> ConeSpec::block_offsets() const {
  std::vector<Index> out;
  Index off = 0;
  for (const auto& b : blocks_) {
    out.push_back(off);
    off += b.dim();
  }
  return out;
}

std::string ConeSpec::name() const {
  switch (kind_) {
    case ConeKind::KroneckerLeft:
      return "kron_left(" + std::to_string(left_) + "x" +
             std::to_string(right_) + ")";
    case ConeKind::DirectSum: {
      std::string s = "sum[";
      for (size_t i = 0; i < blocks_.size(); ++i) {
        if (i) s += ",";
        s += blocks_[i].name();
      }
      return s + "]";
    }
    default:
      return std::string(to_string(kind_)) + "(" + std::to_string(dim_) + ")";
  }
}

GradStat zero_stat(const ConeSpec& cone) {
  GradStat s;
  s.kind = cone.kind();
  switch (cone.kind()) {
    case ConeKind::Scalar:
      break;
    case ConeKind::Diagonal:
      s.diag = Vector::Zero(cone.dim());
      break;
    case ConeKind::Full:
      s.matrix = SymMatrix::zero(cone.dim());
      break;
    case ConeKind::KroneckerLeft:
      s.matrix = SymMatrix::zero(cone.left_dim());
      break;
    case ConeKind::DirectSum:
      for (const auto& b : cone.blocks()) s.blocks.push_back(zero_stat(b));
      break;
  }
  return s;
}

GradStat stat_update(const ConeSpec& cone, const GradStat& stat,
                     const Vector& g, double decay) {
  require_dim(cone, g.size(), "stat_update");
  if (!(decay > 0.0 && decay <= 1.0)) {
    throw InvalidInput("stat_update: decay must lie in (0, 1]");
  }
  GradStat s;
  s.kind = cone.kind();
  s.eps_scale = decay * stat.eps_scale;
  switch (cone.kind()) {
    case ConeKind::Scalar:
      s.scalar = decay * stat.scalar + g.squaredNorm();
      break;
    case ConeKind::Diagonal:
      s.diag = decay * stat.diag + g.cwiseAbs2();
      break;
    case ConeKind::Full:
      s.matrix = SymMatrix(decay * stat.matrix.dense() + g * g.transpose());
      break;
    case ConeKind::KroneckerLeft: {
      const Matrix gm = unvec(g, cone.left_dim(), cone.right_dim());
      s.matrix = SymMatrix(decay * stat.matrix.dense() +
                           (gm * gm.transpose()) /
                               static_cast<double>(cone.right_dim()));
      break;
    }
    case ConeKind::DirectSum: {
      const auto offs = cone.block_offsets();
      for (size_t i = 0; i < cone.blocks().size(); ++i) {
        const auto& b = cone.blocks()[i];
        s.blocks.push_back(stat_update(b, stat.blocks[i],
                                       g.segment(offs[i], b.dim()), decay));
      }
      break;
    }
  }
  return s;
}

GradStat stat_from_dense(const ConeSpec& cone, const PsdMatrix& m) {
  require_dim(cone, m.dim(), "stat_from_dense");
  GradStat s;
  s.kind = cone.kind();
  const Matrix& a = m.dense();
  switch (cone.kind()) {
    case ConeKind::Scalar:
      s.scalar = a.trace();
      break;
    case ConeKind::Diagonal:
      s.diag = a.diagonal();
      break;
    case ConeKind::Full:
      s.matrix = m.sym();
      break;
    case ConeKind::KroneckerLeft:
      s.matrix = SymMatrix(
          left_partial_trace(a, cone.left_dim(), cone.right_dim()) /
          static_cast<double>(cone.right_dim()));
      break;
    case ConeKind::DirectSum: {
      const auto offs = cone.block_offsets();
      for (size_t i = 0; i < cone.blocks().size(); ++i) {
        const auto& b = cone.blocks()[i];
        s.blocks.push_back(stat_from_dense(
            b, PsdMatrix(Matrix(a.block(offs[i], offs[i], b.dim(), b.dim())))));
      }
      break;
    }
  }
  return s;
}

ConeElement solve_preconditioner(const ConeSpec& cone, const GradStat& stat,
                                 double eps, double eta) {
  if (!(eta > 0.0)) throw InvalidInput("solve_preconditioner: eta must be > 0");
  if (!(eps >= 0.0)) throw InvalidInput("solve_preconditioner: eps must be >= 0");
  const double e = eps * stat.eps_scale;
  ConeElement h;
  h.kind = cone.kind();
  switch (cone.kind()) {
    case ConeKind::Scalar:
      h.scalar = std::sqrt(e + stat.scalar / static_cast<double>(cone.dim())) / eta;
      break;
    case ConeKind::Diagonal:
      h.diag = (stat.diag.array() + e).cwiseMax(0.0).sqrt() / eta;
      break;
    case ConeKind::Full:
    case ConeKind::KroneckerLeft: {
      const Index n = stat.matrix.dim();
      const PsdMatrix shifted(
          SymMatrix(stat.matrix.dense() + e * Matrix::Identity(n, n)));
      EigenDecomposition root = psd_power(shifted, 0.5).eig();
      root.values /= eta;
      h.matrix = PsdMatrix::from_eig(std::move(root));
      break;
    }
    case ConeKind::DirectSum:
      for (size_t i = 0; i < cone.blocks().size(); ++i) {
        GradStat bs = stat.blocks[i];
        bs.eps_scale = stat.eps_scale;
        h.blocks.push_back(solve_preconditioner(cone.blocks()[i], bs, eps, eta));
      }
      break;
  }
  return h;
}

Matrix dense(const ConeSpec& cone, const ConeElement& h) {
  const Index d = cone.dim();
  switch (cone.kind()) {
    case ConeKind::Scalar:
      return h.scalar * Matrix::Identity(d, d);
    case ConeKind::Diagonal:
      return h.diag.asDiagonal();
    case ConeKind::Full:
      return h.matrix.dense();
    case ConeKind::KroneckerLeft:
      return kron(h.matrix.dense(),
                  Matrix::Identity(cone.right_dim(), cone.right_dim()));
    case ConeKind::DirectSum: {
      Matrix out = Matrix::Zero(d, d);
      const auto offs = cone.block_offsets();
      for (size_t i = 0; i < cone.blocks().size(); ++i) {
        const auto& b = cone.blocks()[i];
        out.block(offs[i], offs[i], b.dim(), b.dim()) = dense(b, h.blocks[i]);
      }
      return out;
    }
  }
  return {};
}

double trace(const ConeSpec& cone, const ConeElement& h) {
  switch (cone.kind()) {
    case ConeKind::Scalar:
      return h.scalar * static_cast<double>(cone.dim());
    case ConeKind::Diagonal:
      return h.diag.sum();
    case ConeKind::Full:
      return h.matrix.trace();
    case ConeKind::KroneckerLeft:
      return h.matrix.trace() * static_cast<double>(cone.right_dim());
    case ConeKind::DirectSum: {
      double s = 0.0;
      for (size_t i = 0; i < cone.blocks().size(); ++i) {
        s += trace(cone.blocks()[i], h.blocks[i]);
      }
      return s;
    }
  }
  return 0.0;
}

namespace {

Vector apply_power(const ConeSpec& cone, const ConeElement& h, const Vector& x,
                   double p) {
  require_dim(cone, x.size(), "apply");
  switch (cone.kind()) {
    case ConeKind::Scalar:
      return pinv_power(h.scalar, h.scalar, p) * x;
    case ConeKind::Diagonal: {
      const double dmax = h.diag.size() ? h.diag.maxCoeff() : 0.0;
      Vector out(x.size());
      for (Index i = 0; i < x.size(); ++i) {
        out(i) = pinv_power(h.diag(i), dmax, p) * x(i);
      }
      return out;
    }
    case ConeKind::Full:
      return psd_power_apply(h.matrix, p, x);
    case ConeKind::KroneckerLeft:
      return vec(psd_power_apply(
          h.matrix, p, unvec(x, cone.left_dim(), cone.right_dim())));
    case ConeKind::DirectSum: {
      Vector out(x.size());
      const auto offs = cone.block_offsets();
      for (size_t i = 0; i < cone.blocks().size(); ++i) {
        const auto& b = cone.blocks()[i];
        out.segment(offs[i], b.dim()) =
            apply_power(b, h.blocks[i], x.segment(offs[i], b.dim()), p);
      }
      return out;
    }
  }
  return {};
}

}  // namespace

Vector apply(const ConeSpec& cone, const ConeElement& h, const Vector& x) {
  return apply_power(cone, h, x, 1.0);
}

Vector apply_pinv(const ConeSpec& cone, const ConeElement& h, const Vector& x) {
  return apply_power(cone, h, x, -1.0);
}

double domain_norm(const ConeSpec& cone, const Vector& x) {
  require_dim(cone, x.size(), "domain_norm");
  switch (cone.kind()) {
    case ConeKind::Scalar:
      return x.norm() / std::sqrt(static_cast<double>(cone.dim()));
    case ConeKind::Diagonal:
      return x.cwiseAbs().maxCoeff();
    case ConeKind::Full:
      return x.norm();
    case ConeKind::KroneckerLeft: {
      const Matrix xm = unvec(x, cone.left_dim(), cone.right_dim());
      const double op = Eigen::JacobiSVD<Matrix>(xm).singularValues()(0);
      return op / std::sqrt(static_cast<double>(cone.right_dim()));
    }
    case ConeKind::DirectSum: {
      double m = 0.0;
      const auto offs = cone.block_offsets();
      for (size_t i = 0; i < cone.blocks().size(); ++i) {
        const auto& b = cone.blocks()[i];
        m = std::max(m, domain_norm(b, x.segment(offs[i], b.dim())));
      }
      return m;
    }
  }
  return 0.0;
}

double adaptive_norm(const ConeSpec& cone, const PsdMatrix& s) {
  if (cone.kind() == ConeKind::KroneckerLeft && s.dim() == cone.left_dim() &&
      cone.left_dim() != cone.dim()) {
    return std::sqrt(static_cast<double>(cone.right_dim())) * trace_sqrt(s);
  }
  require_dim(cone, s.dim(), "adaptive_norm");
  const Matrix& a = s.dense();
  switch (cone.kind()) {
    case ConeKind::Scalar:
      return std::sqrt(static_cast<double>(cone.dim())) *
             std::sqrt(std::max(0.0, a.trace()));
    case ConeKind::Diagonal:
      return a.diagonal().cwiseMax(0.0).cwiseSqrt().sum();
    case ConeKind::Full:
      return trace_sqrt(s);
    case ConeKind::KroneckerLeft: {
      const PsdMatrix c(
          left_partial_trace(a, cone.left_dim(), cone.right_dim()));
      return std::sqrt(static_cast<double>(cone.right_dim())) * trace_sqrt(c);
    }
    case ConeKind::DirectSum: {
      double sum = 0.0;
      const auto offs = cone.block_offsets();
      for (size_t i = 0; i < cone.blocks().size(); ++i) {
        const auto& b = cone.blocks()[i];
        sum += adaptive_norm(
            b, PsdMatrix(Matrix(a.block(offs[i], offs[i], b.dim(), b.dim()))));
      }
      return sum;
    }
  }
  return 0.0;
}

double adaptive_norm(const ConeSpec& cone, const GradStat& stat) {
  switch (cone.kind()) {
    case ConeKind::Scalar:
      return std::sqrt(static_cast<double>(cone.dim())) *
             std::sqrt(std::max(0.0, stat.scalar));
    case ConeKind::Diagonal:
      return stat.diag.cwiseMax(0.0).cwiseSqrt().sum();
    case ConeKind::Full:
      return trace_sqrt(PsdMatrix(stat.matrix));
    case ConeKind::KroneckerLeft: {
      const double dr = static_cast<double>(cone.right_dim());
      return std::sqrt(dr) *
             trace_sqrt(PsdMatrix(SymMatrix(dr * stat.matrix.dense())));
    }
    case ConeKind::DirectSum: {
      double sum = 0.0;
      for (size_t i = 0; i < cone.blocks().size(); ++i) {
        sum += adaptive_norm(cone.blocks()[i], stat.blocks[i]);
      }
      return sum;
    }
  }
  return 0.0;
}

double h_smoothness(const ConeSpec& cone, const SymMatrix& a) {
  const Index n = a.dim();
  if (n < 1 || cone.dim() % n != 0) {
    throw InvalidInput("h_smoothness: dimension " + std::to_string(n) +
                       " incompatible with " + cone.name());
  }
  const double lift = static_cast<double>(cone.dim() / n);
  switch (cone.kind()) {
    case ConeKind::Scalar:
      return static_cast<double>(cone.dim()) * max_abs_eigenvalue(a);
    case ConeKind::Full:
      return lift * sum_abs_eigenvalues(a);
    case ConeKind::Diagonal:
      return lift * diagonal_h_smoothness(a);
    case ConeKind::KroneckerLeft:
      if (n != cone.left_dim()) {
        throw InvalidInput(
            "h_smoothness: kronecker-left cone takes the left factor B");
      }
      return static_cast<double>(cone.right_dim()) * sum_abs_eigenvalues(a);
    case ConeKind::DirectSum: {
      if (n != cone.dim()) {
        throw InvalidInput("h_smoothness: direct sum needs an ambient matrix");
      }
      const auto offs = cone.block_offsets();
      Matrix rest = a.dense();
      double sum = 0.0;
      for (size_t i = 0; i < cone.blocks().size(); ++i) {
        const auto& b = cone.blocks()[i];
        sum += h_smoothness(
            b, SymMatrix(Matrix(a.dense().block(offs[i], offs[i], b.dim(), b.dim()))));
        rest.block(offs[i], offs[i], b.dim(), b.dim()).setZero();
      }
      if (rest.cwiseAbs().maxCoeff() != 0.0) {
        throw Unsupported(
            "h_smoothness: direct sum with coupling between blocks");
      }
      return sum;
    }
  }
  return 0.0;
}

DualWitness dual_witness_check(const ConeSpec& cone, const Vector& g) {
  require_dim(cone, g.size(), "dual_witness_check");
  if (!g.allFinite() || g.cwiseAbs().maxCoeff() == 0.0) {
    throw InvalidInput("dual_witness_check: gradient must be finite and nonzero");
  }
  const GradStat stat = stat_update(cone, zero_stat(cone), g);
  const ConeElement h = solve_preconditioner(cone, stat, 0.0, 1.0);
  // Trace normalization does not change the direction of H^+ g.
  const Vector dir = apply_pinv(cone, h, g);
  DualWitness out;
  out.witness = dir / domain_norm(cone, dir);
  out.norm = adaptive_norm(cone, stat);
  out.gap = std::abs(g.dot(out.witness) - out.norm);
  return out;
}

bool in_pattern(const ConeSpec& cone, const Matrix& a, double tol) {
  const Index d = cone.dim();
  if (a.rows() != d || a.cols() != d) return false;
  switch (cone.kind()) {
    case ConeKind::Scalar: {
      const double c = a(0, 0);
      return (a - c * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
    }
    case ConeKind::Diagonal:
      return (a - Matrix(a.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= tol;
    case ConeKind::Full:
      return true;
    case ConeKind::KroneckerLeft: {
      const Index dl = cone.left_dim();
      const Index dr = cone.right_dim();
      Matrix b(dl, dl);
      for (Index p = 0; p < dl; ++p)
        for (Index q = 0; q < dl; ++q) b(p, q) = a(p * dr, q * dr);
      return (a - kron(b, Matrix::Identity(dr, dr))).cwiseAbs().maxCoeff() <= tol;
    }
    case ConeKind::DirectSum: {
      Matrix rest = a;
      const auto offs = cone.block_offsets();
      for (size_t i = 0; i < cone.blocks().size(); ++i) {
        const auto& b = cone.blocks()[i];
        if (!in_pattern(b, Matrix(a.block(offs[i], offs[i], b.dim(), b.dim())), tol)) {
          return false;
        }
        rest.block(offs[i], offs[i], b.dim(), b.dim()).setZero();
      }
      return rest.cwiseAbs().maxCoeff() <= tol;
    }
  }
  return false;
}

}  // namespace precond
