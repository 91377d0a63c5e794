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

#ifndef PRECOND_TESTS_GENERATORS_HPP
#define PRECOND_TESTS_GENERATORS_HPP

#include <cstdint>
#include <vector>

#include "precond/cones.hpp"
#include "precond/matrix_kernels.hpp"
#include "precond/rng.hpp"

namespace precond::testing {

inline Rng property_rng(std::uint64_t seed) {
  return Rng(seed, StreamRole::Property);
}

// A A^T with A of shape d x rank.
inline Matrix random_psd(Rng& rng, Index d, Index rank) {
  const Matrix a = rng.normal_matrix(d, rank);
  return a * a.transpose();
}

// Well conditioned positive definite matrix.
inline Matrix random_pd(Rng& rng, Index d) {
  return random_psd(rng, d, d) + 0.1 * Matrix::Identity(d, d);
}

inline Matrix random_sym(Rng& rng, Index d) {
  const Matrix a = rng.normal_matrix(d, d);
  return 0.5 * (a + a.transpose());
}

inline Index random_dim(Rng& rng, Index lo, Index hi) {
  return static_cast<Index>(rng.integer(lo, hi));
}

inline ConeSpec random_basic_cone(Rng& rng, ConeKind kind, Index max_dim) {
  switch (kind) {
    case ConeKind::Scalar:
      return ConeSpec::scalar(random_dim(rng, 1, max_dim));
    case ConeKind::Diagonal:
      return ConeSpec::diagonal(random_dim(rng, 1, max_dim));
    case ConeKind::Full:
      return ConeSpec::full(random_dim(rng, 1, max_dim));
    case ConeKind::KroneckerLeft: {
      const Index dl = random_dim(rng, 1, 4);
      const Index dr = random_dim(rng, 1, std::max<Index>(1, max_dim / dl));
      return ConeSpec::kronecker_left(dl, dr);
    }
    case ConeKind::DirectSum: {
      // Two or three blocks of the basic kinds, total dim <= max_dim.
      const Index n_blocks = random_dim(rng, 2, 3);
      std::vector<ConeSpec> blocks;
      Index left = max_dim;
      for (Index b = 0; b < n_blocks && left >= 1; ++b) {
        const Index cap = std::max<Index>(1, left - (n_blocks - b - 1));
        const auto k = static_cast<ConeKind>(rng.integer(0, 3));
        ConeSpec c = random_basic_cone(rng, k, std::min<Index>(cap, 4));
        while (c.dim() > cap) c = random_basic_cone(rng, k, std::min<Index>(cap, 4));
        left -= c.dim();
        blocks.push_back(c);
      }
      return ConeSpec::direct_sum(std::move(blocks));
    }
  }
  return ConeSpec::scalar(1);
}

inline const std::vector<ConeKind>& all_kinds() {
  static const std::vector<ConeKind> kinds = {
      ConeKind::Scalar, ConeKind::Diagonal, ConeKind::Full,
      ConeKind::KroneckerLeft, ConeKind::DirectSum};
  return kinds;
}

inline double rel_err(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace precond::testing

#endif  // PRECOND_TESTS_GENERATORS_HPP
