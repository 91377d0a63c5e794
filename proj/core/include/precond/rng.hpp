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

#ifndef PRECOND_RNG_HPP
#define PRECOND_RNG_HPP

#include <cstdint>
#include <random>

#include "precond/matrix_kernels.hpp"

namespace precond {

// Independent streams per (seed, role), so noise draws never shift the
// problem or initialization draws.
enum class StreamRole : std::uint64_t {
  Problem = 1,
  Init = 2,
  Noise = 3,
  Losses = 4,
  Property = 5,
};

// mt19937_64 seeded through seed_seq with Boost distributions; both are
// specified bit for bit, so draws match across platforms and compilers.
class Rng {
 public:
  Rng(std::uint64_t seed, StreamRole role);
  Rng(std::uint64_t seed, std::uint64_t role);

  double normal();
  double uniform(double lo = 0.0, double hi = 1.0);
  std::int64_t integer(std::int64_t lo, std::int64_t hi);  // inclusive
  Vector normal_vector(Index n);
  Matrix normal_matrix(Index rows, Index cols);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace precond

#endif  // PRECOND_RNG_HPP
