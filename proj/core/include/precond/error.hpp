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

#ifndef PRECOND_ERROR_HPP
#define PRECOND_ERROR_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace precond {

enum class ErrorKind { InvalidInput, Unsupported, Infeasible, NotConverged };

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what)
      : Error(ErrorKind::InvalidInput, what) {}
};

class Unsupported : public Error {
 public:
  explicit Unsupported(const std::string& what)
      : Error(ErrorKind::Unsupported, what) {}
};

class Infeasible : public Error {
 public:
  explicit Infeasible(const std::string& what)
      : Error(ErrorKind::Infeasible, what) {}
};

// Carries the best iterate reached before the iteration cap.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, Eigen::MatrixXd best, double residual)
      : Error(ErrorKind::NotConverged, what),
        best_(std::move(best)),
        residual_(residual) {}
  const Eigen::MatrixXd& best() const noexcept { return best_; }
  double residual() const noexcept { return residual_; }

 private:
  Eigen::MatrixXd best_;
  double residual_;
};

}  // namespace precond

#endif  // PRECOND_ERROR_HPP
