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

#ifndef PRECOND_TOOLS_CSV_HPP
#define PRECOND_TOOLS_CSV_HPP

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "experiment.hpp"

namespace precond::tools {

inline constexpr const char* kCsvHeader =
    "optimizer,cone,lr,seed,step,loss_last,loss_avg_plain,loss_avg_weighted,"
    "grad_norm,trace_H,elapsed_ns";

// Malformed CSV input. Names the offending column; exit code 2.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string column, const std::string& what)
      : std::runtime_error(column + ": " + what), column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

struct CsvRow {
  std::string optimizer;
  std::string cone;
  double lr = 0.0;
  std::uint64_t seed = 0;
  std::int64_t step = 0;
  double loss_last = 0.0;
  double loss_avg_plain = 0.0;
  double loss_avg_weighted = 0.0;
  double grad_norm = 0.0;
  double trace_H = 0.0;
  std::int64_t elapsed_ns = 0;
};

// 17 significant digits, so doubles round-trip.
std::string format_double(double v);

void write_header(std::ostream& out);
void write_cell(std::ostream& out, const CellResult& cell);

// Reads and validates a CSV with the exact header. Empty files, files with
// only a header and runs whose steps are not 1, 2, ... are errors.
std::vector<CsvRow> read_csv(const std::string& path);

}  // namespace precond::tools

#endif  // PRECOND_TOOLS_CSV_HPP
