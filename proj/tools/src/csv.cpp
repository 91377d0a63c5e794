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

#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace precond::tools {

namespace {

const std::vector<std::string> kColumns = {
    "optimizer", "cone",      "lr",        "seed",      "step",        "loss_last",
    "loss_avg_plain", "loss_avg_weighted", "grad_norm", "trace_H", "elapsed_ns"};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

template <typename T>
T parse_number(const std::string& s, const std::string& column) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) {
    throw SchemaError(column, "cannot parse '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s, const std::string& column) {
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  if (s == "nan") return std::nan("");
  return parse_number<double>(s, column);
}

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

void write_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_cell(std::ostream& out, const CellResult& cell) {
  const std::string prefix = fmt::format("{},{},{},{},", to_string(cell.spec.optimizer), cell.cone,
                                         format_double(cell.spec.lr), cell.spec.seed);
  for (const auto& r : cell.records) {
    out << prefix << r.t << ',' << format_double(r.loss_last) << ','
        << format_double(r.loss_avg_plain) << ',' << format_double(r.loss_avg_weighted) << ','
        << format_double(r.grad_norm) << ',' << format_double(r.trace_H) << ',' << r.elapsed_ns
        << '\n';
  }
}

std::vector<CsvRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("<file>", "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("<header>", "empty file '" + path + "'");
  const auto header = split(line);
  for (size_t i = 0; i < kColumns.size(); ++i) {
    if (i >= header.size() || header[i] != kColumns[i]) {
      throw SchemaError(kColumns[i], "missing or out of order in header of '" + path + "'");
    }
  }
  if (header.size() != kColumns.size()) {
    throw SchemaError(header[kColumns.size()], "unexpected column in '" + path + "'");
  }
  std::vector<CsvRow> rows;
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != kColumns.size()) {
      throw SchemaError(f.size() < kColumns.size() ? kColumns[f.size()] : "<extra>",
                        "wrong field count on line " + std::to_string(line_no));
    }
    CsvRow r;
    r.optimizer = f[0];
    r.cone = f[1];
    r.lr = parse_double(f[2], "lr");
    r.seed = parse_number<std::uint64_t>(f[3], "seed");
    r.step = parse_number<std::int64_t>(f[4], "step");
    r.loss_last = parse_double(f[5], "loss_last");
    r.loss_avg_plain = parse_double(f[6], "loss_avg_plain");
    r.loss_avg_weighted = parse_double(f[7], "loss_avg_weighted");
    r.grad_norm = parse_double(f[8], "grad_norm");
    r.trace_H = parse_double(f[9], "trace_H");
    r.elapsed_ns = parse_number<std::int64_t>(f[10], "elapsed_ns");
    // Each (optimizer, cone, lr, seed) block counts 1, 2, ... without gaps.
    const bool same = !rows.empty() && rows.back().optimizer == r.optimizer &&
                      rows.back().cone == r.cone && rows.back().lr == r.lr &&
                      rows.back().seed == r.seed;
    if (r.step != (same ? rows.back().step + 1 : 1)) {
      throw SchemaError("step", "non-consecutive step on line " + std::to_string(line_no));
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw SchemaError("<rows>", "no data rows in '" + path + "'");
  return rows;
}

}  // namespace precond::tools
