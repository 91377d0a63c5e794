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


#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "experiment.hpp"
#include "precond/cones.hpp"

namespace precond::tools {

namespace {

struct Entry {
  OptimizerName optimizer;
  ConeSpec cone;
};

std::vector<Entry> table_cones(Index dl, Index dr) {
  const Index d = dl * dr;
  return {{OptimizerName::AdaGradNorm, ConeSpec::scalar(d)},
          {OptimizerName::AdaGrad, ConeSpec::diagonal(d)},
          {OptimizerName::OneSidedShampoo, ConeSpec::kronecker_left(dl, dr)},
          {OptimizerName::FullMatrix, ConeSpec::full(d)}};
}

// Pairs (inner, outer) with inner's cone contained in outer's.
const std::vector<std::pair<size_t, size_t>> kNested = {{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}};

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

struct Curve {
  std::string optimizer;
  double lr = 0.0;
  std::map<std::int64_t, std::pair<double, double>> mean;  // step -> (last, avg)
};

std::vector<Curve> best_curves(const std::vector<CsvRow>& rows) {
  // (optimizer, lr) -> step -> sums.
  std::map<std::pair<std::string, double>, std::map<std::int64_t, std::tuple<double, double, int>>> acc;
  for (const auto& r : rows) {
    auto& s = acc[{r.optimizer, r.lr}][r.step];
    std::get<0>(s) += r.loss_last;
    std::get<1>(s) += r.loss_avg_plain;
    ++std::get<2>(s);
  }
  std::map<std::string, Curve> best;
  for (const auto& [key, steps] : acc) {
    Curve c{key.first, key.second, {}};
    for (const auto& [t, s] : steps) {
      const int n = std::get<2>(s);
      c.mean[t] = {std::get<0>(s) / n, std::get<1>(s) / n};
    }
    const auto final_loss = [](const Curve& x) { return x.mean.rbegin()->second.first; };
    auto it = best.find(key.first);
    // Longest curve first (diverged runs are truncated), then lowest loss.
    if (it == best.end() || c.mean.size() > it->second.mean.size() ||
        (c.mean.size() == it->second.mean.size() && final_loss(c) < final_loss(it->second))) {
      best[key.first] = std::move(c);
    }
  }
  std::vector<Curve> out;
  for (auto& [k, c] : best) out.push_back(std::move(c));
  return out;
}

}  // namespace

std::vector<BoundRow> bound_table(const RunConfig& cfg, double lr, std::int64_t steps) {
  const QuadraticProblem p = build_problem(cfg, cfg.seeds.front());
  const Index d = p.dim();
  OptimizerConfig oc;
  oc.cone = ConeSpec::scalar(d);
  oc.eta = lr;
  OptimizerState s = init_state(oc, Vector::Zero(d));
  std::vector<Vector> xs, gs;
  for (std::int64_t t = 0; t < steps; ++t) {
    xs.push_back(s.x);
    gs.push_back(p.grad(s.x));
    adareg_step(oc, s, gs.back());
  }
  const Vector xstar = vec(p.xstar);
  std::vector<BoundRow> rows;
  for (const auto& e : table_cones(p.d_left, p.d_right)) {
    const BoundReport b = regret_bound_rhs(e.cone, xs, xstar, gs, lr, 0.0);
    rows.push_back({to_string(e.optimizer), e.cone.name(), b.d_norm, b.g_norm,
                    b.d_norm * b.g_norm, b.rhs, true});
  }
  for (auto [in, out] : kNested) {
    const double tol = 1e-9;
    const bool ok = rows[out].g_norm <= rows[in].g_norm * (1 + tol) &&
                    rows[out].d_norm >= rows[in].d_norm * (1 - tol);
    rows[out].nested_ok = rows[out].nested_ok && ok;
  }
  return rows;
}

std::vector<RateTableRow> rate_comparison(const RunConfig& cfg, std::int64_t steps) {
  const QuadraticProblem p = build_problem(cfg, cfg.seeds.front());
  const auto extremal = rate_table_extremal(cfg.d_left, cfg.d_right);
  const auto instance = rate_table(p.hmat, p.xstar);
  std::vector<RateTableRow> rows;
  for (size_t i = 0; i < extremal.size(); ++i) {
    rows.push_back({extremal[i].optimizer, extremal[i].cone.name(), extremal[i].numerator,
                    extremal[i].numerator / static_cast<double>(steps),
                    i < instance.size() ? instance[i].numerator
                                        : std::numeric_limits<double>::quiet_NaN()});
  }
  return rows;
}

ReportFiles write_report(const std::vector<std::string>& inputs, const std::string& out_dir,
                         const RunConfig& cfg) {
  std::vector<std::vector<CsvRow>> data;
  for (const auto& path : inputs) data.push_back(read_csv(path));

  std::int64_t steps = 0;
  double lr = cfg.lr;
  bool have_lr = false;
  for (const auto& rows : data) {
    for (const auto& r : rows) {
      steps = std::max(steps, r.step);
      if (!have_lr && r.optimizer == to_string(OptimizerName::AdaGradNorm)) {
        lr = r.lr;
        have_lr = true;
      }
    }
  }
  const auto bounds = bound_table(cfg, lr, steps);
  const auto rates = rate_comparison(cfg, steps);

  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  ReportFiles files;

  {
    auto out = open_out(dir / "table1.csv");
    out << "optimizer,cone,D,G,DG,regret_rhs,nested_ok\n";
    for (const auto& r : bounds) {
      out << fmt::format("{},{},{},{},{},{},{}\n", r.optimizer, r.cone, format_double(r.d_norm),
                         format_double(r.g_norm), format_double(r.product),
                         format_double(r.rhs), r.nested_ok ? 1 : 0);
    }
    files.written.push_back((dir / "table1.csv").string());
  }
  {
    auto out = open_out(dir / "table2.csv");
    out << "optimizer,cone,extremal_numerator,extremal_rate,instance_numerator\n";
    for (const auto& r : rates) {
      out << fmt::format("{},{},{},{},{}\n", r.optimizer, r.cone,
                         format_double(r.extremal_numerator), format_double(r.extremal_rate),
                         format_double(r.instance_numerator));
    }
    files.written.push_back((dir / "table2.csv").string());
  }

  std::vector<std::string> curve_files;
  for (size_t k = 0; k < data.size(); ++k) {
    const std::string name = fmt::format("curves_{}.csv", k);
    auto out = open_out(dir / name);
    out << "# optimizer,lr,step,mean_loss_last,mean_loss_avg_plain\n";
    for (const auto& c : best_curves(data[k])) {
      for (const auto& [t, m] : c.mean) {
        out << fmt::format("{},{},{},{},{}\n", c.optimizer, format_double(c.lr), t,
                           format_double(m.first), format_double(m.second));
      }
      out << "\n\n";  // gnuplot data block separator
    }
    curve_files.push_back(name);
    files.written.push_back((dir / name).string());
  }

  {
    auto out = open_out(dir / "plot.gp");
    out << "# gnuplot script; run from this directory: gnuplot plot.gp\n"
        << "set datafile separator ','\n"
        << "set logscale y\n"
        << "set xlabel 'step'\n"
        << "set terminal pngcairo size 1200,500\n";
    for (size_t k = 0; k < curve_files.size(); ++k) {
      std::set<std::string> names;
      for (const auto& r : data[k]) names.insert(r.optimizer);
      const int blocks = static_cast<int>(names.size());
      std::string words;
      for (const auto& n : names) words += (words.empty() ? "" : " ") + n;
      out << fmt::format("names = '{}'\n", words)
          << fmt::format("set output 'curves_{}.png'\n", k)
          << "set multiplot layout 1,2\n"
          << "set ylabel 'last-iterate loss'\n"
          << fmt::format("plot for [i=0:{}] '{}' index i using 3:4 with lines title word(names, i + 1)\n",
                         blocks - 1, curve_files[k])
          << "set ylabel 'average-iterate loss'\n"
          << fmt::format("plot for [i=0:{}] '{}' index i using 3:5 with lines title word(names, i + 1)\n",
                         blocks - 1, curve_files[k])
          << "unset multiplot\n";
    }
    files.written.push_back((dir / "plot.gp").string());
  }
  return files;
}

}  // namespace precond::tools
