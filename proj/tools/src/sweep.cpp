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

#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <tuple>

namespace precond::tools {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double final_last(const CellResult& c) {
  return c.diverged || c.records.empty() ? kInf : c.records.back().loss_last;
}

double final_avg(const RunConfig& cfg, const CellResult& c) {
  return c.diverged || c.records.empty() ? kInf : avg_criterion_loss(cfg, c.records.back());
}

}  // namespace

const Selection& SweepResult::winner(OptimizerName o, const std::string& criterion) const {
  for (const auto& s : selected) {
    if (s.optimizer == o && s.criterion == criterion) return s;
  }
  throw std::out_of_range("no selection for " + std::string(to_string(o)) + "/" + criterion);
}

int resolve_workers(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("PRECOND_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

SweepResult summarize(const RunConfig& cfg, std::vector<CellResult> cells) {
  const auto order = [&](OptimizerName o) {
    return std::find(cfg.optimizers.begin(), cfg.optimizers.end(), o) - cfg.optimizers.begin();
  };
  std::sort(cells.begin(), cells.end(), [&](const CellResult& a, const CellResult& b) {
    const auto ka = std::make_tuple(order(a.spec.optimizer), a.spec.lr_index, a.spec.seed);
    const auto kb = std::make_tuple(order(b.spec.optimizer), b.spec.lr_index, b.spec.seed);
    return ka < kb;
  });
  SweepResult out;
  for (auto o : cfg.optimizers) {
    for (size_t i = 0; i < cfg.grid.size(); ++i) {
      LrSummary s{o, cfg.grid[i], i};
      int n = 0;
      for (const auto& c : cells) {
        if (c.spec.optimizer != o || c.spec.lr_index != i) continue;
        s.mean_last += final_last(c);
        s.mean_avg += final_avg(cfg, c);
        s.diverged += c.diverged ? 1 : 0;
        ++n;
      }
      if (n == 0) continue;
      s.mean_last /= n;
      s.mean_avg /= n;
      out.summary.push_back(s);
    }
    for (const char* crit : {"last", "avg"}) {
      const LrSummary* best = nullptr;
      for (const auto& s : out.summary) {
        if (s.optimizer != o) continue;
        const double v = std::string(crit) == "last" ? s.mean_last : s.mean_avg;
        const double bv = !best ? kInf : (std::string(crit) == "last" ? best->mean_last : best->mean_avg);
        // Ties go to the smaller lr.
        if (!best || v < bv || (v == bv && s.lr < best->lr)) best = &s;
      }
      if (best) {
        out.selected.push_back({o, crit, best->lr,
                                std::string(crit) == "last" ? best->mean_last : best->mean_avg});
      }
    }
  }
  out.cells = std::move(cells);
  return out;
}

SweepResult run_sweep(const RunConfig& cfg, int workers) {
  cfg.validate();
  const auto problems = build_problems(cfg);
  std::vector<CellSpec> specs;
  for (auto o : cfg.optimizers)
    for (size_t i = 0; i < cfg.grid.size(); ++i)
      for (auto s : cfg.seeds) specs.push_back({o, cfg.grid[i], i, s});

  std::vector<CellResult> cells(specs.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  const auto work = [&] {
    for (size_t k = next++; k < specs.size(); k = next++) {
      try {
        cells[k] = run_cell(cfg, problems.at(specs[k].seed), specs[k]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = specs.size();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(specs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return summarize(cfg, std::move(cells));
}

}  // namespace precond::tools
