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


#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "config.hpp"
#include "csv.hpp"
#include "experiment.hpp"
#include "precond/error.hpp"
#include "report.hpp"
#include "sweep.hpp"
#include "verify.hpp"

namespace fs = std::filesystem;
using namespace precond;
using namespace precond::tools;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kNumeric = 3;

std::ofstream open_out(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

int cmd_run(const std::string& config, const std::string& out_dir) {
  const RunConfig cfg = load_config(config);
  const auto problems = build_problems(cfg);
  auto out = open_out(fs::path(out_dir) / "run.csv");
  write_header(out);
  bool diverged = false;
  for (auto o : cfg.optimizers) {
    double sum_last = 0.0, sum_avg = 0.0;
    for (auto seed : cfg.seeds) {
      const CellResult cell = run_cell(cfg, problems.at(seed), {o, cfg.lr, 0, seed});
      write_cell(out, cell);
      diverged = diverged || cell.diverged;
      if (cell.diverged || cell.records.empty()) {
        sum_last = sum_avg = std::numeric_limits<double>::infinity();
      } else {
        sum_last += cell.records.back().loss_last;
        sum_avg += avg_criterion_loss(cfg, cell.records.back());
      }
    }
    const double n = static_cast<double>(cfg.seeds.size());
    fmt::print("{:<20} lr={:<12g} mean final loss: last={:.6e} avg={:.6e}\n", to_string(o), cfg.lr,
               sum_last / n, sum_avg / n);
  }
  if (diverged) {
    fmt::print(stderr, "error: non-finite loss; affected records truncated\n");
    return kNumeric;
  }
  return kOk;
}

int cmd_sweep(const std::string& config, const std::string& out_dir, int workers) {
  const RunConfig cfg = load_config(config);
  const SweepResult res = run_sweep(cfg, resolve_workers(workers));
  const fs::path dir(out_dir);
  {
    auto out = open_out(dir / "cells.csv");
    write_header(out);
    for (const auto& c : res.cells) write_cell(out, c);
  }
  {
    auto out = open_out(dir / "summary.csv");
    out << "optimizer,lr,mean_loss_last,mean_loss_avg,diverged\n";
    for (const auto& s : res.summary) {
      out << fmt::format("{},{},{},{},{}\n", to_string(s.optimizer), format_double(s.lr),
                         format_double(s.mean_last), format_double(s.mean_avg), s.diverged);
    }
  }
  {
    auto out = open_out(dir / "selected.csv");
    out << "optimizer,criterion,lr,mean_loss\n";
    for (const auto& s : res.selected) {
      out << fmt::format("{},{},{},{}\n", to_string(s.optimizer), s.criterion,
                         format_double(s.lr), format_double(s.mean_loss));
    }
  }
  bool all_diverged = false;
  for (const auto& s : res.selected) {
    fmt::print("{:<20} {:<4} lr={:<12g} mean final loss={:.6e}\n", to_string(s.optimizer),
               s.criterion, s.lr, s.mean_loss);
    all_diverged = all_diverged || !std::isfinite(s.mean_loss);
  }
  if (all_diverged) {
    fmt::print(stderr, "error: every learning rate diverged for at least one optimizer\n");
    return kNumeric;
  }
  return kOk;
}

int cmd_verify(const std::string& suite, const std::string& json_path) {
  if (!is_suite(suite)) {
    fmt::print(stderr, "error: suite: unknown suite '{}'\n", suite);
    return kUsage;
  }
  const SuiteReport rep = run_suite(suite);
  for (const auto& p : rep.properties) {
    fmt::print("{} {:<40} cases={:<5} max_residual={:.3e}{}\n", p.pass ? "PASS" : "FAIL", p.name,
               p.n_cases, p.max_residual, p.detail.empty() ? "" : "  " + p.detail);
  }
  if (!json_path.empty()) {
    auto out = open_out(fs::absolute(json_path));
    out << to_json(rep).dump(2) << "\n";
  }
  return rep.pass() ? kOk : kVerifyFailed;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_dir,
               const std::string& config) {
  const RunConfig cfg = config.empty() ? preset_config(Preset::Ci) : load_config(config);
  const ReportFiles files = write_report(inputs, out_dir, cfg);
  for (const auto& f : files.written) fmt::print("wrote {}\n", f);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive preconditioner experiments"};
  app.require_subcommand(1);

  std::string config, out_dir, suite, json_path;
  std::vector<std::string> inputs;
  int workers = 0;

  auto* run = app.add_subcommand("run", "Run each optimizer at the configured lr");
  run->add_option("--config", config, "YAML config")->required();
  run->add_option("--out", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Learning-rate sweep over seeds");
  sweep->add_option("--config", config, "YAML config")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--workers", workers, "Worker threads (overrides PRECOND_WORKERS)");

  auto* verify = app.add_subcommand("verify", "Run a property suite");
  verify->add_option("--suite", suite, "all|cones|counterexamples|regret|equivalences|bounds")
      ->required();
  verify->add_option("--json", json_path, "Write a JSON report");

  auto* report = app.add_subcommand("report", "Tables and a gnuplot script from run CSVs");
  report->add_option("--in", inputs, "Run CSVs")->required();
  report->add_option("--out", out_dir, "Output directory")->required();
  report->add_option("--config", config, "YAML config of the runs (default: ci preset)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(config, out_dir);
    if (*sweep) return cmd_sweep(config, out_dir, workers);
    if (*verify) return cmd_verify(suite, json_path);
    if (*report) return cmd_report(inputs, out_dir, config);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (const SchemaError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (const NumericError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kNumeric;
  } catch (const precond::InvalidInput& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kNumeric;
  }
  return kUsage;
}
