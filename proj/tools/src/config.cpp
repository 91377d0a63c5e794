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

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "precond/error.hpp"

namespace precond::tools {

const char* to_string(Preset p) {
  switch (p) {
    case Preset::Ci:
      return "ci";
    case Preset::Desk:
      return "desk";
    case Preset::Paper:
      return "paper";
  }
  return "?";
}

const char* to_string(OptimizerName o) {
  switch (o) {
    case OptimizerName::AdaGradNorm:
      return "adagrad_norm";
    case OptimizerName::AdaGrad:
      return "adagrad";
    case OptimizerName::OneSidedShampoo:
      return "one_sided_shampoo";
    case OptimizerName::FullMatrix:
      return "full_matrix_adagrad";
    case OptimizerName::TwoSidedShampoo:
      return "two_sided_shampoo";
  }
  return "?";
}

OptimizerName parse_optimizer(const std::string& s) {
  for (auto o : {OptimizerName::AdaGradNorm, OptimizerName::AdaGrad,
                 OptimizerName::OneSidedShampoo, OptimizerName::FullMatrix,
                 OptimizerName::TwoSidedShampoo}) {
    if (s == to_string(o)) return o;
  }
  throw ConfigError("optimizers", "unknown optimizer '" + s + "'");
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points < 1) throw ConfigError("grid_points", "must be >= 1");
  if (!(lo > 0.0) || !(hi >= lo)) throw ConfigError("grid_min", "need 0 < grid_min <= grid_max");
  std::vector<double> g;
  if (points == 1) return {lo};
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < points; ++i) {
    g.push_back(std::pow(10.0, a + (b - a) * i / (points - 1)));
  }
  return g;
}

RunConfig preset_config(Preset p) {
  RunConfig c;
  c.preset = p;
  Index d = 20;
  int points = 8;
  switch (p) {
    case Preset::Ci:
      c.steps = 30;
      c.seeds = {0, 1};
      break;
    case Preset::Desk:
      d = 100;
      c.steps = 100;
      c.seeds = {0, 1, 2, 3, 4};
      points = 20;
      break;
    case Preset::Paper:
      d = 1000;
      c.steps = 100;
      c.seeds = {0, 1, 2, 3, 4};
      points = 60;
      break;
  }
  c.d_left = d;
  c.d_right = d;
  c.grid = log_grid(1e-4, 1e2, points);
  return c;
}

void RunConfig::validate() const {
  if (d_left < 1) throw ConfigError("d_left", "must be >= 1");
  if (d_right < 1) throw ConfigError("d_right", "must be >= 1");
  if (steps < 1) throw ConfigError("steps", "must be >= 1");
  if (seeds.empty()) throw ConfigError("seeds", "must be nonempty");
  if (optimizers.empty()) throw ConfigError("optimizers", "must be nonempty");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("lr", "must be > 0");
  for (double g : grid) {
    if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("grid", "values must be > 0");
  }
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("eps", "must be >= 0");
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw ConfigError("noise_variance", "must be >= 0");
  }
  if (!(beta2 > 0.0 && beta2 <= 1.0)) throw ConfigError("beta2", "must lie in (0, 1]");
  if (mode == Mode::AdaReg && beta2 != 1.0) {
    throw ConfigError("beta2", "mode adareg requires beta2 = 1");
  }
  if (mode == Mode::EmaAdaReg && beta2 == 1.0) {
    throw ConfigError("beta2", "mode ema requires beta2 < 1");
  }
  if (mode != Mode::AdaReg && mode != Mode::WeightedAdaReg && mode != Mode::EmaAdaReg) {
    throw ConfigError("mode", "must be adareg, weighted or ema");
  }
  for (auto o : optimizers) {
    if (o == OptimizerName::TwoSidedShampoo && mode != Mode::AdaReg) {
      throw ConfigError("optimizers", "two_sided_shampoo supports mode adareg only");
    }
  }
  try {
    (void)spectrum.eigenvalues(d_left);
  } catch (const Error& e) {
    throw ConfigError("spectrum", e.what());
  }
}

namespace {

const std::set<std::string> kKeys = {
    "preset", "d", "d_left", "d_right", "spectrum", "normalize_trace",
    "noise_variance", "optimizers", "mode", "beta2", "eps", "lr", "grid",
    "grid_min", "grid_max", "grid_points", "steps", "seeds", "record_timing",
    "full_route", "init"};

template <typename T>
T scalar_as(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) throw ConfigError(key, "expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key, "cannot parse '" + n.Scalar() + "'");
  }
}

template <typename T>
std::vector<T> list_as(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) throw ConfigError(key, "expected a list");
  std::vector<T> out;
  for (const auto& item : n) out.push_back(scalar_as<T>(item, key));
  return out;
}

Preset parse_preset(const std::string& s) {
  if (s == "ci") return Preset::Ci;
  if (s == "desk") return Preset::Desk;
  if (s == "paper") return Preset::Paper;
  throw ConfigError("preset", "unknown preset '" + s + "'");
}

Mode parse_mode(const std::string& s) {
  if (s == "adareg") return Mode::AdaReg;
  if (s == "weighted") return Mode::WeightedAdaReg;
  if (s == "ema") return Mode::EmaAdaReg;
  throw ConfigError("mode", "unknown mode '" + s + "'");
}

FullRoute parse_route(const std::string& s) {
  if (s == "auto") return FullRoute::Auto;
  if (s == "direct") return FullRoute::Direct;
  if (s == "reduced") return FullRoute::Reduced;
  throw ConfigError("full_route", "unknown route '" + s + "'");
}

RunConfig from_node(const YAML::Node& root) {
  if (!root || root.IsNull()) return preset_config(Preset::Ci);
  if (!root.IsMap()) throw ConfigError("<root>", "expected a key-value mapping");
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    if (!kKeys.count(key)) throw ConfigError(key, "unknown key");
  }
  const auto has = [&](const char* k) { return static_cast<bool>(root[k]); };

  RunConfig c = preset_config(
      has("preset") ? parse_preset(scalar_as<std::string>(root["preset"], "preset")) : Preset::Ci);
  if (has("d")) {
    if (has("d_left") || has("d_right")) throw ConfigError("d", "conflicts with d_left/d_right");
    c.d_left = c.d_right = scalar_as<Index>(root["d"], "d");
  }
  if (has("d_left")) c.d_left = scalar_as<Index>(root["d_left"], "d_left");
  if (has("d_right")) c.d_right = scalar_as<Index>(root["d_right"], "d_right");
  if (has("spectrum")) {
    const auto n = root["spectrum"];
    if (n.IsScalar()) {
      if (n.Scalar() != "paper") throw ConfigError("spectrum", "expected 'paper' or a list");
      c.spectrum = SpectrumSpec::paper();
    } else {
      try {
        c.spectrum = SpectrumSpec::explicit_values(list_as<double>(n, "spectrum"));
      } catch (const Error& e) {
        throw ConfigError("spectrum", e.what());
      }
    }
  }
  if (has("normalize_trace")) c.normalize_trace = scalar_as<bool>(root["normalize_trace"], "normalize_trace");
  if (has("noise_variance")) c.noise_variance = scalar_as<double>(root["noise_variance"], "noise_variance");
  if (has("optimizers")) {
    c.optimizers.clear();
    for (const auto& s : list_as<std::string>(root["optimizers"], "optimizers")) {
      c.optimizers.push_back(parse_optimizer(s));
    }
  }
  if (has("mode")) {
    c.mode = parse_mode(scalar_as<std::string>(root["mode"], "mode"));
    if (c.mode == Mode::EmaAdaReg && !has("beta2")) c.beta2 = 0.95;
  }
  if (has("beta2")) c.beta2 = scalar_as<double>(root["beta2"], "beta2");
  if (has("eps")) c.eps = scalar_as<double>(root["eps"], "eps");
  if (has("lr")) c.lr = scalar_as<double>(root["lr"], "lr");
  const bool range = has("grid_min") || has("grid_max") || has("grid_points");
  if (has("grid")) {
    if (range) throw ConfigError("grid", "conflicts with grid_min/grid_max/grid_points");
    c.grid = list_as<double>(root["grid"], "grid");
    if (c.grid.empty()) throw ConfigError("grid", "must be nonempty");
  } else if (range) {
    const double lo = has("grid_min") ? scalar_as<double>(root["grid_min"], "grid_min") : 1e-4;
    const double hi = has("grid_max") ? scalar_as<double>(root["grid_max"], "grid_max") : 1e2;
    const int n = has("grid_points") ? scalar_as<int>(root["grid_points"], "grid_points")
                                     : static_cast<int>(c.grid.size());
    c.grid = log_grid(lo, hi, n);
  }
  if (has("steps")) c.steps = scalar_as<std::int64_t>(root["steps"], "steps");
  if (has("seeds")) {
    const auto n = root["seeds"];
    if (n.IsScalar()) {
      const auto count = scalar_as<std::int64_t>(n, "seeds");
      if (count < 1) throw ConfigError("seeds", "count must be >= 1");
      c.seeds.clear();
      for (std::int64_t s = 0; s < count; ++s) c.seeds.push_back(static_cast<std::uint64_t>(s));
    } else {
      c.seeds = list_as<std::uint64_t>(n, "seeds");
    }
  }
  if (has("record_timing")) c.record_timing = scalar_as<bool>(root["record_timing"], "record_timing");
  if (has("full_route")) c.full_route = parse_route(scalar_as<std::string>(root["full_route"], "full_route"));
  if (has("init")) {
    const auto v = scalar_as<std::string>(root["init"], "init");
    if (v == "zero") {
      c.init = Init::Zero;
    } else if (v == "optimum") {
      c.init = Init::Optimum;
    } else {
      throw ConfigError("init", "expected 'zero' or 'optimum'");
    }
  }
  c.validate();
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<document>", e.what());
  }
  return from_node(root);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace precond::tools
