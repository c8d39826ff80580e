// Copyright 2026 The besovlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "besovlab/anisotropy.hpp"
#include "besovlab/exponent.hpp"
#include "besovlab/quasinorms.hpp"
#include "besovlab/torus_grid.hpp"

namespace besov {

enum class Command { Norm, Trace, Extend, Counterexample, EmbeddingCheck, NppCheck, PhiTransform };

std::string to_string(Command c);

struct PartitionConfig {
  std::optional<int> levels;
  double inner = 1.0;
  double outer = 2.0;
};

struct CounterexampleConfig {
  std::string family = "uk";  // uk, vk, gk
  std::vector<Exponent> p{Exponent(1.0), Exponent(2.0)};
  std::vector<Exponent> q{Exponent(0.5), Exponent(1.0), Exponent(2.0)};
  std::vector<int> k{4, 8, 16, 32, 64};
  double tolerance = 0.15;
  Exponent r = Exponent(0.5);  // gk trace space
  std::vector<Exponent> u{Exponent(0.5), Exponent(1.0)};
};

struct EmbeddingConfig {
  int trials = 100;
  std::optional<double> delta;  // empty: source-white
  /// Extra grids for the refinement comparison; the verdict needs at least two grids in total.
  std::vector<std::vector<std::size_t>> refine;
  double max_variation = 2.0;
};

struct NppConfig {
  std::vector<int> levels;  // empty: 1..J
  int trials = 20;
  Exponent p = Exponent(1.0);
  double max_spread = 2.0;
};

struct ExtendConfig {
  double eta_lo = 1.0;
  double eta_hi = 2.0;
  double tolerance = 1e-8;
};

struct RunConfig {
  Command command = Command::Norm;
  std::vector<std::size_t> grid{64, 64};
  int base_scale = 4;
  std::vector<double> anisotropy;  // empty: taken from the input file, else isotropic
  PartitionConfig partition;
  SpaceParams space;
  std::optional<std::filesystem::path> input;
  std::uint64_t seed = 1;
  std::filesystem::path output = "besovlab-out";
  CounterexampleConfig counterexample;
  EmbeddingConfig embedding;
  NppConfig npp;
  ExtendConfig extend;

  /// Every invalid field is reported with its key path; throws ConfigError listing all of them.
  static RunConfig parse(const std::string& json_text);
};

/// JSON text of `base` with `overrides` merged in key by key (objects recursively, anything else
/// replaced). ConfigError when either does not parse.
std::string merge_config(const std::string& base, const std::string& overrides);

struct RunResult {
  int exit_code = 0;   // 0 ok, 1 failed check, 2 bad config or input, 3 capacity
  std::string message; // one line for the terminal
  std::vector<std::filesystem::path> artifacts;
};

/// Runs the command; summary.json is written to the output directory whenever it can be created.
RunResult run(const RunConfig& config);

/// Parses, validates and runs; configuration errors give exit code 2 instead of an exception.
RunResult run_json(const std::string& json_text);

}  // namespace besov
