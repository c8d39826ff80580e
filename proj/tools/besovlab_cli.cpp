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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "besovlab/besovlab.h"
#include "json.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

json number_list(const std::string& text, char sep, const char* flag) {
  json out = json::array();
  for (const auto& t : split(text, sep)) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size()) throw CLI::ValidationError(flag, "'" + t + "' is not a number");
    if (std::fabs(v) < 1e15 && v == static_cast<double>(static_cast<long long>(v))) {
      out.push_back(static_cast<long long>(v));
    } else {
      out.push_back(v);
    }
  }
  return out;
}

json exponent_list(const std::string& text) {
  json out = json::array();
  for (const auto& t : split(text, ',')) out.push_back(t);
  return out;
}

int fail(const std::string& what, int code) {
  std::cerr << "besovlab: " << what << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic Besov and Lizorkin-Triebel quasi-norms, traces and experiments"};
  app.set_version_flag("--version", std::string(bl_version()));

  std::string command, config_path, out_dir, grid, aniso, input, family, p, q, k, scale;
  std::uint64_t seed = 0;
  int trials = 0, base_scale = 0;
  double s = 0;
  app.add_option("command", command, "norm, trace, extend, counterexample, embedding-check, npp-check, phi-transform");
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--grid", grid, "points per axis, e.g. 256x256");
  auto* m_opt = app.add_option("--base-scale", base_scale, "period 2 pi M of every axis")->check(CLI::PositiveNumber);
  app.add_option("--aniso", aniso, "anisotropy weights, e.g. 1,2");
  app.add_option("--input", input, "function file");
  app.add_option("--family", family, "counterexample family: uk, vk or gk");
  app.add_option("--p", p, "integrability exponent(s), comma separated, e.g. 1/2,inf");
  app.add_option("--q", q, "sum exponent(s), comma separated");
  app.add_option("--k", k, "family indices, comma separated");
  auto* s_opt = app.add_option("--s", s, "smoothness");
  app.add_option("--scale", scale, "B, F or A");
  auto* trials_opt = app.add_option("--trials", trials, "random trials")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  std::string base;
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) return fail("cannot read " + config_path, 2);
    base.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  json o = json::object();
  try {
    if (command.empty() && !base.empty()) {
      const json tree = json::parse(base, nullptr, false);
      if (tree.is_object() && tree.contains("command") && tree["command"].is_string()) command = tree["command"];
    }
    if (!command.empty()) o["command"] = command;
    if (*seed_opt) o["seed"] = seed;
    if (!out_dir.empty()) o["output"] = out_dir;
    if (!grid.empty()) o["grid"]["points"] = number_list(grid, 'x', "--grid");
    if (*m_opt) o["grid"]["base_scale"] = base_scale;
    if (!aniso.empty()) o["anisotropy"] = number_list(aniso, ',', "--aniso");
    if (!input.empty()) o["input"] = input;
    if (command == "counterexample") {
      if (!family.empty()) o["counterexample"]["family"] = family;
      if (!p.empty()) o["counterexample"]["p"] = exponent_list(p);
      if (!q.empty()) o["counterexample"]["q"] = exponent_list(q);
      if (!k.empty()) o["counterexample"]["k"] = number_list(k, ',', "--k");
    } else if (command == "npp-check") {
      if (!p.empty()) o["npp"]["p"] = p;
    } else {
      if (!p.empty()) o["space"]["p"] = p;
      if (!q.empty()) o["space"]["q"] = q;
    }
    if (*s_opt) o["space"]["s"] = s;
    if (!scale.empty()) o["space"]["scale"] = scale;
    if (*trials_opt) {
      if (command == "npp-check") {
        o["npp"]["trials"] = trials;
      } else {
        o["embedding"]["trials"] = trials;
      }
    }
  } catch (const CLI::ValidationError& e) {
    return fail(e.what(), 2);
  }
  char* merged = nullptr;
  if (bl_config_merge(base.c_str(), o.dump().c_str(), &merged) != BL_OK) return fail(bl_last_error(), 2);
  std::unique_ptr<char, void (*)(char*)> merged_guard(merged, bl_string_free);

  bl_run_result* result = nullptr;
  if (bl_run_config(merged, &result) != BL_OK) return fail(bl_last_error(), 2);
  std::unique_ptr<bl_run_result, void (*)(bl_run_result*)> result_guard(result, bl_run_result_destroy);
  const int code = bl_run_result_exit_code(result);
  if (code == 0 || code == 1) {
    std::cout << bl_run_result_message(result) << '\n';
  } else {
    std::cerr << "besovlab: " << bl_run_result_message(result) << '\n';
  }
  return code;
}
