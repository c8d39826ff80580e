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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "besovlab/atoms.hpp"
#include "besovlab/experiments.hpp"
#include "besovlab/torus_grid.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Output {
  int code = -1;
  std::string out;
};

Output cli(const std::string& args) {
  const std::string cmd = std::string(BESOVLAB_CLI) + " " + args + " 2>/dev/null";
  Output o;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) o.out += buf;
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

fs::path scratch(const char* name) {
  auto dir = fs::temp_directory_path() / "besovlab_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json summary(const fs::path& dir) { return json::parse(slurp(dir / "summary.json")); }

// exp(i xi.x) with xi = (4, 0) on 256 x 256, period 2 pi * 4.
fs::path write_wave(const fs::path& dir) {
  besov::GridSpec spec({256, 256}, 4);
  besov::GridFunction f(spec);
  for (std::size_t i = 0; i < 256; ++i) {
    for (std::size_t j = 0; j < 256; ++j) {
      f[i * 256 + j] = std::polar(1.0, 2.0 * std::numbers::pi * 16.0 * static_cast<double>(i) / 256.0);
    }
  }
  const auto path = dir / "wave.bsvl";
  besov::write_function_file(path, f, besov::Anisotropy({1.0, 1.0}));
  return path;
}

}  // namespace

TEST_CASE("norm of a pure wave") {
  const auto dir = scratch("norm");
  const auto input = write_wave(dir);

  const auto o = cli("norm --input " + input.string() + " --s 1 --p 2 --q 2 --out " + (dir / "out").string());
  CHECK(o.code == 0);
  CHECK(std::stod(o.out) == doctest::Approx(4.0).epsilon(1e-10));

  std::ifstream csv(dir / "out" / "norm.csv");
  const auto t = besov::read_csv(csv);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.header.back() == "value");
  CHECK(std::stod(t.rows[0].back()) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("configuration errors exit with 2") {
  const auto dir = scratch("errors");
  CHECK(cli("bogus --out " + dir.string()).code == 2);
  CHECK(cli("norm --out " + dir.string()).code == 2);
  CHECK(cli("counterexample --k 4,8 --out " + dir.string()).code == 2);
  CHECK(cli("norm --input " + (dir / "missing.bsvl").string() + " --out " + dir.string()).code == 2);

  const auto cfg = dir / "empty_k.json";
  std::ofstream(cfg) << R"({"command": "counterexample", "counterexample": {"k": []}})";
  CHECK(cli("--config " + cfg.string() + " --out " + (dir / "k").string()).code == 2);
  CHECK(cli("counterexample --family gk --grid 128x128 --out " + (dir / "gk").string()).code == 3);
  CHECK(fs::exists(dir / "gk" / "summary.json"));
}

TEST_CASE("counterexample summary") {
  const auto dir = scratch("uk");
  const auto o = cli("counterexample --family uk --q 2 --p 1 --grid 256x256 --out " + dir.string());
  CHECK(o.code == 0);
  const auto s = summary(dir);
  CHECK(s["predicted_slope"].get<double>() == -0.5);
  CHECK(s["slopes"][0]["slope"].get<double>() == doctest::Approx(-0.5).epsilon(0.3));

  std::ifstream csv(dir / "slopes.csv");
  const auto t = besov::read_csv(csv);
  REQUIRE(t.rows.size() == 5);
  for (const auto& row : t.rows) {
    CHECK(row.size() == t.header.size());
    CHECK(row[1] == "p=1;q=2");
  }
}

TEST_CASE("flags override the configuration file") {
  const auto dir = scratch("precedence");
  const auto cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"command": "counterexample", "seed": 5, "grid": {"points": [128, 128]},
    "counterexample": {"family": "uk", "p": [1], "q": [1], "k": [2, 4, 6, 8, 10]}})";
  cli("--config " + cfg.string() + " --seed 9 --out " + dir.string());
  const auto s = summary(dir);
  CHECK(s["seed"].get<int>() == 9);
  CHECK(s["family"] == "uk");
}

TEST_CASE("same seed, same artifacts") {
  const auto a = scratch("repro_a");
  const auto b = scratch("repro_b");
  const std::string args = "embedding-check --grid 64x64 --trials 3 --seed 7 --out ";
  CHECK(cli(args + a.string()).code <= 1);
  CHECK(cli(args + b.string()).code <= 1);
  for (const char* name : {"embeddings.csv", "summary.json"}) {
    CHECK(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
}

TEST_CASE("every CSV artifact reads back") {
  const auto dir = scratch("csv");
  const auto input = write_wave(dir);
  const std::string in = " --input " + input.string() + " --out ";
  CHECK(cli("norm" + in + (dir / "norm").string()).code == 0);
  CHECK(cli("trace" + in + (dir / "trace").string()).code == 0);
  CHECK(cli("phi-transform --s 1 --p 2" + in + (dir / "phi").string()).code == 0);
  CHECK(cli("counterexample --family uk --grid 128x128 --k 2,4,6,8,10 --p 1 --q 1,2 --out " + (dir / "uk").string())
            .code <= 1);
  CHECK(cli("npp-check --grid 64x1024 --aniso 1,2 --trials 3 --out " + (dir / "npp").string()).code <= 1);
  CHECK(cli("embedding-check --grid 64x64 --trials 2 --out " + (dir / "emb").string()).code <= 1);

  int checked = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    const auto text = slurp(e.path());
    std::istringstream is(text);
    std::ostringstream os;
    if (e.path().filename() == "coefficients.csv") {
      const auto lambda = besov::read_coefficients_csv(is);
      CHECK(!lambda.empty());
      besov::write_coefficients_csv(os, lambda, 2);
    } else {
      const auto t = besov::read_csv(is);
      CHECK(!t.rows.empty());
      besov::write_csv(os, t);
    }
    INFO(e.path());
    CHECK(os.str() == text);
    ++checked;
  }
  CHECK(checked == 7);
}
