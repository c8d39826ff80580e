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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits 0.
// Set BESOVLAB_ACCEPT_ONLY=3,9 to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "besovlab/anisotropy.hpp"
#include "besovlab/atoms.hpp"
#include "besovlab/experiments.hpp"
#include "besovlab/partition.hpp"
#include "besovlab/quasinorms.hpp"
#include "besovlab/trace_extension.hpp"

using namespace besov;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Random spectrum inside |xi|_a <= radius with 1/(1+d) decay.
GridFunction random_limited(const GridSpec& spec, const Anisotropy& a, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  SpectrumFunction c(spec);
  std::vector<double> xi(spec.dim());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    spec.physical_frequency(i, xi);
    const double d = aniso_distance(a, xi);
    if (d <= radius) {
      const double re = u(rng);
      c.coefficients()[i] = Complex{re, u(rng)} / (1.0 + d);
    }
  }
  return inverse_transform(c);
}

// ------------------------------------------------------------------ 1

Verdict geometry() {
  Clock clock;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> expo(-6.0, 6.0);
  const std::vector<std::vector<double>> weights{{1, 1}, {1, 2}, {1, 1, 2}, {1, 1.5, 3}};
  double worst_homog = 0;
  long sandwich_fail = 0;
  long points = 0;
  for (const auto& w : weights) {
    const Anisotropy a(w);
    std::vector<double> x(w.size());
    for (int i = 0; i < 100000; ++i) {
      const double scale = std::exp2(expo(rng));
      for (auto& v : x) v = scale * unit(rng);
      const double d = aniso_distance(a, x);
      const double t = std::exp2(expo(rng));
      const double dt = aniso_distance(a, dilate(a, t, x));
      worst_homog = std::max(worst_homog, std::fabs(dt - t * d) / (t * d));
      double r2 = 0;
      for (double v : x) r2 += v * v;
      const double r = std::sqrt(r2);
      const double root = std::pow(r, 1.0 / a.max_weight());
      if (d < std::min(r, root) * (1 - 1e-9) || d > std::max(r, root) * (1 + 1e-9)) ++sandwich_fail;
      ++points;
    }
  }
  const double secs = clock.seconds();
  return {worst_homog <= 1e-9 && sandwich_fail == 0 && secs < 10.0,
          std::to_string(points) + " points, 4 anisotropies, homogeneity error " + fmt(worst_homog) +
              ", sandwich violations " + std::to_string(sandwich_fail) + ", " + fmt(secs) + " s"};
}

// ------------------------------------------------------------------ 2

struct PartitionStats {
  double unity = 0;
  double leakage = 0;
  double reconstruction = 0;
};

PartitionStats partition_stats(const GridSpec& spec, const Anisotropy& a, std::mt19937_64& rng) {
  PartitionStats st;
  const DyadicPartition P(spec, a);
  const double radius = std::ldexp(1.0, P.levels());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double d = P.distances()[i];
    if (d > radius) continue;
    double sum = 0;
    for (int j = 0; j <= P.levels(); ++j) sum += P.value(j, d);
    st.unity = std::max(st.unity, std::fabs(sum - 1.0));
  }
  const auto f = random_limited(spec, a, P.inner() * radius, rng);
  const auto bands = band_decompose(f, P);
  GridFunction sum(spec);
  for (int j = 0; j <= P.levels(); ++j) {
    const auto& b = bands[static_cast<std::size_t>(j)];
    sum += b;
    const auto c = forward_transform(b);
    const auto [lo, hi] = P.annulus(j);
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const double d = P.distances()[i];
      if (d < lo || d > hi) st.leakage = std::max(st.leakage, std::abs(c.coefficients()[i]));
    }
  }
  st.reconstruction = max_abs((sum - f).samples()) / max_abs(f.samples());
  return st;
}

Verdict partition() {
  Clock clock;
  std::mt19937_64 rng(2);
  PartitionStats worst;
  struct Case {
    std::vector<std::size_t> points;
    int base_scale;
    std::vector<double> a;
  };
  const std::vector<Case> cases{{{512, 512}, 4, {1, 1}}, {{512, 512}, 4, {1, 2}}, {{64, 64, 64}, 4, {1, 1, 2}},
                                {{64, 64, 64}, 4, {1, 1, 1}}};
  for (const auto& c : cases) {
    const auto st = partition_stats(GridSpec(c.points, c.base_scale), Anisotropy(c.a), rng);
    worst.unity = std::max(worst.unity, st.unity);
    worst.leakage = std::max(worst.leakage, st.leakage);
    worst.reconstruction = std::max(worst.reconstruction, st.reconstruction);
  }
  const double secs = clock.seconds();
  return {worst.unity <= 1e-12 && worst.leakage <= 1e-14 && worst.reconstruction <= 1e-9 && secs < 60.0,
          "512^2 and 64^3: unity " + fmt(worst.unity) + ", leakage " + fmt(worst.leakage) + ", reconstruction " +
              fmt(worst.reconstruction) + ", " + fmt(secs) + " s"};
}

// ------------------------------------------------------------------ 3

Verdict b_equals_f() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> smooth(-1.0, 2.0);
  const GridSpec spec({128, 128}, 4);
  double worst = 0;
  int count = 0;
  for (const auto& w : {std::vector<double>{1, 1}, std::vector<double>{1, 2}}) {
    const Anisotropy a(w);
    const DyadicPartition P(spec, a);
    for (int trial = 0; trial < 50; ++trial) {
      const auto f = random_limited(spec, a, P.inner() * std::ldexp(1.0, P.levels()), rng);
      const auto bands = band_decompose(f, P);
      const double s = smooth(rng);
      for (double p : {0.5, 1.0, 2.0}) {
        const Exponent e(p);
        const double b = besov_from_band_norms(band_lp_norms(bands, e), s, e);
        const double fn = lizorkin_triebel_from_bands(bands, s, e, e);
        worst = std::max(worst, std::fabs(b - fn) / b);
      }
      ++count;
    }
  }
  return {worst <= 1e-10 && count >= 100,
          std::to_string(count) + " functions, p in {1/2, 1, 2}, worst relative gap " + fmt(worst)};
}

// ------------------------------------------------------------------ 4

Verdict right_inverse() {
  std::mt19937_64 rng(4);
  const GridSpec spec({128, 2048}, 4);
  const Anisotropy a({1, 2});
  const DyadicPartition PK(spec, a, 1);
  const DyadicPartition PT(spec, a);
  const EtaProfiles eta(2.0);
  const GridSpec plane = hyperplane_spec(PK);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = random_limited(plane, Anisotropy({1}), 2.0, rng);
    const auto tr = trace(extend_K(v, PK, eta), PT);
    worst = std::max(worst, max_abs((tr.value - v).samples()) / max_abs(v.samples()));
  }
  return {worst <= 1e-8, "100 inputs on 128x2048, worst relative sup error " + fmt(worst)};
}

// -------------------------------------------------------------- 5 and 6

std::string slope_line(const SlopeReport& r) {
  return r.family + "(" + r.parameters + ") " + fmt(r.slope) + " vs " + fmt(r.predicted);
}

struct Counterexamples {
  Verdict slopes;
  Verdict dichotomy;
};

Counterexamples counterexamples() {
  Clock clock;
  CounterexampleSetup setup;  // a = (1, 2), 1024^2, k = 4..64
  const std::vector<Exponent> qs{Exponent(0.5), Exponent(1.0), Exponent(2.0)};
  const std::vector<Exponent> uk_p{Exponent(1.0), Exponent(2.0)};
  const std::vector<Exponent> vk_p{Exponent(0.5), Exponent(2.0 / 3.0)};
  const std::vector<Exponent> us{Exponent(0.5), Exponent(1.0)};

  const auto uk = run_uk(setup, uk_p, qs);
  const auto vk = run_vk(setup, vk_p, qs);
  const auto gk = run_gk(setup, Exponent(0.5), us, Exponent(1.0), Exponent(0.5));
  const double secs = clock.seconds();

  std::vector<SlopeReport> all = uk.slopes;
  all.insert(all.end(), vk.slopes.begin(), vk.slopes.end());
  all.insert(all.end(), gk.trace_growth.begin(), gk.trace_growth.end());
  int fits = 0;
  int within = 0;
  std::string failed;
  for (const auto& r : all) {
    if (!r.checked) continue;
    const bool ok = std::fabs(r.slope - r.predicted) <= 0.15;
    ++fits;
    within += ok ? 1 : 0;
    if (!ok) failed += "; off: " + slope_line(r);
  }
  Counterexamples out;
  out.slopes = {within == fits && secs < 600.0, std::to_string(within) + " of " + std::to_string(fits) +
                                                    " fits within 0.15" + failed + "; " + fmt(secs) + " s"};

  bool dich = true;
  std::string detail;
  for (const auto& r : uk.ratios) {
    const double mx = *std::max_element(r.ratios.begin(), r.ratios.end());
    const double over = mx / r.ratios.front();
    const bool ok = r.bounded_expected ? over <= 2.0 : r.slope >= 0.3;
    dich = dich && ok;
    detail += (detail.empty() ? "" : ", ") + r.parameters + ": " +
              (r.bounded_expected ? "max/base " + fmt(over) : "slope " + fmt(r.slope));
  }
  out.dichotomy = {dich, detail};
  return out;
}

// ------------------------------------------------------------------ 7

Verdict embeddings() {
  const Anisotropy a({1, 2});
  auto pairs = standard_embedding_pairs(a);
  for (auto& p : pairs) p.delta = source_white_delta(p);
  std::vector<std::vector<EmbeddingReport>> per_grid;
  for (std::size_t n : {256u, 1024u}) {
    const DyadicPartition P(GridSpec({n, n}, 4), a);
    per_grid.push_back(check_embeddings(pairs, P, 100, 7));
  }
  bool pass = true;
  double worst = 1;
  std::string worst_name;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double lo = per_grid[0][i].max;
    const double hi = per_grid[1][i].max;
    const double v = std::max(lo / hi, hi / lo);
    if (!(v < 2.0)) pass = false;
    if (!(v <= worst)) {
      worst = v;
      worst_name = pairs[i].name;
    }
  }
  return {pass, std::to_string(pairs.size()) + " pairs, 100 trials, worst variation " + fmt(worst) + " (" +
                    worst_name + ")"};
}

// ------------------------------------------------------------------ 8

Verdict npp() {
  const Anisotropy a({1, 2});
  const DyadicPartition P(GridSpec({256, 4096}, 4), a);
  bool pass = true;
  std::string detail;
  for (double pv : {1.0, 2.0}) {
    const Exponent p(pv);
    std::vector<double> c;
    for (int j = 1; j <= P.levels(); ++j) c.push_back(check_npp(j, 20, p, P, 8).max);
    const double spread = *std::max_element(c.begin(), c.end()) / *std::min_element(c.begin(), c.end());
    pass = pass && spread <= 2.0;
    detail += (detail.empty() ? "" : ", ") + std::string("p=") + fmt(pv) + " spread " + fmt(spread);
  }
  return {pass, "levels 1.." + std::to_string(P.levels()) + ": " + detail};
}

// ------------------------------------------------------------------ 9

Verdict flattening() {
  const DyadicChart chart(GridSpec({256, 1024}, 4), Anisotropy({1, 2}), {64, 256});
  const auto& spec = chart.spec();
  const auto psi = default_normal_profile(1.0, 2.0);
  const double r = (1.0 - std::exp2(-2.0)) / 2.0;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 0.5);

  auto family = [&](const Exponent& p, bool touching_only) {
    std::pair<std::vector<AtomFunction>, std::vector<Complex>> fam;
    for (int nu = 0; nu <= 2; ++nu) {
      for (long m0 = 0; m0 < static_cast<long>(chart.cells(nu, 0)); ++m0) {
        for (long m1 = 0; m1 < static_cast<long>(chart.cells(nu, 1)); ++m1) {
          const AtomSpec s{nu, {m0, m1}, 1.0, nu == 0 ? -1.0 : 1.0, 1.5};
          if (touching_only && !touches_hyperplane(s, chart)) continue;
          fam.first.push_back(make_atom(chart, s, 1.0, p));
          const double keep = u(rng);
          const double re = u(rng);
          fam.second.push_back(keep > -0.3 ? Complex{re, u(rng)} : Complex{});
        }
      }
    }
    return fam;
  };

  double trace_err = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto [atoms, lambda] = family(Exponent(1.0), false);
    const auto fl = flatten_for_trace(lambda, atoms, chart, psi);
    const auto before = restrict_hyperplane(synthesize_atoms(atoms, lambda, chart));
    const auto after = restrict_hyperplane(synthesize_atoms(fl.atoms, fl.lambda, chart));
    trace_err = std::max(trace_err, max_abs((before - after).samples()) / max_abs(before.samples()));
  }

  bool norm_ok = true;
  std::string detail;
  struct Pair {
    Exponent q, t;
    const char* name;
  };
  for (const auto& [q, t, name] : {Pair{Exponent(0.5), Exponent(2.0), "(1/2,2)"},
                                   Pair{Exponent(1.0), Exponent::infinity(), "(1,inf)"}}) {
    for (double pv : {0.5, 1.0}) {
      const Exponent p(pv);
      const double bound = std::pow(r, -1.0 / pv);
      double worst = 0;
      for (int trial = 0; trial < 50; ++trial) {
        const auto [atoms, lambda] = family(p, true);
        const auto fl = flatten_for_trace(lambda, atoms, chart, psi);
        const double num = sequence_norm_f(atom_coefficients(fl.atoms, fl.lambda, chart), spec, p, q);
        const double den = sequence_norm_f(atom_coefficients(atoms, lambda, chart), spec, p, t);
        worst = std::max(worst, num / den);
      }
      norm_ok = norm_ok && worst <= bound;
      detail += std::string(", ") + name + " p=" + fmt(pv) + " ratio " + fmt(worst) + " <= " + fmt(bound);
    }
  }
  return {trace_err <= 1e-8 && norm_ok, "50 sets each, trace error " + fmt(trace_err) + detail};
}

// ----------------------------------------------------------------- 10

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict reproducibility() {
  const auto root = fs::temp_directory_path() / "besovlab_acceptance";
  fs::remove_all(root);
  const std::vector<std::string> runs{"embedding-check --grid 128x128 --trials 5",
                                      "npp-check --grid 64x1024 --aniso 1,2 --trials 5",
                                      "counterexample --family uk --grid 256x256 --p 1 --q 1,2"};
  int files = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto a = root / ("a" + std::to_string(i));
    const auto b = root / ("b" + std::to_string(i));
    for (const auto& dir : {a, b}) {
      const std::string cmd =
          std::string(BESOVLAB_CLI) + " " + runs[i] + " --seed 42 --out " + dir.string() + " >/dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) > 1) {
        return {false, "run failed: " + runs[i]};
      }
    }
    std::set<std::string> names;
    for (const auto& dir : {a, b}) {
      for (const auto& e : fs::directory_iterator(dir)) names.insert(e.path().filename().string());
    }
    for (const auto& n : names) {
      if (!fs::exists(a / n) || !fs::exists(b / n) || slurp(a / n) != slurp(b / n)) {
        return {false, "artifact differs: " + n + " of " + runs[i]};
      }
      ++files;
    }
  }
  return {true, std::to_string(runs.size()) + " commands, " + std::to_string(files) + " artifacts byte-identical"};
}

}  // namespace

int main() {
  std::set<int> only;
  if (const char* env = std::getenv("BESOVLAB_ACCEPT_ONLY")) {
    std::stringstream ss(env);
    std::string item;
    while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
  }
  auto wanted = [&](int n) { return only.empty() || only.count(n) > 0; };

  auto report = [](int n, const std::function<Verdict()>& body) {
    Verdict v;
    try {
      v = body();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s\n", n, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  };

  if (wanted(1)) report(1, geometry);
  if (wanted(2)) report(2, partition);
  if (wanted(3)) report(3, b_equals_f);
  if (wanted(4)) report(4, right_inverse);
  if (wanted(5) || wanted(6)) {
    Counterexamples c;
    try {
      c = counterexamples();
    } catch (const std::exception& e) {
      c.slopes = c.dichotomy = {false, std::string("error: ") + e.what()};
    }
    if (wanted(5)) report(5, [&] { return c.slopes; });
    if (wanted(6)) report(6, [&] { return c.dichotomy; });
  }
  if (wanted(7)) report(7, embeddings);
  if (wanted(8)) report(8, npp);
  if (wanted(9)) report(9, flattening);
  if (wanted(10)) report(10, reproducibility);
  return 0;
}
