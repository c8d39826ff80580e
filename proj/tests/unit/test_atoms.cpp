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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "besovlab/atoms.hpp"
#include "besovlab/errors.hpp"
#include "doctest.h"

using namespace besov;

namespace {

struct Lcg {
  unsigned s;
  double operator()() {
    s = s * 1664525u + 1013904223u;
    return static_cast<double>(s >> 8) / 16777216.0 - 0.5;
  }
};

GridFunction wave(const GridSpec& spec, const std::vector<long>& k) {
  GridFunction f(spec);
  for (std::size_t flat = 0; flat < spec.size(); ++flat) {
    double phase = 0;
    for (std::size_t ax = 0; ax < spec.dim(); ++ax) {
      const auto j = static_cast<double>((flat / spec.stride(ax)) % spec.points(ax));
      phase += 2 * std::numbers::pi * j * static_cast<double>(k[ax]) / static_cast<double>(spec.points(ax));
    }
    f[flat] = std::polar(1.0, phase);
  }
  return f;
}

GridFunction random_band_limited(const DyadicPartition& P, unsigned seed) {
  SpectrumFunction c(P.spec());
  Lcg rng{seed};
  const double radius = P.inner() * std::exp2(P.levels());
  for (std::size_t i = 0; i < c.coefficients().size(); ++i) {
    const double d = P.distances()[i];
    if (d <= radius && rng() > 0.2) c.coefficients()[i] = Complex{rng(), rng()} / (1.0 + d * d);
  }
  return inverse_transform(c);
}

double max_diff(const GridFunction& f, const GridFunction& g) { return max_abs((f - g).samples()); }

// Chart for the flattening experiments: b_n = 256, 64, 16 at levels 0, 1, 2.
DyadicChart slab_chart() { return DyadicChart(GridSpec({256, 1024}, 4), Anisotropy({1, 2}), {64, 256}); }

struct AtomFamily {
  std::vector<AtomFunction> atoms;
  std::vector<Complex> lambda;
};

// Every cell of levels 0..2, optionally restricted to the hyperplane-touching cells.
AtomFamily random_family(const DyadicChart& chart, double s, const Exponent& p, unsigned seed, bool touching_only) {
  AtomFamily fam;
  Lcg rng{seed};
  for (int nu = 0; nu <= 2; ++nu) {
    const long c0 = static_cast<long>(chart.cells(nu, 0));
    const long c1 = static_cast<long>(chart.cells(nu, 1));
    for (long m0 = 0; m0 < c0; ++m0) {
      for (long m1 = 0; m1 < c1; ++m1) {
        AtomSpec spec{nu, {m0, m1}, 1.0, nu == 0 ? -1.0 : 1.0, 1.5};
        if (touching_only && !touches_hyperplane(spec, chart)) continue;
        fam.atoms.push_back(make_atom(chart, spec, s, p));
        fam.lambda.push_back(rng() > -0.3 ? Complex{rng(), rng()} : Complex{});
      }
    }
  }
  return fam;
}

}  // namespace

TEST_CASE("dyadic chart cells") {
  DyadicChart chart(GridSpec({64, 256}, 4), Anisotropy({1, 2}), {16, 64});
  CHECK(chart.cell_points(0, 1) == 64);
  CHECK(chart.cell_points(2, 1) == 4);
  CHECK(chart.cells(1, 0) == 8);
  CHECK(chart.max_level() == 3);
  CHECK(chart.cell_measure(1) == doctest::Approx(0.125));
  CHECK_THROWS_AS((void)chart.cell_points(4, 1), CapacityError);

  DyadicChart odd(GridSpec({64, 64}, 4), Anisotropy({1, 1.5}), {16, 16});
  CHECK_THROWS_AS((void)odd.cell_points(1, 1), CapacityError);
  CHECK(odd.cell_points(2, 1) == 2);
  CHECK_THROWS_AS(DyadicChart(GridSpec({64, 64}, 4), Anisotropy({1, 1}), {24, 16}), StructuralError);
}

TEST_CASE("multi-indices under an anisotropic budget") {
  CHECK(multi_indices(Anisotropy({1, 2}), 2.0).size() == 4);
  CHECK(multi_indices(Anisotropy({1, 1}), 1.0).size() == 3);
  CHECK(multi_indices(Anisotropy({1, 1}), -1.0).empty());
}

TEST_CASE("moment profiles") {
  const auto plain = moment_profile(32, 0.75, -1);
  CHECK(plain.size() == 47);
  CHECK(plain[23] == 1.0);
  CHECK(plain.front() > 0.0);

  for (int v : {0, 1, 3}) {
    const auto psi = moment_profile(32, 0.5, v);
    const std::size_t r = psi.size() / 2;
    CHECK(psi[r] == 1.0);
    for (int k = 0; k <= v; ++k) {
      double m = 0, total = 0;
      for (std::size_t i = 0; i < psi.size(); ++i) {
        const double z = (static_cast<double>(i) - static_cast<double>(r)) / 32.0;
        m += std::pow(z, k) * psi[i];
        total += std::pow(std::fabs(z), k) * std::fabs(psi[i]);
      }
      CHECK(std::fabs(m) <= 1e-12 * total);
    }
  }
  CHECK_THROWS_AS(moment_profile(2, 0.5, 2), DomainError);
}

TEST_CASE("atom validation") {
  const DyadicChart chart(GridSpec({64, 256}, 4), Anisotropy({1, 2}), {16, 64});
  const double s = 1.5;
  const Exponent p(2.0);

  SUBCASE("zero function passes") {
    AtomFunction zero;
    zero.spec = AtomSpec{1, {2, 3}, 2.0, 1.0, 1.5};
    zero.patch = Patch{{0, 0}, {64, 256}, std::vector<Complex>(64 * 256)};
    const auto r = validate_atom(zero, chart, s, p);
    CHECK(r.all());
    CHECK(r.size.margin == 0.0);
  }

  SUBCASE("amplitude at the bound gives margin one") {
    for (int nu : {0, 1, 2}) {
      const auto atom = make_atom(chart, AtomSpec{nu, {1, 1}, 0.0, -1.0, 1.5}, s, p);
      const auto r = validate_atom(atom, chart, s, p);
      CHECK(r.all());
      CHECK(r.size.margin == doctest::Approx(1.0).epsilon(1e-12));
      // K = 0: the bound is the closed-form amplitude 2^{-nu (s - |a|/p)}.
      CHECK(max_abs(atom.patch.values) == doctest::Approx(std::exp2(-nu * (s - 3.0 / 2.0))).epsilon(1e-12));
    }
  }

  SUBCASE("smooth atoms with moments") {
    const auto atom = make_atom(chart, AtomSpec{1, {3, 5}, 3.0, 2.0, 1.5}, s, p);
    CHECK(atom.classification == AtomClass::SP);
    const auto r = validate_atom(atom, chart, s, p);
    CHECK(r.support.pass);
    CHECK(r.size.pass);
    CHECK(r.size.margin == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.moments.pass);
    CHECK(r.moments.margin < 1e-10);
  }

  SUBCASE("violations are reported") {
    auto atom = make_atom(chart, AtomSpec{1, {1, 1}, 1.0, 1.0, 1.5}, s, p);
    auto shifted = atom;
    shifted.patch.origin[1] += 20;
    const auto rs = validate_atom(shifted, chart, s, p);
    CHECK_FALSE(rs.support.pass);
    CHECK(rs.support.margin > 0.5);

    auto loud = atom;
    for (auto& v : loud.patch.values) v *= 2.0;
    CHECK_FALSE(validate_atom(loud, chart, s, p).size.pass);

    auto bump = make_atom(chart, AtomSpec{1, {1, 1}, 1.0, -1.0, 1.5}, s, p);
    bump.spec.L = 1.0;
    const auto rm = validate_atom(bump, chart, s, p);
    CHECK(rm.support.pass);
    CHECK_FALSE(rm.moments.pass);
  }
}

TEST_CASE("synthesis wraps periodically and fills coefficient lattices") {
  const DyadicChart chart(GridSpec({64, 256}, 4), Anisotropy({1, 2}), {16, 64});
  const auto atom = make_atom(chart, AtomSpec{0, {0, 0}, 0.0, -1.0, 1.5}, 0.0, Exponent(1.0));
  const std::vector<AtomFunction> atoms{atom};
  const std::vector<Complex> lambda{Complex{2.0, 0.0}};
  const auto g = synthesize_atoms(atoms, lambda, chart);
  CHECK(g[0] == 2.0 * atom.patch.values[atom.patch.values.size() / 2]);
  const std::size_t idx[] = {63, 255};
  CHECK(std::abs(g.at(idx)) > 0.0);

  const auto c = atom_coefficients(atoms, lambda, chart);
  REQUIRE(c.size() == 1);
  CHECK(c[0].shape == std::vector<std::size_t>{4, 4});
  CHECK(c[0].values[0] == Complex{2.0, 0.0});
}

TEST_CASE("phi-transform") {
  const GridSpec spec({256, 256}, 4);
  const DyadicPartition P(spec, Anisotropy({1, 1}));
  REQUIRE(P.levels() == 3);
  CHECK(phi_sampling_shape(P, 0) == std::vector<std::size_t>{32, 32});
  CHECK(phi_sampling_shape(P, 3) == std::vector<std::size_t>{256, 256});
  CHECK_THROWS_AS(phi_sampling_shape(P, 4), CapacityError);
  const long k0[] = {8, 0};
  const long k1[] = {16, 3};
  const std::size_t sh[] = {32, 32};
  CHECK(phi_profile(k0, sh) == 1.0);
  CHECK(phi_profile(k1, sh) == 0.0);

  const double s = 0.5;
  const Exponent p(1.0);

  SUBCASE("zero in, zero out") {
    const auto t = phi_analysis(GridFunction(spec), P, s, p);
    for (const auto& lvl : t.lambda) CHECK(max_abs(lvl.values) == 0.0);
    CHECK(max_abs(phi_synthesis(t.lambda, spec, s, p).samples()) == 0.0);
  }

  SUBCASE("pure wave in band one") {
    const auto g = wave(spec, {6, 3});
    const auto t = phi_analysis(g, P, s, p);
    CHECK(t.snapping_error == 0.0);
    CHECK(max_diff(phi_synthesis(t.lambda, spec, s, p), g) <= 1e-6);
  }

  SUBCASE("random band-limited round trip") {
    for (unsigned seed = 1; seed <= 3; ++seed) {
      const auto g = random_band_limited(P, seed);
      const auto t = phi_analysis(g, P, s, p);
      CHECK(max_diff(phi_synthesis(t.lambda, spec, s, p), g) <= 1e-10 * max_abs(g.samples()));
    }
  }

  SUBCASE("sequence norm is an equivalent quasi-norm") {
    const GridSpec small({64, 64}, 4);
    const DyadicPartition Q(small, Anisotropy({1, 1}));
    for (const auto& [pp, qq] : {std::pair{0.5, 2.0}, std::pair{1.0, 1.0}, std::pair{2.0, 2.0}}) {
      const SpaceParams prm{Scale::LizorkinTriebel, s, Exponent(pp), Exponent(qq), Anisotropy({1, 1})};
      double lo = 1e300, hi = 0;
      for (unsigned seed = 1; seed <= 100; ++seed) {
        const auto g = random_band_limited(Q, 100 + seed);
        const auto t = phi_analysis(g, Q, s, prm.p);
        const double ratio = sequence_norm_f(t.lambda, small, prm.p, prm.q) / lizorkin_triebel_norm(g, Q, prm);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      INFO("p=" << pp << " q=" << qq << " ratio in [" << lo << ", " << hi << "]");
      CHECK(lo > 0.1);
      CHECK(hi < 10.0);
      CHECK(hi / lo < 2.0);
    }
  }
}

TEST_CASE("flattening for the trace") {
  const auto chart = slab_chart();
  const double s = 1.0;
  const Exponent p(1.0);
  const auto psi = default_normal_profile(1.0, 2.0);

  SUBCASE("hyperplane-touching set") {
    CHECK(touches_hyperplane(AtomSpec{1, {3, 0}, 0, -1, 1.5}, chart));
    CHECK(touches_hyperplane(AtomSpec{1, {3, 16}, 0, -1, 1.5}, chart));
    CHECK_FALSE(touches_hyperplane(AtomSpec{1, {3, 1}, 0, -1, 1.5}, chart));
    CHECK_FALSE(touches_hyperplane(AtomSpec{1, {3, 15}, 0, -1, 1.5}, chart));
    CHECK(touches_hyperplane(AtomSpec{1, {3, 1}, 0, -1, 2.5}, chart));
  }

  SUBCASE("coefficients on the set are kept") {
    const auto fam = random_family(chart, s, p, 7, true);
    const auto fl = flatten_for_trace(fam.lambda, fam.atoms, chart, psi);
    CHECK(fl.lambda == fam.lambda);
    for (const auto& a : fl.atoms) {
      const auto r = validate_atom(a, chart, s, p);
      CHECK(r.support.pass);
      CHECK(r.moments.pass);
      CHECK(r.size.margin < 10.0);
    }
  }

  SUBCASE("coefficients off the set vanish") {
    AtomFamily fam;
    for (long m1 : {1L, 2L, 3L}) {
      fam.atoms.push_back(make_atom(chart, AtomSpec{0, {1, m1}, 1.0, -1.0, 1.5}, s, p));
      fam.lambda.push_back(Complex{1.0, -0.5});
    }
    const auto fl = flatten_for_trace(fam.lambda, fam.atoms, chart, psi);
    for (const auto& l : fl.lambda) CHECK(l == Complex{});
    CHECK(max_abs(restrict_hyperplane(synthesize_atoms(fl.atoms, fl.lambda, chart)).samples()) == 0.0);
    CHECK(max_abs(restrict_hyperplane(synthesize_atoms(fam.atoms, fam.lambda, chart)).samples()) == 0.0);
  }

  SUBCASE("trace is preserved") {
    const auto fam = random_family(chart, s, p, 11, false);
    const auto fl = flatten_for_trace(fam.lambda, fam.atoms, chart, psi);
    const auto before = restrict_hyperplane(synthesize_atoms(fam.atoms, fam.lambda, chart));
    const auto after = restrict_hyperplane(synthesize_atoms(fl.atoms, fl.lambda, chart));
    CHECK(max_diff(before, after) <= 1e-8 * max_abs(before.samples()));
  }

  SUBCASE("bad normal profiles are rejected") {
    const auto fam = random_family(chart, s, p, 3, true);
    const NormalProfile off_centre = [](std::size_t b) {
      auto v = moment_profile(b, 0.5, 0);
      v[v.size() / 2] = 0.5;
      return v;
    };
    const NormalProfile no_moments = [](std::size_t b) { return moment_profile(b, 0.5, -1); };
    const NormalProfile too_wide = [](std::size_t b) { return moment_profile(b, 0.75, 0); };
    CHECK_THROWS_AS(flatten_for_trace(fam.lambda, fam.atoms, chart, off_centre), DomainError);
    CHECK_THROWS_AS(flatten_for_trace(fam.lambda, fam.atoms, chart, no_moments), DomainError);
    CHECK_THROWS_AS(flatten_for_trace(fam.lambda, fam.atoms, chart, too_wide), DomainError);
  }
}

TEST_CASE("lower slabs") {
  const Anisotropy a({1, 2});
  std::vector<AtomSpec> specs;
  for (int nu = 0; nu <= 3; ++nu) {
    for (long m = -2; m <= 2; ++m) specs.push_back(AtomSpec{nu, {m, 0}, 0, -1, 1.5});
  }
  CHECK(slabs_pairwise_disjoint(specs, a));
  for (const auto& sp : specs) {
    CHECK(lower_slab(sp, a).measure() / flattened_rectangle(sp, a).measure() == doctest::Approx(0.375));
  }
  specs.push_back(AtomSpec{1, {0, 0}, 0, -1, 1.5});
  CHECK_FALSE(slabs_pairwise_disjoint(specs, a));

  const Anisotropy iso({1, 1, 1});
  const AtomSpec q{2, {1, -1, 0}, 0, -1, 1.5};
  CHECK(lower_slab(q, iso).measure() / flattened_rectangle(q, iso).measure() == doctest::Approx(0.25));
}

TEST_CASE("q-independent norm control on the hyperplane set") {
  const auto chart = slab_chart();
  const auto& spec = chart.spec();
  const double r = (1.0 - std::exp2(-2.0)) / 2.0;
  struct Case {
    double p, q, t;
  };
  for (const auto& c : {Case{0.5, 0.5, 2.0}, Case{1.0, 1.0, -1.0}}) {
    const Exponent p(c.p), q(c.q);
    const Exponent t = c.t < 0 ? Exponent::infinity() : Exponent(c.t);
    const double bound = std::pow(r, -1.0 / c.p);
    double worst = 0;
    for (unsigned seed = 1; seed <= 50; ++seed) {
      const auto fam = random_family(chart, 1.0, p, 1000 + seed, true);
      const auto fl = flatten_for_trace(fam.lambda, fam.atoms, chart, default_normal_profile(1.0, 2.0));
      const auto lam = atom_coefficients(fl.atoms, fl.lambda, chart);
      const double ratio = sequence_norm_f(lam, spec, p, q) / sequence_norm_f(lam, spec, p, t);
      worst = std::max(worst, ratio);
    }
    INFO("p=" << c.p << " worst ratio " << worst << " bound " << bound);
    CHECK(worst <= bound);
    CHECK(worst >= 1.0);
  }
}

TEST_CASE("coefficient CSV round trip") {
  Coefficients c{{0, {2, 2}, {{1, 0}, {0.1, -2}, {0, 0}, {1e-300, 3}}}, {1, {4, 2}, std::vector<Complex>(8)}};
  c[1].values[7] = {std::numbers::pi, -std::numbers::e};
  std::stringstream ss;
  write_coefficients_csv(ss, c, 2);
  const std::string text = ss.str();
  CHECK(text.rfind("nu,m1,m2,re,im\n", 0) == 0);
  const auto back = read_coefficients_csv(ss);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].level == c[i].level);
    CHECK(back[i].shape == c[i].shape);
    CHECK(back[i].values == c[i].values);
  }
  std::stringstream bad("nu,m1,m2,re,im\n0,1,x,0,0\n");
  CHECK_THROWS_AS(read_coefficients_csv(bad), IoError);
}
