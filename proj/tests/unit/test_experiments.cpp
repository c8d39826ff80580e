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
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "besovlab/errors.hpp"
#include "besovlab/experiments.hpp"
#include "doctest.h"

using namespace besov;

namespace {

// (2 pi)^{-1} int F(xi', xi_n) dxi_n by the trapezoidal rule over [-extent, extent].
Complex integrate_normal(const SpectralModel& f, std::vector<double> xi_t, int steps) {
  const double e = f.extent.back();
  const double h = 2 * e / steps;
  std::vector<double> xi = xi_t;
  xi.push_back(0.0);
  Complex acc = 0;
  for (int i = 0; i <= steps; ++i) {
    xi.back() = -e + h * i;
    acc += (i == 0 || i == steps ? 0.5 : 1.0) * f.transform(xi);
  }
  return acc * h / (2 * std::numbers::pi);
}

}  // namespace

TEST_CASE("counter rng") {
  CounterRng a(42), b(42), c(43);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != c.next());
  }
  const CounterRng root(1);
  CounterRng f1 = root.fork(1), f1b = root.fork(1), f2 = root.fork(2);
  CHECK(f1.next() == f1b.next());
  CHECK(f1.next() != f2.next());

  CounterRng g(9);
  double sum = 0, sq = 0, lo = 1, hi = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = g.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    const double z = g.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(std::fabs(sum / n) < 0.02);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("random fields") {
  const Anisotropy a({1, 2});
  const DyadicPartition P(GridSpec({64, 256}, 4), a);
  CounterRng r1(5), r2(5);
  const GridFunction f = random_field(P, r1, 1.0);
  const GridFunction g = random_field(P, r2, 1.0);
  CHECK(max_abs((f - g).samples()) == 0.0);
  CHECK_NOTHROW(P.require_band_limited(forward_transform(f)));

  // Expected energy of level j is 2^{-j delta}; average over draws.
  std::vector<double> energy(static_cast<std::size_t>(P.levels()) + 1, 0.0);
  const int draws = 40;
  CounterRng rng(77);
  for (int t = 0; t < draws; ++t) {
    const auto c = forward_transform(random_field(P, rng, 1.0));
    for (std::size_t i = 0; i < c.coefficients().size(); ++i) {
      const double d = P.distances()[i];
      if (d > P.inner() * std::exp2(P.levels())) continue;
      const int j = d <= P.inner() ? 0 : static_cast<int>(std::ceil(std::log2(d / P.inner())));
      energy[static_cast<std::size_t>(j)] += std::norm(c.coefficients()[i]) / draws;
    }
  }
  for (std::size_t j = 1; j < energy.size(); ++j) {
    CHECK(energy[j] == doctest::Approx(std::exp2(-static_cast<double>(j))).epsilon(0.2));
  }
}

TEST_CASE("profiles") {
  CHECK(profile_value_at_zero(annulus_profile(2.0), 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(profile_value_at_zero(lowpass_profile(2.0), 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  const auto w = annulus_profile(1.0, 0.75, 1.0);
  CHECK(w.value(0.5) == 0.0);
  CHECK(w.value(1.1) == 0.0);
  CHECK(w.value(0.875) > 0.0);
  CHECK_THROWS_AS(annulus_profile(1.0, 0.0, 1.0), DomainError);

  const GridFunction u = default_base(GridSpec({64}, 4), std::vector<double>{1.0});
  CHECK(u[0].real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("family traces integrate the normal variable") {
  const Anisotropy a({1, 2});
  const GridSpec tangential({64}, 4);
  const GridFunction u = default_base(tangential, std::vector<double>{1.0});

  const auto uk = family_uk(3, u, annulus_profile(2.0), a);
  CHECK(max_abs((to_grid(uk.trace, tangential) - u).samples()) <= 1e-12);
  for (double x : {0.0, 0.25, 0.5}) {
    const double xi[] = {x};
    CHECK(std::abs(integrate_normal(uk.f, {x}, 1 << 18) - uk.trace.transform(xi)) <= 1e-8);
  }

  const auto vk = family_vk(2, lowball_profile(), lowpass_profile(2.0), a);
  const double origin[] = {0.0};
  CHECK(vk.trace.transform(origin).real() == doctest::Approx(1.0).epsilon(1e-12));
  for (double x : {0.0, 0.3, 2.0}) {
    const double xi[] = {x};
    CHECK(std::abs(integrate_normal(vk.f, {x}, 1 << 18) - vk.trace.transform(xi)) <= 1e-8);
  }

  const auto gs = gk_setup(a);
  CHECK(gs.k0 == 5);
  const auto gk = family_gk(1, gs);
  for (double x : {0.0, 1.0, 2.5}) {
    const double xi[] = {x};
    CHECK(std::abs(integrate_normal(gk.f, {x}, 1 << 20) - gk.trace.transform(xi)) <= 1e-8);
  }
}

TEST_CASE("family tensor structure on the dense grid") {
  // u_1 = u (x) w(2^{a_n} .): every x_n column is a multiple of u.
  const Anisotropy a({1, 2});
  const GridSpec spec({64, 64}, 4);
  const GridFunction u = default_base(spec.drop_last_axis(), std::vector<double>{1.0});
  const GridFunction f = to_grid(family_uk(1, u, annulus_profile(2.0), a).f, spec);
  const GridFunction w = to_grid(family_uk(1, GridFunction(spec.drop_last_axis()), annulus_profile(2.0), a).f, spec);
  CHECK(max_abs(w.samples()) == 0.0);
  const auto column0 = f.samples().subspan(0, 64);
  double err = 0;
  for (std::size_t x = 0; x < 64; ++x) {
    for (std::size_t t = 0; t < 64; ++t) err = std::max(err, std::abs(f[x * 64 + t] - u[x] * column0[t] / u[0]));
  }
  CHECK(err <= 1e-12 * max_abs(f.samples()));
  CHECK_THROWS_AS(to_grid(family_uk(4, u, annulus_profile(2.0), a).f, spec), CapacityError);
}

TEST_CASE("slope fits") {
  const std::vector<double> k{4, 8, 16, 32, 64};
  std::vector<double> v;
  for (double x : k) v.push_back(3.0 * std::pow(x, 0.7));
  const auto fit = fit_log2_slope(k, v);
  CHECK(fit.slope == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
  v[2] = 0.0;
  CHECK(std::isnan(fit_log2_slope(k, v).slope));
  CHECK_THROWS_AS(fit_log2_slope(std::vector<double>{1.0}, std::vector<double>{1.0}), DomainError);

  const auto report = make_slope_report("x", "p=1", {4, 8}, {1.0, 2.0}, 0.9, 0.15);
  CHECK(report.slope == doctest::Approx(1.0));
  CHECK(report.pass);
  CHECK_FALSE(make_slope_report("x", "p=1", {4, 8}, {1.0, 2.0}, 0.5, 0.15).pass);
  CHECK(make_slope_report("x", "p=1", {4, 8}, {1.0, 2.0}, 0.5, 0.15, false).pass);
}

TEST_CASE("counterexample drivers on a small grid") {
  CounterexampleSetup setup;
  setup.grid = GridSpec({128, 128}, 4);
  const Exponent ps[] = {Exponent(1.0)};
  const Exponent qs[] = {Exponent(1.0), Exponent(2.0)};

  const auto u = run_uk(setup, ps, qs);
  REQUIRE(u.slopes.size() == 2);
  CHECK(u.slopes[0].slope == doctest::Approx(0.0).epsilon(0.15));
  CHECK(u.slopes[1].slope == doctest::Approx(-0.5).epsilon(0.15));
  CHECK(u.ratios[0].bounded_expected);
  CHECK(u.ratios[0].pass);
  CHECK_FALSE(u.ratios[1].bounded_expected);
  CHECK(u.ratios[1].slope >= 0.3);

  const auto v = run_vk(setup, ps, qs);
  for (double t : v.trace_integral) CHECK(t == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.slopes[1].pass);

  const Exponent us[] = {Exponent(1.0)};
  CHECK_THROWS_AS(run_gk(setup, Exponent(1.0), us, Exponent(1.0), Exponent(1.0)), CapacityError);
  setup.grid = GridSpec({256, 256}, 4);
  const auto g = run_gk(setup, Exponent(1.0), us, Exponent(1.0), Exponent(1.0));
  CHECK(g.k0 == 5);
  CHECK(g.norm_spread < 1.05);
  CHECK(g.trace_growth[0].slope > 0.8);

  CounterexampleSetup short_range = setup;
  short_range.ks = {4, 8};
  CHECK_THROWS_AS(run_uk(short_range, ps, qs), DomainError);
}

TEST_CASE("embedding reports") {
  const Anisotropy a({1, 1});
  const DyadicPartition P(GridSpec({64, 64}, 4), a);
  const SpaceParams b{Scale::Besov, 1.0, Exponent(1.0), Exponent(2.0), a};
  const auto same = check_embedding(b, b, P, 5, 3);
  REQUIRE(same.ratios.size() == 5);
  for (double r : same.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-14));

  auto pairs = standard_embedding_pairs(a);
  CHECK(pairs.size() == 7);
  for (auto& p : pairs) p.delta = source_white_delta(p);
  const auto reports = check_embeddings(pairs, P, 3, 11);
  for (const auto& r : reports) {
    CHECK(r.ratios.size() == 3);
    CHECK(r.min <= r.median);
    CHECK(r.median <= r.max);
    CHECK(std::isfinite(r.max));
  }
  const auto again = check_embeddings(pairs, P, 3, 11);
  for (std::size_t i = 0; i < reports.size(); ++i) CHECK(reports[i].ratios == again[i].ratios);

  const SpaceParams other{Scale::Besov, 1.0, Exponent(1.0), Exponent(2.0), Anisotropy({1, 2})};
  CHECK_THROWS_AS(check_embedding(b, other, P, 1, 1), DomainError);
}

TEST_CASE("npp constants") {
  const GridSpec spec({16, 32}, 4);
  GridFunction flat(spec);
  for (std::size_t i = 0; i < spec.size(); ++i) flat[i] = 2.0;
  CHECK(npp_constant(flat, 0, Exponent(1.0), 2.0) == doctest::Approx(1.0));
  CHECK(npp_constant(flat, 1, Exponent(1.0), 2.0) == doctest::Approx(0.25));

  const DyadicPartition P(GridSpec({64, 256}, 4), Anisotropy({1, 2}));
  const auto inf = check_npp(1, 5, Exponent::infinity(), P, 1);
  for (double c : inf.constants) CHECK(c == doctest::Approx(1.0));
  const auto r1 = check_npp(1, 5, Exponent(1.0), P, 2);
  const auto r2 = check_npp(1, 5, Exponent(1.0), P, 2);
  CHECK(r1.constants == r2.constants);
  CHECK(r1.min >= 1.0 / 4.0);
}

TEST_CASE("csv output") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::strtod(format_double(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(std::nan("")) == "nan");

  const auto report = make_slope_report("uk", "p=1;q=2", {4, 8}, {1.0, 0.5}, -0.5, 0.15);
  const CsvTable t = slope_table(std::span(&report, 1));
  std::stringstream ss;
  write_csv(ss, t);
  const CsvTable back = read_csv(ss);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);

  std::stringstream bad("a,b\n1,2,3\n");
  CHECK_THROWS_AS(read_csv(bad), IoError);
  CsvTable broken{{"a"}, {{"1", "2"}}};
  std::stringstream out;
  CHECK_THROWS_AS(write_csv(out, broken), StructuralError);
}
