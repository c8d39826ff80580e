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

#include "besovlab/errors.hpp"
#include "besovlab/experiments.hpp"

namespace besov {

// ---------------------------------------------------------------- random

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

std::uint64_t CounterRng::next() {
  return splitmix(splitmix(seed_) ^ splitmix(stream_ + 0x632BE59BD9B4E019ULL) ^ (counter_++ * 0xD1B54A32D192ED03ULL));
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  const double u = 1.0 - uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Complex CounterRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex{re, im} * std::numbers::sqrt2 * 0.5;
}

CounterRng CounterRng::fork(std::uint64_t stream) const {
  return CounterRng(splitmix(seed_ ^ splitmix(stream_)), stream);
}

GridFunction random_field(const DyadicPartition& P, CounterRng& rng, double delta) {
  const auto d = P.distances();
  const int J = P.levels();
  const double radius = P.inner() * std::exp2(J);
  auto level_of = [&](double t) {
    if (t <= P.inner()) return 0;
    return std::min(J, static_cast<int>(std::ceil(std::log2(t / P.inner()))));
  };
  std::vector<std::size_t> count(static_cast<std::size_t>(J) + 1, 0);
  for (double t : d) {
    if (t <= radius) ++count[static_cast<std::size_t>(level_of(t))];
  }
  SpectrumFunction c(P.spec());
  auto coef = c.coefficients();
  for (std::size_t i = 0; i < coef.size(); ++i) {
    if (d[i] > radius) continue;
    const int j = level_of(d[i]);
    const double energy = std::exp2(-j * delta) / static_cast<double>(count[static_cast<std::size_t>(j)]);
    coef[i] = std::sqrt(energy) * rng.complex_normal();
  }
  return inverse_transform(c);
}

// -------------------------------------------------------------- profiles

double profile_value_at_zero(const RadialProfile& profile, double weight) {
  // (1/pi) int_0^hi value(t) a t^{a-1} dt, composite Simpson.
  const int n = 1 << 14;
  const double lo = profile.lo;
  const double h = (profile.hi - lo) / n;
  double acc = 0;
  for (int i = 0; i <= n; ++i) {
    const double t = lo + h * i;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * profile.value(t) * weight * std::pow(t, weight - 1.0);
  }
  return acc * h / 3.0 / std::numbers::pi;
}

RadialProfile annulus_profile(double normal_weight, double lo, double hi) {
  if (!(0 < lo && lo < hi)) throw DomainError("annulus profile needs 0 < lo < hi");
  RadialProfile w{[lo, hi](double t) { return smooth_bump(t, lo, hi); }, lo, hi, 0.0};
  const double c = profile_value_at_zero(w, normal_weight);
  w.value = [lo, hi, c](double t) { return smooth_bump(t, lo, hi) / c; };
  return w;
}

RadialProfile lowpass_profile(double normal_weight, double radius) {
  if (!(radius > 0)) throw DomainError("low-pass radius must be positive");
  RadialProfile g{[radius](double t) { return smooth_step(t, 0.5 * radius, radius); }, 0.0, radius, 0.5 * radius};
  const double c = profile_value_at_zero(g, normal_weight);
  g.value = [radius, c](double t) { return smooth_step(t, 0.5 * radius, radius) / c; };
  return g;
}

RadialProfile lowball_profile(double radius) {
  if (!(radius > 0)) throw DomainError("low-ball radius must be positive");
  return RadialProfile{[radius](double t) { return smooth_step(t, 0.5 * radius, radius); }, 0.0, radius,
                       0.5 * radius};
}

GridFunction default_base(const GridSpec& tangential, std::span<const double> weights) {
  if (weights.size() != tangential.dim()) throw StructuralError("weights do not match the tangential grid");
  const double m = tangential.base_scale();
  for (std::size_t i = 0; i < tangential.dim(); ++i) {
    if (m >= static_cast<double>(tangential.points(i)) / 2.0) throw CapacityError("tangential grid too small");
  }
  SpectrumFunction c(tangential);
  auto coef = c.coefficients();
  std::vector<double> xi(tangential.dim());
  double total = 0;
  for (std::size_t flat = 0; flat < coef.size(); ++flat) {
    for (std::size_t i = 0; i < xi.size(); ++i) {
      xi[i] = static_cast<double>(tangential.frequency(i, (flat / tangential.stride(i)) % tangential.points(i))) / m;
    }
    const double v = smooth_step(aniso_distance(weights, xi), 0.5, 1.0);
    coef[flat] = v;
    total += v;
  }
  for (auto& v : coef) v /= total;
  return inverse_transform(c);
}

// -------------------------------------------------------------- families

namespace {

void check_family_level(int k, double top_exponent) {
  if (k < 1) throw DomainError("family index k must be >= 1");
  if (top_exponent > 900.0) throw CapacityError("family index k too large for double range");
}

std::vector<double> tangential_weights(const Anisotropy& a) {
  if (a.dim() < 2) throw DomainError("families need n >= 2");
  const auto w = a.weights();
  return {w.begin(), w.end() - 1};
}

// sum_{l=first}^{last} 2^{-l a}.
double geometric(int first, int last, double a) {
  if (first > last) return 0.0;
  const double r = std::exp2(-a);
  return std::exp2(-a * first) * (1.0 - std::pow(r, last - first + 1)) / (1.0 - r);
}

}  // namespace

FamilyMember family_uk(int k, const GridFunction& u, const RadialProfile& w, const Anisotropy& a) {
  const double a_n = a.normal_weight();
  check_family_level(k, k * a_n);
  if (u.spec().dim() + 1 != a.dim()) throw StructuralError("base u must live on n - 1 axes");
  if (!(w.lo > 0)) throw DomainError("w must be an annulus profile");
  const SpectralModel um = model_from_grid(u);
  const std::size_t n = a.dim();
  FamilyMember out;
  out.k = k;
  out.trace = um;
  out.f.dim = n;
  out.f.extent = um.extent;
  out.f.extent.push_back(std::pow(w.hi * std::exp2(k), a_n));
  out.f.min_radius = w.lo * 2.0;
  out.f.lattice = um.lattice;
  out.f.lattice.push_back(0.0);
  const auto transform_u = um.transform;
  out.f.transform = [k, w, a_n, n, transform_u](std::span<const double> xi) -> Complex {
    const double t = std::pow(std::fabs(xi[n - 1]), 1.0 / a_n);
    if (t == 0.0) return 0.0;
    const int first = std::max(1, static_cast<int>(std::floor(std::log2(t / w.hi))) - 1);
    const int last = std::min(k, static_cast<int>(std::ceil(std::log2(t / w.lo))) + 1);
    double sum = 0;
    for (int l = first; l <= last; ++l) {
      const double tl = std::ldexp(t, -l);
      if (tl > w.lo && tl < w.hi) sum += std::exp2(-l * a_n) * w.value(tl);
    }
    if (sum == 0.0) return 0.0;
    return transform_u(xi.first(n - 1)) * (sum / k);
  };
  return out;
}

FamilyMember family_vk(int k, const RadialProfile& f, const RadialProfile& g, const Anisotropy& a) {
  const double a_n = a.normal_weight();
  check_family_level(k, 2.0 * k * a.max_weight());
  if (!(f.flat > 0 && g.flat > 0 && f.lo == 0 && g.lo == 0)) throw DomainError("v_k needs low-pass profiles");
  const auto wt = tangential_weights(a);
  const std::size_t n = a.dim();
  const double f0 = f.value(0.0);
  const double g0 = g.value(0.0);
  const double g_at_zero = profile_value_at_zero(g, a_n);

  // Terms below `first` vanish, terms above `flat` equal their value at 0.
  auto range = [k](double hi_ratio, double flat_ratio) {
    int first = k + 1;
    if (hi_ratio > 0) first = std::max(first, static_cast<int>(std::floor(std::log2(hi_ratio))) - 1);
    int flat = k;
    if (flat_ratio > 0) flat = std::clamp(static_cast<int>(std::ceil(std::log2(flat_ratio))) + 1, k, 2 * k);
    return std::pair{first, flat};
  };

  FamilyMember out;
  out.k = k;
  out.f.dim = n;
  out.trace.dim = n - 1;
  for (std::size_t i = 0; i + 1 < n; ++i) out.f.extent.push_back(std::pow(f.hi * std::exp2(2 * k), wt[i]));
  out.trace.extent = out.f.extent;
  out.f.extent.push_back(std::pow(g.hi * std::exp2(2 * k), a_n));

  out.f.transform = [=](std::span<const double> xi) -> Complex {
    const double tp = n > 1 ? aniso_distance(wt, xi.first(n - 1)) : 0.0;
    const double tn = std::pow(std::fabs(xi[n - 1]), 1.0 / a_n);
    const auto [first, flat] = range(std::max(tp / f.hi, tn / g.hi), std::max(tp / f.flat, tn / g.flat));
    double sum = 0;
    for (int l = first; l <= flat; ++l) {
      const double sp = std::ldexp(tp, -l);
      const double sn = std::ldexp(tn, -l);
      if (sp >= f.hi || sn >= g.hi) continue;
      sum += std::exp2(-l * a_n) * f.value(sp) * g.value(sn);
    }
    sum += f0 * g0 * geometric(std::max(flat + 1, k + 1), 2 * k, a_n);
    return sum / k;
  };
  out.trace.transform = [=](std::span<const double> xi) -> Complex {
    const double tp = aniso_distance(wt, xi);
    const auto [first, flat] = range(tp / f.hi, tp / f.flat);
    double sum = 0;
    for (int l = first; l <= flat; ++l) {
      const double sp = std::ldexp(tp, -l);
      if (sp < f.hi) sum += f.value(sp);
    }
    sum += f0 * std::max(0, 2 * k - std::max(flat + 1, k + 1) + 1);
    return sum * g_at_zero / k;
  };
  return out;
}

GkSetup gk_setup(const Anisotropy& a) {
  GkSetup s{BandShape{a, 1.1, 1.3}};
  const double a_n = a.normal_weight();
  const double top = std::pow(s.eta_hi, 1.0 / a_n);
  if (std::pow(s.eta_lo, 1.0 / a_n) < 0.5 * s.shape.outer || top >= s.shape.inner) {
    throw DomainError("eta support does not fit inside one band");
  }
  while (s.shape.outer * std::exp2(-s.k0) + top > s.shape.inner) ++s.k0;
  return s;
}

FamilyMember family_gk(int k, const GkSetup& setup) {
  const auto& a = setup.shape.a;
  const double a_n = a.normal_weight();
  if (k < 0) throw DomainError("family index k must be >= 0");
  const double L = (k + setup.k0) * a_n;
  if (L + k * a.max_weight() > 900.0) throw CapacityError("family index k too large for double range");
  const auto wt = tangential_weights(a);
  const std::size_t n = a.dim();
  const double inner = setup.shape.inner, outer = setup.shape.outer;
  const double lo = setup.eta_lo, hi = setup.eta_hi;

  FamilyMember out;
  out.k = k;
  out.f.dim = n;
  out.trace.dim = n - 1;
  for (std::size_t i = 0; i + 1 < n; ++i) out.f.extent.push_back(std::pow(outer * std::exp2(k), wt[i]));
  out.trace.extent = out.f.extent;
  out.f.extent.push_back(hi * std::exp2(L));
  out.f.min_radius = std::pow(lo, 1.0 / a_n) * std::exp2(k + setup.k0);

  out.f.transform = [=](std::span<const double> xi) -> Complex {
    const double eta = smooth_bump(xi[n - 1] * std::exp2(-L), lo, hi);
    if (eta == 0.0) return 0.0;
    const double theta = smooth_step(std::ldexp(aniso_distance(wt, xi.first(n - 1)), -k), inner, outer);
    return std::exp2(-L) * eta * theta;
  };
  // (F_1^{-1} eta)(0) = (2 pi)^{-1} int eta.
  const RadialProfile eta{[lo, hi](double t) { return smooth_bump(t, lo, hi); }, lo, hi, 0.0};
  const double eta0 = 0.5 * profile_value_at_zero(eta, 1.0);
  out.trace.transform = [=](std::span<const double> xi) -> Complex {
    return eta0 * smooth_step(std::ldexp(aniso_distance(wt, xi), -k), inner, outer);
  };
  return out;
}

}  // namespace besov
