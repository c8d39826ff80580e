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

#include "besovlab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "besovlab/errors.hpp"

namespace besov {

namespace {

double glue(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double smooth_step(double t, double inner, double outer) {
  if (t <= inner) return 1.0;
  if (t >= outer) return 0.0;
  const double up = glue(outer - t);
  const double down = glue(t - inner);
  return up / (up + down);
}

double smooth_bump(double t, double lo, double hi) {
  if (t <= lo || t >= hi) return 0.0;
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double u = (t - mid) / half;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

// ---------------------------------------------------------- DyadicPartition

DyadicPartition::DyadicPartition(GridSpec spec, Anisotropy a, std::optional<int> levels, double inner,
                                 double outer)
    : spec_(std::move(spec)), a_(std::move(a)), inner_(inner), outer_(outer) {
  if (a_.dim() != spec_.dim()) throw StructuralError("anisotropy dimension does not match grid");
  if (!(inner_ > 0.0) || !(outer_ > inner_) || outer_ > 2.0 * inner_) {
    throw DomainError("partition radii need 0 < inner < outer <= 2 inner");
  }
  const int capacity = spec_.max_level(a_, outer_);
  if (capacity < 0) throw CapacityError("grid too small for level 0 of the partition");
  levels_ = levels.value_or(capacity);
  if (levels_ < 0) throw DomainError("partition level count must be >= 0");
  if (levels_ > capacity) {
    throw CapacityError("level " + std::to_string(levels_) + " exceeds grid capacity " + std::to_string(capacity));
  }
  distance_.resize(spec_.size());
  std::vector<double> xi(spec_.dim());
  for (std::size_t i = 0; i < spec_.size(); ++i) {
    spec_.physical_frequency(i, xi);
    distance_[i] = aniso_distance(a_, xi);
  }
}

void DyadicPartition::check_level(int j) const {
  if (j < 0 || j > levels_) {
    throw DomainError("band level " + std::to_string(j) + " outside [0, " + std::to_string(levels_) + "]");
  }
}

double partition_value(int j, double d, double inner, double outer) {
  if (j == 0) return smooth_step(d, inner, outer);
  return smooth_step(std::ldexp(d, -j), inner, outer) - smooth_step(std::ldexp(d, 1 - j), inner, outer);
}

double DyadicPartition::value(int j, double d) const { return partition_value(j, d, inner_, outer_); }

double DyadicPartition::value_at(int j, std::span<const double> xi) const {
  return value(j, aniso_distance(a_, xi));
}

std::vector<double> DyadicPartition::multiplier(int j) const {
  check_level(j);
  std::vector<double> m(distance_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = value(j, distance_[i]);
  return m;
}

std::vector<double> DyadicPartition::hyperplane_multiplier(int j) const {
  check_level(j);
  if (spec_.dim() < 2) throw DomainError("hyperplane multiplier needs n >= 2");
  const std::size_t last = spec_.points(spec_.dim() - 1);
  std::vector<double> m(spec_.size() / last);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = value(j, distance_[i * last]);
  return m;
}

std::vector<double> DyadicPartition::tail() const {
  std::vector<double> m(distance_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = 1.0 - smooth_step(std::ldexp(distance_[i], -levels_), inner_, outer_);
  return m;
}

std::pair<double, double> DyadicPartition::annulus(int j) const {
  if (j == 0) return {0.0, outer_};
  return {std::ldexp(inner_, j - 1), std::ldexp(outer_, j)};
}

void DyadicPartition::require_band_limited(const SpectrumFunction& spectrum) const {
  if (!(spectrum.spec() == spec_)) throw StructuralError("spectrum grid does not match partition grid");
  const auto c = spectrum.coefficients();
  const double peak = max_abs(c);
  if (peak == 0.0) return;
  double leak = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::ldexp(distance_[i], -levels_) > inner_) leak = std::max(leak, std::abs(c[i]));
  }
  if (leak > 1e-12 * peak) {
    throw CapacityError("spectrum extends beyond radius " + std::to_string(std::ldexp(inner_, levels_)) +
                        " (relative leakage " + std::to_string(leak / peak) + ")");
  }
}

GridFunction band_project(const GridFunction& f, const DyadicPartition& P, int j) {
  return apply_multiplier(f, P.multiplier(j));
}

std::vector<GridFunction> band_decompose(const GridFunction& f, const DyadicPartition& P) {
  if (!(f.spec() == P.spec())) throw StructuralError("function grid does not match partition grid");
  const auto spectrum = forward_transform(f);
  P.require_band_limited(spectrum);
  std::vector<GridFunction> bands;
  bands.reserve(static_cast<std::size_t>(P.levels()) + 1);
  const auto d = P.distances();
  for (int j = 0; j <= P.levels(); ++j) {
    SpectrumFunction part(spectrum.spec());
    auto out = part.coefficients();
    const auto in = spectrum.coefficients();
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double m = P.value(j, d[i]);
      if (m != 0.0) out[i] = m * in[i];
    }
    bands.push_back(inverse_transform(part));
  }
  return bands;
}

// -------------------------------------------------------------- EtaProfiles

EtaProfiles::EtaProfiles(double normal_weight, double lo, double hi) : a_n_(normal_weight), lo_(lo), hi_(hi) {
  if (!(normal_weight >= 1.0)) throw DomainError("normal weight must be >= 1");
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("eta support needs 0 < lo < hi");
}

double EtaProfiles::shape(int j, double t) const {
  if (j < 0) throw DomainError("eta level must be >= 0");
  if (j == 0) return smooth_bump(t, -1.0, 1.0);
  return smooth_bump(t * std::pow(2.0, -j * a_n_), lo_, hi_);
}

double EtaProfiles::support_extent(int j) const {
  return j == 0 ? 1.0 : hi_ * std::pow(2.0, j * a_n_);
}

GridFunction EtaProfiles::term_profile(int j, const GridSpec& axis) const {
  if (axis.dim() != 1) throw StructuralError("eta profiles live on a one-dimensional grid");
  const double m = axis.base_scale();
  if (!(m * support_extent(j) < static_cast<double>(axis.points(0)) / 2.0)) {
    throw CapacityError("eta_" + std::to_string(j) + " does not fit the last axis");
  }
  SpectrumFunction c(axis);
  auto coef = c.coefficients();
  double total = 0.0;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    const double v = shape(j, static_cast<double>(axis.frequency(0, i)) / m);
    coef[i] = v;
    total += v;
  }
  if (!(total > 0.0)) throw CapacityError("eta_" + std::to_string(j) + " support holds no lattice frequency");
  for (auto& v : coef) v /= total;
  return inverse_transform(c);
}

}  // namespace besov
