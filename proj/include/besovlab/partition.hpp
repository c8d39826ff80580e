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

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "besovlab/anisotropy.hpp"
#include "besovlab/torus_grid.hpp"

namespace besov {

/// C-infinity step: 1 on [0, inner], 0 on [outer, inf), glued with exp(-1/t).
double smooth_step(double t, double inner, double outer);

/// Smooth bump, positive exactly on ]lo, hi[.
double smooth_bump(double t, double lo, double hi);

/// phi_j as a function of d = |xi|_a for the step smooth_step(., inner, outer); any j >= 0.
double partition_value(int j, double d, double inner, double outer);

/// Anisotropic dyadic partition of unity on the lattice of a grid.
///
/// phi_0(xi) = theta(|xi|_a), phi_j(xi) = theta(2^-j |xi|_a) - theta(2^{1-j} |xi|_a),
/// theta = smooth_step(., inner, outer). Only the distance field is stored.
class DyadicPartition {
 public:
  /// levels defaults to the largest level the grid can hold.
  DyadicPartition(GridSpec spec, Anisotropy a, std::optional<int> levels = std::nullopt,
                  double inner = 1.0, double outer = 2.0);

  const GridSpec& spec() const { return spec_; }
  const Anisotropy& anisotropy() const { return a_; }
  int levels() const { return levels_; }
  double inner() const { return inner_; }
  double outer() const { return outer_; }

  /// phi_j as a function of the anisotropic distance d = |xi|_a.
  double value(int j, double d) const;
  double value_at(int j, std::span<const double> xi) const;

  /// |xi|_a at every lattice point, FFT order.
  std::span<const double> distances() const { return distance_; }

  /// phi_j sampled on the lattice.
  std::vector<double> multiplier(int j) const;
  /// phi_j(., 0) on the lattice of the grid without its last axis.
  std::vector<double> hyperplane_multiplier(int j) const;
  /// 1 - sum_{j <= J} phi_j; vanishes for |xi|_a <= inner * 2^J.
  std::vector<double> tail() const;

  /// Radii [lo, hi] outside of which phi_j vanishes.
  std::pair<double, double> annulus(int j) const;

  /// Throws CapacityError when the spectrum reaches where the tail is nonzero
  /// (relative to the largest coefficient, tolerance 1e-12).
  void require_band_limited(const SpectrumFunction& spectrum) const;

 private:
  void check_level(int j) const;

  GridSpec spec_;
  Anisotropy a_;
  int levels_ = 0;
  double inner_ = 1.0;
  double outer_ = 2.0;
  std::vector<double> distance_;
};

/// F^{-1}[phi_j F f].
GridFunction band_project(const GridFunction& f, const DyadicPartition& P, int j);

/// All bands j = 0..J from one forward transform. Throws CapacityError when f is
/// not band-limited to the partition.
std::vector<GridFunction> band_decompose(const GridFunction& f, const DyadicPartition& P);

/// One-dimensional extension profiles eta_0 (support ]-1,1[) and eta
/// (support ]lo,hi[, default ]1,2[), in physical xi_n units.
class EtaProfiles {
 public:
  explicit EtaProfiles(double normal_weight, double lo = 1.0, double hi = 2.0);

  double normal_weight() const { return a_n_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }

  /// Unnormalized eta_j(t): eta_0 for j = 0, eta(2^{-j a_n} t) otherwise.
  double shape(int j, double t) const;

  /// Largest physical |xi_n| in the support of eta_j.
  double support_extent(int j) const;

  /// x_n -> 2^{-j a_n} (F_1^{-1} eta_j)(x_n) on a one-dimensional grid, normalized
  /// by the lattice sum so that its value at x_n = 0 is exactly 1.
  GridFunction term_profile(int j, const GridSpec& axis) const;

 private:
  double a_n_;
  double lo_;
  double hi_;
};

}  // namespace besov
