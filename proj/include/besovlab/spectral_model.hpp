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

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "besovlab/anisotropy.hpp"
#include "besovlab/exponent.hpp"
#include "besovlab/torus_grid.hpp"

namespace besov {

/// A function on R^n given by its Fourier transform, f(x) = (2 pi)^{-n} int F(xi) e^{i x xi} dxi.
/// F vanishes outside the box |xi_i| <= extent_i.
struct SpectralModel {
  std::size_t dim = 0;
  std::function<Complex(std::span<const double> xi)> transform;
  std::vector<double> extent;
  /// Lower bound for |xi|_a on the support.
  double min_radius = 0.0;
  /// Per-axis spacing of the only frequencies `transform` accepts; 0 (or absent) for any frequency.
  std::vector<double> lattice;

  /// Upper bound for |xi|_a on the support, sum_i extent_i^{1/a_i}.
  double radius(const Anisotropy& a) const;
};

/// The partition profile phi_j(d), without a grid.
struct BandShape {
  Anisotropy a;
  double inner = 1.0;
  double outer = 2.0;

  double value(int j, double d) const;
  /// Largest level whose band can meet a support of the given radius.
  int last_level(double radius) const;
  /// phi_j vanishes wherever |xi|_a >= min_radius.
  bool below(int j, double min_radius) const { return outer * std::exp2(j) <= min_radius; }
};

/// Band j of a model on an evaluation grid after the change of variables xi = D eta,
/// D = diag(2^{e_i}): h~(y) = h_j(D^{-1} y), so ||h_j||_p = det(D)^{-1/p} ||h~||_p.
struct ModelBand {
  GridFunction h;
  std::vector<int> exponents;
  int log2_det = 0;
};

/// e_i is the smallest integer with min(extent_i, (outer 2^j)^{a_i}) / 2^{e_i} at most a quarter
/// of the grid's frequency range, so every band is sampled at the same relative resolution;
/// e_i >= 0 on lattice axes. With all e_i = 0 the samples are those of the dense path
/// (to_grid, then band projection).
ModelBand evaluate_band(const SpectralModel& model, const BandShape& shape, int j, const GridSpec& grid);

/// log2 ||h_j||_p (in units of the normalized torus measure) for j = 0..last_level and every p;
/// -inf for empty bands. Result indexed [p][j].
std::vector<std::vector<double>> model_band_log2_norms(const SpectralModel& model, const BandShape& shape,
                                                       const GridSpec& grid, std::span<const Exponent> ps);

/// (sum_j (2^{js} ||h_j||_p)^q)^{1/q} from log2 band norms, evaluated without overflow.
double besov_from_log2_norms(std::span<const double> log2_norms, double s, const Exponent& q);

/// Dense samples: c_k = (2 pi M)^{-n} F(k / M). CapacityError when the support does not fit.
GridFunction to_grid(const SpectralModel& model, const GridSpec& spec);

/// The model whose dense samples on `f.spec()` are f; F is read off the lattice and must only be
/// evaluated at lattice frequencies k / M (StructuralError otherwise).
SpectralModel model_from_grid(const GridFunction& f);

}  // namespace besov
