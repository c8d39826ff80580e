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

#include "besovlab/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "besovlab/errors.hpp"
#include "besovlab/partition.hpp"
#include "besovlab/quasinorms.hpp"

namespace besov {

namespace {

double lattice_scale(const GridSpec& spec) {
  return std::pow(2.0 * std::numbers::pi * spec.base_scale(), -static_cast<double>(spec.dim()));
}

}  // namespace

double SpectralModel::radius(const Anisotropy& a) const {
  double r = 0;
  for (std::size_t i = 0; i < dim; ++i) r += std::pow(extent[i], 1.0 / a[i]);
  return r;
}

double BandShape::value(int j, double d) const { return partition_value(j, d, inner, outer); }

int BandShape::last_level(double radius) const {
  if (radius < inner) return 0;
  return static_cast<int>(std::floor(std::log2(radius / inner))) + 1;
}

ModelBand evaluate_band(const SpectralModel& model, const BandShape& shape, int j, const GridSpec& grid) {
  const std::size_t n = grid.dim();
  if (model.dim != n || shape.a.dim() != n || model.extent.size() != n) {
    throw StructuralError("model, anisotropy and evaluation grid dimensions differ");
  }
  if (j < 0) throw DomainError("band level must be >= 0");
  const double m = grid.base_scale();
  ModelBand band{GridFunction(grid), std::vector<int>(n, 0), 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double reach = std::min(model.extent[i], std::pow(shape.outer * std::exp2(j), shape.a[i]));
    const double cap = static_cast<double>(grid.points(i)) / (4.0 * m);
    const bool on_lattice = i < model.lattice.size() && model.lattice[i] > 0;
    if (reach > 0) band.exponents[i] = std::max(-60, static_cast<int>(std::ceil(std::log2(reach / cap))));
    if (on_lattice) band.exponents[i] = std::max(0, band.exponents[i]);
    band.log2_det += band.exponents[i];
  }
  const double scale = std::ldexp(lattice_scale(grid), band.log2_det);
  SpectrumFunction c(grid);
  auto coef = c.coefficients();
  std::vector<double> xi(n);
  for (std::size_t flat = 0; flat < coef.size(); ++flat) {
    bool inside = true;
    for (std::size_t i = 0; i < n; ++i) {
      const long k = grid.frequency(i, (flat / grid.stride(i)) % grid.points(i));
      xi[i] = std::ldexp(static_cast<double>(k) / m, band.exponents[i]);
      if (std::fabs(xi[i]) > model.extent[i]) inside = false;
    }
    if (!inside) continue;
    const double phi = shape.value(j, aniso_distance(shape.a, xi));
    if (phi == 0.0) continue;
    coef[flat] = scale * phi * model.transform(xi);
  }
  band.h = inverse_transform(c);
  return band;
}

std::vector<std::vector<double>> model_band_log2_norms(const SpectralModel& model, const BandShape& shape,
                                                       const GridSpec& grid, std::span<const Exponent> ps) {
  const int last = shape.last_level(model.radius(shape.a));
  std::vector<std::vector<double>> out(ps.size(), std::vector<double>(static_cast<std::size_t>(last) + 1));
  for (int j = 0; j <= last; ++j) {
    if (shape.below(j, model.min_radius)) {
      for (auto& row : out) row[static_cast<std::size_t>(j)] = -std::numeric_limits<double>::infinity();
      continue;
    }
    const auto band = evaluate_band(model, shape, j, grid);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const double norm = lp_norm(band.h, ps[k]);
      out[k][static_cast<std::size_t>(j)] = norm > 0 ? std::log2(norm) - band.log2_det * ps[k].reciprocal()
                                                     : -std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

double besov_from_log2_norms(std::span<const double> log2_norms, double s, const Exponent& q) {
  double top = -std::numeric_limits<double>::infinity();
  std::vector<double> weighted(log2_norms.size());
  for (std::size_t j = 0; j < log2_norms.size(); ++j) {
    weighted[j] = log2_norms[j] + static_cast<double>(j) * s;
    top = std::max(top, weighted[j]);
  }
  if (!std::isfinite(top)) return 0.0;
  for (auto& w : weighted) w = std::exp2(w - top);
  return std::exp2(top) * lq_sum(weighted, q);
}

GridFunction to_grid(const SpectralModel& model, const GridSpec& spec) {
  const std::size_t n = spec.dim();
  if (model.dim != n || model.extent.size() != n) throw StructuralError("model and grid dimensions differ");
  const double m = spec.base_scale();
  for (std::size_t i = 0; i < n; ++i) {
    if (model.extent[i] * m >= static_cast<double>(spec.points(i)) / 2.0) {
      throw CapacityError("model spectrum on axis " + std::to_string(i) + " exceeds the grid");
    }
  }
  const double scale = lattice_scale(spec);
  SpectrumFunction c(spec);
  auto coef = c.coefficients();
  std::vector<double> xi(n);
  for (std::size_t flat = 0; flat < coef.size(); ++flat) {
    bool inside = true;
    for (std::size_t i = 0; i < n; ++i) {
      xi[i] = static_cast<double>(spec.frequency(i, (flat / spec.stride(i)) % spec.points(i))) / m;
      if (std::fabs(xi[i]) > model.extent[i]) inside = false;
    }
    if (inside) coef[flat] = scale * model.transform(xi);
  }
  return inverse_transform(c);
}

SpectralModel model_from_grid(const GridFunction& f) {
  const auto& spec = f.spec();
  const std::size_t n = spec.dim();
  auto spectrum = std::make_shared<SpectrumFunction>(forward_transform(f));
  const double peak = max_abs(spectrum->coefficients());
  const double m = spec.base_scale();
  SpectralModel model;
  model.dim = n;
  model.extent.assign(n, 0.0);
  model.lattice.assign(n, 1.0 / m);
  const auto coef = spectrum->coefficients();
  for (std::size_t flat = 0; flat < coef.size(); ++flat) {
    if (std::abs(coef[flat]) <= 1e-13 * peak) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = std::fabs(static_cast<double>(spec.frequency(i, (flat / spec.stride(i)) % spec.points(i)))) / m;
      model.extent[i] = std::max(model.extent[i], xi);
    }
  }
  const double scale = 1.0 / lattice_scale(spec);
  model.transform = [spectrum, scale, m, n](std::span<const double> xi) -> Complex {
    std::vector<long> k(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = xi[i] * m;
      k[i] = std::lround(t);
      if (std::fabs(t - static_cast<double>(k[i])) > 1e-9) {
        throw StructuralError("grid-backed model evaluated off its lattice");
      }
    }
    return scale * spectrum->at(k);
  };
  return model;
}

}  // namespace besov
