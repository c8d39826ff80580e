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

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "besovlab/anisotropy.hpp"
#include "besovlab/partition.hpp"
#include "besovlab/quasinorms.hpp"
#include "besovlab/torus_grid.hpp"

namespace besov {

/// Dyadic rectangles on a grid. Chart units put the level-0 cell at side 1;
/// the level-nu cell spans base_cell_i / 2^{nu a_i} grid points on axis i.
class DyadicChart {
 public:
  DyadicChart(GridSpec spec, Anisotropy a, std::vector<std::size_t> base_cell);

  const GridSpec& spec() const { return spec_; }
  const Anisotropy& anisotropy() const { return a_; }

  /// Grid points per level-nu cell on an axis; throws CapacityError when not a whole number.
  std::size_t cell_points(int level, std::size_t axis) const;
  /// Number of level-nu cells along an axis.
  std::size_t cells(int level, std::size_t axis) const { return spec_.points(axis) / cell_points(level, axis); }
  /// Largest level whose cells are whole numbers of grid points.
  int max_level() const;
  /// |Q_{nu m}| in chart units, 2^{-nu |a|}.
  double cell_measure(int level) const;

 private:
  GridSpec spec_;
  Anisotropy a_;
  std::vector<std::size_t> base_;
};

struct AtomSpec {
  int level = 0;
  std::vector<long> position;  // m, centre 2^{-nu a} m in chart units
  double K = 0.0;              // smoothness budget
  double L = -1.0;             // moment budget; negative means no moments
  double c = 1.5;              // support dilation
};

enum class AtomClass { OneK, SP };

/// Samples on a box of grid points; origin may be negative and wraps periodically.
struct Patch {
  std::vector<long> origin;
  std::vector<std::size_t> dims;
  std::vector<Complex> values;  // row-major over dims
};

struct AtomFunction {
  AtomSpec spec;
  Patch patch;
  AtomClass classification = AtomClass::SP;
};

struct AtomCheck {
  bool pass = true;
  double margin = 0.0;
  std::string detail;
};

struct AtomReport {
  AtomCheck support;
  AtomCheck size;
  AtomCheck moments;
  bool all() const { return support.pass && size.pass && moments.pass; }
};

/// Multi-indices beta with a . beta <= budget (empty for budget < 0).
std::vector<std::vector<int>> multi_indices(const Anisotropy& a, double budget);

/// Support in cQ, derivative bounds |D^beta rho| <= |Q|^{(s - a beta)/|a| - 1/p} (10% slack,
/// centred finite differences in chart units), and moments (relative 1e-8, SP atoms only).
AtomReport validate_atom(const AtomFunction& atom, const DyadicChart& chart, double s, const Exponent& p);

/// Samples of bump(z) P(z) at z = i / cell_points, |i| <= half_width * cell_points, where the
/// polynomial P makes the discrete moments sum z^k psi(z) vanish for k <= vanishing and psi(0) = 1.
/// vanishing < 0 gives the plain bump. Index i + R holds offset i.
std::vector<double> moment_profile(std::size_t cell_points, double half_width, int vanishing);

/// Tensor atom at Q_{nu m}: moment profile on the first axis (SP atoms), bumps elsewhere,
/// scaled so that the largest size margin is exactly 1.
AtomFunction make_atom(const DyadicChart& chart, const AtomSpec& spec, double s, const Exponent& p);

/// sum_i lambda_i rho_i on the chart grid.
GridFunction synthesize_atoms(std::span<const AtomFunction> atoms, std::span<const Complex> lambda,
                              const DyadicChart& chart);

/// lambda arranged on the per-level cell lattices (cells centred at the atom positions).
Coefficients atom_coefficients(std::span<const AtomFunction> atoms, std::span<const Complex> lambda,
                               const DyadicChart& chart);

/// cQ_{nu m} meets the hyperplane x_n = 0 (periodically).
bool touches_hyperplane(const AtomSpec& spec, const DyadicChart& chart);

/// psi_1 sampler: given the grid points of a cell, samples on [-1/2, 1/2] cell units.
using NormalProfile = std::function<std::vector<double>(std::size_t cell_points)>;

/// Default psi_1: moment_profile(cell_points, 1/2, floor(L / a_n)).
NormalProfile default_normal_profile(double L, double normal_weight);

struct FlattenResult {
  std::vector<Complex> lambda;        // zero off the hyperplane-touching set
  std::vector<AtomFunction> atoms;    // rho(x', 0) psi_1(2^{nu a_n} x_n)
  std::vector<bool> kept;
};

/// Throws DomainError when psi_1 fails psi_1(0) = 1, its support, or its moments.
FlattenResult flatten_for_trace(std::span<const Complex> lambda, std::span<const AtomFunction> atoms,
                                const DyadicChart& chart, const NormalProfile& psi);

/// Axis-parallel box [lo_i, hi_i) in chart units.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  double measure() const;
};

/// The flattened rectangle Q~ (centred on the hyperplane) and its lower slab E~.
Box flattened_rectangle(const AtomSpec& spec, const Anisotropy& a);
Box lower_slab(const AtomSpec& spec, const Anisotropy& a);
bool boxes_overlap(const Box& x, const Box& y);
/// Pairwise disjointness of the slabs E~ over an index set.
bool slabs_pairwise_disjoint(std::span<const AtomSpec> specs, const Anisotropy& a);

// ------------------------------------------------------------ phi-transform

/// Level-nu sampling lattice (points per axis): the smallest power of two S_i with
/// S_i >= 4 M (outer 2^nu)^{a_i}. Throws CapacityError when S_i exceeds the grid.
std::vector<std::size_t> phi_sampling_shape(const DyadicPartition& P, int level);

/// Smooth product profile, 1 for |k_i| <= S_i / 4 and 0 for |k_i| >= S_i / 2.
double phi_profile(std::span<const long> k, std::span<const std::size_t> shape);

struct PhiTransform {
  Coefficients lambda;
  double snapping_error = 0.0;  // grid-node snapping distance, in grid cells
};

/// lambda_{nu m} = 2^{nu s} |Q_{nu m}|^{1/p} (F^{-1} phi_nu F g)(x_{nu m}), |Q| in the normalized
/// torus measure; x_{nu m} = m N / S on every axis.
PhiTransform phi_analysis(const GridFunction& g, const DyadicPartition& P, double s, const Exponent& p);

/// Inverse of phi_analysis on band-limited inputs: zero-insertion upsampling of
/// lambda / (2^{nu s} |Q|^{1/p}) filtered by phi_profile.
GridFunction phi_synthesis(const Coefficients& lambda, const GridSpec& spec, double s, const Exponent& p);

/// CSV with columns nu, m_1..m_n, re, im; every lattice entry is written.
void write_coefficients_csv(std::ostream& out, const Coefficients& lambda, std::size_t n);
Coefficients read_coefficients_csv(std::istream& in);

}  // namespace besov
