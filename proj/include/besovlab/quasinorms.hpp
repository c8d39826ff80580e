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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "besovlab/anisotropy.hpp"
#include "besovlab/exponent.hpp"
#include "besovlab/partition.hpp"
#include "besovlab/torus_grid.hpp"

namespace besov {

enum class Scale { Besov, LizorkinTriebel, Approximation };

std::string to_string(Scale scale);
/// Accepts "B", "F", "A" and the full names (case-insensitive).
Scale parse_scale(const std::string& text);

struct SpaceParams {
  Scale scale = Scale::Besov;
  double s = 0.0;
  Exponent p = Exponent(2.0);
  Exponent q = Exponent(2.0);
  Anisotropy a = Anisotropy({1.0});

  /// Throws DomainError: F needs p < inf; A needs s > sigma_p, or s = sigma_p with q <= 1.
  void validate() const;
};

/// Representation f = sum h_j with supp F h_j inside {|xi|_a <= 2^j}.
class BandDecomposition {
 public:
  struct Term {
    int level;
    GridFunction h;
  };

  BandDecomposition() = default;

  /// Checks the spectral support (relative leakage <= 1e-12); throws DomainError otherwise.
  void add(int level, GridFunction h, const Anisotropy& a);

  std::span<const Term> terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

 private:
  std::vector<Term> terms_;
};

/// (sum_j t_j^q)^{1/q} with max for q = inf; the terms are nonnegative.
double lq_sum(std::span<const double> terms, const Exponent& q);

/// ||h_j||_p for each band.
std::vector<double> band_lp_norms(std::span<const GridFunction> bands, const Exponent& p);

/// (sum_j 2^{jsq} norms_j^q)^{1/q}, norms indexed from level 0.
double besov_from_band_norms(std::span<const double> norms, double s, const Exponent& q);

/// || (sum_j 2^{jsq} |h_j|^q)^{1/q} ||_p over the grid; bands indexed from level 0.
double lizorkin_triebel_from_bands(std::span<const GridFunction> bands, double s, const Exponent& p,
                                   const Exponent& q);

double besov_norm(const GridFunction& f, const DyadicPartition& P, const SpaceParams& prm);
double lizorkin_triebel_norm(const GridFunction& f, const DyadicPartition& P, const SpaceParams& prm);

/// (sum_j 2^{jsq} ||h_j||_p^q)^{1/q} for one representation.
double approx_norm_of(const BandDecomposition& d, const SpaceParams& prm);

/// Upper bound for the A-quasi-norm: minimum over the canonical Littlewood-Paley
/// representation (band j re-indexed to j + 1) and, for s = 0 and p >= 1, the greedy
/// dyadic partial-sum representation.
double approx_norm_upper(const GridFunction& f, const DyadicPartition& P, const SpaceParams& prm);
/// Same, from the band decomposition of f.
double approx_norm_from_bands(const GridFunction& f, std::span<const GridFunction> bands, const SpaceParams& prm);

/// Dispatches on prm.scale (A gives approx_norm_upper).
double quasinorm(const GridFunction& f, const DyadicPartition& P, const SpaceParams& prm);

/// Coefficients lambda_{nu m} on one level: m ranges over a box lattice of the torus.
/// With b_i = N_i / shape_i, cell m is centered at grid node m_i b_i and covers the
/// grid indices [m_i b_i - b_i / 2, m_i b_i + b_i / 2) (integer division, periodic).
struct CoefficientLevel {
  int level = 0;
  std::vector<std::size_t> shape;
  std::vector<Complex> values;  // row-major over shape
};

using Coefficients = std::vector<CoefficientLevel>;

/// (sum_nu (sum_m |lambda_{nu m}|^p)^{q/p})^{1/q}.
double sequence_norm_b(const Coefficients& lambda, const Exponent& p, const Exponent& q);

/// || (sum_{nu,m} (|Q_{nu m}|^{-1/p} |lambda_{nu m}| chi_{nu m})^q)^{1/q} ||_p on the grid,
/// |Q| in the normalized torus measure.
double sequence_norm_f(const Coefficients& lambda, const GridSpec& spec, const Exponent& p, const Exponent& q);

}  // namespace besov
