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
#include <vector>

#include "besovlab/exponent.hpp"

namespace besov {

/// Weight vector a = (a', a_n) of an anisotropic dilation structure.
///
/// Invariants: n >= 1, all weights finite, min(weights) == 1 exactly.
/// Weights with another minimum are rejected rather than renormalized.
class Anisotropy {
 public:
  explicit Anisotropy(std::vector<double> weights);

  static Anisotropy isotropic(std::size_t n) { return Anisotropy(std::vector<double>(n, 1.0)); }

  std::size_t dim() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }

  /// |a| = a_1 + ... + a_n.
  double total() const { return total_; }
  double max_weight() const { return max_; }
  /// a_n, the weight of the normal (last) coordinate.
  double normal_weight() const { return weights_.back(); }
  /// a' = (a_1, ..., a_{n-1}); throws DomainError when n = 1 or min(a') != 1.
  Anisotropy tangential() const;
  /// |a'|, defined for n >= 2 even when a' itself is not a valid anisotropy.
  double tangential_total() const { return total_ - weights_.back(); }

  friend bool operator==(const Anisotropy&, const Anisotropy&) = default;

 private:
  std::vector<double> weights_;
  double total_ = 0.0;
  double max_ = 0.0;
};

/// t^a x, componentwise t^{a_i} x_i. Throws DomainError for t <= 0.
std::vector<double> dilate(const Anisotropy& a, double t, std::span<const double> x);

/// |x|_a: the unique t > 0 with sum x_i^2 / t^{2 a_i} = 1, and 0 at x = 0.
double aniso_distance(const Anisotropy& a, std::span<const double> x);

/// Same as aniso_distance for an arbitrary positive weight vector (no min == 1 requirement).
/// Used for sub-blocks of coordinates such as |xi_n|^{1/a_n}.
double aniso_distance(std::span<const double> weights, std::span<const double> x);

/// The plain bisection root finder, without closed-form fast paths.
double aniso_distance_bisection(std::span<const double> weights, std::span<const double> x);

/// sigma_p = |a| (1/p - 1)_+.
double sigma_p(const Anisotropy& a, const Exponent& p);
/// sigma_{p,q} = |a| (1/min(p,q) - 1)_+.
double sigma_pq(const Anisotropy& a, const Exponent& p, const Exponent& q);

}  // namespace besov
