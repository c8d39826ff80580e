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
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "besovlab/anisotropy.hpp"
#include "besovlab/exponent.hpp"

namespace besov {

using Complex = std::complex<double>;

/// Uniform grid on the torus [0, 2 pi M)^n.
///
/// Lattice frequency k (integer vector) stands for the physical frequency
/// xi = k / M, so the unit anisotropic ball holds about M^n lattice points.
/// Samples and coefficients are stored row-major with the last axis fastest;
/// coefficients use FFT order (index i <-> frequency i for i < N/2, i - N otherwise).
class GridSpec {
 public:
  GridSpec(std::vector<std::size_t> points_per_axis, int base_scale = 8);

  std::size_t dim() const { return points_.size(); }
  std::size_t size() const { return size_; }
  std::size_t points(std::size_t axis) const { return points_[axis]; }
  std::span<const std::size_t> points_per_axis() const { return points_; }
  int base_scale() const { return base_scale_; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }

  /// Signed lattice frequency of FFT-order index i on the given axis.
  long frequency(std::size_t axis, std::size_t i) const {
    const auto n = static_cast<long>(points_[axis]);
    const auto k = static_cast<long>(i);
    return k < n / 2 ? k : k - n;
  }
  /// FFT-order index of a signed lattice frequency (taken modulo N).
  std::size_t index_of_frequency(std::size_t axis, long k) const;

  /// Physical frequency vector xi = k / M of the coefficient at flat index `flat`.
  void physical_frequency(std::size_t flat, std::span<double> xi) const;

  /// Largest level J such that the ball |xi|_a <= outer_radius * 2^J lies strictly inside
  /// the Nyquist box on every axis; -1 when even J = 0 does not fit.
  int max_level(const Anisotropy& a, double outer_radius = 2.0) const;

  /// Grid without the last axis.
  GridSpec drop_last_axis() const;
  /// Grid with one extra trailing axis.
  GridSpec append_axis(std::size_t points) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::vector<std::size_t> points_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
  int base_scale_ = 8;
};

/// Complex samples of a periodic function on a GridSpec.
class GridFunction {
 public:
  explicit GridFunction(GridSpec spec);
  GridFunction(GridSpec spec, std::vector<Complex> samples);

  const GridSpec& spec() const { return spec_; }
  std::span<const Complex> samples() const { return samples_; }
  std::span<Complex> samples() { return samples_; }
  Complex& operator[](std::size_t i) { return samples_[i]; }
  const Complex& operator[](std::size_t i) const { return samples_[i]; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(Complex c);

  /// Sample of f at grid point with multi-index idx.
  Complex at(std::span<const std::size_t> idx) const;

 private:
  GridSpec spec_;
  std::vector<Complex> samples_;
};

GridFunction operator+(GridFunction lhs, const GridFunction& rhs);
GridFunction operator-(GridFunction lhs, const GridFunction& rhs);
GridFunction operator*(Complex c, GridFunction f);

/// Fourier coefficients c_k with f(x) = sum_k c_k e^{i x . k / M}.
class SpectrumFunction {
 public:
  explicit SpectrumFunction(GridSpec spec);
  SpectrumFunction(GridSpec spec, std::vector<Complex> coefficients);

  const GridSpec& spec() const { return spec_; }
  std::span<const Complex> coefficients() const { return coefficients_; }
  std::span<Complex> coefficients() { return coefficients_; }

  /// Coefficient at a signed lattice frequency.
  Complex at(std::span<const long> frequency) const;
  Complex& at(std::span<const long> frequency);

 private:
  std::size_t flat_index(std::span<const long> frequency) const;

  GridSpec spec_;
  std::vector<Complex> coefficients_;
};

/// Normalized so that constant 1 has c_0 = 1 and (1/#grid) sum |f|^2 = sum |c_k|^2.
SpectrumFunction forward_transform(const GridFunction& f);
GridFunction inverse_transform(const SpectrumFunction& spectrum);

/// F^{-1}[m F f] for a real multiplier sampled at every lattice point (FFT order).
GridFunction apply_multiplier(const GridFunction& f, std::span<const double> multiplier);
/// Same with a multiplier given as a function of the physical frequency vector.
GridFunction apply_multiplier(const GridFunction& f,
                              const std::function<double(std::span<const double>)>& multiplier);

/// Samples with last coordinate index 0, as a function in n - 1 dimensions.
GridFunction restrict_hyperplane(const GridFunction& f);

/// tau_h f(x) = f(x', x_n - h) for a shift of `cells` grid cells along the last axis.
GridFunction translate(const GridFunction& f, long cells);

/// (g (x) h)(x', x_n) = g(x') h(x_n). Both factors must share the base scale.
GridFunction tensor_product(const GridFunction& g, const GridFunction& h);

/// Discrete L_p quasi-norm with normalized counting measure; p = inf gives max |f|.
double lp_norm(std::span<const Complex> samples, const Exponent& p);
double lp_norm(const GridFunction& f, const Exponent& p);
double lp_norm_real(std::span<const double> values, const Exponent& p);

/// Pairwise (tree) summation, deterministic for a given length.
double pairwise_sum(std::span<const double> values);

double max_abs(std::span<const Complex> values);

/// Binary function file: see docs in README ("Function file format").
struct FunctionFile {
  GridFunction function;
  Anisotropy anisotropy;
};

std::vector<std::uint8_t> encode_function_file(const GridFunction& f, const Anisotropy& a);
FunctionFile decode_function_file(std::span<const std::uint8_t> bytes);
void write_function_file(const std::filesystem::path& path, const GridFunction& f,
                         const Anisotropy& a);
FunctionFile read_function_file(const std::filesystem::path& path);

}  // namespace besov
