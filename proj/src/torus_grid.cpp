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

#include "besovlab/torus_grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "besovlab/errors.hpp"
#include "fft.hpp"
#include "json.hpp"

namespace besov {

// ---------------------------------------------------------------- GridSpec

GridSpec::GridSpec(std::vector<std::size_t> points_per_axis, int base_scale)
    : points_(std::move(points_per_axis)), base_scale_(base_scale) {
  if (points_.empty()) throw StructuralError("grid needs at least one axis");
  for (auto p : points_) {
    if (p < 8 || !std::has_single_bit(p)) {
      throw StructuralError("points per axis must be a power of two >= 8, got " + std::to_string(p));
    }
  }
  if (base_scale_ < 4) throw StructuralError("base scale M must be >= 4");
  strides_.assign(points_.size(), 1);
  for (std::size_t i = points_.size() - 1; i > 0; --i) strides_[i - 1] = strides_[i] * points_[i];
  size_ = strides_[0] * points_[0];
}

std::size_t GridSpec::index_of_frequency(std::size_t axis, long k) const {
  const auto n = static_cast<long>(points_[axis]);
  long r = k % n;
  if (r < 0) r += n;
  return static_cast<std::size_t>(r);
}

void GridSpec::physical_frequency(std::size_t flat, std::span<double> xi) const {
  const double inv_m = 1.0 / base_scale_;
  for (std::size_t ax = 0; ax < points_.size(); ++ax) {
    const std::size_t i = (flat / strides_[ax]) % points_[ax];
    xi[ax] = static_cast<double>(frequency(ax, i)) * inv_m;
  }
}

int GridSpec::max_level(const Anisotropy& a, double outer_radius) const {
  if (a.dim() != dim()) throw StructuralError("anisotropy dimension does not match grid");
  auto fits = [&](int level) {
    const double radius = outer_radius * std::ldexp(1.0, level);
    for (std::size_t i = 0; i < dim(); ++i) {
      const double extent = base_scale_ * std::pow(radius, a[i]);
      if (!(extent < static_cast<double>(points_[i]) / 2.0)) return false;
    }
    return true;
  };
  int level = -1;
  while (level < 62 && fits(level + 1)) ++level;
  return level;
}

GridSpec GridSpec::drop_last_axis() const {
  if (dim() < 2) throw DomainError("cannot drop the only axis of a grid");
  return GridSpec(std::vector<std::size_t>(points_.begin(), points_.end() - 1), base_scale_);
}

GridSpec GridSpec::append_axis(std::size_t points) const {
  auto p = points_;
  p.push_back(points);
  return GridSpec(std::move(p), base_scale_);
}

// ------------------------------------------------------------ GridFunction

GridFunction::GridFunction(GridSpec spec) : spec_(std::move(spec)), samples_(spec_.size()) {}

GridFunction::GridFunction(GridSpec spec, std::vector<Complex> samples)
    : spec_(std::move(spec)), samples_(std::move(samples)) {
  if (samples_.size() != spec_.size()) throw StructuralError("sample count does not match grid");
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (!(other.spec_ == spec_)) throw StructuralError("grid mismatch in addition");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  if (!(other.spec_ == spec_)) throw StructuralError("grid mismatch in subtraction");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(Complex c) {
  for (auto& v : samples_) v *= c;
  return *this;
}

Complex GridFunction::at(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t ax = 0; ax < spec_.dim(); ++ax) flat += (idx[ax] % spec_.points(ax)) * spec_.stride(ax);
  return samples_[flat];
}

GridFunction operator+(GridFunction lhs, const GridFunction& rhs) { return lhs += rhs; }
GridFunction operator-(GridFunction lhs, const GridFunction& rhs) { return lhs -= rhs; }
GridFunction operator*(Complex c, GridFunction f) { return f *= c; }

// -------------------------------------------------------- SpectrumFunction

SpectrumFunction::SpectrumFunction(GridSpec spec)
    : spec_(std::move(spec)), coefficients_(spec_.size()) {}

SpectrumFunction::SpectrumFunction(GridSpec spec, std::vector<Complex> coefficients)
    : spec_(std::move(spec)), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != spec_.size()) throw StructuralError("coefficient count does not match grid");
}

std::size_t SpectrumFunction::flat_index(std::span<const long> frequency) const {
  if (frequency.size() != spec_.dim()) throw StructuralError("frequency dimension mismatch");
  std::size_t flat = 0;
  for (std::size_t ax = 0; ax < spec_.dim(); ++ax) {
    flat += spec_.index_of_frequency(ax, frequency[ax]) * spec_.stride(ax);
  }
  return flat;
}

Complex SpectrumFunction::at(std::span<const long> frequency) const {
  return coefficients_[flat_index(frequency)];
}

Complex& SpectrumFunction::at(std::span<const long> frequency) {
  return coefficients_[flat_index(frequency)];
}

// ------------------------------------------------------------- transforms

SpectrumFunction forward_transform(const GridFunction& f) {
  std::vector<Complex> data(f.samples().begin(), f.samples().end());
  detail::fft_inplace(data, f.spec().points_per_axis(), -1);
  const double scale = 1.0 / static_cast<double>(f.spec().size());
  for (auto& v : data) v *= scale;
  return SpectrumFunction(f.spec(), std::move(data));
}

GridFunction inverse_transform(const SpectrumFunction& spectrum) {
  std::vector<Complex> data(spectrum.coefficients().begin(), spectrum.coefficients().end());
  detail::fft_inplace(data, spectrum.spec().points_per_axis(), +1);
  return GridFunction(spectrum.spec(), std::move(data));
}

GridFunction apply_multiplier(const GridFunction& f, std::span<const double> multiplier) {
  if (multiplier.size() != f.spec().size()) throw StructuralError("multiplier size does not match grid");
  auto spectrum = forward_transform(f);
  auto c = spectrum.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= multiplier[i];
  return inverse_transform(spectrum);
}

GridFunction apply_multiplier(const GridFunction& f,
                              const std::function<double(std::span<const double>)>& multiplier) {
  std::vector<double> m(f.spec().size());
  std::vector<double> xi(f.spec().dim());
  for (std::size_t i = 0; i < m.size(); ++i) {
    f.spec().physical_frequency(i, xi);
    m[i] = multiplier(xi);
  }
  return apply_multiplier(f, m);
}

// ------------------------------------------------------- grid operations

GridFunction restrict_hyperplane(const GridFunction& f) {
  const auto& spec = f.spec();
  if (spec.dim() < 2) throw DomainError("restriction to a hyperplane needs n >= 2");
  GridFunction out(spec.drop_last_axis());
  const std::size_t last = spec.points(spec.dim() - 1);
  for (std::size_t i = 0; i < out.spec().size(); ++i) out[i] = f[i * last];
  return out;
}

GridFunction translate(const GridFunction& f, long cells) {
  const auto& spec = f.spec();
  const std::size_t last = spec.points(spec.dim() - 1);
  const std::size_t shift = spec.index_of_frequency(spec.dim() - 1, cells);
  GridFunction out(spec);
  const std::size_t rows = spec.size() / last;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < last; ++j) {
      // (tau_h f)(x_n) = f(x_n - h)
      out[r * last + (j + shift) % last] = f[r * last + j];
    }
  }
  return out;
}

GridFunction tensor_product(const GridFunction& g, const GridFunction& h) {
  if (h.spec().dim() != 1) throw StructuralError("second tensor factor must be one-dimensional");
  if (g.spec().base_scale() != h.spec().base_scale()) {
    throw StructuralError("tensor factors must share the base scale");
  }
  GridFunction out(g.spec().append_axis(h.spec().points(0)));
  const std::size_t last = h.spec().size();
  for (std::size_t i = 0; i < g.spec().size(); ++i) {
    for (std::size_t j = 0; j < last; ++j) out[i * last + j] = g[i] * h[j];
  }
  return out;
}

// ----------------------------------------------------------------- norms

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double max_abs(std::span<const Complex> values) {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

double lp_norm_real(std::span<const double> values, const Exponent& p) {
  if (values.empty()) return 0.0;
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  if (p.is_infinite() || m == 0.0) return m;
  const double pv = p.value();
  std::vector<double> powers(values.size());
  // Scaling by the max keeps |f|^p in range for small p.
  if (pv == 1.0) {
    for (std::size_t i = 0; i < values.size(); ++i) powers[i] = std::fabs(values[i]) / m;
    return m * pairwise_sum(powers) / static_cast<double>(values.size());
  }
  if (pv == 2.0) {
    for (std::size_t i = 0; i < values.size(); ++i) powers[i] = values[i] * values[i] / (m * m);
    return m * std::sqrt(pairwise_sum(powers) / static_cast<double>(values.size()));
  }
  if (pv == 0.5) {
    for (std::size_t i = 0; i < values.size(); ++i) powers[i] = std::sqrt(std::fabs(values[i]) / m);
    const double mean = pairwise_sum(powers) / static_cast<double>(values.size());
    return m * mean * mean;
  }
  for (std::size_t i = 0; i < values.size(); ++i) powers[i] = std::pow(std::fabs(values[i]) / m, pv);
  return m * std::pow(pairwise_sum(powers) / static_cast<double>(values.size()), 1.0 / pv);
}

double lp_norm(std::span<const Complex> samples, const Exponent& p) {
  std::vector<double> mod(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) mod[i] = std::sqrt(std::norm(samples[i]));
  return lp_norm_real(mod, p);
}

double lp_norm(const GridFunction& f, const Exponent& p) { return lp_norm(f.samples(), p); }

// ------------------------------------------------------------------- I/O

namespace {

constexpr char kMagic[8] = {'B', 'S', 'V', 'L', 'G', 'R', 'D', '1'};

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(in[b]) << (8 * b);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_function_file(const GridFunction& f, const Anisotropy& a) {
  const auto& spec = f.spec();
  if (a.dim() != spec.dim()) throw StructuralError("anisotropy dimension does not match grid");
  nlohmann::json header;
  header["n"] = spec.dim();
  header["points_per_axis"] = std::vector<std::size_t>(spec.points_per_axis().begin(),
                                                       spec.points_per_axis().end());
  header["base_scale"] = spec.base_scale();
  header["anisotropy"] = std::vector<double>(a.weights().begin(), a.weights().end());
  const std::string text = header.dump();

  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u64(out, text.size());
  out.insert(out.end(), text.begin(), text.end());
  out.reserve(out.size() + 16 * spec.size());
  for (const auto& v : f.samples()) {
    put_u64(out, std::bit_cast<std::uint64_t>(v.real()));
    put_u64(out, std::bit_cast<std::uint64_t>(v.imag()));
  }
  return out;
}

FunctionFile decode_function_file(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw IoError("not a function file (bad magic)");
  }
  const std::uint64_t header_len = get_u64(bytes.subspan(8));
  if (bytes.size() < 16 + header_len) throw IoError("truncated function file header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 16, bytes.begin() + 16 + static_cast<long>(header_len));
  } catch (const std::exception& e) {
    throw IoError(std::string("malformed function file header: ") + e.what());
  }
  std::vector<std::size_t> points;
  std::vector<double> weights;
  int base_scale = 0;
  try {
    points = header.at("points_per_axis").get<std::vector<std::size_t>>();
    weights = header.at("anisotropy").get<std::vector<double>>();
    base_scale = header.at("base_scale").get<int>();
    if (header.at("n").get<std::size_t>() != points.size()) throw IoError("header n disagrees with axes");
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("incomplete function file header: ") + e.what());
  }
  GridSpec spec(std::move(points), base_scale);
  Anisotropy a(std::move(weights));
  const std::size_t offset = 16 + header_len;
  if (bytes.size() != offset + 16 * spec.size()) throw IoError("sample block size does not match header");
  std::vector<Complex> samples(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double re = std::bit_cast<double>(get_u64(bytes.subspan(offset + 16 * i)));
    const double im = std::bit_cast<double>(get_u64(bytes.subspan(offset + 16 * i + 8)));
    samples[i] = {re, im};
  }
  return FunctionFile{GridFunction(std::move(spec), std::move(samples)), std::move(a)};
}

void write_function_file(const std::filesystem::path& path, const GridFunction& f, const Anisotropy& a) {
  const auto bytes = encode_function_file(f, a);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

FunctionFile read_function_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_function_file(bytes);
}

}  // namespace besov
