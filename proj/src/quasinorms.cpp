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

#include "besovlab/quasinorms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "besovlab/errors.hpp"

namespace besov {

std::string to_string(Scale scale) {
  switch (scale) {
    case Scale::Besov:
      return "B";
    case Scale::LizorkinTriebel:
      return "F";
    case Scale::Approximation:
      return "A";
  }
  return "?";
}

Scale parse_scale(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "b" || t == "besov") return Scale::Besov;
  if (t == "f" || t == "lizorkin-triebel" || t == "lizorkin_triebel" || t == "triebel-lizorkin") {
    return Scale::LizorkinTriebel;
  }
  if (t == "a" || t == "approximation") return Scale::Approximation;
  throw DomainError("unknown scale '" + text + "' (expected B, F or A)");
}

void SpaceParams::validate() const {
  if (!std::isfinite(s)) throw DomainError("smoothness s must be finite");
  if (scale == Scale::LizorkinTriebel && p.is_infinite()) {
    throw DomainError("Lizorkin-Triebel quasi-norms need p < inf");
  }
  if (scale == Scale::Approximation) {
    const double sigma = sigma_p(a, p);
    const bool critical = std::fabs(s - sigma) <= 1e-12 * std::max(1.0, sigma);
    if (critical) {
      if (Exponent(1.0) < q) throw DomainError("approximation space at s = sigma_p needs q <= 1");
    } else if (s < sigma) {
      throw DomainError("approximation space needs s >= |a|(1/p - 1)_+");
    }
  }
}

// -------------------------------------------------------- BandDecomposition

void BandDecomposition::add(int level, GridFunction h, const Anisotropy& a) {
  if (level < 0) throw DomainError("band level must be >= 0");
  if (a.dim() != h.spec().dim()) throw StructuralError("anisotropy dimension does not match band grid");
  if (!terms_.empty() && !(terms_.front().h.spec() == h.spec())) {
    throw StructuralError("all terms of a decomposition share one grid");
  }
  const auto c = forward_transform(h);
  const double peak = max_abs(c.coefficients());
  const double radius = std::ldexp(1.0, level);
  double leak = 0.0;
  std::vector<double> xi(h.spec().dim());
  for (std::size_t i = 0; i < h.spec().size(); ++i) {
    if (c.coefficients()[i] == Complex{}) continue;
    h.spec().physical_frequency(i, xi);
    if (aniso_distance(a, xi) > radius) leak = std::max(leak, std::abs(c.coefficients()[i]));
  }
  if (leak > 1e-12 * peak) {
    throw DomainError("term at level " + std::to_string(level) + " has spectrum outside |xi|_a <= 2^" +
                      std::to_string(level));
  }
  terms_.push_back({level, std::move(h)});
}

// ------------------------------------------------------------------ sums

namespace {

double power(double x, double e) {
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 0.5) return std::sqrt(x);
  return std::pow(x, e);
}

double root(double x, double e) {
  if (e == 1.0) return x;
  if (e == 2.0) return std::sqrt(x);
  if (e == 0.5) return x * x;
  return std::pow(x, 1.0 / e);
}

}  // namespace

double lq_sum(std::span<const double> terms, const Exponent& q) {
  double m = 0.0;
  for (double t : terms) m = std::max(m, t);
  if (q.is_infinite() || m == 0.0) return m;
  const double qv = q.value();
  std::vector<double> powers(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) powers[i] = power(terms[i] / m, qv);
  return m * root(pairwise_sum(powers), qv);
}

std::vector<double> band_lp_norms(std::span<const GridFunction> bands, const Exponent& p) {
  std::vector<double> out;
  out.reserve(bands.size());
  for (const auto& b : bands) out.push_back(lp_norm(b, p));
  return out;
}

double besov_from_band_norms(std::span<const double> norms, double s, const Exponent& q) {
  std::vector<double> terms(norms.size());
  for (std::size_t j = 0; j < norms.size(); ++j) terms[j] = std::exp2(static_cast<double>(j) * s) * norms[j];
  return lq_sum(terms, q);
}

double lizorkin_triebel_from_bands(std::span<const GridFunction> bands, double s, const Exponent& p,
                                   const Exponent& q) {
  if (bands.empty()) return 0.0;
  const std::size_t size = bands.front().spec().size();
  std::vector<double> weight(bands.size());
  for (std::size_t j = 0; j < bands.size(); ++j) weight[j] = std::exp2(static_cast<double>(j) * s);
  const bool sup = q.is_infinite();
  const double qv = sup ? 0.0 : q.value();
  std::vector<double> pointwise(size, 0.0);
  std::vector<double> column(bands.size());
  for (std::size_t x = 0; x < size; ++x) {
    double m = 0.0;
    for (std::size_t j = 0; j < bands.size(); ++j) {
      column[j] = weight[j] * std::sqrt(std::norm(bands[j][x]));
      m = std::max(m, column[j]);
    }
    if (sup || m == 0.0) {
      pointwise[x] = m;
      continue;
    }
    double sum = 0.0;
    for (double c : column) sum += power(c / m, qv);
    pointwise[x] = m * root(sum, qv);
  }
  return lp_norm_real(pointwise, p);
}

namespace {

void check_inputs(const GridFunction& f, const DyadicPartition& P, const SpaceParams& prm, Scale expected) {
  if (prm.scale != expected) throw DomainError("space parameters name scale " + to_string(prm.scale));
  prm.validate();
  if (!(prm.a == P.anisotropy())) throw StructuralError("space anisotropy differs from partition anisotropy");
  if (!(f.spec() == P.spec())) throw StructuralError("function grid does not match partition grid");
}

}  // namespace

double besov_norm(const GridFunction& f, const DyadicPartition& P, const SpaceParams& prm) {
  check_inputs(f, P, prm, Scale::Besov);
  const auto bands = band_decompose(f, P);
  return besov_from_band_norms(band_lp_norms(bands, prm.p), prm.s, prm.q);
}

double lizorkin_triebel_norm(const GridFunction& f, const DyadicPartition& P, const SpaceParams& prm) {
  check_inputs(f, P, prm, Scale::LizorkinTriebel);
  const auto bands = band_decompose(f, P);
  return lizorkin_triebel_from_bands(bands, prm.s, prm.p, prm.q);
}

double approx_norm_of(const BandDecomposition& d, const SpaceParams& prm) {
  if (prm.scale != Scale::Approximation) throw DomainError("space parameters name scale " + to_string(prm.scale));
  prm.validate();
  std::vector<double> terms;
  for (const auto& t : d.terms()) terms.push_back(std::exp2(t.level * prm.s) * lp_norm(t.h, prm.p));
  return lq_sum(terms, prm.q);
}

double approx_norm_upper(const GridFunction& f, const DyadicPartition& P, const SpaceParams& prm) {
  check_inputs(f, P, prm, Scale::Approximation);
  return approx_norm_from_bands(f, band_decompose(f, P), prm);
}

double approx_norm_from_bands(const GridFunction& f, std::span<const GridFunction> bands, const SpaceParams& prm) {
  std::vector<double> canonical(bands.size());
  for (std::size_t j = 0; j < bands.size(); ++j) {
    canonical[j] = std::exp2(static_cast<double>(j + 1) * prm.s) * lp_norm(bands[j], prm.p);
  }
  double best = lq_sum(canonical, prm.q);
  if (prm.s != 0.0 || prm.p < Exponent(1.0)) return best;

  // Partial sums S_j = F^{-1}[theta(2^-j |xi|_a) F f]; S_J = f.
  std::vector<GridFunction> partial;
  partial.reserve(bands.size());
  for (const auto& b : bands) {
    if (partial.empty()) {
      partial.push_back(b);
    } else {
      partial.push_back(partial.back() + b);
    }
  }
  const double norm_f = lp_norm(f, prm.p);
  if (norm_f == 0.0) return 0.0;
  const int top = static_cast<int>(bands.size()) - 1;
  std::vector<double> terms{lp_norm(partial[0], prm.p)};
  int previous = 0;
  for (int k = 1; previous < top; ++k) {
    const double threshold = std::ldexp(norm_f, -k - 1);
    int next = top;
    for (int j = previous + 1; j <= top; ++j) {
      if (lp_norm(partial[static_cast<std::size_t>(j)] - f, prm.p) < threshold) {
        next = j;
        break;
      }
    }
    terms.push_back(lp_norm(partial[static_cast<std::size_t>(next)] - partial[static_cast<std::size_t>(previous)], prm.p));
    previous = next;
  }
  return std::min(best, lq_sum(terms, prm.q));
}

double quasinorm(const GridFunction& f, const DyadicPartition& P, const SpaceParams& prm) {
  switch (prm.scale) {
    case Scale::Besov:
      return besov_norm(f, P, prm);
    case Scale::LizorkinTriebel:
      return lizorkin_triebel_norm(f, P, prm);
    case Scale::Approximation:
      return approx_norm_upper(f, P, prm);
  }
  throw DomainError("unknown scale");
}

// -------------------------------------------------------- sequence spaces

double sequence_norm_b(const Coefficients& lambda, const Exponent& p, const Exponent& q) {
  std::vector<double> per_level;
  for (const auto& level : lambda) {
    std::vector<double> mod(level.values.size());
    for (std::size_t i = 0; i < mod.size(); ++i) mod[i] = std::abs(level.values[i]);
    per_level.push_back(lq_sum(mod, p));
  }
  return lq_sum(per_level, q);
}

double sequence_norm_f(const Coefficients& lambda, const GridSpec& spec, const Exponent& p, const Exponent& q) {
  const std::size_t n = spec.dim();
  // Accumulates sum v^q per point, or max v when q = inf.
  std::vector<double> pointwise(spec.size(), 0.0);
  for (const auto& level : lambda) {
    if (level.shape.size() != n) throw StructuralError("coefficient lattice dimension does not match grid");
    std::size_t cells = 1;
    std::vector<std::size_t> block(n);
    for (std::size_t ax = 0; ax < n; ++ax) {
      if (level.shape[ax] == 0 || spec.points(ax) % level.shape[ax] != 0) {
        throw StructuralError("coefficient lattice does not tile the grid");
      }
      block[ax] = spec.points(ax) / level.shape[ax];
      cells *= level.shape[ax];
    }
    if (level.values.size() != cells) throw StructuralError("coefficient count does not match lattice shape");
    // |Q|^{-1/p} with |Q| = 1 / cells.
    const double weight = p.is_infinite() ? 1.0 : std::pow(static_cast<double>(cells), p.reciprocal());
    for (std::size_t x = 0; x < spec.size(); ++x) {
      std::size_t cell = 0;
      for (std::size_t ax = 0; ax < n; ++ax) {
        const std::size_t i = (x / spec.stride(ax)) % spec.points(ax);
        cell = cell * level.shape[ax] + ((i + block[ax] / 2) / block[ax]) % level.shape[ax];
      }
      const double v = weight * std::abs(level.values[cell]);
      if (q.is_infinite()) {
        pointwise[x] = std::max(pointwise[x], v);
      } else if (v != 0.0) {
        pointwise[x] += std::pow(v, q.value());
      }
    }
  }
  if (q.is_finite()) {
    for (auto& v : pointwise) v = std::pow(v, q.reciprocal());
  }
  return lp_norm_real(pointwise, p);
}

}  // namespace besov
