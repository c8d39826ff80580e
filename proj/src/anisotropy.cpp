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

#include "besovlab/anisotropy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "besovlab/errors.hpp"

namespace besov {

Exponent::Exponent(double value) : value_(value), infinite_(false) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError("exponent must lie in ]0, inf[, got " + std::to_string(value));
  }
}

double Exponent::value() const {
  if (infinite_) throw DomainError("exponent is infinite");
  return value_;
}

namespace {

double parse_double(std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot parse number '" + s + "'");
  }
  if (used != s.size()) throw DomainError("cannot parse number '" + s + "'");
  return v;
}

}  // namespace

Exponent Exponent::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "oo") return infinity();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const double num = parse_double(text.substr(0, slash));
    const double den = parse_double(text.substr(slash + 1));
    if (den == 0.0) throw DomainError("zero denominator in exponent");
    return Exponent(num / den);
  }
  return Exponent(parse_double(text));
}

std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

Anisotropy::Anisotropy(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DomainError("anisotropy needs at least one weight");
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 1.0) {
      throw DomainError("anisotropy weights must be finite and >= 1");
    }
  }
  if (*std::min_element(weights_.begin(), weights_.end()) != 1.0) {
    throw DomainError("anisotropy weights must have minimum exactly 1");
  }
  total_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  max_ = *std::max_element(weights_.begin(), weights_.end());
}

Anisotropy Anisotropy::tangential() const {
  if (dim() < 2) throw DomainError("tangential anisotropy needs n >= 2");
  return Anisotropy(std::vector<double>(weights_.begin(), weights_.end() - 1));
}

std::vector<double> dilate(const Anisotropy& a, double t, std::span<const double> x) {
  if (!(t > 0.0)) throw DomainError("dilation parameter must be positive");
  if (x.size() != a.dim()) throw StructuralError("point dimension does not match anisotropy");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::pow(t, a[i]) * x[i];
  return out;
}

double aniso_distance_bisection(std::span<const double> weights, std::span<const double> x) {
  if (weights.size() != x.size()) throw StructuralError("point dimension does not match weights");
  double norm2 = 0.0;
  for (double v : x) norm2 += v * v;
  if (norm2 == 0.0) return 0.0;
  const double wmin = *std::min_element(weights.begin(), weights.end());
  const double wmax = *std::max_element(weights.begin(), weights.end());
  const double log_norm = 0.5 * std::log(norm2);
  // log t is bracketed by log|x| / a_max and log|x| / a_min.
  double lo = std::min(log_norm / wmax, log_norm / wmin);
  double hi = std::max(log_norm / wmax, log_norm / wmin);
  // F(u) = sum x_i^2 exp(-2 a_i u) - 1 is strictly decreasing in u = log t.
  auto excess = [&](double u) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != 0.0) s += std::exp(2.0 * (std::log(std::fabs(x[i])) - weights[i] * u));
    }
    return s - 1.0;
  };
  // Rounding can put the root a hair outside the analytic bracket.
  lo -= 1e-12 * (1.0 + std::fabs(lo));
  hi += 1e-12 * (1.0 + std::fabs(hi));
  while (excess(lo) < 0.0) lo -= 1e-9 * (1.0 + std::fabs(lo));
  while (excess(hi) > 0.0) hi += 1e-9 * (1.0 + std::fabs(hi));
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

double aniso_distance(std::span<const double> weights, std::span<const double> x) {
  if (weights.size() != x.size()) throw StructuralError("point dimension does not match weights");
  // Weights in {1, 2}: sum_1 x^2 / tau + sum_2 x^2 / tau^2 = 1 with tau = t^2.
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (weights[i] == 1.0) {
      s1 += x[i] * x[i];
    } else if (weights[i] == 2.0) {
      s2 += x[i] * x[i];
    } else {
      return aniso_distance_bisection(weights, x);
    }
  }
  if (s2 == 0.0) return std::sqrt(s1);
  if (s1 == 0.0) return std::sqrt(std::sqrt(s2));
  const double tau = 0.5 * (s1 + std::sqrt(s1 * s1 + 4.0 * s2));
  return std::sqrt(tau);
}

double aniso_distance(const Anisotropy& a, std::span<const double> x) {
  return aniso_distance(a.weights(), x);
}

double sigma_p(const Anisotropy& a, const Exponent& p) {
  return a.total() * std::max(p.reciprocal() - 1.0, 0.0);
}

double sigma_pq(const Anisotropy& a, const Exponent& p, const Exponent& q) {
  return sigma_p(a, min(p, q));
}

}  // namespace besov
