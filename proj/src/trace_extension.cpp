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

#include "besovlab/trace_extension.hpp"

#include <cmath>

#include "besovlab/errors.hpp"

namespace besov {

TargetNorm sup_norm() {
  return [](const GridFunction& g) { return max_abs(g.samples()); };
}

TargetNorm lp_target(const Exponent& p) {
  return [p](const GridFunction& g) { return lp_norm(g, p); };
}

GridSpec hyperplane_spec(const DyadicPartition& P) { return P.spec().drop_last_axis(); }

TraceResult trace(const GridFunction& f, const DyadicPartition& P, const TargetNorm& target) {
  const auto& spec = f.spec();
  if (spec.dim() < 2) throw DomainError("the trace needs n >= 2");
  if (!(spec == P.spec())) throw StructuralError("function grid does not match partition grid");
  const auto spectrum = forward_transform(f);
  P.require_band_limited(spectrum);
  const GridSpec plane = spec.drop_last_axis();
  const std::size_t last = spec.points(spec.dim() - 1);
  const auto c = spectrum.coefficients();
  const auto d = P.distances();

  TraceResult result{GridFunction(plane), {}};
  for (int j = 0; j <= P.levels(); ++j) {
    // gamma_0 F^{-1}[g] has coefficients sum_{k_n} g(k', k_n).
    SpectrumFunction restricted(plane);
    auto out = restricted.coefficients();
    for (std::size_t r = 0; r < plane.size(); ++r) {
      Complex acc{};
      for (std::size_t i = 0; i < last; ++i) {
        const std::size_t flat = r * last + i;
        const double m = P.value(j, d[flat]);
        if (m != 0.0) acc += m * c[flat];
      }
      out[r] = acc;
    }
    auto increment = inverse_transform(restricted);
    result.partial_sum_tail.push_back(target(increment));
    result.value += increment;
  }
  return result;
}

namespace {

GridSpec normal_axis(const GridSpec& spec) {
  return GridSpec({spec.points(spec.dim() - 1)}, spec.base_scale());
}

}  // namespace

GridFunction extend_K(const GridFunction& v, const DyadicPartition& P, const EtaProfiles& eta) {
  const auto& spec = P.spec();
  if (spec.dim() < 2) throw DomainError("extension needs n >= 2");
  if (!(v.spec() == spec.drop_last_axis())) throw StructuralError("v must live on the partition grid without its last axis");
  if (eta.normal_weight() != P.anisotropy().normal_weight()) {
    throw StructuralError("eta profiles and partition disagree on a_n");
  }
  const auto spectrum = forward_transform(v);
  const auto c = spectrum.coefficients();
  const double peak = max_abs(c);
  std::vector<std::vector<double>> multipliers;
  std::vector<double> total(v.spec().size(), 0.0);
  for (int j = 0; j <= P.levels(); ++j) {
    multipliers.push_back(P.hyperplane_multiplier(j));
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += multipliers.back()[i];
  }
  double leak = 0.0;
  for (std::size_t i = 0; i < total.size(); ++i) leak = std::max(leak, std::fabs(1.0 - total[i]) * std::abs(c[i]));
  if (leak > 1e-12 * peak) throw CapacityError("spectrum of v extends beyond the partition radius");

  const GridSpec axis = normal_axis(spec);
  GridFunction result(spec);
  for (int j = 0; j <= P.levels(); ++j) {
    const auto& m = multipliers[static_cast<std::size_t>(j)];
    SpectrumFunction part(v.spec());
    bool any = false;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] != 0.0 && c[i] != Complex{}) {
        part.coefficients()[i] = m[i] * c[i];
        any = true;
      }
    }
    if (!any) continue;
    result += tensor_product(inverse_transform(part), eta.term_profile(j, axis));
  }
  return result;
}

GridFunction extend_E(const BandDecomposition& d, const EtaProfiles& eta, const GridSpec& target) {
  if (target.dim() < 2) throw DomainError("extension needs n >= 2");
  GridFunction result(target);
  const GridSpec axis = normal_axis(target);
  for (const auto& term : d.terms()) {
    if (!(term.h.spec() == target.drop_last_axis())) {
      throw StructuralError("decomposition terms must live on the target grid without its last axis");
    }
    result += tensor_product(term.h, eta.term_profile(term.level, axis));
  }
  return result;
}

}  // namespace besov
