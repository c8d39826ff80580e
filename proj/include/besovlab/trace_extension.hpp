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

#include <functional>
#include <vector>

#include "besovlab/partition.hpp"
#include "besovlab/quasinorms.hpp"
#include "besovlab/torus_grid.hpp"

namespace besov {

/// Norm used for the partial-sum diagnostics of a trace.
using TargetNorm = std::function<double(const GridFunction&)>;

/// max |g|.
TargetNorm sup_norm();
/// Discrete L_p.
TargetNorm lp_target(const Exponent& p);

struct TraceResult {
  GridFunction value;                       // on the grid without the last axis
  std::vector<double> partial_sum_tail;     // entry N: target(S_N - S_{N-1}), S_{-1} = 0
};

/// sum_{j <= J} gamma_0 F^{-1}[phi_j F f]. Throws DomainError for n = 1 and
/// CapacityError when f is not band-limited to the partition.
TraceResult trace(const GridFunction& f, const DyadicPartition& P, const TargetNorm& target = sup_norm());

/// Grid without the last axis and the matching (n-1)-dimensional partition grid.
GridSpec hyperplane_spec(const DyadicPartition& P);

/// K v = sum_j [2^{-j a_n} F_1^{-1} eta_j](x_n) F^{-1}[phi_j(., 0) F v](x') on the partition grid.
GridFunction extend_K(const GridFunction& v, const DyadicPartition& P, const EtaProfiles& eta);

/// E d = sum_j [2^{-j a_n} F_1^{-1} eta_j](x_n) h_j(x') on `target` (whose last axis is appended to
/// the grid of the terms).
GridFunction extend_E(const BandDecomposition& d, const EtaProfiles& eta, const GridSpec& target);

}  // namespace besov
