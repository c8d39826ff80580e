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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "besovlab/anisotropy.hpp"
#include "besovlab/exponent.hpp"
#include "besovlab/partition.hpp"
#include "besovlab/quasinorms.hpp"
#include "besovlab/spectral_model.hpp"
#include "besovlab/torus_grid.hpp"

namespace besov {

// ---------------------------------------------------------------- random

/// SplitMix64 over a (seed, stream, counter) triple; draws depend only on these.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Complex Gaussian with E|z|^2 = 1.
  Complex complex_normal();
  /// Independent generator for a sub-task (trial index, k, ...).
  CounterRng fork(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

/// Band-limited complex Gaussian field: every lattice point with |xi|_a <= inner 2^J gets an
/// independent coefficient, scaled so that the coefficients assigned to level j (the smallest j
/// with |xi|_a <= inner 2^j) carry total energy 2^{-j delta}.
GridFunction random_field(const DyadicPartition& P, CounterRng& rng, double delta = 0.0);

// -------------------------------------------------------------- profiles

/// F(xi) = value(t) with t an anisotropic distance; value(t) = 0 for t outside [lo, hi]
/// and value(t) = value(0) for t <= flat.
struct RadialProfile {
  std::function<double(double)> value;
  double lo = 0.0;
  double hi = 1.0;
  double flat = 0.0;
};

/// One-dimensional w with supp F w in {lo <= |xi|^{1/a_n} <= hi} and w(0) = 1.
RadialProfile annulus_profile(double normal_weight, double lo = 0.75, double hi = 1.0);
/// One-dimensional g with supp F g in {|xi|^{1/a_n} <= radius} and g(0) = 1.
RadialProfile lowpass_profile(double normal_weight, double radius = 0.5);
/// (n-1)-dimensional f with supp F f in {|xi'|_{a'} <= radius} and integral 1.
RadialProfile lowball_profile(double radius = 0.5);

/// (2 pi)^{-1} int value(|xi|^{1/a}) dxi over R, i.e. the value at 0 of the 1-d function.
double profile_value_at_zero(const RadialProfile& profile, double weight);

/// Tangential base function u with F u = smooth_step(|xi'|_{a'}, 1/2, 1), u(0) normalized to 1.
GridFunction default_base(const GridSpec& tangential, std::span<const double> weights);

// -------------------------------------------------------------- families

struct FamilyMember {
  int k = 0;
  SpectralModel f;      // on R^n
  SpectralModel trace;  // gamma_0 f on R^{n-1}
};

/// u_k = u(x') (1/k) sum_{l=1}^k w(2^{l a_n} x_n). The tangential evaluation grid must be u's grid.
FamilyMember family_uk(int k, const GridFunction& u, const RadialProfile& w, const Anisotropy& a);

/// v_k = (1/k) sum_{l=k+1}^{2k} 2^{l|a'|} f(2^{l a'} x') g(2^{l a_n} x_n).
FamilyMember family_vk(int k, const RadialProfile& f, const RadialProfile& g, const Anisotropy& a);

/// Setting for g_k: partition radii 11/10, 13/10 and eta supported in ]1, 21/20[ (xi_n units).
struct GkSetup {
  BandShape shape;
  double eta_lo = 1.0;
  double eta_hi = 21.0 / 20.0;
  int k0 = 0;
};

/// Default setting with the smallest admissible k0; DomainError when no k0 works.
GkSetup gk_setup(const Anisotropy& a);

/// g_k = (F_1^{-1} eta)(2^{(k+k0) a_n} x_n) sum_{j<=k} F^{-1}[phi_j(., 0)](x').
FamilyMember family_gk(int k, const GkSetup& setup);

// ------------------------------------------------------------ slope fits

/// Least-squares slope of log2 values against log2 k.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
};
SlopeFit fit_log2_slope(std::span<const double> k, std::span<const double> values);

struct SlopeReport {
  std::string family;
  std::string parameters;  // "p=...,q=..." style tuple
  std::vector<int> k;
  std::vector<double> norms;
  double slope = 0.0;
  double predicted = 0.0;
  double residual = 0.0;
  double tolerance = 0.15;
  bool checked = true;     // false: reported without a verdict
  bool pass = false;
};

SlopeReport make_slope_report(std::string family, std::string parameters, std::vector<int> k,
                              std::vector<double> norms, double predicted, double tolerance, bool checked = true);

/// Evaluation setting of the counterexample drivers.
struct CounterexampleSetup {
  Anisotropy a = Anisotropy({1.0, 2.0});
  GridSpec grid = GridSpec({1024, 1024}, 4);
  std::vector<int> ks{4, 8, 16, 32, 64};
  double tolerance = 0.15;
};

/// Trace ratios ||gamma_0 u_k|B^{0,a'}_{p,q}|| / ||u_k|B^{a_n/p,a}_{p,q}||.
struct TraceRatioReport {
  std::string parameters;
  std::vector<int> k;
  std::vector<double> ratios;
  double slope = 0.0;
  double baseline = 0.0;          // ratio at the first k
  double max_over_baseline = 0.0;
  bool bounded_expected = true;   // q <= 1
  bool pass = false;
};

struct UkResult {
  std::vector<SlopeReport> slopes;  // ||u_k|B^{a_n/p,a}_{p,q}||, predicted 1/q - 1
  std::vector<TraceRatioReport> ratios;
};

/// One model evaluation per k serves every (p, q).
UkResult run_uk(const CounterexampleSetup& setup, std::span<const Exponent> ps, std::span<const Exponent> qs);

/// ||v_k|B^{|a|/p-|a'|,a}_{p,q}||, predicted 1/q - 1; plus the trace integral (always 1).
struct VkResult {
  std::vector<SlopeReport> slopes;
  std::vector<double> trace_integral;
};
VkResult run_vk(const CounterexampleSetup& setup, std::span<const Exponent> ps, std::span<const Exponent> qs);

/// ||gamma_0 g_k|B^{|a'|(1/r-1),a'}_{r,u}||, predicted 1/u; and the bounded family
/// ||g_k|B^{|a|/p-|a'|,a}_{p,q}|| (reported, slope unchecked).
struct GkResult {
  std::vector<SlopeReport> trace_growth;
  SlopeReport norm;
  int k0 = 0;
  double norm_spread = 0.0;  // max / min of ||g_k|B|| over k
};
GkResult run_gk(const CounterexampleSetup& setup, const Exponent& r, std::span<const Exponent> us,
                const Exponent& p, const Exponent& q);

// ------------------------------------------------------------ embeddings

/// Norm of a quasi-norm family member computed from a shared band decomposition.
struct EmbeddingPair {
  std::string name;
  SpaceParams source;
  SpaceParams target;
  /// Level profile of the random fields for this pair; the call's delta when empty.
  std::optional<double> delta;
};

/// delta = 2 s of the source: Gaussian fields whose bands contribute equally to the source norm.
double source_white_delta(const EmbeddingPair& pair);

struct EmbeddingReport {
  std::string name;
  std::vector<double> ratios;  // ||f|target|| / ||f|source||, one per trial
  double max = 0.0;
  double median = 0.0;
  double min = 0.0;
};

/// Ratios over `trials` random fields on the grid of P; pairs sharing a delta share one decomposition per trial.
std::vector<EmbeddingReport> check_embeddings(std::span<const EmbeddingPair> pairs, const DyadicPartition& P,
                                              int trials, std::uint64_t seed, double delta = 0.0);
EmbeddingReport check_embedding(const SpaceParams& source, const SpaceParams& target, const DyadicPartition& P,
                                int trials, std::uint64_t seed, double delta = 0.0);

/// The pairs of the embedding suite for an anisotropy: elementary, Sobolev line,
/// Jawerth-Franke (both sides) and the A sandwich (both sides).
std::vector<EmbeddingPair> standard_embedding_pairs(const Anisotropy& a);

// ------------------------------------------------------------------- NPP

/// sup_{x_n} |h(x', .)| / (2^{j a_n / p} ||h(x', .)||_{L_p(dx_n)}), maximized over x', with the
/// normalized measure in x_n.
double npp_constant(const GridFunction& h, int j, const Exponent& p, double normal_weight);

struct NppReport {
  int level = 0;
  std::vector<double> constants;  // one per trial
  double max = 0.0;
  double min = 0.0;
};

/// Trials: band-j projections of 1 to 3 randomly placed point masses with random amplitudes.
NppReport check_npp(int j, int trials, const Exponent& p, const DyadicPartition& P, std::uint64_t seed);

// --------------------------------------------------------------- output

/// Plain CSV table; numbers are written with 17 significant digits.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
void write_csv(std::ostream& out, const CsvTable& table);
CsvTable read_csv(std::istream& in);
std::string format_double(double v);

CsvTable slope_table(std::span<const SlopeReport> reports);
CsvTable ratio_table(std::span<const TraceRatioReport> reports);
CsvTable embedding_table(std::span<const EmbeddingReport> reports);
CsvTable npp_table(std::span<const NppReport> reports);

}  // namespace besov
