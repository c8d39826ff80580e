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

#include "besovlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "besovlab/errors.hpp"

namespace besov {

namespace {

std::string exponent_text(const Exponent& e) { return e.to_string(); }

std::string tuple(std::initializer_list<std::pair<const char*, std::string>> items) {
  std::string out;
  for (const auto& [key, value] : items) {
    if (!out.empty()) out += ';';
    out += key;
    out += '=';
    out += value;
  }
  return out;
}

double slope_of(std::span<const int> k, std::span<const double> values) {
  std::vector<double> kd(k.begin(), k.end());
  return fit_log2_slope(kd, values).slope;
}

}  // namespace

// ------------------------------------------------------------ slope fits

SlopeFit fit_log2_slope(std::span<const double> k, std::span<const double> values) {
  if (k.size() != values.size() || k.size() < 2) throw DomainError("slope fit needs matching samples, at least 2");
  const double n = static_cast<double>(k.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!(k[i] > 0) || !(values[i] > 0)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    sx += std::log2(k[i]);
    sy += std::log2(values[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double dx = std::log2(k[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log2(values[i]) - my);
  }
  if (sxx == 0) throw DomainError("slope fit needs distinct k");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

SlopeReport make_slope_report(std::string family, std::string parameters, std::vector<int> k,
                              std::vector<double> norms, double predicted, double tolerance, bool checked) {
  SlopeReport r;
  r.family = std::move(family);
  r.parameters = std::move(parameters);
  r.k = std::move(k);
  r.norms = std::move(norms);
  r.slope = slope_of(r.k, r.norms);
  r.predicted = predicted;
  r.residual = r.slope - predicted;
  r.tolerance = tolerance;
  r.checked = checked;
  r.pass = !checked || std::fabs(r.residual) <= tolerance;
  return r;
}

// -------------------------------------------------------- counterexamples

namespace {

void check_setup(const CounterexampleSetup& setup) {
  if (setup.ks.size() < 5) throw DomainError("a slope fit needs at least 5 values of k");
  if (setup.a.dim() != setup.grid.dim()) throw StructuralError("anisotropy and grid dimensions differ");
  if (setup.a.dim() < 2) throw DomainError("counterexamples need n >= 2");
}

double predicted_q_slope(const Exponent& q) { return q.reciprocal() - 1.0; }

}  // namespace

UkResult run_uk(const CounterexampleSetup& setup, std::span<const Exponent> ps, std::span<const Exponent> qs) {
  check_setup(setup);
  const auto& a = setup.a;
  const double a_n = a.normal_weight();
  const GridSpec tgrid = setup.grid.drop_last_axis();
  const Anisotropy at = a.tangential();
  const GridFunction u = default_base(tgrid, at.weights());
  const RadialProfile w = annulus_profile(a_n);
  const BandShape shape{a};
  const BandShape tshape{at};

  std::vector<std::vector<std::vector<double>>> logs;  // [k][p][j]
  for (int k : setup.ks) logs.push_back(model_band_log2_norms(family_uk(k, u, w, a).f, shape, setup.grid, ps));
  const auto trace_logs = model_band_log2_norms(model_from_grid(u), tshape, tgrid, ps);

  UkResult out;
  for (std::size_t ip = 0; ip < ps.size(); ++ip) {
    const double s = a_n * ps[ip].reciprocal();
    for (const auto& q : qs) {
      const auto params = tuple({{"p", exponent_text(ps[ip])}, {"q", exponent_text(q)}});
      std::vector<double> norms, ratios;
      const double tnorm = besov_from_log2_norms(trace_logs[ip], 0.0, q);
      for (std::size_t ik = 0; ik < setup.ks.size(); ++ik) {
        norms.push_back(besov_from_log2_norms(logs[ik][ip], s, q));
        ratios.push_back(tnorm / norms.back());
      }
      out.slopes.push_back(make_slope_report("uk", params, setup.ks, norms, predicted_q_slope(q), setup.tolerance));
      TraceRatioReport r;
      r.parameters = params;
      r.k = setup.ks;
      r.ratios = ratios;
      r.slope = slope_of(r.k, r.ratios);
      r.baseline = ratios.front();
      r.max_over_baseline = *std::max_element(ratios.begin(), ratios.end()) / r.baseline;
      r.bounded_expected = q <= Exponent(1.0);
      r.pass = r.bounded_expected ? r.max_over_baseline <= 2.0 : r.slope >= 0.3;
      out.ratios.push_back(std::move(r));
    }
  }
  return out;
}

VkResult run_vk(const CounterexampleSetup& setup, std::span<const Exponent> ps, std::span<const Exponent> qs) {
  check_setup(setup);
  const auto& a = setup.a;
  const RadialProfile f = lowball_profile();
  const RadialProfile g = lowpass_profile(a.normal_weight());
  const BandShape shape{a};
  const std::vector<double> origin(a.dim() - 1, 0.0);

  VkResult out;
  std::vector<std::vector<std::vector<double>>> logs;
  for (int k : setup.ks) {
    const auto member = family_vk(k, f, g, a);
    logs.push_back(model_band_log2_norms(member.f, shape, setup.grid, ps));
    out.trace_integral.push_back(member.trace.transform(origin).real());
  }
  for (std::size_t ip = 0; ip < ps.size(); ++ip) {
    const double s = a.total() * ps[ip].reciprocal() - a.tangential_total();
    for (const auto& q : qs) {
      std::vector<double> norms;
      for (std::size_t ik = 0; ik < setup.ks.size(); ++ik) norms.push_back(besov_from_log2_norms(logs[ik][ip], s, q));
      out.slopes.push_back(make_slope_report("vk", tuple({{"p", exponent_text(ps[ip])}, {"q", exponent_text(q)}}),
                                             setup.ks, norms, predicted_q_slope(q), setup.tolerance));
    }
  }
  return out;
}

GkResult run_gk(const CounterexampleSetup& setup, const Exponent& r, std::span<const Exponent> us,
                const Exponent& p, const Exponent& q) {
  check_setup(setup);
  const auto& a = setup.a;
  const GkSetup gs = gk_setup(a);
  const GridSpec tgrid = setup.grid.drop_last_axis();
  const BandShape tshape{a.tangential(), gs.shape.inner, gs.shape.outer};
  const double s = a.total() * p.reciprocal() - a.tangential_total();
  const double st = a.tangential_total() * (r.reciprocal() - 1.0);
  const Exponent ps[] = {p};
  const Exponent rs[] = {r};

  GkResult out;
  out.k0 = gs.k0;
  std::vector<double> norms;
  std::vector<std::vector<double>> trace_logs;
  for (int k : setup.ks) {
    const auto member = family_gk(k, gs);
    const auto logs = model_band_log2_norms(member.f, gs.shape, setup.grid, ps)[0];
    for (std::size_t j = 0; j < logs.size(); ++j) {
      if (std::isfinite(logs[j]) && static_cast<int>(j) != k + gs.k0) {
        throw Error("g_k spectrum meets band " + std::to_string(j) + ", expected only " + std::to_string(k + gs.k0));
      }
    }
    const auto top = static_cast<std::size_t>(k + gs.k0);
    if (top >= logs.size() || !std::isfinite(logs[top])) {
      throw CapacityError("grid too coarse to sample the g_k spectrum at k = " + std::to_string(k));
    }
    norms.push_back(besov_from_log2_norms(logs, s, q));
    trace_logs.push_back(model_band_log2_norms(member.trace, tshape, tgrid, rs)[0]);
  }
  out.norm = make_slope_report("gk", tuple({{"p", exponent_text(p)}, {"q", exponent_text(q)}}), setup.ks, norms, 0.0,
                               setup.tolerance);
  out.norm_spread =
      *std::max_element(norms.begin(), norms.end()) / *std::min_element(norms.begin(), norms.end());
  for (const auto& u : us) {
    std::vector<double> tn;
    for (const auto& logs : trace_logs) tn.push_back(besov_from_log2_norms(logs, st, u));
    out.trace_growth.push_back(make_slope_report("gk-trace", tuple({{"r", exponent_text(r)}, {"u", exponent_text(u)}}),
                                                 setup.ks, tn, u.reciprocal(), setup.tolerance));
  }
  return out;
}

// ------------------------------------------------------------ embeddings

namespace {

double norm_from_bands(const GridFunction& f, std::span<const GridFunction> bands, const SpaceParams& prm) {
  switch (prm.scale) {
    case Scale::Besov:
      return besov_from_band_norms(band_lp_norms(bands, prm.p), prm.s, prm.q);
    case Scale::LizorkinTriebel:
      return lizorkin_triebel_from_bands(bands, prm.s, prm.p, prm.q);
    case Scale::Approximation:
      return approx_norm_from_bands(f, bands, prm);
  }
  throw Error("unknown scale");
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

std::vector<EmbeddingReport> check_embeddings(std::span<const EmbeddingPair> pairs, const DyadicPartition& P,
                                              int trials, std::uint64_t seed, double delta) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  for (const auto& pair : pairs) {
    pair.source.validate();
    pair.target.validate();
    if (pair.source.a != P.anisotropy() || pair.target.a != P.anisotropy()) {
      throw DomainError("embedding '" + pair.name + "' uses a different anisotropy than the partition");
    }
  }
  std::vector<EmbeddingReport> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) out[i].name = pairs[i].name;
  std::vector<double> deltas;
  for (const auto& pair : pairs) {
    const double d = pair.delta.value_or(delta);
    if (std::find(deltas.begin(), deltas.end(), d) == deltas.end()) deltas.push_back(d);
  }
  const CounterRng root(seed);
  for (int t = 0; t < trials; ++t) {
    for (double d : deltas) {
      CounterRng rng = root.fork(static_cast<std::uint64_t>(t));
      const GridFunction f = random_field(P, rng, d);
      const auto bands = band_decompose(f, P);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i].delta.value_or(delta) != d) continue;
        const double src = norm_from_bands(f, bands, pairs[i].source);
        const double dst = norm_from_bands(f, bands, pairs[i].target);
        out[i].ratios.push_back(dst / src);
      }
    }
  }
  for (auto& r : out) {
    r.max = *std::max_element(r.ratios.begin(), r.ratios.end());
    r.min = *std::min_element(r.ratios.begin(), r.ratios.end());
    r.median = median_of(r.ratios);
  }
  return out;
}

EmbeddingReport check_embedding(const SpaceParams& source, const SpaceParams& target, const DyadicPartition& P,
                                int trials, std::uint64_t seed, double delta) {
  const EmbeddingPair pair{"embedding", source, target, std::nullopt};
  return check_embeddings(std::span(&pair, 1), P, trials, seed, delta).front();
}

double source_white_delta(const EmbeddingPair& pair) { return 2.0 * pair.source.s; }

std::vector<EmbeddingPair> standard_embedding_pairs(const Anisotropy& a) {
  const double t = a.total();
  const auto B = Scale::Besov;
  const auto F = Scale::LizorkinTriebel;
  const auto A = Scale::Approximation;
  const Exponent half(0.5), one(1.0), two(2.0), inf = Exponent::infinity();
  return {
      {"elementary-lower", {B, 1.0, half, half, a}, {F, 1.0, half, two, a}, {}},
      {"elementary-upper", {F, 1.0, half, two, a}, {B, 1.0, half, two, a}, {}},
      {"sobolev-line", {B, 1.5, one, two, a}, {B, 1.5 - t + t / 2.0, two, two, a}, {}},
      {"jawerth-franke-lower", {B, 1.0 + t, half, one, a}, {F, 1.0, one, two, a}, {}},
      {"jawerth-franke-upper", {F, 1.0, one, two, a}, {B, 1.0 - t / 2.0, two, one, a}, {}},
      {"a-sandwich-lower", {B, t, half, one, a}, {A, t, half, one, a}, {}},
      {"a-sandwich-upper", {A, t, half, one, a}, {B, 0.0, one, inf, a}, {}},
  };
}

// ------------------------------------------------------------------- NPP

double npp_constant(const GridFunction& h, int j, const Exponent& p, double normal_weight) {
  const auto& spec = h.spec();
  const std::size_t last = spec.points(spec.dim() - 1);
  const std::size_t columns = spec.size() / last;
  const double global = max_abs(h.samples());
  if (global == 0.0) return 0.0;
  double best = 0;
  for (std::size_t c = 0; c < columns; ++c) {
    const auto column = h.samples().subspan(c * last, last);
    const double sup = max_abs(column);
    if (sup < 1e-6 * global) continue;
    best = std::max(best, sup / lp_norm(column, p));
  }
  return best / std::exp2(j * normal_weight * p.reciprocal());
}

NppReport check_npp(int j, int trials, const Exponent& p, const DyadicPartition& P, std::uint64_t seed) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  NppReport r;
  r.level = j;
  const auto& spec = P.spec();
  const CounterRng root(seed);
  for (int t = 0; t < trials; ++t) {
    CounterRng rng = root.fork(static_cast<std::uint64_t>(t));
    GridFunction f(spec);
    const int masses = 1 + static_cast<int>(rng.next() % 3);
    for (int i = 0; i < masses; ++i) f[rng.next() % spec.size()] += rng.complex_normal();
    r.constants.push_back(npp_constant(band_project(f, P, j), j, p, P.anisotropy().normal_weight()));
  }
  r.max = *std::max_element(r.constants.begin(), r.constants.end());
  r.min = *std::min_element(r.constants.begin(), r.constants.end());
  return r;
}

// --------------------------------------------------------------- output

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw StructuralError("CSV row arity differs from the header");
    line(row);
  }
}

CsvTable read_csv(std::istream& in) {
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV");
  t.header = split(line);
  std::size_t no = 1;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size()) throw IoError("CSV line " + std::to_string(no) + " has wrong arity");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

CsvTable slope_table(std::span<const SlopeReport> reports) {
  CsvTable t{{"family", "parameters", "k", "norm", "slope", "predicted", "residual", "pass"}, {}};
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.k.size(); ++i) {
      t.rows.push_back({r.family, r.parameters, std::to_string(r.k[i]), format_double(r.norms[i]),
                        format_double(r.slope), format_double(r.predicted), format_double(r.residual),
                        r.checked ? (r.pass ? "true" : "false") : "unchecked"});
    }
  }
  return t;
}

CsvTable ratio_table(std::span<const TraceRatioReport> reports) {
  CsvTable t{{"family", "parameters", "k", "ratio", "slope", "max_over_baseline", "pass"}, {}};
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.k.size(); ++i) {
      t.rows.push_back({"uk-trace-ratio", r.parameters, std::to_string(r.k[i]), format_double(r.ratios[i]),
                        format_double(r.slope), format_double(r.max_over_baseline), r.pass ? "true" : "false"});
    }
  }
  return t;
}

CsvTable embedding_table(std::span<const EmbeddingReport> reports) {
  CsvTable t{{"embedding", "trial", "ratio"}, {}};
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.ratios.size(); ++i) {
      t.rows.push_back({r.name, std::to_string(i), format_double(r.ratios[i])});
    }
  }
  return t;
}

CsvTable npp_table(std::span<const NppReport> reports) {
  CsvTable t{{"level", "trial", "constant"}, {}};
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.constants.size(); ++i) {
      t.rows.push_back({std::to_string(r.level), std::to_string(i), format_double(r.constants[i])});
    }
  }
  return t;
}

}  // namespace besov
