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

#include "besovlab/atoms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "besovlab/errors.hpp"

namespace besov {

namespace {

long wrap(long v, long n) {
  long r = v % n;
  if (r < 0) r += n;
  return r;
}

// Signed representative of v modulo n in [-n/2, n/2).
long centred(long v, long n) {
  long r = wrap(v, n);
  return r >= n / 2 ? r - n : r;
}

std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> st(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) st[i - 1] = st[i] * dims[i];
  return st;
}

std::size_t volume(std::span<const std::size_t> dims) {
  std::size_t v = 1;
  for (auto d : dims) v *= d;
  return v;
}

// Central difference along one axis, zero outside the array, step 1 / scale.
std::vector<Complex> central_difference(std::span<const Complex> values, std::span<const std::size_t> dims,
                                        std::size_t axis, double scale) {
  const auto st = strides_of(dims);
  std::vector<Complex> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t coord = (i / st[axis]) % dims[axis];
    const Complex up = coord + 1 < dims[axis] ? values[i + st[axis]] : Complex{};
    const Complex down = coord > 0 ? values[i - st[axis]] : Complex{};
    out[i] = 0.5 * scale * (up - down);
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------- DyadicChart

DyadicChart::DyadicChart(GridSpec spec, Anisotropy a, std::vector<std::size_t> base_cell)
    : spec_(std::move(spec)), a_(std::move(a)), base_(std::move(base_cell)) {
  if (a_.dim() != spec_.dim() || base_.size() != spec_.dim()) {
    throw StructuralError("chart dimensions do not match the grid");
  }
  for (std::size_t i = 0; i < base_.size(); ++i) {
    if (base_[i] == 0 || spec_.points(i) % base_[i] != 0) {
      throw StructuralError("base cell must divide the grid on every axis");
    }
  }
}

std::size_t DyadicChart::cell_points(int level, std::size_t axis) const {
  if (level < 0) throw DomainError("level must be >= 0");
  const double e = level * a_[axis];
  const double r = std::round(e);
  if (std::fabs(e - r) > 1e-12 || r > 62) {
    throw CapacityError("level " + std::to_string(level) + " cells are not whole grid blocks");
  }
  const std::size_t div = std::size_t{1} << static_cast<int>(r);
  if (base_[axis] % div != 0) {
    throw CapacityError("level " + std::to_string(level) + " cells are finer than the grid");
  }
  return base_[axis] / div;
}

int DyadicChart::max_level() const {
  int level = 0;
  while (true) {
    try {
      for (std::size_t i = 0; i < spec_.dim(); ++i) (void)cell_points(level + 1, i);
    } catch (const CapacityError&) {
      return level;
    }
    ++level;
  }
}

double DyadicChart::cell_measure(int level) const { return std::exp2(-level * a_.total()); }

// --------------------------------------------------------- multi-indices

std::vector<std::vector<int>> multi_indices(const Anisotropy& a, double budget) {
  std::vector<std::vector<int>> out;
  if (budget < 0) return out;
  std::vector<int> beta(a.dim(), 0);
  // Odometer over the box beta_i <= budget / a_i.
  while (true) {
    double cost = 0;
    for (std::size_t i = 0; i < beta.size(); ++i) cost += a[i] * beta[i];
    if (cost <= budget + 1e-12) out.push_back(beta);
    std::size_t i = 0;
    for (; i < beta.size(); ++i) {
      if ((beta[i] + 1) * a[i] <= budget + 1e-12) {
        ++beta[i];
        break;
      }
      beta[i] = 0;
    }
    if (i == beta.size()) break;
  }
  return out;
}

// ---------------------------------------------------------- validation

namespace {

struct Local {
  std::vector<std::size_t> dims;
  std::vector<std::vector<long>> offset;  // per axis: grid offset of each patch coordinate from the centre
};

Local localize(const AtomFunction& atom, const DyadicChart& chart) {
  const auto& spec = chart.spec();
  const std::size_t n = spec.dim();
  if (atom.patch.origin.size() != n || atom.patch.dims.size() != n || atom.spec.position.size() != n) {
    throw StructuralError("atom dimensions do not match the chart");
  }
  if (atom.patch.values.size() != volume(atom.patch.dims)) throw StructuralError("patch size mismatch");
  Local loc{atom.patch.dims, {}};
  for (std::size_t ax = 0; ax < n; ++ax) {
    const long npts = static_cast<long>(spec.points(ax));
    const long centre = atom.spec.position[ax] * static_cast<long>(chart.cell_points(atom.spec.level, ax));
    std::vector<long> off(atom.patch.dims[ax]);
    for (std::size_t i = 0; i < off.size(); ++i) off[i] = centred(atom.patch.origin[ax] + static_cast<long>(i) - centre, npts);
    loc.offset.push_back(std::move(off));
  }
  return loc;
}

}  // namespace

AtomReport validate_atom(const AtomFunction& atom, const DyadicChart& chart, double s, const Exponent& p) {
  AtomReport report;
  const auto& a = chart.anisotropy();
  const std::size_t n = a.dim();
  const Local loc = localize(atom, chart);
  const auto st = strides_of(loc.dims);
  const auto& values = atom.patch.values;
  const int level = atom.spec.level;

  std::vector<double> half(n), base(n);
  for (std::size_t ax = 0; ax < n; ++ax) {
    half[ax] = 0.5 * atom.spec.c * static_cast<double>(chart.cell_points(level, ax));
    base[ax] = static_cast<double>(chart.cell_points(0, ax));
  }

  // Support.
  double peak = 0, outside = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::abs(values[i]);
    peak = std::max(peak, v);
    bool inside = true;
    for (std::size_t ax = 0; ax < n; ++ax) {
      const auto o = static_cast<double>(loc.offset[ax][(i / st[ax]) % loc.dims[ax]]);
      if (!(std::fabs(o) < half[ax])) inside = false;
    }
    if (!inside) outside = std::max(outside, v);
  }
  report.support.margin = peak > 0 ? outside / peak : 0.0;
  report.support.pass = outside <= 1e-14 * peak;
  report.support.detail = "max |rho| outside cQ relative to max |rho|";

  // Size: pad by the largest derivative order so differences see the zero exterior.
  const auto betas = multi_indices(a, atom.spec.K);
  std::vector<std::size_t> pad(n, 0);
  for (const auto& beta : betas) {
    for (std::size_t ax = 0; ax < n; ++ax) pad[ax] = std::max(pad[ax], static_cast<std::size_t>(beta[ax]));
  }
  std::vector<std::size_t> pdims(n);
  for (std::size_t ax = 0; ax < n; ++ax) pdims[ax] = loc.dims[ax] + 2 * pad[ax];
  const auto pst = strides_of(pdims);
  std::vector<Complex> padded(volume(pdims));
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::size_t j = 0;
    for (std::size_t ax = 0; ax < n; ++ax) j += ((i / st[ax]) % loc.dims[ax] + pad[ax]) * pst[ax];
    padded[j] = values[i];
  }
  const double measure = chart.cell_measure(level);
  double worst = 0;
  std::string worst_beta = "-";
  for (const auto& beta : betas) {
    std::vector<Complex> d = padded;
    double ab = 0;
    for (std::size_t ax = 0; ax < n; ++ax) {
      ab += a[ax] * beta[ax];
      for (int k = 0; k < beta[ax]; ++k) d = central_difference(d, pdims, ax, base[ax]);
    }
    const double bound = std::pow(measure, (s - ab) / a.total() - p.reciprocal());
    const double ratio = max_abs(d) / bound;
    if (ratio > worst) {
      worst = ratio;
      std::ostringstream os;
      for (std::size_t ax = 0; ax < n; ++ax) os << (ax ? "," : "(") << beta[ax];
      os << ")";
      worst_beta = os.str();
    }
  }
  report.size.margin = worst;
  report.size.pass = worst <= 1.1;
  report.size.detail = "max |D^beta rho| / bound, worst beta " + worst_beta;

  // Moments about the centre, chart units.
  if (atom.classification == AtomClass::SP) {
    double worst_moment = 0;
    for (const auto& beta : multi_indices(a, atom.spec.L)) {
      Complex m{};
      double absolute = 0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        double w = 1, wa = 1;
        for (std::size_t ax = 0; ax < n; ++ax) {
          const double u = static_cast<double>(loc.offset[ax][(i / st[ax]) % loc.dims[ax]]) / base[ax];
          w *= std::pow(u, beta[ax]);
          wa *= std::pow(std::fabs(u), beta[ax]);
        }
        m += w * values[i];
        absolute += wa * std::abs(values[i]);
      }
      if (absolute > 0) worst_moment = std::max(worst_moment, std::abs(m) / absolute);
    }
    report.moments.margin = worst_moment;
    report.moments.pass = worst_moment <= 1e-8;
    report.moments.detail = "max |int x^beta rho| / int |x^beta rho|";
  } else {
    report.moments.detail = "no moment conditions for 1_K atoms";
  }
  return report;
}

// ------------------------------------------------------- moment profiles

std::vector<double> moment_profile(std::size_t cell_points, double half_width, int vanishing) {
  if (cell_points == 0 || !(half_width > 0)) throw DomainError("moment profile needs a positive width");
  const double reach = half_width * static_cast<double>(cell_points);
  long r = static_cast<long>(std::floor(reach));
  if (static_cast<double>(r) >= reach) --r;  // the bump vanishes at the edge
  if (r < 0) r = 0;
  std::vector<double> z, bump;
  for (long i = -r; i <= r; ++i) {
    z.push_back(static_cast<double>(i) / static_cast<double>(cell_points));
    bump.push_back(smooth_bump(z.back(), -half_width, half_width));
  }
  if (vanishing < 0) return bump;
  // Even polynomial P(z) = sum_e c_e z^{2e}; odd moments vanish by symmetry.
  const int even = vanishing / 2 + 1;
  const int unknowns = even + 1;
  const long nonzero = 2 * r - 1;
  if (nonzero < 2 * unknowns) {
    throw DomainError("cell of " + std::to_string(cell_points) + " points too small for " +
                      std::to_string(vanishing + 1) + " vanishing moments");
  }
  // Rows 0..even-1: moments of order 2k; last row: c_0 = 1.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(unknowns, unknowns);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
  for (int k = 0; k < even; ++k) {
    for (int e = 0; e < unknowns; ++e) {
      double acc = 0;
      for (std::size_t i = 0; i < z.size(); ++i) acc += std::pow(z[i], 2 * (k + e)) * bump[i];
      A(k, e) = acc;
    }
  }
  A(unknowns - 1, 0) = 1.0;
  rhs(unknowns - 1) = 1.0;
  const Eigen::VectorXd coef = A.fullPivLu().solve(rhs);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    double poly = 0;
    for (int e = unknowns - 1; e >= 0; --e) poly = poly * z[i] * z[i] + coef(e);
    out[i] = bump[i] * poly;
  }
  // Exact mirror symmetry keeps odd moments at round-off.
  for (long i = 1; i <= r; ++i) out[static_cast<std::size_t>(r + i)] = out[static_cast<std::size_t>(r - i)];
  out[static_cast<std::size_t>(r)] = 1.0;
  return out;
}

// ---------------------------------------------------------------- atoms

AtomFunction make_atom(const DyadicChart& chart, const AtomSpec& spec, double s, const Exponent& p) {
  const std::size_t n = chart.spec().dim();
  if (spec.position.size() != n) throw StructuralError("atom position dimension mismatch");
  if (!(spec.c > 1.0)) throw DomainError("support dilation c must exceed 1");
  AtomFunction atom;
  atom.spec = spec;
  atom.classification = spec.level == 0 ? AtomClass::OneK : AtomClass::SP;
  std::vector<std::vector<double>> profiles;
  for (std::size_t ax = 0; ax < n; ++ax) {
    const std::size_t b = chart.cell_points(spec.level, ax);
    int vanishing = -1;
    if (ax == 0 && atom.classification == AtomClass::SP && spec.L >= 0) {
      vanishing = static_cast<int>(std::floor(spec.L / chart.anisotropy()[0] + 1e-12));
    }
    profiles.push_back(moment_profile(b, 0.5 * spec.c, vanishing));
    const long r = static_cast<long>(profiles.back().size() / 2);
    atom.patch.origin.push_back(spec.position[ax] * static_cast<long>(b) - r);
    atom.patch.dims.push_back(profiles.back().size());
  }
  const auto st = strides_of(atom.patch.dims);
  atom.patch.values.resize(volume(atom.patch.dims));
  for (std::size_t i = 0; i < atom.patch.values.size(); ++i) {
    double v = 1;
    for (std::size_t ax = 0; ax < n; ++ax) v *= profiles[ax][(i / st[ax]) % atom.patch.dims[ax]];
    atom.patch.values[i] = v;
  }
  const double margin = validate_atom(atom, chart, s, p).size.margin;
  if (margin > 0) {
    for (auto& v : atom.patch.values) v /= margin;
  }
  return atom;
}

GridFunction synthesize_atoms(std::span<const AtomFunction> atoms, std::span<const Complex> lambda,
                              const DyadicChart& chart) {
  if (atoms.size() != lambda.size()) throw StructuralError("one coefficient per atom expected");
  const auto& spec = chart.spec();
  GridFunction g(spec);
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (lambda[k] == Complex{}) continue;
    const auto& patch = atoms[k].patch;
    const auto st = strides_of(patch.dims);
    for (std::size_t i = 0; i < patch.values.size(); ++i) {
      std::size_t flat = 0;
      for (std::size_t ax = 0; ax < spec.dim(); ++ax) {
        const long coord = patch.origin[ax] + static_cast<long>((i / st[ax]) % patch.dims[ax]);
        flat += static_cast<std::size_t>(wrap(coord, static_cast<long>(spec.points(ax)))) * spec.stride(ax);
      }
      g[flat] += lambda[k] * patch.values[i];
    }
  }
  return g;
}

Coefficients atom_coefficients(std::span<const AtomFunction> atoms, std::span<const Complex> lambda,
                               const DyadicChart& chart) {
  if (atoms.size() != lambda.size()) throw StructuralError("one coefficient per atom expected");
  const std::size_t n = chart.spec().dim();
  std::map<int, CoefficientLevel> levels;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const int nu = atoms[k].spec.level;
    auto& lvl = levels[nu];
    if (lvl.shape.empty()) {
      lvl.level = nu;
      for (std::size_t ax = 0; ax < n; ++ax) lvl.shape.push_back(chart.cells(nu, ax));
      lvl.values.assign(volume(lvl.shape), Complex{});
    }
    std::size_t cell = 0;
    for (std::size_t ax = 0; ax < n; ++ax) {
      cell = cell * lvl.shape[ax] +
             static_cast<std::size_t>(wrap(atoms[k].spec.position[ax], static_cast<long>(lvl.shape[ax])));
    }
    lvl.values[cell] += lambda[k];
  }
  Coefficients out;
  for (auto& [nu, lvl] : levels) out.push_back(std::move(lvl));
  return out;
}

bool touches_hyperplane(const AtomSpec& spec, const DyadicChart& chart) {
  const std::size_t last = chart.spec().dim() - 1;
  const long b = static_cast<long>(chart.cell_points(spec.level, last));
  const long npts = static_cast<long>(chart.spec().points(last));
  const double distance = std::fabs(static_cast<double>(centred(spec.position[last] * b, npts)));
  return distance < 0.5 * spec.c * static_cast<double>(b);
}

NormalProfile default_normal_profile(double L, double normal_weight) {
  const int vanishing = L < 0 ? -1 : static_cast<int>(std::floor(L / normal_weight + 1e-12));
  return [vanishing](std::size_t cell_points) { return moment_profile(cell_points, 0.5, vanishing); };
}

FlattenResult flatten_for_trace(std::span<const Complex> lambda, std::span<const AtomFunction> atoms,
                                const DyadicChart& chart, const NormalProfile& psi) {
  if (atoms.size() != lambda.size()) throw StructuralError("one coefficient per atom expected");
  const auto& spec = chart.spec();
  const std::size_t n = spec.dim();
  if (n < 2) throw DomainError("flattening needs n >= 2");
  const std::size_t last = n - 1;
  const double a_n = chart.anisotropy().normal_weight();
  std::map<std::size_t, std::vector<double>> profiles;

  auto profile_for = [&](const AtomSpec& as) -> const std::vector<double>& {
    const std::size_t b = chart.cell_points(as.level, last);
    auto it = profiles.find(b);
    if (it != profiles.end()) return it->second;
    auto prof = psi(b);
    if (prof.size() % 2 == 0) throw DomainError("psi_1 samples must be centred (odd count)");
    const std::size_t r = prof.size() / 2;
    if (std::fabs(prof[r] - 1.0) > 1e-12) throw DomainError("psi_1(0) must equal 1");
    if (2 * r > b) throw DomainError("psi_1 support exceeds [-1/2, 1/2]");
    const int vanishing = as.L < 0 ? -1 : static_cast<int>(std::floor(as.L / a_n + 1e-12));
    for (int k = 0; k <= vanishing; ++k) {
      double m = 0, total = 0;
      for (std::size_t i = 0; i < prof.size(); ++i) {
        const double z = (static_cast<double>(i) - static_cast<double>(r)) / static_cast<double>(b);
        m += std::pow(z, k) * prof[i];
        total += std::pow(std::fabs(z), k) * std::fabs(prof[i]);
      }
      if (std::fabs(m) > 1e-10 * total) {
        throw DomainError("psi_1 moment of order " + std::to_string(k) + " does not vanish");
      }
    }
    return profiles.emplace(b, std::move(prof)).first->second;
  };

  FlattenResult out;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const auto& atom = atoms[k];
    const bool keep = touches_hyperplane(atom.spec, chart);
    out.kept.push_back(keep);
    out.lambda.push_back(keep ? lambda[k] : Complex{});
    if (!keep) {
      out.atoms.push_back(atom);
      continue;
    }
    const auto& prof = profile_for(atom.spec);
    const auto& patch = atom.patch;
    // Row of the patch lying on x_n = 0.
    const long npts = static_cast<long>(spec.points(last));
    long row = -1;
    for (std::size_t i = 0; i < patch.dims[last]; ++i) {
      if (wrap(patch.origin[last] + static_cast<long>(i), npts) == 0) row = static_cast<long>(i);
    }
    AtomFunction flat;
    flat.spec = atom.spec;
    flat.spec.position[last] = 0;
    flat.classification = atom.classification;
    flat.patch.origin = patch.origin;
    flat.patch.dims = patch.dims;
    const long r = static_cast<long>(prof.size() / 2);
    flat.patch.origin[last] = -r;
    flat.patch.dims[last] = prof.size();
    flat.patch.values.assign(volume(flat.patch.dims), Complex{});
    if (row >= 0) {
      const std::size_t tangential = patch.values.size() / patch.dims[last];
      for (std::size_t t = 0; t < tangential; ++t) {
        const Complex v = patch.values[t * patch.dims[last] + static_cast<std::size_t>(row)];
        for (std::size_t z = 0; z < prof.size(); ++z) flat.patch.values[t * prof.size() + z] = v * prof[z];
      }
    }
    out.atoms.push_back(std::move(flat));
  }
  return out;
}

// -------------------------------------------------------------- boxes

double Box::measure() const {
  double m = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) m *= std::max(0.0, hi[i] - lo[i]);
  return m;
}

Box flattened_rectangle(const AtomSpec& spec, const Anisotropy& a) {
  Box box;
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    const double side = std::exp2(-spec.level * a[i]);
    const double centre = i + 1 == n ? 0.0 : side * static_cast<double>(spec.position[i]);
    box.lo.push_back(centre - 0.5 * side);
    box.hi.push_back(centre + 0.5 * side);
  }
  return box;
}

Box lower_slab(const AtomSpec& spec, const Anisotropy& a) {
  Box box = flattened_rectangle(spec, a);
  const double a_n = a.normal_weight();
  box.lo.back() = std::exp2(-(spec.level + 1) * a_n - 1);
  box.hi.back() = std::exp2(-spec.level * a_n - 1);
  return box;
}

bool boxes_overlap(const Box& x, const Box& y) {
  for (std::size_t i = 0; i < x.lo.size(); ++i) {
    if (!(x.lo[i] < y.hi[i] && y.lo[i] < x.hi[i])) return false;
  }
  return true;
}

bool slabs_pairwise_disjoint(std::span<const AtomSpec> specs, const Anisotropy& a) {
  std::vector<Box> slabs;
  for (const auto& s : specs) slabs.push_back(lower_slab(s, a));
  for (std::size_t i = 0; i < slabs.size(); ++i) {
    for (std::size_t j = i + 1; j < slabs.size(); ++j) {
      if (boxes_overlap(slabs[i], slabs[j])) return false;
    }
  }
  return true;
}

// -------------------------------------------------------- phi-transform

std::vector<std::size_t> phi_sampling_shape(const DyadicPartition& P, int level) {
  if (level < 0 || level > P.levels()) {
    throw CapacityError("phi-transform level " + std::to_string(level) + " exceeds partition level " +
                        std::to_string(P.levels()));
  }
  const auto& spec = P.spec();
  std::vector<std::size_t> shape;
  for (std::size_t ax = 0; ax < spec.dim(); ++ax) {
    const double target = 4.0 * spec.base_scale() * std::pow(P.outer() * std::exp2(level), P.anisotropy()[ax]);
    std::size_t s = 1;
    while (static_cast<double>(s) < target * (1 - 1e-12)) s <<= 1;
    if (s > spec.points(ax)) {
      throw CapacityError("phi-transform level " + std::to_string(level) + " needs " + std::to_string(s) +
                          " samples on axis " + std::to_string(ax));
    }
    shape.push_back(s);
  }
  return shape;
}

double phi_profile(std::span<const long> k, std::span<const std::size_t> shape) {
  double v = 1;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double t = std::fabs(static_cast<double>(k[i])) / (static_cast<double>(shape[i]) / 4.0);
    v *= smooth_step(t, 1.0, 2.0);
    if (v == 0.0) break;
  }
  return v;
}

PhiTransform phi_analysis(const GridFunction& g, const DyadicPartition& P, double s, const Exponent& p) {
  const auto& spec = g.spec();
  std::vector<std::vector<std::size_t>> shapes;
  for (int nu = 0; nu <= P.levels(); ++nu) shapes.push_back(phi_sampling_shape(P, nu));
  const auto bands = band_decompose(g, P);
  PhiTransform out;
  for (int nu = 0; nu <= P.levels(); ++nu) {
    const auto& shape = shapes[static_cast<std::size_t>(nu)];
    CoefficientLevel lvl{nu, shape, std::vector<Complex>(volume(shape))};
    const double cells = static_cast<double>(lvl.values.size());
    const double scale = std::exp2(nu * s) * std::pow(cells, -p.reciprocal());
    const auto sst = strides_of(shape);
    for (std::size_t m = 0; m < lvl.values.size(); ++m) {
      std::size_t flat = 0;
      for (std::size_t ax = 0; ax < spec.dim(); ++ax) {
        flat += ((m / sst[ax]) % shape[ax]) * (spec.points(ax) / shape[ax]) * spec.stride(ax);
      }
      lvl.values[m] = scale * bands[static_cast<std::size_t>(nu)][flat];
    }
    out.lambda.push_back(std::move(lvl));
  }
  return out;
}

GridFunction phi_synthesis(const Coefficients& lambda, const GridSpec& spec, double s, const Exponent& p) {
  GridFunction out(spec);
  std::vector<long> k(spec.dim());
  for (const auto& lvl : lambda) {
    if (lvl.shape.size() != spec.dim()) throw StructuralError("coefficient lattice dimension mismatch");
    const auto sst = strides_of(lvl.shape);
    const double cells = static_cast<double>(volume(lvl.shape));
    if (lvl.values.size() != volume(lvl.shape)) throw StructuralError("coefficient count mismatch");
    const double scale = std::exp2(-lvl.level * s) * std::pow(cells, p.reciprocal());
    GridFunction z(spec);
    for (std::size_t m = 0; m < lvl.values.size(); ++m) {
      std::size_t flat = 0;
      for (std::size_t ax = 0; ax < spec.dim(); ++ax) {
        if (spec.points(ax) % lvl.shape[ax] != 0) throw StructuralError("coefficient lattice does not divide the grid");
        flat += ((m / sst[ax]) % lvl.shape[ax]) * (spec.points(ax) / lvl.shape[ax]) * spec.stride(ax);
      }
      z[flat] = scale * lvl.values[m];
    }
    auto c = forward_transform(z);
    const double gain = static_cast<double>(spec.size()) / cells;
    auto coef = c.coefficients();
    for (std::size_t i = 0; i < coef.size(); ++i) {
      if (coef[i] == Complex{}) continue;
      for (std::size_t ax = 0; ax < spec.dim(); ++ax) k[ax] = spec.frequency(ax, (i / spec.stride(ax)) % spec.points(ax));
      coef[i] *= gain * phi_profile(k, lvl.shape);
    }
    out += inverse_transform(c);
  }
  return out;
}

// ------------------------------------------------------------------ CSV

void write_coefficients_csv(std::ostream& out, const Coefficients& lambda, std::size_t n) {
  out << "nu";
  for (std::size_t i = 1; i <= n; ++i) out << ",m" << i;
  out << ",re,im\n";
  char buf[64];
  for (const auto& lvl : lambda) {
    if (lvl.shape.size() != n) throw StructuralError("coefficient lattice dimension mismatch");
    const auto st = strides_of(lvl.shape);
    for (std::size_t m = 0; m < lvl.values.size(); ++m) {
      out << lvl.level;
      for (std::size_t ax = 0; ax < n; ++ax) out << ',' << (m / st[ax]) % lvl.shape[ax];
      std::snprintf(buf, sizeof buf, ",%.17g", lvl.values[m].real());
      out << buf;
      std::snprintf(buf, sizeof buf, ",%.17g", lvl.values[m].imag());
      out << buf << '\n';
    }
  }
}

Coefficients read_coefficients_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty coefficient CSV");
  const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 4 || line.rfind("nu,", 0) != 0) throw IoError("coefficient CSV header must start with nu,m1");
  const std::size_t n = columns - 3;
  struct Row {
    std::vector<std::size_t> m;
    Complex v;
  };
  std::map<int, std::vector<Row>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != columns) throw IoError("coefficient CSV line " + std::to_string(line_no) + " has wrong arity");
    try {
      Row r;
      const int nu = std::stoi(cells[0]);
      for (std::size_t i = 0; i < n; ++i) r.m.push_back(std::stoul(cells[1 + i]));
      r.v = {std::stod(cells[n + 1]), std::stod(cells[n + 2])};
      rows[nu].push_back(std::move(r));
    } catch (const std::exception&) {
      throw IoError("coefficient CSV line " + std::to_string(line_no) + " is malformed");
    }
  }
  Coefficients out;
  for (auto& [nu, list] : rows) {
    CoefficientLevel lvl{nu, std::vector<std::size_t>(n, 0), {}};
    for (const auto& r : list) {
      for (std::size_t i = 0; i < n; ++i) lvl.shape[i] = std::max(lvl.shape[i], r.m[i] + 1);
    }
    const auto st = strides_of(lvl.shape);
    lvl.values.assign(volume(lvl.shape), Complex{});
    for (const auto& r : list) {
      std::size_t flat = 0;
      for (std::size_t i = 0; i < n; ++i) flat += r.m[i] * st[i];
      lvl.values[flat] = r.v;
    }
    out.push_back(std::move(lvl));
  }
  return out;
}

}  // namespace besov
