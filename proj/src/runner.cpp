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

#include "besovlab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>

#include "besovlab/atoms.hpp"
#include "besovlab/errors.hpp"
#include "besovlab/experiments.hpp"
#include "besovlab/partition.hpp"
#include "besovlab/trace_extension.hpp"
#include "json.hpp"

namespace besov {

using nlohmann::json;

namespace {

const std::pair<Command, const char*> kCommands[] = {
    {Command::Norm, "norm"},
    {Command::Trace, "trace"},
    {Command::Extend, "extend"},
    {Command::Counterexample, "counterexample"},
    {Command::EmbeddingCheck, "embedding-check"},
    {Command::NppCheck, "npp-check"},
    {Command::PhiTransform, "phi-transform"},
};

// ---------------------------------------------------------------- parsing

class Reader {
 public:
  std::vector<std::string> issues;

  void fail(const std::string& path, const std::string& what) { issues.push_back(path + ": " + what); }

  /// Reports keys of `node` outside `known`.
  void only(const json& node, const std::string& path, std::initializer_list<const char*> known) {
    if (!node.is_object()) {
      fail(path, "expected an object");
      return;
    }
    for (const auto& [key, value] : node.items()) {
      if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
        fail(join(path, key), "unknown key");
      }
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  void number(const json& node, const std::string& key, const std::string& path, double& out) {
    if (!node.contains(key)) return;
    const auto& v = node.at(key);
    if (!v.is_number()) return fail(join(path, key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) fail(join(path, key), "must be finite");
  }

  void integer(const json& node, const std::string& key, const std::string& path, int& out, int lo) {
    if (!node.contains(key)) return;
    const auto& v = node.at(key);
    if (!v.is_number_integer()) return fail(join(path, key), "expected an integer");
    const auto x = v.get<long long>();
    if (x < lo || x > 1'000'000'000) return fail(join(path, key), "must be >= " + std::to_string(lo));
    out = static_cast<int>(x);
  }

  std::optional<Exponent> exponent(const json& v, const std::string& path) {
    try {
      if (v.is_number()) return Exponent(v.get<double>());
      if (v.is_string()) return Exponent::parse(v.get<std::string>());
      fail(path, "expected a number, a fraction string or \"inf\"");
    } catch (const Error& e) {
      fail(path, e.what());
    }
    return std::nullopt;
  }

  void exponent(const json& node, const std::string& key, const std::string& path, Exponent& out) {
    if (!node.contains(key)) return;
    if (auto e = exponent(node.at(key), join(path, key))) out = *e;
  }

  void exponents(const json& node, const std::string& key, const std::string& path, std::vector<Exponent>& out) {
    if (!node.contains(key)) return;
    const auto& v = node.at(key);
    const auto p = join(path, key);
    if (!v.is_array()) {
      if (auto e = exponent(v, p)) out = {*e};
      return;
    }
    if (v.empty()) return fail(p, "must not be empty");
    std::vector<Exponent> tmp;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (auto e = exponent(v[i], p + "[" + std::to_string(i) + "]")) tmp.push_back(*e);
    }
    if (tmp.size() == v.size()) out = tmp;
  }

  template <class T>
  void list(const json& node, const std::string& key, const std::string& path, std::vector<T>& out, bool allow_empty,
            const std::function<std::optional<std::string>(T)>& check) {
    if (!node.contains(key)) return;
    const auto& v = node.at(key);
    const auto p = join(path, key);
    if (!v.is_array()) return fail(p, "expected an array");
    if (v.empty() && !allow_empty) return fail(p, "must not be empty");
    std::vector<T> tmp;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto item = p + "[" + std::to_string(i) + "]";
      if constexpr (std::is_integral_v<T>) {
        if (!v[i].is_number_integer()) {
          fail(item, "expected an integer");
          continue;
        }
        const auto x = v[i].get<long long>();
        if (x < 0 || x > 1'000'000'000) {
          fail(item, "out of range");
          continue;
        }
        tmp.push_back(static_cast<T>(x));
      } else {
        if (!v[i].is_number()) {
          fail(item, "expected a number");
          continue;
        }
        tmp.push_back(v[i].get<T>());
      }
      if (auto bad = check(tmp.back())) fail(item, *bad);
    }
    if (tmp.size() == v.size()) out = tmp;
  }
};

std::optional<std::string> positive_size(std::size_t n) {
  if (n < 2) return "must be >= 2";
  return std::nullopt;
}

void parse_grid(Reader& r, const json& tree, RunConfig& c) {
  if (!tree.contains("grid")) return;
  const auto& g = tree.at("grid");
  r.only(g, "grid", {"points", "base_scale"});
  if (!g.is_object()) return;
  r.list<std::size_t>(g, "points", "grid", c.grid, false, positive_size);
  r.integer(g, "base_scale", "grid", c.base_scale, 1);
}

void parse_space(Reader& r, const json& tree, RunConfig& c) {
  if (!tree.contains("space")) return;
  const auto& s = tree.at("space");
  r.only(s, "space", {"scale", "s", "p", "q"});
  if (!s.is_object()) return;
  if (s.contains("scale")) {
    if (!s.at("scale").is_string()) {
      r.fail("space.scale", "expected \"B\", \"F\" or \"A\"");
    } else {
      try {
        c.space.scale = parse_scale(s.at("scale").get<std::string>());
      } catch (const Error& e) {
        r.fail("space.scale", e.what());
      }
    }
  }
  r.number(s, "s", "space", c.space.s);
  r.exponent(s, "p", "space", c.space.p);
  r.exponent(s, "q", "space", c.space.q);
}

void parse_sections(Reader& r, const json& tree, RunConfig& c) {
  if (tree.contains("partition")) {
    const auto& p = tree.at("partition");
    r.only(p, "partition", {"levels", "inner", "outer"});
    if (p.is_object()) {
      if (p.contains("levels") && !p.at("levels").is_null()) {
        int levels = 0;
        r.integer(p, "levels", "partition", levels, 0);
        c.partition.levels = levels;
      }
      r.number(p, "inner", "partition", c.partition.inner);
      r.number(p, "outer", "partition", c.partition.outer);
      if (!(0 < c.partition.inner && c.partition.inner < c.partition.outer)) {
        r.fail("partition", "needs 0 < inner < outer");
      }
    }
  }
  if (tree.contains("counterexample")) {
    const auto& x = tree.at("counterexample");
    const std::string path = "counterexample";
    r.only(x, path, {"family", "p", "q", "k", "tolerance", "r", "u"});
    if (x.is_object()) {
      auto& ce = c.counterexample;
      if (x.contains("family")) {
        const auto& f = x.at("family");
        if (!f.is_string() || (f != "uk" && f != "vk" && f != "gk")) {
          r.fail(path + ".family", "expected \"uk\", \"vk\" or \"gk\"");
        } else {
          ce.family = f.get<std::string>();
        }
      }
      r.exponents(x, "p", path, ce.p);
      r.exponents(x, "q", path, ce.q);
      r.exponents(x, "u", path, ce.u);
      r.exponent(x, "r", path, ce.r);
      r.list<int>(x, "k", path, ce.k, true, [](int k) -> std::optional<std::string> {
        if (k < 1) return "must be >= 1";
        return std::nullopt;
      });
      if (ce.k.size() < 5) r.fail(path + ".k", "needs at least 5 values for a slope fit");
      if (std::set<int>(ce.k.begin(), ce.k.end()).size() != ce.k.size()) r.fail(path + ".k", "values must be distinct");
      r.number(x, "tolerance", path, ce.tolerance);
      if (!(ce.tolerance > 0)) r.fail(path + ".tolerance", "must be positive");
    }
  }
  if (tree.contains("embedding")) {
    const auto& x = tree.at("embedding");
    r.only(x, "embedding", {"trials", "delta", "refine", "max_variation"});
    if (x.is_object()) {
      auto& e = c.embedding;
      r.integer(x, "trials", "embedding", e.trials, 1);
      if (x.contains("delta")) {
        const auto& d = x.at("delta");
        if (d.is_string() && d == "source") {
          e.delta.reset();
        } else if (d.is_number()) {
          e.delta = d.get<double>();
        } else {
          r.fail("embedding.delta", "expected a number or \"source\"");
        }
      }
      if (x.contains("refine")) {
        const auto& g = x.at("refine");
        if (!g.is_array()) {
          r.fail("embedding.refine", "expected an array of point lists");
        } else {
          e.refine.clear();
          for (std::size_t i = 0; i < g.size(); ++i) {
            std::vector<std::size_t> pts;
            json holder{{"points", g[i]}};
            r.list<std::size_t>(holder, "points", "embedding.refine[" + std::to_string(i) + "]", pts, false,
                                positive_size);
            e.refine.push_back(pts);
          }
        }
      }
      r.number(x, "max_variation", "embedding", e.max_variation);
    }
  }
  if (tree.contains("npp")) {
    const auto& x = tree.at("npp");
    r.only(x, "npp", {"levels", "trials", "p", "max_spread"});
    if (x.is_object()) {
      r.list<int>(x, "levels", "npp", c.npp.levels, true, [](int) { return std::optional<std::string>{}; });
      r.integer(x, "trials", "npp", c.npp.trials, 1);
      r.exponent(x, "p", "npp", c.npp.p);
      r.number(x, "max_spread", "npp", c.npp.max_spread);
    }
  }
  if (tree.contains("extend")) {
    const auto& x = tree.at("extend");
    r.only(x, "extend", {"eta_lo", "eta_hi", "tolerance"});
    if (x.is_object()) {
      r.number(x, "eta_lo", "extend", c.extend.eta_lo);
      r.number(x, "eta_hi", "extend", c.extend.eta_hi);
      r.number(x, "tolerance", "extend", c.extend.tolerance);
      if (!(0 < c.extend.eta_lo && c.extend.eta_lo < c.extend.eta_hi)) r.fail("extend", "needs 0 < eta_lo < eta_hi");
    }
  }
}

json parse_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

void merge(json& base, const json& overrides) {
  if (!base.is_object() || !overrides.is_object()) {
    base = overrides;
    return;
  }
  for (const auto& [key, value] : overrides.items()) {
    if (base.contains(key) && base[key].is_object() && value.is_object()) {
      merge(base[key], value);
    } else {
      base[key] = value;
    }
  }
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "unknown";
}

std::string merge_config(const std::string& base, const std::string& overrides) {
  json b = base.empty() ? json::object() : parse_text(base, "configuration");
  merge(b, overrides.empty() ? json::object() : parse_text(overrides, "overrides"));
  return b.dump(2);
}

RunConfig RunConfig::parse(const std::string& json_text) {
  const json tree = parse_text(json_text, "configuration");
  RunConfig c;
  Reader r;
  bool command_ok = false;
  r.only(tree, "", {"command", "grid", "anisotropy", "partition", "space", "input", "seed", "output",
                    "counterexample", "embedding", "npp", "extend"});
  if (!tree.is_object()) throw ConfigError(r.issues.front());
  if (!tree.contains("command")) {
    r.fail("command", "missing");
  } else {
    const auto& cmd = tree.at("command");
    const auto it = std::find_if(std::begin(kCommands), std::end(kCommands),
                                 [&](const auto& e) { return cmd.is_string() && cmd == e.second; });
    if (it == std::end(kCommands)) {
      r.fail("command", "expected one of norm, trace, extend, counterexample, embedding-check, npp-check, phi-transform");
    } else {
      c.command = it->first;
      command_ok = true;
    }
  }
  parse_grid(r, tree, c);
  r.list<double>(tree, "anisotropy", "", c.anisotropy, false, [](double w) -> std::optional<std::string> {
    if (!(w >= 1.0) || !std::isfinite(w)) return "weights must be finite and >= 1";
    return std::nullopt;
  });
  parse_space(r, tree, c);
  if (tree.contains("input")) {
    if (!tree.at("input").is_string()) {
      r.fail("input", "expected a path");
    } else {
      c.input = tree.at("input").get<std::string>();
    }
  }
  if (tree.contains("seed")) {
    const auto& s = tree.at("seed");
    if (!s.is_number_unsigned()) {
      r.fail("seed", "expected a non-negative integer");
    } else {
      c.seed = s.get<std::uint64_t>();
    }
  }
  if (tree.contains("output")) {
    if (!tree.at("output").is_string() || tree.at("output").get<std::string>().empty()) {
      r.fail("output", "expected a directory path");
    } else {
      c.output = tree.at("output").get<std::string>();
    }
  }
  parse_sections(r, tree, c);

  const bool needs_input = c.command == Command::Norm || c.command == Command::Trace ||
                           c.command == Command::Extend || c.command == Command::PhiTransform;
  if (command_ok && needs_input && !c.input) r.fail("input", "required by command " + to_string(c.command));
  if (!c.anisotropy.empty() && !needs_input && c.anisotropy.size() != c.grid.size()) {
    r.fail("anisotropy", "has " + std::to_string(c.anisotropy.size()) + " weights for a " +
                             std::to_string(c.grid.size()) + "-dimensional grid");
  }
  if (command_ok && c.command == Command::Counterexample && c.grid.size() < 2) r.fail("grid.points", "counterexamples need n >= 2");

  if (!r.issues.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& i : r.issues) msg += "\n  " + i;
    throw ConfigError(msg);
  }
  return c;
}

// -------------------------------------------------------------------- run

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json exponent_json(const Exponent& e) {
  if (e.is_infinite()) return "inf";
  return e.value();
}

class Artifacts {
 public:
  Artifacts(const std::filesystem::path& dir, RunResult& result) : dir_(dir), result_(result) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  std::filesystem::path path(const std::string& name) {
    auto p = dir_ / name;
    result_.artifacts.push_back(p);
    return p;
  }

  void csv(const std::string& name, const CsvTable& table) {
    std::ofstream out(path(name), std::ios::binary);
    if (!out) throw IoError("cannot write " + name);
    write_csv(out, table);
  }

 private:
  std::filesystem::path dir_;
  RunResult& result_;
};

Anisotropy resolve_anisotropy(const RunConfig& c, std::size_t dim, const Anisotropy* from_file) {
  if (!c.anisotropy.empty()) {
    if (c.anisotropy.size() != dim) throw ConfigError("anisotropy: has the wrong number of weights");
    return Anisotropy(c.anisotropy);
  }
  if (from_file) return *from_file;
  return Anisotropy(std::vector<double>(dim, 1.0));
}

DyadicPartition partition_for(const RunConfig& c, const GridSpec& spec, const Anisotropy& a) {
  return DyadicPartition(spec, a, c.partition.levels, c.partition.inner, c.partition.outer);
}

json slope_json(const SlopeReport& r) {
  return {{"family", r.family},   {"parameters", r.parameters},     {"slope", number(r.slope)},
          {"predicted_slope", r.predicted}, {"residual", number(r.residual)}, {"tolerance", r.tolerance},
          {"checked", r.checked}, {"pass", r.pass}};
}

bool run_norm(const RunConfig& c, json& summary, Artifacts& out, RunResult& result) {
  const auto file = read_function_file(*c.input);
  const auto a = resolve_anisotropy(c, file.function.spec().dim(), &file.anisotropy);
  const auto P = partition_for(c, file.function.spec(), a);
  SpaceParams prm = c.space;
  prm.a = a;
  const double value = quasinorm(file.function, P, prm);
  summary["scale"] = to_string(prm.scale);
  summary["s"] = prm.s;
  summary["p"] = exponent_json(prm.p);
  summary["q"] = exponent_json(prm.q);
  summary["value"] = number(value);
  out.csv("norm.csv", CsvTable{{"scale", "s", "p", "q", "value"},
                               {{to_string(prm.scale), format_double(prm.s), prm.p.to_string(), prm.q.to_string(),
                                 format_double(value)}}});
  result.message = format_double(value);
  return true;
}

bool run_trace(const RunConfig& c, json& summary, Artifacts& out, RunResult& result) {
  const auto file = read_function_file(*c.input);
  const auto a = resolve_anisotropy(c, file.function.spec().dim(), &file.anisotropy);
  const auto P = partition_for(c, file.function.spec(), a);
  const auto tr = trace(file.function, P);
  const auto path = out.path("trace.bsvl");
  write_function_file(path, tr.value, a.tangential());
  CsvTable t{{"level", "partial_sum_tail"}, {}};
  for (std::size_t j = 0; j < tr.partial_sum_tail.size(); ++j) {
    t.rows.push_back({std::to_string(j), format_double(tr.partial_sum_tail[j])});
  }
  out.csv("trace.csv", t);
  summary["levels"] = P.levels();
  summary["sup"] = number(max_abs(tr.value.samples()));
  result.message = "trace written to " + path.string();
  return true;
}

bool run_extend(const RunConfig& c, json& summary, Artifacts& out, RunResult& result) {
  const auto file = read_function_file(*c.input);
  std::vector<std::size_t> pts = c.grid;
  const GridSpec target(pts, c.base_scale);
  const auto a = resolve_anisotropy(c, target.dim(), nullptr);
  if (!(a.tangential() == file.anisotropy)) {
    throw StructuralError("input anisotropy does not match the tangential weights of the target");
  }
  const auto P = partition_for(c, target, a);
  if (!(hyperplane_spec(P) == file.function.spec())) {
    throw StructuralError("input grid does not match the hyperplane of grid.points");
  }
  const EtaProfiles eta(a.normal_weight(), c.extend.eta_lo, c.extend.eta_hi);
  const auto Kv = extend_K(file.function, P, eta);
  const auto path = out.path("extension.bsvl");
  write_function_file(path, Kv, a);
  const double scale = max_abs(file.function.samples());
  const double error = max_abs((restrict_hyperplane(Kv) - file.function).samples());
  const bool pass = error <= c.extend.tolerance * std::max(scale, std::numeric_limits<double>::min());
  summary["trace_error"] = number(error);
  summary["input_sup"] = number(scale);
  summary["tolerance"] = c.extend.tolerance;
  summary["pass"] = pass;
  out.csv("extend.csv", CsvTable{{"trace_error", "input_sup", "pass"},
                                 {{format_double(error), format_double(scale), pass ? "true" : "false"}}});
  result.message = "extension written to " + path.string() + (pass ? "" : " (trace check failed)");
  return pass;
}

bool run_counterexample(const RunConfig& c, json& summary, Artifacts& out, RunResult& result) {
  CounterexampleSetup setup;
  setup.grid = GridSpec(c.grid, c.base_scale);
  setup.a = resolve_anisotropy(c, setup.grid.dim(), nullptr);
  if (c.anisotropy.empty()) {
    std::vector<double> w(setup.grid.dim(), 1.0);
    w.back() = 2.0;
    setup.a = Anisotropy(w);
  }
  const auto& ce = c.counterexample;
  setup.ks = ce.k;
  setup.tolerance = ce.tolerance;
  summary["family"] = ce.family;
  summary["anisotropy"] = std::vector<double>(setup.a.weights().begin(), setup.a.weights().end());
  summary["k"] = ce.k;
  std::vector<SlopeReport> slopes;
  bool pass = true;
  if (ce.family == "uk") {
    const auto r = run_uk(setup, ce.p, ce.q);
    slopes = r.slopes;
    json ratios = json::array();
    for (const auto& t : r.ratios) {
      ratios.push_back({{"parameters", t.parameters},
                        {"slope", number(t.slope)},
                        {"max_over_baseline", number(t.max_over_baseline)},
                        {"bounded_expected", t.bounded_expected},
                        {"pass", t.pass}});
      pass = pass && t.pass;
    }
    summary["trace_ratios"] = ratios;
    out.csv("ratios.csv", ratio_table(r.ratios));
  } else if (ce.family == "vk") {
    const auto r = run_vk(setup, ce.p, ce.q);
    slopes = r.slopes;
    json integrals = json::array();
    for (double t : r.trace_integral) integrals.push_back(number(t));
    summary["trace_integral"] = integrals;
  } else {
    const auto r = run_gk(setup, ce.r, ce.u, ce.p.front(), ce.q.front());
    slopes = r.trace_growth;
    slopes.push_back(r.norm);
    summary["k0"] = r.k0;
    summary["norm_spread"] = number(r.norm_spread);
  }
  json list = json::array();
  for (const auto& s : slopes) {
    list.push_back(slope_json(s));
    pass = pass && s.pass;
  }
  summary["slopes"] = list;
  if (slopes.size() == 1) summary["predicted_slope"] = slopes.front().predicted;
  out.csv("slopes.csv", slope_table(slopes));
  std::size_t failed = 0;
  for (const auto& s : slopes) failed += s.pass ? 0 : 1;
  result.message = ce.family + ": " + std::to_string(slopes.size() - failed) + " of " + std::to_string(slopes.size()) +
                   " slope fits within tolerance";
  return pass;
}

bool run_embedding(const RunConfig& c, json& summary, Artifacts& out, RunResult& result) {
  std::vector<std::vector<std::size_t>> grids{c.grid};
  for (const auto& g : c.embedding.refine) grids.push_back(g);
  const auto a = resolve_anisotropy(c, c.grid.size(), nullptr);
  auto pairs = standard_embedding_pairs(a);
  for (auto& p : pairs) p.delta = c.embedding.delta ? *c.embedding.delta : source_white_delta(p);

  CsvTable table{{"grid", "embedding", "trial", "ratio"}, {}};
  std::vector<std::vector<double>> maxima(pairs.size());
  json per_grid = json::array();
  for (const auto& pts : grids) {
    if (pts.size() != a.dim()) throw ConfigError("embedding.refine: grid dimension differs from the anisotropy");
    const GridSpec spec(pts, c.base_scale);
    const auto P = partition_for(c, spec, a);
    const auto reports = check_embeddings(pairs, P, c.embedding.trials, c.seed);
    std::string label;
    for (std::size_t i = 0; i < pts.size(); ++i) label += (i ? "x" : "") + std::to_string(pts[i]);
    json g = {{"grid", label}, {"levels", P.levels()}, {"embeddings", json::array()}};
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      maxima[i].push_back(r.max);
      g["embeddings"].push_back(
          {{"name", r.name}, {"max", number(r.max)}, {"median", number(r.median)}, {"min", number(r.min)}});
      for (std::size_t t = 0; t < r.ratios.size(); ++t) {
        table.rows.push_back({label, r.name, std::to_string(t), format_double(r.ratios[t])});
      }
    }
    per_grid.push_back(g);
  }
  out.csv("embeddings.csv", table);
  summary["trials"] = c.embedding.trials;
  summary["grids"] = per_grid;
  bool pass = true;
  if (grids.size() >= 2) {
    json variation = json::array();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto [lo, hi] = std::minmax_element(maxima[i].begin(), maxima[i].end());
      const double v = *hi / *lo;
      const bool ok = v < c.embedding.max_variation;
      pass = pass && ok;
      variation.push_back({{"name", pairs[i].name}, {"variation", number(v)}, {"pass", ok}});
    }
    summary["variation"] = variation;
    summary["max_variation"] = c.embedding.max_variation;
  }
  result.message = std::to_string(pairs.size()) + " embeddings on " + std::to_string(grids.size()) + " grid(s)" +
                   (grids.size() >= 2 ? (pass ? ", max ratios stable" : ", max ratios vary beyond the limit") : "");
  return pass;
}

bool run_npp(const RunConfig& c, json& summary, Artifacts& out, RunResult& result) {
  const GridSpec spec(c.grid, c.base_scale);
  const auto a = resolve_anisotropy(c, spec.dim(), nullptr);
  const auto P = partition_for(c, spec, a);
  std::vector<int> levels = c.npp.levels;
  if (levels.empty()) {
    for (int j = 1; j <= P.levels(); ++j) levels.push_back(j);
  }
  if (levels.empty()) throw CapacityError("the grid has no level j >= 1");
  std::vector<NppReport> reports;
  json list = json::array();
  double hi = 0, lo = std::numeric_limits<double>::infinity();
  for (int j : levels) {
    if (j < 0 || j > P.levels()) throw ConfigError("npp.levels: level " + std::to_string(j) + " outside the partition");
    reports.push_back(check_npp(j, c.npp.trials, c.npp.p, P, c.seed));
    const auto& r = reports.back();
    hi = std::max(hi, r.max);
    lo = std::min(lo, r.max);
    list.push_back({{"level", j}, {"max", number(r.max)}, {"min", number(r.min)}});
  }
  out.csv("npp.csv", npp_table(reports));
  const double spread = hi / lo;
  const bool pass = spread <= c.npp.max_spread;
  summary["p"] = exponent_json(c.npp.p);
  summary["levels"] = list;
  summary["spread"] = number(spread);
  summary["max_spread"] = c.npp.max_spread;
  summary["pass"] = pass;
  result.message = "npp constants spread " + format_double(spread) + " over " + std::to_string(levels.size()) +
                   " levels";
  return pass;
}

bool run_phi(const RunConfig& c, json& summary, Artifacts& out, RunResult& result) {
  const auto file = read_function_file(*c.input);
  const auto a = resolve_anisotropy(c, file.function.spec().dim(), &file.anisotropy);
  const auto P = partition_for(c, file.function.spec(), a);
  const auto t = phi_analysis(file.function, P, c.space.s, c.space.p);
  const auto back = phi_synthesis(t.lambda, file.function.spec(), c.space.s, c.space.p);
  const double error = max_abs((back - file.function).samples());
  {
    std::ofstream os(out.path("coefficients.csv"), std::ios::binary);
    if (!os) throw IoError("cannot write coefficients.csv");
    write_coefficients_csv(os, t.lambda, file.function.spec().dim());
  }
  summary["s"] = c.space.s;
  summary["p"] = exponent_json(c.space.p);
  summary["levels"] = t.lambda.size();
  summary["snapping_error"] = number(t.snapping_error);
  summary["reconstruction_error"] = number(error);
  result.message = "coefficients of " + std::to_string(t.lambda.size()) + " levels, reconstruction error " +
                   format_double(error);
  return true;
}

int exit_code_of(const std::exception& e) {
  if (dynamic_cast<const CapacityError*>(&e)) return 3;
  if (dynamic_cast<const Error*>(&e)) return 2;
  return 1;
}

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult result;
  json summary{{"command", to_string(config.command)}, {"seed", config.seed}};
  std::optional<Artifacts> out;
  try {
    out.emplace(config.output, result);
    bool pass = true;
    switch (config.command) {
      case Command::Norm: pass = run_norm(config, summary, *out, result); break;
      case Command::Trace: pass = run_trace(config, summary, *out, result); break;
      case Command::Extend: pass = run_extend(config, summary, *out, result); break;
      case Command::Counterexample: pass = run_counterexample(config, summary, *out, result); break;
      case Command::EmbeddingCheck: pass = run_embedding(config, summary, *out, result); break;
      case Command::NppCheck: pass = run_npp(config, summary, *out, result); break;
      case Command::PhiTransform: pass = run_phi(config, summary, *out, result); break;
    }
    result.exit_code = pass ? 0 : 1;
    summary["status"] = pass ? "pass" : "fail";
  } catch (const std::exception& e) {
    result.exit_code = exit_code_of(e);
    result.message = e.what();
    summary["status"] = "error";
    summary["error"] = e.what();
  }
  summary["exit_code"] = result.exit_code;
  if (out) {
    std::ofstream os(out->path("summary.json"), std::ios::binary);
    os << summary.dump(2) << '\n';
  }
  return result;
}

RunResult run_json(const std::string& json_text) {
  RunConfig config;
  try {
    config = RunConfig::parse(json_text);
  } catch (const Error& e) {
    RunResult r;
    r.exit_code = 2;
    r.message = e.what();
    return r;
  }
  return run(config);
}

}  // namespace besov
