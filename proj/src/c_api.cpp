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

#include "besovlab/besovlab.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "besovlab/errors.hpp"
#include "besovlab/partition.hpp"
#include "besovlab/quasinorms.hpp"
#include "besovlab/runner.hpp"
#include "besovlab/torus_grid.hpp"
#include "besovlab/trace_extension.hpp"

struct bl_function {
  besov::GridFunction f;
  besov::Anisotropy a;
};

struct bl_run_result {
  besov::RunResult result;
  std::vector<std::string> artifacts;
};

namespace {

thread_local std::string last_error;

template <class F>
bl_status guard(F&& body) {
  try {
    last_error.clear();
    body();
    return BL_OK;
  } catch (const besov::DomainError& e) {
    last_error = e.what();
    return BL_ERROR_DOMAIN;
  } catch (const besov::CapacityError& e) {
    last_error = e.what();
    return BL_ERROR_CAPACITY;
  } catch (const besov::StructuralError& e) {
    last_error = e.what();
    return BL_ERROR_STRUCTURAL;
  } catch (const besov::ConfigError& e) {
    last_error = e.what();
    return BL_ERROR_CONFIG;
  } catch (const besov::IoError& e) {
    last_error = e.what();
    return BL_ERROR_IO;
  } catch (const std::invalid_argument& e) {
    last_error = e.what();
    return BL_ERROR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BL_ERROR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return BL_ERROR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

besov::Exponent exponent(double v) {
  return std::isinf(v) && v > 0 ? besov::Exponent::infinity() : besov::Exponent(v);
}

}  // namespace

extern "C" {

const char* bl_version(void) { return "0.1.0"; }

const char* bl_last_error(void) { return last_error.c_str(); }

bl_status bl_function_create(size_t dim, const size_t* points, int base_scale, const double* weights,
                             const double* re, const double* im, bl_function** out) {
  return guard([&] {
    require(out && points && re && dim > 0, "null argument");
    *out = nullptr;
    besov::GridSpec spec(std::vector<std::size_t>(points, points + dim), base_scale);
    std::vector<double> w = weights ? std::vector<double>(weights, weights + dim) : std::vector<double>(dim, 1.0);
    auto* h = new bl_function{besov::GridFunction(spec), besov::Anisotropy(w)};
    for (std::size_t i = 0; i < spec.size(); ++i) h->f[i] = besov::Complex(re[i], im ? im[i] : 0.0);
    *out = h;
  });
}

bl_status bl_function_read(const char* path, bl_function** out) {
  return guard([&] {
    require(out && path, "null argument");
    *out = nullptr;
    auto file = besov::read_function_file(path);
    *out = new bl_function{std::move(file.function), std::move(file.anisotropy)};
  });
}

bl_status bl_function_write(const bl_function* f, const char* path) {
  return guard([&] {
    require(f && path, "null argument");
    besov::write_function_file(path, f->f, f->a);
  });
}

void bl_function_destroy(bl_function* f) { delete f; }

size_t bl_function_dim(const bl_function* f) { return f ? f->f.spec().dim() : 0; }

size_t bl_function_size(const bl_function* f) { return f ? f->f.spec().size() : 0; }

bl_status bl_function_points(const bl_function* f, size_t* points, size_t capacity) {
  return guard([&] {
    require(f && points, "null argument");
    const auto p = f->f.spec().points_per_axis();
    for (std::size_t i = 0; i < std::min(capacity, p.size()); ++i) points[i] = p[i];
  });
}

bl_status bl_function_samples(const bl_function* f, double* re, double* im, size_t count) {
  return guard([&] {
    require(f && re, "null argument");
    require(count == f->f.spec().size(), "sample count does not match the grid");
    for (std::size_t i = 0; i < count; ++i) {
      re[i] = f->f[i].real();
      if (im) im[i] = f->f[i].imag();
    }
  });
}

bl_status bl_quasinorm(const bl_function* f, const char* scale, double s, double p, double q, int levels,
                       double* out) {
  return guard([&] {
    require(f && scale && out, "null argument");
    const std::optional<int> J = levels < 0 ? std::nullopt : std::optional<int>(levels);
    const besov::DyadicPartition P(f->f.spec(), f->a, J);
    const besov::SpaceParams prm{besov::parse_scale(scale), s, exponent(p), exponent(q), f->a};
    *out = besov::quasinorm(f->f, P, prm);
  });
}

bl_status bl_trace(const bl_function* f, bl_function** out) {
  return guard([&] {
    require(f && out, "null argument");
    *out = nullptr;
    const besov::DyadicPartition P(f->f.spec(), f->a);
    auto t = besov::trace(f->f, P);
    *out = new bl_function{std::move(t.value), f->a.tangential()};
  });
}

bl_status bl_config_merge(const char* base, const char* overrides, char** merged) {
  return guard([&] {
    require(merged, "null argument");
    *merged = nullptr;
    const auto text = besov::merge_config(base ? base : "", overrides ? overrides : "");
    auto* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *merged = buf;
  });
}

void bl_string_free(char* s) { std::free(s); }

bl_status bl_run_config(const char* json_text, bl_run_result** out) {
  return guard([&] {
    require(json_text && out, "null argument");
    *out = nullptr;
    auto* r = new bl_run_result{besov::run_json(json_text), {}};
    for (const auto& p : r->result.artifacts) r->artifacts.push_back(p.string());
    *out = r;
  });
}

int bl_run_result_exit_code(const bl_run_result* r) { return r ? r->result.exit_code : 2; }

const char* bl_run_result_message(const bl_run_result* r) { return r ? r->result.message.c_str() : ""; }

size_t bl_run_result_artifact_count(const bl_run_result* r) { return r ? r->artifacts.size() : 0; }

const char* bl_run_result_artifact(const bl_run_result* r, size_t index) {
  return r && index < r->artifacts.size() ? r->artifacts[index].c_str() : nullptr;
}

void bl_run_result_destroy(bl_run_result* r) { delete r; }

}  // extern "C"
