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

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "besovlab/errors.hpp"

namespace besov::detail {

namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const { fftw_destroy_plan(plan); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct PlanCache {
  std::mutex mutex;
  std::map<std::pair<std::vector<std::size_t>, int>, PlanHandle> plans;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

fftw_plan plan_for(std::span<const std::size_t> dims, int sign) {
  auto& c = cache();
  std::lock_guard lock(c.mutex);
  auto key = std::make_pair(std::vector<std::size_t>(dims.begin(), dims.end()), sign);
  if (auto it = c.plans.find(key); it != c.plans.end()) return it->second.get();
  std::size_t total = 1;
  std::vector<int> n;
  for (auto d : dims) {
    total *= d;
    n.push_back(static_cast<int>(d));
  }
  // FFTW_ESTIMATE never touches the buffer and picks the same algorithm on every run.
  auto* scratch = fftw_alloc_complex(total);
  fftw_plan plan = fftw_plan_dft(static_cast<int>(n.size()), n.data(), scratch, scratch,
                                 sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  if (plan == nullptr) throw Error("FFTW planning failed");
  c.plans.emplace(std::move(key), PlanHandle(plan));
  return plan;
}

}  // namespace

void fft_inplace(std::span<std::complex<double>> data, std::span<const std::size_t> dims, int sign) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  if (total != data.size()) throw StructuralError("FFT buffer size does not match shape");
  fftw_plan plan = plan_for(dims, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace besov::detail
