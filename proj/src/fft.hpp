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

#include <complex>
#include <cstddef>
#include <span>

namespace besov::detail {

/// Unnormalized in-place multidimensional DFT, row-major, last axis fastest.
/// sign = -1 computes sum f e^{-i...}, sign = +1 the conjugate transform.
/// Plans are cached per (shape, sign); safe to call from several threads.
void fft_inplace(std::span<std::complex<double>> data, std::span<const std::size_t> dims, int sign);

}  // namespace besov::detail
