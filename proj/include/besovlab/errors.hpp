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

#include <stdexcept>
#include <string>

namespace besov {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (t <= 0, p <= 0, n = 1 for a trace, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The request does not fit the discretization (dyadic level too large, spectrum beyond 2^J, ...).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Shapes or specs of the operands do not match.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; the message lists every offending key path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written, or its content is malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace besov
