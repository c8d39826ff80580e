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

#include <string>
#include <string_view>

namespace besov {

/// An integrability or summability exponent in ]0, ∞].
///
/// Infinity is a dedicated state rather than a floating-point infinity, so
/// exponent arithmetic (1/p, q/p, ...) never sees inf or nan.
class Exponent {
 public:
  /// Finite exponent; throws DomainError unless 0 < value < inf.
  explicit Exponent(double value);

  static Exponent infinity() { return Exponent{}; }

  /// Parses "inf", "infinity", a decimal, or a fraction such as "2/3".
  static Exponent parse(std::string_view text);

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  /// The finite value; throws DomainError for infinity.
  double value() const;

  /// 1/p, with 1/∞ = 0.
  double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

  std::string to_string() const;

  friend bool operator==(const Exponent& lhs, const Exponent& rhs) {
    return lhs.infinite_ == rhs.infinite_ && (lhs.infinite_ || lhs.value_ == rhs.value_);
  }
  friend bool operator<(const Exponent& lhs, const Exponent& rhs) {
    if (lhs.infinite_) return false;
    return rhs.infinite_ || lhs.value_ < rhs.value_;
  }
  friend bool operator<=(const Exponent& lhs, const Exponent& rhs) { return !(rhs < lhs); }

 private:
  Exponent() = default;
  double value_ = 0.0;
  bool infinite_ = true;
};

inline Exponent min(const Exponent& lhs, const Exponent& rhs) { return rhs < lhs ? rhs : lhs; }
inline Exponent max(const Exponent& lhs, const Exponent& rhs) { return lhs < rhs ? rhs : lhs; }

}  // namespace besov
