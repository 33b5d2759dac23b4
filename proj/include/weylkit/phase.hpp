// Copyright 2026 The weylkit Authors
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

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>

#include "weylkit/util.hpp"

namespace weylkit {

/// An exact root of unity exp(2*pi*i * num/den), stored in lowest terms with
/// 0 <= num < den. Products add the exponents exactly, so phase bookkeeping
/// (Weyl products, channel compositions, half-integer spectral exponents)
/// never accumulates rounding error.
class PhaseExponent {
 public:
  PhaseExponent() = default;

  PhaseExponent(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    normalize();
  }

  /// exp(2*pi*i * k / n).
  static PhaseExponent root(std::int64_t k, std::int64_t n) {
    return PhaseExponent(k, n);
  }

  static PhaseExponent one() { return PhaseExponent(0, 1); }

  [[nodiscard]] std::int64_t numerator() const { return num_; }
  [[nodiscard]] std::int64_t denominator() const { return den_; }

  [[nodiscard]] std::complex<double> value() const {
    if (num_ == 0) return {1.0, 0.0};
    double theta = 2.0 * std::numbers::pi * static_cast<double>(num_) /
                   static_cast<double>(den_);
    return {std::cos(theta), std::sin(theta)};
  }

  [[nodiscard]] PhaseExponent conj() const {
    return PhaseExponent(-num_, den_);
  }

  [[nodiscard]] PhaseExponent pow(std::int64_t k) const {
    // num_*k can overflow only for astronomically large k; den_ is small.
    return PhaseExponent(mod_floor(k, den_) * num_, den_);
  }

  friend PhaseExponent operator*(const PhaseExponent& a,
                                 const PhaseExponent& b) {
    std::int64_t l = std::lcm(a.den_, b.den_);
    return PhaseExponent(a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l);
  }

  friend bool operator==(const PhaseExponent& a, const PhaseExponent& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  void normalize() {
    if (den_ <= 0) throw std::invalid_argument("PhaseExponent: den <= 0");
    num_ = mod_floor(num_, den_);
    std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace weylkit
