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

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace weylkit {

/// Thrown when an enumeration would exceed a configured cap. The message
/// names the offending count so callers can report it.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when input data violates a structural contract (bad table,
/// mismatched groups, failed homomorphism verification, ...).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  if (a != 0 && (b > std::numeric_limits<std::int64_t>::max() / a)) {
    throw std::overflow_error("integer product overflow");
  }
  return a * b;
}

inline std::int64_t ipow(std::int64_t base, std::int64_t exp) {
  std::int64_t out = 1;
  for (std::int64_t i = 0; i < exp; ++i) out = checked_mul(out, base);
  return out;
}

/// Canonical residue in [0, m).
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t egcd(std::int64_t a, std::int64_t b, std::int64_t& x,
                         std::int64_t& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  std::int64_t x1 = 0, y1 = 0;
  std::int64_t g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

inline std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  std::int64_t x = 0, y = 0;
  std::int64_t g = egcd(mod_floor(a, m), m, x, y);
  if (g != 1) throw std::invalid_argument("mod_inverse: not invertible");
  return mod_floor(x, m);
}

/// Prime factorization as (prime, exponent) pairs, primes ascending.
inline std::vector<std::pair<std::int64_t, std::int64_t>> factorize(
    std::int64_t n) {
  if (n < 1) throw std::invalid_argument("factorize: n must be positive");
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      std::int64_t e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

/// FNV-1a over a word vector; used for subgroup / table fingerprints.
struct VecHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t w : v) {
      for (int i = 0; i < 8; ++i) {
        h ^= (w >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace weylkit
