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

#include <numeric>
#include <vector>

#include "weylkit/groups.hpp"
#include "weylkit/linalg.hpp"
#include "weylkit/phase.hpp"

namespace weylkit {

inline constexpr std::int64_t kDenseDimCap = 256;

/// Label (m, n) of a multi-particle Weyl operator, one residue pair per
/// particle.
struct WeylIndex {
  std::vector<std::int64_t> m;
  std::vector<std::int64_t> n;

  static WeylIndex from_element(const GroupSpec& spec, const Element& g) {
    auto [m, n] = spec.split(g);
    return {std::move(m), std::move(n)};
  }

  [[nodiscard]] Element to_element(const GroupSpec& spec) const {
    return spec.element(m, n);
  }
};

/// Dense matrix of U(m, n) = tensor over particles of
/// sum_k w^{m k} |k><k+n|, w = exp(2*pi*i / d).
inline DenseMatrix weyl_matrix(const GroupSpec& spec, const WeylIndex& idx) {
  if (spec.total_dim() > kDenseDimCap)
    throw CapExceeded("weyl_matrix: total dimension " +
                      std::to_string(spec.total_dim()) + " exceeds cap " +
                      std::to_string(kDenseDimCap));
  if (idx.m.size() != spec.particles() || idx.n.size() != spec.particles())
    throw std::invalid_argument("weyl_matrix: wrong label length");

  DenseMatrix out = DenseMatrix::Identity(1, 1);
  for (std::size_t a = 0; a < spec.particles(); ++a) {
    std::int64_t d = spec.dims()[a];
    std::int64_t m = mod_floor(idx.m[a], d);
    std::int64_t n = mod_floor(idx.n[a], d);
    DenseMatrix u = DenseMatrix::Zero(d, d);
    for (std::int64_t k = 0; k < d; ++k) {
      u(k, mod_floor(k + n, d)) = PhaseExponent::root(m * k, d).value();
    }
    out = kron(out, u);
  }
  return out;
}

/// Product rule U(m,n) U(m',n') = prod_a w_a^{m'_a n_a} U(m+m', n+n').
inline std::pair<PhaseExponent, WeylIndex> weyl_product(const GroupSpec& spec,
                                                        const WeylIndex& a,
                                                        const WeylIndex& b) {
  if (a.m.size() != spec.particles() || b.m.size() != spec.particles())
    throw std::invalid_argument("weyl_product: label does not match spec");
  PhaseExponent phase = PhaseExponent::one();
  WeylIndex sum;
  sum.m.resize(spec.particles());
  sum.n.resize(spec.particles());
  for (std::size_t i = 0; i < spec.particles(); ++i) {
    std::int64_t d = spec.dims()[i];
    phase = phase * PhaseExponent::root(mod_floor(b.m[i], d) * mod_floor(a.n[i], d), d);
    sum.m[i] = mod_floor(a.m[i] + b.m[i], d);
    sum.n[i] = mod_floor(a.n[i] + b.n[i], d);
  }
  return {phase, sum};
}

/// Phase in U(m,n)^dagger = phase * U(-m,-n).
inline PhaseExponent hermitian_conjugate_phase(const GroupSpec& spec,
                                               const WeylIndex& idx) {
  PhaseExponent phase = PhaseExponent::one();
  for (std::size_t i = 0; i < spec.particles(); ++i) {
    std::int64_t d = spec.dims()[i];
    phase = phase *
            PhaseExponent::root(mod_floor(idx.m[i], d) * mod_floor(idx.n[i], d), d);
  }
  return phase;
}

/// Closed-form spectrum of a single-particle U(m, n): the d phases
/// w^{gcd(m,n) k + (l'-1) m n / 2}, l' = d / gcd(d, n). The half-integer
/// term forces denominator 2d. gcd conventions: gcd(x, 0) is taken as
/// gcd(d, x) and gcd(0, 0) as d, which the numerical spectrum confirms.
inline std::vector<PhaseExponent> weyl_spectrum(std::int64_t m, std::int64_t n,
                                                std::int64_t d) {
  if (d < 2) throw std::invalid_argument("weyl_spectrum: d < 2");
  m = mod_floor(m, d);
  n = mod_floor(n, d);
  std::int64_t g;
  if (m == 0 && n == 0) {
    g = d;
  } else if (n == 0) {
    g = std::gcd(d, m);
  } else if (m == 0) {
    g = std::gcd(d, n);
  } else {
    g = std::gcd(m, n);
  }
  std::int64_t lp = d / std::gcd(d, n == 0 ? d : n);
  std::vector<PhaseExponent> out;
  out.reserve(static_cast<std::size_t>(d));
  for (std::int64_t k = 0; k < d; ++k) {
    // Exponent (g k + (l'-1) m n / 2) / d, kept exact over denominator 2d.
    out.push_back(PhaseExponent::root(2 * g * k + (lp - 1) * m * n, 2 * d));
  }
  return out;
}

/// Spectrum of a multi-particle U: all products of per-particle eigenvalues.
inline std::vector<PhaseExponent> weyl_spectrum(const GroupSpec& spec,
                                                const WeylIndex& idx) {
  std::vector<PhaseExponent> out{PhaseExponent::one()};
  for (std::size_t a = 0; a < spec.particles(); ++a) {
    auto part = weyl_spectrum(idx.m[a], idx.n[a], spec.dims()[a]);
    std::vector<PhaseExponent> next;
    next.reserve(out.size() * part.size());
    for (const PhaseExponent& x : out)
      for (const PhaseExponent& y : part) next.push_back(x * y);
    out = std::move(next);
  }
  return out;
}

/// Eigenvalue mu(r, s) = prod_a w_a^{m_a r_a - n_a s_a} of U x U*.
inline PhaseExponent mu_phase(const GroupSpec& spec, const WeylIndex& idx,
                              const std::vector<std::int64_t>& r,
                              const std::vector<std::int64_t>& s) {
  if (r.size() != spec.particles() || s.size() != spec.particles())
    throw std::invalid_argument("mu_phase: label does not match spec");
  PhaseExponent phase = PhaseExponent::one();
  for (std::size_t a = 0; a < spec.particles(); ++a) {
    std::int64_t d = spec.dims()[a];
    phase = phase * PhaseExponent::root(idx.m[a] * r[a] - idx.n[a] * s[a], d);
  }
  return phase;
}

}  // namespace weylkit
