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

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "weylkit/util.hpp"

namespace weylkit {

using Element = std::vector<std::int64_t>;

/// A finite product of cyclic groups Z_{moduli[0]} + ... + Z_{moduli[r-1]}.
/// All arithmetic is componentwise modular. Elements pack into a single
/// mixed-radix key (slot 0 outermost), so packed order equals lexicographic
/// order on residue tuples.
class CyclicProduct {
 public:
  CyclicProduct() = default;

  explicit CyclicProduct(std::vector<std::int64_t> moduli)
      : moduli_(std::move(moduli)) {
    if (moduli_.empty())
      throw std::invalid_argument("CyclicProduct: empty modulus list");
    order_ = 1;
    for (std::int64_t m : moduli_) {
      if (m < 1) throw std::invalid_argument("CyclicProduct: modulus < 1");
      order_ = checked_mul(order_, m);
    }
    strides_.assign(moduli_.size(), 1);
    for (int i = static_cast<int>(moduli_.size()) - 2; i >= 0; --i) {
      strides_[i] = strides_[i + 1] * static_cast<std::uint64_t>(moduli_[i + 1]);
    }
  }

  [[nodiscard]] std::size_t rank() const { return moduli_.size(); }
  [[nodiscard]] const std::vector<std::int64_t>& moduli() const {
    return moduli_;
  }
  [[nodiscard]] std::int64_t order() const { return order_; }

  [[nodiscard]] Element zero() const { return Element(moduli_.size(), 0); }

  [[nodiscard]] Element reduce(Element a) const {
    check_rank(a);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = mod_floor(a[i], moduli_[i]);
    return a;
  }

  [[nodiscard]] Element add(const Element& a, const Element& b) const {
    check_rank(a);
    check_rank(b);
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      c[i] = mod_floor(a[i] + b[i], moduli_[i]);
    return c;
  }

  [[nodiscard]] Element neg(const Element& a) const {
    check_rank(a);
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = mod_floor(-a[i], moduli_[i]);
    return c;
  }

  [[nodiscard]] Element sub(const Element& a, const Element& b) const {
    return add(a, neg(b));
  }

  [[nodiscard]] Element scale(const Element& a, std::int64_t k) const {
    check_rank(a);
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      c[i] = mod_floor(mod_floor(k, moduli_[i]) * a[i], moduli_[i]);
    }
    return c;
  }

  /// Least t >= 1 with t*a = 0; the lcm of the per-slot orders.
  [[nodiscard]] std::int64_t element_order(const Element& a) const {
    check_rank(a);
    std::int64_t t = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::int64_t r = mod_floor(a[i], moduli_[i]);
      std::int64_t o = moduli_[i] / std::gcd(moduli_[i], r == 0 ? moduli_[i] : r);
      t = std::lcm(t, o);
    }
    return t;
  }

  [[nodiscard]] std::uint64_t pack(const Element& a) const {
    check_rank(a);
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      key += static_cast<std::uint64_t>(a[i]) * strides_[i];
    return key;
  }

  [[nodiscard]] Element unpack(std::uint64_t key) const {
    Element a(moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      a[i] = static_cast<std::int64_t>(key / strides_[i]);
      key %= strides_[i];
    }
    return a;
  }

  friend bool operator==(const CyclicProduct& a, const CyclicProduct& b) {
    return a.moduli_ == b.moduli_;
  }

 private:
  void check_rank(const Element& a) const {
    if (a.size() != moduli_.size())
      throw std::invalid_argument("element rank does not match group");
  }

  std::vector<std::int64_t> moduli_;
  std::vector<std::uint64_t> strides_;
  std::int64_t order_ = 1;
};

/// Particle dimensions d_1..d_N of a multipartite system. The Weyl label
/// group is G = (Z_{d_1} + Z_{d_1}) + ... + (Z_{d_N} + Z_{d_N}), laid out
/// interleaved: slot 2a holds m_a and slot 2a+1 holds n_a.
class GroupSpec {
 public:
  explicit GroupSpec(std::vector<std::int64_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("GroupSpec: no particles");
    std::vector<std::int64_t> pair;
    pair.reserve(2 * dims_.size());
    total_ = 1;
    for (std::int64_t d : dims_) {
      if (d < 2) throw std::invalid_argument("GroupSpec: dimension < 2");
      total_ = checked_mul(total_, d);
      pair.push_back(d);
      pair.push_back(d);
    }
    group_ = CyclicProduct(std::move(pair));
  }

  [[nodiscard]] const std::vector<std::int64_t>& dims() const { return dims_; }
  [[nodiscard]] std::size_t particles() const { return dims_.size(); }
  [[nodiscard]] std::int64_t total_dim() const { return total_; }
  [[nodiscard]] std::int64_t group_order() const { return group_.order(); }
  [[nodiscard]] const CyclicProduct& index_group() const { return group_; }

  [[nodiscard]] std::int64_t lcm_dim() const {
    std::int64_t l = 1;
    for (std::int64_t d : dims_) l = std::lcm(l, d);
    return l;
  }

  /// Interleave the per-particle halves (m, n) into a group element.
  [[nodiscard]] Element element(const std::vector<std::int64_t>& m,
                                const std::vector<std::int64_t>& n) const {
    if (m.size() != dims_.size() || n.size() != dims_.size())
      throw std::invalid_argument("GroupSpec: wrong half length");
    Element g(2 * dims_.size());
    for (std::size_t a = 0; a < dims_.size(); ++a) {
      g[2 * a] = mod_floor(m[a], dims_[a]);
      g[2 * a + 1] = mod_floor(n[a], dims_[a]);
    }
    return g;
  }

  [[nodiscard]] std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>
  split(const Element& g) const {
    if (g.size() != 2 * dims_.size())
      throw std::invalid_argument("GroupSpec: wrong element rank");
    std::vector<std::int64_t> m(dims_.size()), n(dims_.size());
    for (std::size_t a = 0; a < dims_.size(); ++a) {
      m[a] = g[2 * a];
      n[a] = g[2 * a + 1];
    }
    return {m, n};
  }

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<std::int64_t> dims_;
  CyclicProduct group_;
  std::int64_t total_ = 1;
};

/// One per-prime block of the index group: Z_{p^{M_1}} + ... + Z_{p^{M_r}}
/// with exponents non-increasing. source_slot[i] records which slot of the
/// interleaved index group component slot i collects.
struct PrimaryComponent {
  std::int64_t prime = 0;
  std::vector<std::int64_t> exponents;
  CyclicProduct group;
  std::vector<std::size_t> source_slot;

  [[nodiscard]] std::size_t rank() const { return exponents.size(); }
  [[nodiscard]] std::int64_t order() const { return group.order(); }
  [[nodiscard]] std::int64_t max_exponent() const {
    return exponents.empty() ? 0 : exponents.front();
  }
  /// Order of the cyclic codomain Z_{p^{M_1}} used for channel phases.
  [[nodiscard]] std::int64_t codomain_order() const {
    return ipow(prime, max_exponent());
  }
};

/// Primary decomposition of a GroupSpec's index group, with the CRT
/// coordinate maps materialized in both directions.
class Decomposition {
 public:
  explicit Decomposition(GroupSpec spec) : spec_(std::move(spec)) {
    const auto& moduli = spec_.index_group().moduli();

    // Gather, per prime, the slots it divides with their exponents.
    struct SlotPower {
      std::size_t slot;
      std::int64_t exponent;
    };
    std::vector<std::pair<std::int64_t, std::vector<SlotPower>>> primes;
    for (std::size_t j = 0; j < moduli.size(); ++j) {
      for (auto [p, e] : factorize(moduli[j])) {
        auto it = std::find_if(primes.begin(), primes.end(),
                               [p](const auto& q) { return q.first == p; });
        if (it == primes.end()) {
          primes.push_back({p, {}});
          it = primes.end() - 1;
        }
        it->second.push_back({j, e});
      }
    }
    std::sort(primes.begin(), primes.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    crt_.assign(moduli.size(), {});
    for (auto& [p, slots] : primes) {
      // Non-increasing exponent order; stable on the original slot index.
      std::stable_sort(slots.begin(), slots.end(),
                       [](const SlotPower& a, const SlotPower& b) {
                         return a.exponent > b.exponent;
                       });
      PrimaryComponent comp;
      comp.prime = p;
      std::vector<std::int64_t> comp_moduli;
      for (const SlotPower& sp : slots) {
        comp.exponents.push_back(sp.exponent);
        comp.source_slot.push_back(sp.slot);
        comp_moduli.push_back(ipow(p, sp.exponent));
      }
      comp.group = CyclicProduct(std::move(comp_moduli));
      comps_.push_back(std::move(comp));
    }

    // CRT reconstruction coefficients, one per (slot, component) incidence.
    for (std::size_t c = 0; c < comps_.size(); ++c) {
      const PrimaryComponent& comp = comps_[c];
      for (std::size_t i = 0; i < comp.rank(); ++i) {
        std::size_t j = comp.source_slot[i];
        std::int64_t q = comp.group.moduli()[i];
        std::int64_t d = moduli[j];
        std::int64_t qhat = d / q;
        std::int64_t coeff =
            q == d ? 1 : mod_floor(checked_mul(qhat, mod_inverse(qhat, q)), d);
        crt_[j].push_back({c, i, coeff});
      }
    }
  }

  [[nodiscard]] const GroupSpec& spec() const { return spec_; }
  [[nodiscard]] const std::vector<PrimaryComponent>& components() const {
    return comps_;
  }

  /// Coordinates of g in component c (residues mod p^{M_i}).
  [[nodiscard]] Element project(std::size_t c, const Element& g) const {
    const PrimaryComponent& comp = comps_.at(c);
    Element out(comp.rank());
    for (std::size_t i = 0; i < comp.rank(); ++i)
      out[i] = mod_floor(g.at(comp.source_slot[i]), comp.group.moduli()[i]);
    return out;
  }

  /// CRT inverse: recombine one element per component into a group element.
  [[nodiscard]] Element lift(const std::vector<Element>& parts) const {
    if (parts.size() != comps_.size())
      throw std::invalid_argument("lift: one element per component required");
    const auto& moduli = spec_.index_group().moduli();
    Element g(moduli.size(), 0);
    for (std::size_t j = 0; j < moduli.size(); ++j) {
      std::int64_t acc = 0;
      for (const CrtTerm& t : crt_[j]) {
        std::int64_t r = parts[t.comp].at(t.comp_slot);
        acc = mod_floor(acc + mod_floor(checked_mul(t.coeff, r), moduli[j]),
                        moduli[j]);
      }
      g[j] = acc;
    }
    return g;
  }

  /// Embed a single component element, zero on all other primes.
  [[nodiscard]] Element lift_single(std::size_t c, const Element& part) const {
    std::vector<Element> parts;
    parts.reserve(comps_.size());
    for (std::size_t k = 0; k < comps_.size(); ++k)
      parts.push_back(k == c ? part : comps_[k].group.zero());
    return lift(parts);
  }

  /// lcm over components of the per-prime codomain orders; equals lcm(dims).
  [[nodiscard]] std::int64_t phase_modulus() const {
    std::int64_t l = 1;
    for (const auto& c : comps_) l = std::lcm(l, c.codomain_order());
    return l;
  }

 private:
  struct CrtTerm {
    std::size_t comp;
    std::size_t comp_slot;
    std::int64_t coeff;
  };

  GroupSpec spec_;
  std::vector<PrimaryComponent> comps_;
  std::vector<std::vector<CrtTerm>> crt_;
};

inline Decomposition decompose(const GroupSpec& spec) {
  return Decomposition(spec);
}

/// An integer partition: non-negative parts in non-increasing order.
/// Used both for group types (M-bar) and subgroup types (L-bar).
class Partition {
 public:
  Partition() = default;

  explicit Partition(std::vector<std::int64_t> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] < 0) throw std::invalid_argument("Partition: negative part");
      if (i > 0 && parts_[i] > parts_[i - 1])
        throw std::invalid_argument("Partition: parts must be non-increasing");
    }
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  }

  [[nodiscard]] const std::vector<std::int64_t>& parts() const { return parts_; }
  [[nodiscard]] std::size_t length() const { return parts_.size(); }
  [[nodiscard]] std::int64_t sum() const {
    return std::accumulate(parts_.begin(), parts_.end(), std::int64_t{0});
  }
  [[nodiscard]] std::int64_t part(std::size_t i) const {
    return i < parts_.size() ? parts_[i] : 0;
  }

  /// Ferrers-diagram transpose; an involution.
  [[nodiscard]] Partition conjugate() const {
    if (parts_.empty()) return Partition{};
    std::vector<std::int64_t> conj(static_cast<std::size_t>(parts_[0]), 0);
    for (std::int64_t part : parts_) {
      for (std::int64_t j = 0; j < part; ++j) ++conj[static_cast<std::size_t>(j)];
    }
    return Partition(std::move(conj));
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.parts_ == b.parts_;
  }

 private:
  std::vector<std::int64_t> parts_;
};

inline Partition conjugate_partition(const Partition& p) {
  return p.conjugate();
}

/// Necessary and sufficient conditions for L-bar to be the type of a
/// subgroup of a group of type M-bar: L_a <= M_a slotwise and
/// non-increasing (built into Partition), with no parts past M's length.
inline bool valid_subgroup_type(const Partition& sub, const Partition& group) {
  if (sub.length() > group.length()) return false;
  for (std::size_t i = 0; i < sub.length(); ++i) {
    if (sub.part(i) > group.part(i)) return false;
  }
  return true;
}

}  // namespace weylkit
