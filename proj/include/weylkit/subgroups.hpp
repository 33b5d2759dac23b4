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
#include <deque>
#include <functional>
#include <unordered_set>
#include <vector>

#include "weylkit/groups.hpp"
#include "weylkit/util.hpp"

namespace weylkit {

struct EnumerationCaps {
  std::int64_t max_group = std::int64_t{1} << 16;
  std::int64_t max_automorphisms = 10'000'000;
};

// ---------------------------------------------------------------------------
// Subgroups
// ---------------------------------------------------------------------------

/// A subgroup of a finite product of cyclic groups. `members` is the full
/// sorted packed element list and doubles as the canonical fingerprint.
/// `basis` is a direct-sum generating set (empty for the trivial subgroup):
/// every member is uniquely a combination of basis vectors with coefficients
/// below the matching `basis_orders` entry.
struct Subgroup {
  CyclicProduct group;
  std::vector<Element> basis;
  std::vector<std::int64_t> basis_orders;
  std::vector<std::uint64_t> members;

  [[nodiscard]] std::int64_t order() const {
    return static_cast<std::int64_t>(members.size());
  }

  [[nodiscard]] bool contains_key(std::uint64_t key) const {
    return std::binary_search(members.begin(), members.end(), key);
  }

  [[nodiscard]] bool contains(const Element& g) const {
    return contains_key(group.pack(g));
  }

  /// Position of a member key in the sorted member list.
  [[nodiscard]] std::size_t member_index(std::uint64_t key) const {
    auto it = std::lower_bound(members.begin(), members.end(), key);
    if (it == members.end() || *it != key)
      throw std::invalid_argument("member_index: not a member");
    return static_cast<std::size_t>(it - members.begin());
  }
};

namespace detail {

/// Enumerate the span of a direct-sum basis, calling f(element, digits)
/// once per member. Digits walk odometer-style with the last basis vector
/// innermost; elements are built by incremental addition.
template <typename F>
void walk_span(const CyclicProduct& g, const std::vector<Element>& basis,
               const std::vector<std::int64_t>& orders, F&& f) {
  std::vector<std::int64_t> digits(basis.size(), 0);
  std::function<void(std::size_t, const Element&)> rec =
      [&](std::size_t i, const Element& base) {
        if (i == basis.size()) {
          f(base, digits);
          return;
        }
        Element el = base;
        for (std::int64_t c = 0; c < orders[i]; ++c) {
          digits[i] = c;
          rec(i + 1, el);
          if (c + 1 < orders[i]) el = g.add(el, basis[i]);
        }
        digits[i] = 0;
      };
  rec(0, g.zero());
}

}  // namespace detail

/// Subgroup generated by a direct-sum basis (each member appears exactly
/// once in the coefficient odometer). Rejects dependent generator sets.
inline Subgroup span_subgroup(const CyclicProduct& g,
                              std::vector<Element> basis) {
  Subgroup h;
  h.group = g;
  h.basis_orders.reserve(basis.size());
  for (const Element& b : basis) h.basis_orders.push_back(g.element_order(b));
  std::int64_t total = 1;
  for (std::int64_t o : h.basis_orders) total = checked_mul(total, o);
  h.members.reserve(static_cast<std::size_t>(total));
  detail::walk_span(g, basis, h.basis_orders,
                    [&](const Element& el, const std::vector<std::int64_t>&) {
                      h.members.push_back(g.pack(el));
                    });
  std::sort(h.members.begin(), h.members.end());
  if (std::adjacent_find(h.members.begin(), h.members.end()) !=
      h.members.end()) {
    throw ValidationError("span_subgroup: generators are not independent");
  }
  h.basis = std::move(basis);
  return h;
}

/// Closure of an arbitrary generator set (worklist; no independence needed).
/// Returns the sorted packed member list.
inline std::vector<std::uint64_t> closure_members(
    const CyclicProduct& g, const std::vector<Element>& generators) {
  std::unordered_set<std::uint64_t> seen;
  std::deque<Element> queue;
  seen.insert(g.pack(g.zero()));
  queue.push_back(g.zero());
  while (!queue.empty()) {
    Element cur = queue.front();
    queue.pop_front();
    for (const Element& gen : generators) {
      Element nxt = g.add(cur, gen);
      if (seen.insert(g.pack(nxt)).second) queue.push_back(nxt);
    }
  }
  std::vector<std::uint64_t> members(seen.begin(), seen.end());
  std::sort(members.begin(), members.end());
  return members;
}

/// Exhaustive closure check: every pairwise sum and negation stays inside.
inline bool is_closed_subgroup(const Subgroup& h) {
  if (!h.contains(h.group.zero())) return false;
  std::vector<Element> els;
  els.reserve(h.members.size());
  for (std::uint64_t k : h.members) els.push_back(h.group.unpack(k));
  for (const Element& a : els) {
    if (!h.contains(h.group.neg(a))) return false;
    for (const Element& b : els) {
      if (!h.contains(h.group.add(a, b))) return false;
    }
  }
  return true;
}

/// The isomorphism type of a p-subgroup, recovered from the order profile
/// |{h : p^k h = 0}| = p^{sum_i min(L_i, k)}.
inline Partition subgroup_type(const Subgroup& h, std::int64_t p) {
  std::vector<std::int64_t> logcount;  // log_p of the p^k-torsion count
  logcount.push_back(0);
  for (std::int64_t k = 1;; ++k) {
    std::int64_t bound = ipow(p, k);
    std::int64_t cnt = 0;
    for (std::uint64_t key : h.members) {
      if (bound % h.group.element_order(h.group.unpack(key)) == 0) ++cnt;
    }
    std::int64_t lg = 0;
    while (ipow(p, lg) < cnt) ++lg;
    if (ipow(p, lg) != cnt)
      throw ValidationError("subgroup_type: not a p-group");
    logcount.push_back(lg);
    if (cnt == h.order()) break;
  }
  std::vector<std::int64_t> conj;
  for (std::size_t k = 1; k < logcount.size(); ++k)
    conj.push_back(logcount[k] - logcount[k - 1]);
  return Partition(conj).conjugate();
}

// ---------------------------------------------------------------------------
// Representative bases (the exponent sets S of Eq. 28, one per class)
// ---------------------------------------------------------------------------

/// Exponent set S = (s_1..s_r), 0 <= s_a <= M_a, generating the subgroup
/// spanned by {p^{s_a} e_a} (zero vectors dropped).
struct SubgroupBasis {
  std::vector<std::int64_t> s;

  [[nodiscard]] std::vector<Element> vectors(
      const PrimaryComponent& comp) const {
    std::vector<Element> out;
    for (std::size_t a = 0; a < s.size(); ++a) {
      if (s[a] >= comp.exponents[a]) continue;  // p^{M_a} e_a = 0
      Element e = comp.group.zero();
      e[a] = ipow(comp.prime, s[a]);
      out.push_back(std::move(e));
    }
    return out;
  }
};

/// One exponent set per class of subgroup bases equivalent under an ambient
/// automorphism: sets are equivalent iff, slot-block by slot-block (blocks of
/// equal M), their s-multisets agree. The canonical member sorts each block's
/// s-values ascending, which is the lexicographically smallest choice.
inline std::vector<SubgroupBasis> representative_bases(
    const PrimaryComponent& comp) {
  struct Block {
    std::size_t begin, end;
    std::int64_t m;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < comp.rank();) {
    std::size_t j = i;
    while (j < comp.rank() && comp.exponents[j] == comp.exponents[i]) ++j;
    blocks.push_back({i, j, comp.exponents[i]});
    i = j;
  }

  // Non-decreasing tuples of length (end-begin) over {0..m}, lex order.
  auto block_choices = [](const Block& b) {
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> cur(b.end - b.begin, 0);
    std::function<void(std::size_t, std::int64_t)> rec =
        [&](std::size_t i, std::int64_t lo) {
          if (i == cur.size()) {
            out.push_back(cur);
            return;
          }
          for (std::int64_t v = lo; v <= b.m; ++v) {
            cur[i] = v;
            rec(i + 1, v);
          }
        };
    rec(0, 0);
    return out;
  };

  std::vector<std::vector<std::vector<std::int64_t>>> per_block;
  per_block.reserve(blocks.size());
  for (const Block& b : blocks) per_block.push_back(block_choices(b));

  std::vector<SubgroupBasis> reps;
  std::vector<std::size_t> pick(blocks.size(), 0);
  for (;;) {
    SubgroupBasis basis;
    basis.s.resize(comp.rank());
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      const auto& choice = per_block[bi][pick[bi]];
      std::copy(choice.begin(), choice.end(), basis.s.begin() + blocks[bi].begin);
    }
    reps.push_back(std::move(basis));
    std::size_t bi = blocks.size();
    while (bi > 0) {
      --bi;
      if (++pick[bi] < per_block[bi].size()) break;
      pick[bi] = 0;
      if (bi == 0) return reps;
    }
  }
}

// ---------------------------------------------------------------------------
// Automorphisms
// ---------------------------------------------------------------------------

/// An automorphism of a primary component in matrix form, column convention:
/// T(e_b) = sum_a t[a][b] e_a, so coordinates transform as
/// (Tg)_a = sum_b t[a][b] g_b mod p^{M_a}. Entry (a,b) is constrained to a
/// multiple of p^{M_a - M_b} when M_a > M_b.
struct Automorphism {
  std::size_t rank = 0;
  std::vector<std::int64_t> t;  // row-major rank x rank

  [[nodiscard]] std::int64_t at(std::size_t a, std::size_t b) const {
    return t[a * rank + b];
  }
};

inline Element apply_automorphism(const PrimaryComponent& comp,
                                  const Automorphism& aut, const Element& g) {
  const auto& moduli = comp.group.moduli();
  Element out(comp.rank(), 0);
  for (std::size_t a = 0; a < comp.rank(); ++a) {
    std::int64_t acc = 0;
    for (std::size_t b = 0; b < comp.rank(); ++b)
      acc += mod_floor(aut.at(a, b) * g[b], moduli[a]);
    out[a] = mod_floor(acc, moduli[a]);
  }
  return out;
}

inline Automorphism compose_automorphisms(const PrimaryComponent& comp,
                                          const Automorphism& s,
                                          const Automorphism& t) {
  const auto& moduli = comp.group.moduli();
  Automorphism c;
  c.rank = comp.rank();
  c.t.assign(c.rank * c.rank, 0);
  for (std::size_t a = 0; a < c.rank; ++a) {
    for (std::size_t b = 0; b < c.rank; ++b) {
      std::int64_t acc = 0;
      for (std::size_t k = 0; k < c.rank; ++k)
        acc = mod_floor(acc + mod_floor(s.at(a, k) * t.at(k, b), moduli[a]),
                        moduli[a]);
      c.t[a * c.rank + b] = acc;
    }
  }
  return c;
}

/// Closed-form automorphism count of a primary component.
inline std::uint64_t count_automorphisms(const PrimaryComponent& comp) {
  const std::int64_t p = comp.prime;
  // Distinct exponent values (already non-increasing) and multiplicities.
  std::vector<std::int64_t> val;
  std::vector<std::int64_t> mult;
  for (std::int64_t m : comp.exponents) {
    if (!val.empty() && val.back() == m) {
      ++mult.back();
    } else {
      val.push_back(m);
      mult.push_back(1);
    }
  }
  const std::size_t q = val.size();

  std::int64_t k0 = 0, k1 = 0, k2 = 0;
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < q; ++b) {
      if (b < a) k0 += mult[a] * mult[b];
      if (b <= a) k1 += (val[a] - 1) * mult[a] * mult[b];
      if (a < b) k2 += val[b] * mult[a] * mult[b];
    }
  }

  unsigned __int128 n = 1;
  auto mul = [&n](unsigned __int128 f) {
    n *= f;
    if (n > static_cast<unsigned __int128>(UINT64_MAX))
      throw std::overflow_error("count_automorphisms: count exceeds 2^64");
  };
  for (std::int64_t e = 0; e < k0 + k1 + k2; ++e)
    mul(static_cast<unsigned __int128>(p));
  for (std::size_t a = 0; a < q; ++a) {
    unsigned __int128 pn = 1;
    for (std::int64_t i = 0; i < mult[a]; ++i)
      pn *= static_cast<unsigned __int128>(p);
    unsigned __int128 pb = 1;
    for (std::int64_t b = 0; b < mult[a]; ++b) {
      mul(pn - pb);
      pb *= static_cast<unsigned __int128>(p);
    }
  }
  return static_cast<std::uint64_t>(n);
}

namespace detail {

/// Reduce `row` (mod p) against the rows already in `echelon`; returns false
/// if it becomes zero (linearly dependent). On success appends it.
inline bool echelon_push(std::vector<std::vector<std::int64_t>>& echelon,
                         std::vector<std::size_t>& pivots,
                         std::vector<std::int64_t> row, std::int64_t p) {
  for (std::size_t i = 0; i < echelon.size(); ++i) {
    std::int64_t c = row[pivots[i]];
    if (c == 0) continue;
    std::int64_t factor = mod_floor(c * mod_inverse(echelon[i][pivots[i]], p), p);
    for (std::size_t j = 0; j < row.size(); ++j)
      row[j] = mod_floor(row[j] - factor * echelon[i][j], p);
  }
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] != 0) {
      pivots.push_back(j);
      echelon.push_back(std::move(row));
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Stream every automorphism of a primary component in lexicographic
/// matrix order (row-major, entry values ascending). Rows whose mod-p
/// reduction is dependent on the rows above are pruned before any deeper
/// entries are enumerated, so the walk visits few non-invertible candidates.
template <typename F>
void for_each_automorphism(const PrimaryComponent& comp,
                           const EnumerationCaps& caps, F&& f) {
  std::uint64_t count = 0;
  try {
    count = count_automorphisms(comp);
  } catch (const std::overflow_error&) {
    throw CapExceeded("automorphism count exceeds 2^64 (cap " +
                      std::to_string(caps.max_automorphisms) + ")");
  }
  if (count > static_cast<std::uint64_t>(caps.max_automorphisms)) {
    throw CapExceeded("automorphism count " + std::to_string(count) +
                      " exceeds cap " +
                      std::to_string(caps.max_automorphisms));
  }

  const std::size_t r = comp.rank();
  const std::int64_t p = comp.prime;
  const auto& exps = comp.exponents;
  // Allowed entry values: multiples of p^{max(0, M_a - M_b)} below p^{M_a}.
  std::vector<std::int64_t> step(r * r), nval(r * r);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < r; ++b) {
      std::int64_t s = ipow(p, std::max<std::int64_t>(0, exps[a] - exps[b]));
      step[a * r + b] = s;
      nval[a * r + b] = ipow(p, exps[a]) / s;
    }
  }

  Automorphism aut;
  aut.rank = r;
  aut.t.assign(r * r, 0);

  std::vector<std::vector<std::int64_t>> echelon;
  std::vector<std::size_t> pivots;
  echelon.reserve(r);
  pivots.reserve(r);

  std::function<void(std::size_t)> rec_row = [&](std::size_t a) {
    if (a == r) {
      f(std::as_const(aut));
      return;
    }
    std::vector<std::int64_t> idx(r, 0);
    for (;;) {
      std::vector<std::int64_t> modp(r);
      for (std::size_t b = 0; b < r; ++b) modp[b] = mod_floor(aut.t[a * r + b], p);
      std::size_t depth = echelon.size();
      if (detail::echelon_push(echelon, pivots, std::move(modp), p)) {
        rec_row(a + 1);
        echelon.resize(depth);
        pivots.resize(depth);
      }
      // Advance this row's entry odometer (entry r-1 fastest).
      std::size_t b = r;
      for (;;) {
        if (b == 0) return;
        --b;
        if (++idx[b] < nval[a * r + b]) {
          aut.t[a * r + b] += step[a * r + b];
          break;
        }
        idx[b] = 0;
        aut.t[a * r + b] = 0;
      }
    }
  };
  rec_row(0);
}

/// Materialized automorphism list; only sensible for small components.
inline std::vector<Automorphism> enumerate_automorphisms(
    const PrimaryComponent& comp, const EnumerationCaps& caps = {}) {
  std::vector<Automorphism> out;
  for_each_automorphism(comp, caps,
                        [&](const Automorphism& a) { out.push_back(a); });
  return out;
}

/// A small generating set of the automorphism group: transvections
/// e_b -> e_b + c e_a with the minimal admissible c, unit scalings of each
/// slot (a primitive root for odd p; -1 and 5 for p = 2), and swaps of
/// equal-order slots. Gaussian elimination over the local ring Z/p^M reduces
/// any automorphism to a product of these.
inline std::vector<Automorphism> automorphism_generators(
    const PrimaryComponent& comp) {
  const std::size_t r = comp.rank();
  const std::int64_t p = comp.prime;
  std::vector<Automorphism> gens;

  auto identity = [&]() {
    Automorphism t;
    t.rank = r;
    t.t.assign(r * r, 0);
    for (std::size_t i = 0; i < r; ++i) t.t[i * r + i] = 1;
    return t;
  };

  // Unit scalings.
  for (std::size_t a = 0; a < r; ++a) {
    std::int64_t m = comp.group.moduli()[a];
    if (m <= 2) continue;
    std::vector<std::int64_t> units;
    if (p == 2) {
      units.push_back(m - 1);
      if (m >= 8) units.push_back(5);
    } else {
      // Primitive root modulo p^M: search and verify the order.
      std::int64_t phi = m / p * (p - 1);
      auto fac = factorize(phi);
      for (std::int64_t g = 2; g < m; ++g) {
        if (std::gcd(g, m) != 1) continue;
        bool primitive = true;
        for (auto [q, e] : fac) {
          std::int64_t pw = 1;
          for (std::int64_t i = 0; i < phi / q; ++i) pw = mod_floor(pw * g, m);
          if (pw == 1) {
            primitive = false;
            break;
          }
        }
        if (primitive) {
          units.push_back(g);
          break;
        }
      }
    }
    for (std::int64_t u : units) {
      Automorphism t = identity();
      t.t[a * r + a] = u;
      gens.push_back(std::move(t));
    }
  }

  // Transvections.
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < r; ++b) {
      if (a == b) continue;
      std::int64_t c = ipow(
          p, std::max<std::int64_t>(0, comp.exponents[a] - comp.exponents[b]));
      if (c >= comp.group.moduli()[a]) continue;
      Automorphism t = identity();
      t.t[a * r + b] = c;
      gens.push_back(std::move(t));
    }
  }

  // Swaps of equal-order slots.
  for (std::size_t a = 0; a + 1 < r; ++a) {
    if (comp.exponents[a] != comp.exponents[a + 1]) continue;
    Automorphism t = identity();
    t.t[a * r + a] = 0;
    t.t[(a + 1) * r + a + 1] = 0;
    t.t[a * r + a + 1] = 1;
    t.t[(a + 1) * r + a] = 1;
    gens.push_back(std::move(t));
  }

  return gens;
}

/// All subgroups of a primary component: the orbits of the representative
/// subgroups under the automorphism group, deduplicated by the full member
/// fingerprint. Orbits are walked breadth-first with the generating set, so
/// the cost scales with the number of subgroups rather than the number of
/// automorphisms. Output is sorted by (order, members).
inline std::vector<Subgroup> enumerate_subgroups(const PrimaryComponent& comp,
                                                 const EnumerationCaps& caps = {}) {
  if (comp.order() > caps.max_group) {
    throw CapExceeded("component order " + std::to_string(comp.order()) +
                      " exceeds cap " + std::to_string(caps.max_group));
  }
  std::uint64_t n_aut = 0;
  bool aut_overflow = false;
  try {
    n_aut = count_automorphisms(comp);
  } catch (const std::overflow_error&) {
    aut_overflow = true;
  }
  if (aut_overflow ||
      n_aut > static_cast<std::uint64_t>(caps.max_automorphisms)) {
    throw CapExceeded(
        "automorphism count " +
        (aut_overflow ? std::string("> 2^64") : std::to_string(n_aut)) +
        " exceeds cap " + std::to_string(caps.max_automorphisms));
  }

  std::vector<Automorphism> gens = automorphism_generators(comp);

  std::unordered_set<std::vector<std::uint64_t>, VecHash> seen;
  std::vector<Subgroup> found;
  std::deque<std::size_t> queue;

  auto try_add = [&](Subgroup h) {
    if (seen.insert(h.members).second) {
      found.push_back(std::move(h));
      queue.push_back(found.size() - 1);
    }
  };

  for (const SubgroupBasis& rep : representative_bases(comp)) {
    try_add(span_subgroup(comp.group, rep.vectors(comp)));
  }
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (const Automorphism& t : gens) {
      std::vector<Element> image;
      image.reserve(found[i].basis.size());
      for (const Element& b : found[i].basis)
        image.push_back(apply_automorphism(comp, t, b));
      try_add(span_subgroup(comp.group, std::move(image)));
    }
  }

  std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.members.size() != b.members.size())
      return a.members.size() < b.members.size();
    return a.members < b.members;
  });
  return found;
}

// ---------------------------------------------------------------------------
// Counting (Appendix F)
// ---------------------------------------------------------------------------

/// Gaussian binomial [n m]_p: the number of m-dimensional subspaces of an
/// n-dimensional vector space over Z_p. Computed by the q-Pascal recurrence
/// to stay in exact integers.
inline std::uint64_t gaussian_binomial(std::int64_t n, std::int64_t m,
                                       std::int64_t p) {
  if (m < 0 || m > n) return 0;
  std::vector<std::vector<std::uint64_t>> tab(
      static_cast<std::size_t>(n + 1),
      std::vector<std::uint64_t>(static_cast<std::size_t>(m + 1), 0));
  for (std::int64_t i = 0; i <= n; ++i) {
    tab[i][0] = 1;
    for (std::int64_t j = 1; j <= std::min(i, m); ++j) {
      std::uint64_t pj = 1;
      for (std::int64_t k = 0; k < j; ++k) {
        if (pj > UINT64_MAX / static_cast<std::uint64_t>(p))
          throw std::overflow_error("gaussian_binomial overflow");
        pj *= static_cast<std::uint64_t>(p);
      }
      std::uint64_t a = tab[i - 1][j - 1];
      std::uint64_t b = tab[i - 1][j];
      if (b != 0 && pj > UINT64_MAX / b)
        throw std::overflow_error("gaussian_binomial overflow");
      std::uint64_t t = b * pj;
      if (a > UINT64_MAX - t) throw std::overflow_error("gaussian_binomial overflow");
      tab[i][j] = a + t;
    }
  }
  return tab[n][m];
}

struct TypeCount {
  bool valid = false;
  std::uint64_t count = 0;
};

/// Number of subgroups of type L-bar inside a p-group of type M-bar
/// (the classical product of Gaussian binomials over the conjugate
/// partitions). Invalid types report {false, 0}.
inline TypeCount count_subgroups_of_type(const Partition& group_type,
                                         const Partition& sub_type,
                                         std::int64_t p) {
  if (!valid_subgroup_type(sub_type, group_type)) return {false, 0};
  Partition mc = group_type.conjugate();
  Partition lc = sub_type.conjugate();
  unsigned __int128 total = 1;
  for (std::size_t i = 0; i < mc.length(); ++i) {
    std::int64_t mi = mc.part(i);
    std::int64_t li = lc.part(i);
    std::int64_t li1 = lc.part(i + 1);
    unsigned __int128 f = 1;
    for (std::int64_t e = 0; e < li1 * (mi - li); ++e)
      f *= static_cast<unsigned __int128>(p);
    f *= gaussian_binomial(mi - li1, li - li1, p);
    total *= f;
    if (total > static_cast<unsigned __int128>(UINT64_MAX))
      throw std::overflow_error("count_subgroups_of_type overflow");
  }
  return {true, static_cast<std::uint64_t>(total)};
}

/// All valid subgroup types against M-bar (Eq. 29), lex order.
inline std::vector<Partition> valid_subgroup_types(const Partition& group_type) {
  std::vector<Partition> out;
  std::vector<std::int64_t> cur;
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i,
                                                           std::int64_t hi) {
    if (i == group_type.length()) {
      out.emplace_back(cur);
      return;
    }
    std::int64_t cap = std::min<std::int64_t>(hi, group_type.part(i));
    for (std::int64_t v = cap; v >= 0; --v) {
      cur.push_back(v);
      rec(i + 1, v);
      cur.pop_back();
    }
  };
  rec(0, group_type.part(0));
  return out;
}

/// Total subgroup count of a component via the closed-form type counts.
inline std::uint64_t count_subgroups(const PrimaryComponent& comp) {
  Partition m(comp.exponents);
  std::uint64_t total = 0;
  for (const Partition& l : valid_subgroup_types(m)) {
    total += count_subgroups_of_type(m, l, comp.prime).count;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Homomorphisms (Appendix D)
// ---------------------------------------------------------------------------

/// A homomorphism from a group with a chosen direct-sum basis into a cyclic
/// group Z_codomain, stored as the images of the basis vectors.
struct Homomorphism {
  std::vector<std::int64_t> generator_orders;
  std::vector<std::int64_t> phi;
  std::int64_t codomain = 1;

  [[nodiscard]] std::int64_t eval(
      const std::vector<std::int64_t>& coeffs) const {
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < phi.size(); ++i)
      acc = mod_floor(acc + mod_floor(coeffs[i], codomain) * phi[i], codomain);
    return acc;
  }

  /// True iff some generator image generates the whole codomain.
  [[nodiscard]] bool onto() const {
    for (std::int64_t v : phi)
      if (std::gcd(v, codomain) == 1) return true;
    return codomain == 1;
  }
};

inline std::uint64_t count_homomorphisms(
    const std::vector<std::int64_t>& generator_orders, std::int64_t codomain) {
  std::uint64_t n = 1;
  for (std::int64_t o : generator_orders)
    n = checked_mul(static_cast<std::int64_t>(n), std::gcd(o, codomain));
  return n;
}

/// Every homomorphism into Z_codomain from the group generated by basis
/// vectors of the given orders: the image of a generator of order q must be
/// a multiple of codomain / gcd(codomain, q). Lex order over the phi tuples.
inline std::vector<Homomorphism> enumerate_homomorphisms(
    const std::vector<std::int64_t>& generator_orders, std::int64_t codomain,
    std::int64_t prime) {
  std::int64_t c = codomain;
  while (c > 1) {
    if (c % prime != 0)
      throw ValidationError(
          "enumerate_homomorphisms: codomain is not a power of the prime");
    c /= prime;
  }
  std::vector<std::int64_t> step, count;
  for (std::int64_t o : generator_orders) {
    std::int64_t g = std::gcd(o, codomain);
    step.push_back(codomain / g);
    count.push_back(g);
  }
  std::vector<Homomorphism> out;
  out.reserve(static_cast<std::size_t>(
      count_homomorphisms(generator_orders, codomain)));
  std::vector<std::int64_t> idx(generator_orders.size(), 0);
  for (;;) {
    Homomorphism h;
    h.generator_orders = generator_orders;
    h.codomain = codomain;
    h.phi.resize(generator_orders.size());
    for (std::size_t i = 0; i < idx.size(); ++i) h.phi[i] = idx[i] * step[i];
    out.push_back(std::move(h));
    std::size_t i = idx.size();
    for (;;) {
      if (i == 0) return out;
      --i;
      if (++idx[i] < count[i]) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
  }
}

inline std::vector<Homomorphism> enumerate_homomorphisms(
    const PrimaryComponent& comp, std::int64_t codomain) {
  std::vector<std::int64_t> orders;
  for (std::int64_t m : comp.group.moduli()) orders.push_back(m);
  return enumerate_homomorphisms(orders, codomain, comp.prime);
}

inline std::vector<Homomorphism> enumerate_homomorphisms(
    const Subgroup& sub, std::int64_t codomain, std::int64_t prime) {
  return enumerate_homomorphisms(sub.basis_orders, codomain, prime);
}

// ---------------------------------------------------------------------------
// Phase homomorphisms over the full index group
// ---------------------------------------------------------------------------

/// A homomorphism from a subgroup into Z_modulus, tabulated member by
/// member: members[k] of the owning subgroup carries exponent exponents[k],
/// i.e. the phase exp(2*pi*i * exponents[k] / modulus).
struct PhaseHom {
  std::int64_t modulus = 1;
  std::vector<std::int64_t> exponents;
};

/// Exact additivity check of a tabulated phase homomorphism; throws
/// ValidationError with the offending pair on failure.
inline void verify_phase_hom(const Subgroup& h, const PhaseHom& phi) {
  if (phi.exponents.size() != h.members.size())
    throw ValidationError("phase table size does not match subgroup");
  std::size_t zero_idx = h.member_index(h.group.pack(h.group.zero()));
  if (mod_floor(phi.exponents[zero_idx], phi.modulus) != 0)
    throw ValidationError("phase hom does not map 0 to 0");
  std::vector<Element> els;
  els.reserve(h.members.size());
  for (std::uint64_t k : h.members) els.push_back(h.group.unpack(k));
  for (std::size_t i = 0; i < els.size(); ++i) {
    for (std::size_t j = i; j < els.size(); ++j) {
      std::uint64_t sum = h.group.pack(h.group.add(els[i], els[j]));
      if (!h.contains_key(sum))
        throw ValidationError("support is not closed under addition");
      std::int64_t expect =
          mod_floor(phi.exponents[i] + phi.exponents[j], phi.modulus);
      if (mod_floor(phi.exponents[h.member_index(sum)], phi.modulus) != expect)
        throw ValidationError("phases are not additive on the support");
    }
  }
}

// ---------------------------------------------------------------------------
// Recombination across primes (CRT)
// ---------------------------------------------------------------------------

/// One per-prime choice feeding the CRT product: a subgroup of that
/// component and (optionally) a homomorphism on its basis.
struct PrimeSelection {
  const Subgroup* subgroup = nullptr;
  const Homomorphism* hom = nullptr;  // null = zero homomorphism
};

/// Cartesian product of per-prime subgroups under the CRT coordinate map,
/// together with the combined phase homomorphism into Z_L, L = lcm(dims).
/// Per-prime phase exponents are rescaled by L / codomain_p.
inline std::pair<Subgroup, PhaseHom> combine_across_primes(
    const Decomposition& dec, const std::vector<PrimeSelection>& sel) {
  const auto& comps = dec.components();
  if (sel.size() != comps.size())
    throw std::invalid_argument(
        "combine_across_primes: one selection per prime component required");
  const std::int64_t L = dec.phase_modulus();

  struct MemberPhase {
    Element el;
    std::int64_t exponent;
  };
  std::vector<std::vector<MemberPhase>> parts(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (sel[c].subgroup == nullptr)
      throw std::invalid_argument("combine_across_primes: missing subgroup");
    const Subgroup& h = *sel[c].subgroup;
    if (!(h.group == comps[c].group))
      throw std::invalid_argument(
          "combine_across_primes: subgroup belongs to a different component");
    std::int64_t scale = L / comps[c].codomain_order();
    detail::walk_span(
        h.group, h.basis, h.basis_orders,
        [&](const Element& el, const std::vector<std::int64_t>& digits) {
          std::int64_t e = sel[c].hom == nullptr
                               ? 0
                               : mod_floor(sel[c].hom->eval(digits) * scale, L);
          parts[c].push_back({el, e});
        });
  }

  const CyclicProduct& g = dec.spec().index_group();
  std::vector<std::pair<std::uint64_t, std::int64_t>> combined;
  std::vector<std::size_t> pick(comps.size(), 0);
  std::vector<Element> current(comps.size());
  for (;;) {
    std::int64_t e = 0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      current[c] = parts[c][pick[c]].el;
      e = mod_floor(e + parts[c][pick[c]].exponent, L);
    }
    combined.emplace_back(g.pack(dec.lift(current)), e);
    std::size_t c = comps.size();
    bool done = true;
    while (c > 0) {
      --c;
      if (++pick[c] < parts[c].size()) {
        done = false;
        break;
      }
      pick[c] = 0;
    }
    if (done) break;
  }
  std::sort(combined.begin(), combined.end());

  Subgroup out;
  out.group = g;
  out.members.reserve(combined.size());
  PhaseHom phases;
  phases.modulus = L;
  phases.exponents.reserve(combined.size());
  for (auto& [key, e] : combined) {
    out.members.push_back(key);
    phases.exponents.push_back(e);
  }
  if (std::adjacent_find(out.members.begin(), out.members.end()) !=
      out.members.end())
    throw ValidationError("combine_across_primes: CRT recombination collided");

  for (std::size_t c = 0; c < comps.size(); ++c) {
    const Subgroup& h = *sel[c].subgroup;
    for (const Element& b : h.basis) {
      out.basis.push_back(dec.lift_single(c, b));
      out.basis_orders.push_back(h.group.element_order(b));
    }
  }
  return {std::move(out), std::move(phases)};
}

}  // namespace weylkit
