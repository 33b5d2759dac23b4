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
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "weylkit/linalg.hpp"
#include "weylkit/subgroups.hpp"
#include "weylkit/weyl.hpp"

namespace weylkit {

inline constexpr double kHermTol = 1e-9;
inline constexpr double kUnimodularTol = 1e-9;
inline constexpr std::int64_t kChoiDimCap = std::int64_t{1} << 14;
inline constexpr std::int64_t kTransformCap = std::int64_t{1} << 12;

/// Relative CP slack: lambda >= -eps with eps scaled by the total dimension.
inline double cp_epsilon(std::int64_t total_dim) {
  return 1e-9 * static_cast<double>(total_dim);
}

/// One channel eigenvalue tau(m, n): exact zero, an exact root of unity, or
/// a floating-point complex number. Products keep exactness when both
/// factors are exact.
class TauValue {
 public:
  enum class Kind : std::uint8_t { zero, phase, value };

  TauValue() : kind_(Kind::zero) {}

  static TauValue zero() { return TauValue(); }
  static TauValue one() { return from_phase(PhaseExponent::one()); }
  static TauValue from_phase(const PhaseExponent& p) {
    TauValue t;
    t.kind_ = Kind::phase;
    t.phase_ = p;
    return t;
  }
  static TauValue from_value(Complex z) {
    TauValue t;
    t.kind_ = Kind::value;
    t.z_ = z;
    return t;
  }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool is_zero() const { return kind_ == Kind::zero; }
  [[nodiscard]] bool is_exact() const { return kind_ != Kind::value; }
  [[nodiscard]] const PhaseExponent& phase() const {
    if (kind_ != Kind::phase) throw std::logic_error("TauValue: not a phase");
    return phase_;
  }

  [[nodiscard]] Complex value() const {
    switch (kind_) {
      case Kind::zero:
        return {0.0, 0.0};
      case Kind::phase:
        return phase_.value();
      default:
        return z_;
    }
  }

  [[nodiscard]] double abs() const {
    return kind_ == Kind::zero ? 0.0
           : kind_ == Kind::phase ? 1.0
                                  : std::abs(z_);
  }

  [[nodiscard]] TauValue conj() const {
    switch (kind_) {
      case Kind::zero:
        return zero();
      case Kind::phase:
        return from_phase(phase_.conj());
      default:
        return from_value(std::conj(z_));
    }
  }

  friend TauValue operator*(const TauValue& a, const TauValue& b) {
    if (a.kind_ == Kind::zero || b.kind_ == Kind::zero) return zero();
    if (a.kind_ == Kind::phase && b.kind_ == Kind::phase)
      return from_phase(a.phase_ * b.phase_);
    return from_value(a.value() * b.value());
  }

  /// Exact fingerprint words; only meaningful for exact entries.
  [[nodiscard]] std::pair<std::int64_t, std::int64_t> exact_key() const {
    if (kind_ == Kind::zero) return {-1, 0};
    if (kind_ == Kind::phase)
      return {phase_.numerator(), phase_.denominator()};
    throw std::logic_error("TauValue: no exact key for float entries");
  }

 private:
  Kind kind_;
  PhaseExponent phase_;
  Complex z_{0.0, 0.0};
};

/// Addressing for channel tables: flat index = m-block * D + n-block, each
/// block row-major over particles (particle 1 outermost). This order is the
/// serialization order as well.
class PairIndexer {
 public:
  explicit PairIndexer(const GroupSpec& spec)
      : dims_(spec.dims()), total_(spec.total_dim()) {}

  [[nodiscard]] std::int64_t dim() const { return total_; }
  [[nodiscard]] std::int64_t size() const { return total_ * total_; }

  [[nodiscard]] std::int64_t half_pack(
      const std::vector<std::int64_t>& v) const {
    std::int64_t idx = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a)
      idx = idx * dims_[a] + mod_floor(v[a], dims_[a]);
    return idx;
  }

  [[nodiscard]] std::vector<std::int64_t> half_unpack(std::int64_t idx) const {
    std::vector<std::int64_t> v(dims_.size());
    for (std::size_t a = dims_.size(); a-- > 0;) {
      v[a] = idx % dims_[a];
      idx /= dims_[a];
    }
    return v;
  }

  [[nodiscard]] std::int64_t flat(const WeylIndex& idx) const {
    return half_pack(idx.m) * total_ + half_pack(idx.n);
  }

  [[nodiscard]] WeylIndex split(std::int64_t flat) const {
    return {half_unpack(flat / total_), half_unpack(flat % total_)};
  }

  [[nodiscard]] std::int64_t negate(std::int64_t flat) const {
    WeylIndex idx = split(flat);
    for (std::size_t a = 0; a < dims_.size(); ++a) {
      idx.m[a] = mod_floor(-idx.m[a], dims_[a]);
      idx.n[a] = mod_floor(-idx.n[a], dims_[a]);
    }
    return this->flat(idx);
  }

  /// Interleaved group element <-> flat table index.
  [[nodiscard]] Element to_element(const GroupSpec& spec,
                                   std::int64_t flat) const {
    WeylIndex idx = split(flat);
    return spec.element(idx.m, idx.n);
  }

  [[nodiscard]] std::int64_t from_element(const GroupSpec& spec,
                                          const Element& g) const {
    return flat(WeylIndex::from_element(spec, g));
  }

 private:
  std::vector<std::int64_t> dims_;
  std::int64_t total_;
};

/// A Weyl channel: the table of eigenvalues tau(m, n) over the index group,
/// stored dense in PairIndexer order.
struct WeylChannel {
  GroupSpec spec;
  std::vector<TauValue> tau;

  static WeylChannel identity(const GroupSpec& s) {
    WeylChannel ch{s, {}};
    ch.tau.assign(static_cast<std::size_t>(PairIndexer(s).size()),
                  TauValue::one());
    return ch;
  }

  [[nodiscard]] const TauValue& at(const WeylIndex& idx) const {
    return tau[static_cast<std::size_t>(PairIndexer(spec).flat(idx))];
  }

  /// Exact-table fingerprint; throws for float entries.
  [[nodiscard]] std::vector<std::uint64_t> fingerprint() const {
    std::vector<std::uint64_t> out;
    out.reserve(2 * tau.size());
    for (const TauValue& t : tau) {
      auto [a, b] = t.exact_key();
      out.push_back(static_cast<std::uint64_t>(a));
      out.push_back(static_cast<std::uint64_t>(b));
    }
    return out;
  }
};

/// The Choi eigenvalue table lambda(r, s), real, in PairIndexer order.
struct ChoiSpectrum {
  GroupSpec spec;
  std::vector<double> lambda;

  [[nodiscard]] double sum() const {
    double s = 0;
    for (double v : lambda) s += v;
    return s;
  }
  [[nodiscard]] double min() const {
    double m = lambda.empty() ? 0 : lambda[0];
    for (double v : lambda) m = std::min(m, v);
    return m;
  }
};

inline bool is_cp(const ChoiSpectrum& sp) {
  return sp.min() >= -cp_epsilon(sp.spec.total_dim());
}

namespace detail {

inline std::vector<Complex> root_table(std::int64_t d) {
  std::vector<Complex> out(static_cast<std::size_t>(d));
  for (std::int64_t k = 0; k < d; ++k) {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                   static_cast<double>(d);
    out[static_cast<std::size_t>(k)] = {std::cos(theta), std::sin(theta)};
  }
  return out;
}

/// Separable transform over the 2N table axes (m_1..m_N, n_1..n_N):
/// kernel w^{sign_m * j k} on m axes and w^{sign_n * j k} on n axes.
/// This is the tensor-factorized form of the tau <-> lambda map.
inline std::vector<Complex> pair_dft(const std::vector<std::int64_t>& dims,
                                     std::vector<Complex> t, int sign_m,
                                     int sign_n) {
  std::vector<std::int64_t> lens;
  lens.insert(lens.end(), dims.begin(), dims.end());
  lens.insert(lens.end(), dims.begin(), dims.end());
  const std::int64_t total = static_cast<std::int64_t>(t.size());

  std::int64_t stride = total;
  for (std::size_t axis = 0; axis < lens.size(); ++axis) {
    const std::int64_t len = lens[axis];
    stride /= len;
    const int sign = axis < dims.size() ? sign_m : sign_n;
    const auto roots = root_table(len);
    std::vector<Complex> fiber(static_cast<std::size_t>(len));
    for (std::int64_t outer = 0; outer < total / (len * stride); ++outer) {
      for (std::int64_t inner = 0; inner < stride; ++inner) {
        const std::int64_t base = outer * len * stride + inner;
        for (std::int64_t j = 0; j < len; ++j)
          fiber[static_cast<std::size_t>(j)] = t[base + j * stride];
        for (std::int64_t k = 0; k < len; ++k) {
          Complex acc{0.0, 0.0};
          for (std::int64_t j = 0; j < len; ++j) {
            std::int64_t e = mod_floor(sign * k * j, len);
            acc += roots[static_cast<std::size_t>(e)] *
                   fiber[static_cast<std::size_t>(j)];
          }
          t[base + k * stride] = acc;
        }
      }
    }
  }
  return t;
}

inline std::vector<Complex> tau_values(const WeylChannel& ch) {
  std::vector<Complex> out;
  out.reserve(ch.tau.size());
  for (const TauValue& t : ch.tau) out.push_back(t.value());
  return out;
}

}  // namespace detail

/// Diagnostics for the channel conditions; informational, never throws.
struct ValidationReport {
  bool trace_preserving = false;
  bool hermitian = false;
  bool completely_positive = false;
  double max_hermiticity_violation = 0.0;
  double min_lambda = 0.0;
  std::vector<std::string> issues;

  [[nodiscard]] bool ok() const {
    return trace_preserving && hermitian && completely_positive;
  }
};

/// Choi spectrum from the tau table (factorized transform). Rejects tables
/// that violate the hermiticity pairing, since lambda would be complex.
inline ChoiSpectrum tau_to_lambda(const WeylChannel& ch) {
  PairIndexer ix(ch.spec);
  for (std::int64_t i = 0; i < ix.size(); ++i) {
    Complex a = ch.tau[static_cast<std::size_t>(i)].value();
    Complex b = ch.tau[static_cast<std::size_t>(ix.negate(i))].value();
    if (std::abs(a - std::conj(b)) > kHermTol)
      throw ValidationError("tau_to_lambda: hermiticity pairing violated");
  }
  const double dtot = static_cast<double>(ch.spec.total_dim());
  std::vector<Complex> raw =
      detail::pair_dft(ch.spec.dims(), detail::tau_values(ch), +1, -1);
  ChoiSpectrum sp{ch.spec, {}};
  sp.lambda.reserve(raw.size());
  for (Complex v : raw) {
    if (std::abs(v.imag()) > 1e-9 * dtot)
      throw ValidationError("tau_to_lambda: spectrum has an imaginary part");
    sp.lambda.push_back(v.real() / dtot);
  }
  return sp;
}

/// Reference route: the same spectrum as an explicit double sum with exact
/// phases. Kept independent of the factorized path.
inline ChoiSpectrum tau_to_lambda_direct(const WeylChannel& ch) {
  PairIndexer ix(ch.spec);
  const double dtot = static_cast<double>(ch.spec.total_dim());
  ChoiSpectrum sp{ch.spec, std::vector<double>(ch.tau.size(), 0.0)};
  for (std::int64_t label = 0; label < ix.size(); ++label) {
    WeylIndex rs = ix.split(label);
    Complex acc{0.0, 0.0};
    for (std::int64_t i = 0; i < ix.size(); ++i) {
      if (ch.tau[static_cast<std::size_t>(i)].is_zero()) continue;
      WeylIndex mn = ix.split(i);
      acc += ch.tau[static_cast<std::size_t>(i)].value() *
             mu_phase(ch.spec, mn, rs.m, rs.n).value();
    }
    sp.lambda[static_cast<std::size_t>(label)] = acc.real() / dtot;
  }
  return sp;
}

/// Inverse transform: tau(m,n) = D^-1 sum lambda(r,s) w^{-m r + n s}.
/// The table must be normalized (sum lambda = total dimension).
inline WeylChannel lambda_to_tau(const ChoiSpectrum& sp) {
  const double dtot = static_cast<double>(sp.spec.total_dim());
  if (std::abs(sp.sum() - dtot) > 1e-9 * dtot)
    throw ValidationError("lambda_to_tau: spectrum sums to " +
                          std::to_string(sp.sum()) + ", expected " +
                          std::to_string(dtot));
  std::vector<Complex> raw(sp.lambda.begin(), sp.lambda.end());
  raw = detail::pair_dft(sp.spec.dims(), std::move(raw), -1, +1);
  WeylChannel ch{sp.spec, {}};
  ch.tau.reserve(raw.size());
  for (Complex v : raw) ch.tau.push_back(TauValue::from_value(v / dtot));
  return ch;
}

inline ValidationReport validate(const WeylChannel& ch) {
  ValidationReport rep;
  PairIndexer ix(ch.spec);
  const double dtot = static_cast<double>(ch.spec.total_dim());

  Complex t00 = ch.tau[0].value();
  rep.trace_preserving = std::abs(t00 - Complex(1.0, 0.0)) <= kHermTol;
  if (!rep.trace_preserving) rep.issues.push_back("trace-preservation violated");

  for (std::int64_t i = 0; i < ix.size(); ++i) {
    Complex a = ch.tau[static_cast<std::size_t>(i)].value();
    Complex b = ch.tau[static_cast<std::size_t>(ix.negate(i))].value();
    rep.max_hermiticity_violation =
        std::max(rep.max_hermiticity_violation, std::abs(a - std::conj(b)));
  }
  rep.hermitian = rep.max_hermiticity_violation <= kHermTol;
  if (!rep.hermitian) rep.issues.push_back("hermiticity pairing violated");

  std::vector<Complex> raw =
      detail::pair_dft(ch.spec.dims(), detail::tau_values(ch), +1, -1);
  double min_l = raw.empty() ? 0.0 : raw[0].real() / dtot;
  double max_imag = 0.0;
  for (Complex v : raw) {
    min_l = std::min(min_l, v.real() / dtot);
    max_imag = std::max(max_imag, std::abs(v.imag()) / dtot);
  }
  rep.min_lambda = min_l;
  rep.completely_positive =
      max_imag <= 1e-9 && min_l >= -cp_epsilon(ch.spec.total_dim());
  if (!rep.completely_positive)
    rep.issues.push_back("not completely positive (min lambda " +
                         std::to_string(min_l) + ")");
  return rep;
}

/// The |G| x |G| matrix mapping lambda tables to tau tables,
/// entry[(m,n),(r,s)] = D^-1 prod_a w_a^{-m r + n s}. Its inverse is the
/// same matrix with the exponent signs flipped.
inline DenseMatrix transform_matrix(const GroupSpec& spec,
                                    std::int64_t cap = kTransformCap) {
  PairIndexer ix(spec);
  if (ix.size() > cap)
    throw CapExceeded("transform_matrix: group order " +
                      std::to_string(ix.size()) + " exceeds cap " +
                      std::to_string(cap));
  const double dtot = static_cast<double>(spec.total_dim());
  DenseMatrix out(ix.size(), ix.size());
  for (std::int64_t row = 0; row < ix.size(); ++row) {
    WeylIndex mn = ix.split(row);
    for (std::int64_t col = 0; col < ix.size(); ++col) {
      WeylIndex rs = ix.split(col);
      // w^{-m r + n s} = conj(mu(r, s)).
      out(row, col) = std::conj(mu_phase(spec, mn, rs.m, rs.n).value()) / dtot;
    }
  }
  return out;
}

/// Choi matrix D = D^-1 sum tau(m,n) U(m,n) x U(m,n)^*.
inline DenseMatrix choi_matrix(const WeylChannel& ch) {
  const std::int64_t dtot = ch.spec.total_dim();
  if (dtot * dtot > kChoiDimCap)
    throw CapExceeded("choi_matrix: dimension " + std::to_string(dtot * dtot) +
                      " exceeds cap " + std::to_string(kChoiDimCap));
  PairIndexer ix(ch.spec);
  DenseMatrix acc = DenseMatrix::Zero(dtot * dtot, dtot * dtot);
  for (std::int64_t i = 0; i < ix.size(); ++i) {
    const TauValue& t = ch.tau[static_cast<std::size_t>(i)];
    if (t.is_zero()) continue;
    DenseMatrix u = weyl_matrix(ch.spec, ix.split(i));
    acc += t.value() * kron(u, u.conjugate());
  }
  return acc / static_cast<double>(dtot);
}

/// Weyl coefficients alpha(m,n) = tr(U(m,n)^dag rho) in PairIndexer order.
inline std::vector<Complex> weyl_coefficients(const GroupSpec& spec,
                                              const DensityMatrix& rho) {
  const std::int64_t dtot = spec.total_dim();
  if (rho.rows() != dtot || rho.cols() != dtot)
    throw std::invalid_argument("weyl_coefficients: dimension mismatch");
  PairIndexer ix(spec);
  std::vector<std::vector<Complex>> roots;
  for (std::int64_t d : spec.dims()) roots.push_back(detail::root_table(d));

  std::vector<Complex> out(static_cast<std::size_t>(ix.size()));
  for (std::int64_t i = 0; i < ix.size(); ++i) {
    WeylIndex mn = ix.split(i);
    Complex acc{0.0, 0.0};
    for (std::int64_t row = 0; row < dtot; ++row) {
      auto k = ix.half_unpack(row);
      std::vector<std::int64_t> kn(k.size());
      Complex w{1.0, 0.0};
      for (std::size_t a = 0; a < k.size(); ++a) {
        kn[a] = mod_floor(k[a] + mn.n[a], spec.dims()[a]);
        w *= roots[a][static_cast<std::size_t>(
            mod_floor(mn.m[a] * k[a], spec.dims()[a]))];
      }
      acc += std::conj(w) * rho(row, ix.half_pack(kn));
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

/// Synthesize rho = D^-1 sum alpha(m,n) U(m,n).
inline DensityMatrix synthesize_density(const GroupSpec& spec,
                                        const std::vector<Complex>& alpha) {
  const std::int64_t dtot = spec.total_dim();
  PairIndexer ix(spec);
  std::vector<std::vector<Complex>> roots;
  for (std::int64_t d : spec.dims()) roots.push_back(detail::root_table(d));

  DensityMatrix rho = DenseMatrix::Zero(dtot, dtot);
  for (std::int64_t i = 0; i < ix.size(); ++i) {
    Complex a = alpha[static_cast<std::size_t>(i)];
    if (a == Complex{0.0, 0.0}) continue;
    WeylIndex mn = ix.split(i);
    for (std::int64_t row = 0; row < dtot; ++row) {
      auto k = ix.half_unpack(row);
      std::vector<std::int64_t> kn(k.size());
      Complex w{1.0, 0.0};
      for (std::size_t sa = 0; sa < k.size(); ++sa) {
        kn[sa] = mod_floor(k[sa] + mn.n[sa], spec.dims()[sa]);
        w *= roots[sa][static_cast<std::size_t>(
            mod_floor(mn.m[sa] * k[sa], spec.dims()[sa]))];
      }
      rho(row, ix.half_pack(kn)) += a * w;
    }
  }
  return rho / static_cast<double>(dtot);
}

/// Channel action: decompose, scale each coefficient by tau, resynthesize.
inline DensityMatrix apply_channel(const WeylChannel& ch, const DensityMatrix& rho) {
  std::vector<Complex> alpha = weyl_coefficients(ch.spec, rho);
  for (std::size_t i = 0; i < alpha.size(); ++i)
    alpha[i] *= ch.tau[i].value();
  return synthesize_density(ch.spec, alpha);
}

/// Diagonal maps compose diagonally: the tau tables multiply pointwise.
inline WeylChannel compose(const WeylChannel& a, const WeylChannel& b) {
  if (!(a.spec == b.spec))
    throw std::invalid_argument("compose: channels have different specs");
  WeylChannel out{a.spec, {}};
  out.tau.reserve(a.tau.size());
  for (std::size_t i = 0; i < a.tau.size(); ++i)
    out.tau.push_back(a.tau[i] * b.tau[i]);
  return out;
}

struct IterationReport {
  enum class Outcome { fixed_point, cycle, no_convergence };
  Outcome outcome = Outcome::no_convergence;
  int steps = 0;      // iterates examined
  int period = 0;     // cycle length (1 for a fixed point)
  int transient = 0;  // iterates before the cycle is entered
  std::vector<WeylChannel> cycle;  // the repeating iterates, in order
};

/// Repeated self-composition E, E^2, E^3, ... until the tau tables either
/// stop changing or revisit an earlier iterate within `tol`.
inline IterationReport iterate(const WeylChannel& ch, int max_steps = 1000,
                               double tol = 1e-9) {
  auto dist = [](const WeylChannel& a, const WeylChannel& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.tau.size(); ++i)
      m = std::max(m, std::abs(a.tau[i].value() - b.tau[i].value()));
    return m;
  };

  IterationReport rep;
  std::vector<WeylChannel> history{ch};
  WeylChannel cur = ch;
  for (int step = 2; step <= max_steps; ++step) {
    cur = compose(cur, ch);
    rep.steps = step;
    for (std::size_t j = 0; j < history.size(); ++j) {
      if (dist(cur, history[j]) <= tol) {
        int period = static_cast<int>(history.size() - j);
        rep.period = period;
        rep.transient = static_cast<int>(j);
        rep.outcome = period == 1 ? IterationReport::Outcome::fixed_point
                                  : IterationReport::Outcome::cycle;
        rep.cycle.assign(history.begin() + static_cast<std::ptrdiff_t>(j),
                         history.end());
        return rep;
      }
    }
    history.push_back(cur);
  }
  return rep;
}

/// Extreme channel tau(m,n) = prod_a w_a^{-m r0 + n s0}, exact phases.
inline WeylChannel extreme_channel(const GroupSpec& spec,
                                   const std::vector<std::int64_t>& r0,
                                   const std::vector<std::int64_t>& s0) {
  if (r0.size() != spec.particles() || s0.size() != spec.particles())
    throw std::invalid_argument("extreme_channel: wrong label length");
  PairIndexer ix(spec);
  WeylChannel ch{spec, {}};
  ch.tau.reserve(static_cast<std::size_t>(ix.size()));
  for (std::int64_t i = 0; i < ix.size(); ++i) {
    WeylIndex mn = ix.split(i);
    PhaseExponent p = PhaseExponent::one();
    for (std::size_t a = 0; a < spec.particles(); ++a) {
      p = p * PhaseExponent::root(-mn.m[a] * r0[a] + mn.n[a] * s0[a],
                                  spec.dims()[a]);
    }
    ch.tau.push_back(TauValue::from_phase(p));
  }
  return ch;
}

/// A channel is extreme iff every |tau| = 1 (and it is a channel at all).
inline bool is_extreme(const WeylChannel& ch) {
  for (const TauValue& t : ch.tau)
    if (std::abs(t.abs() - 1.0) > kUnimodularTol) return false;
  return is_cp(tau_to_lambda(ch));
}

/// The unimodular support H = {(m,n) : |tau| = 1} of a CP channel, as a
/// verified subgroup of the index group, together with the exact phase
/// exponents on it (a verified homomorphism into Z_L, L = lcm(dims)).
/// A closure or additivity failure means the table is corrupted, since
/// complete positivity guarantees both; it raises a ValidationError.
inline std::pair<Subgroup, PhaseHom> unimodular_support(const WeylChannel& ch) {
  ChoiSpectrum sp = tau_to_lambda(ch);
  if (!is_cp(sp))
    throw ValidationError("unimodular_support: channel is not CP");

  PairIndexer ix(ch.spec);
  const std::int64_t L = ch.spec.lcm_dim();
  std::vector<std::pair<std::uint64_t, std::int64_t>> found;
  const CyclicProduct& g = ch.spec.index_group();
  for (std::int64_t i = 0; i < ix.size(); ++i) {
    const TauValue& t = ch.tau[static_cast<std::size_t>(i)];
    if (std::abs(t.abs() - 1.0) > kUnimodularTol) continue;
    std::int64_t k;
    if (t.is_exact() && L % t.phase().denominator() == 0) {
      k = t.phase().numerator() * (L / t.phase().denominator());
    } else {
      Complex v = t.value();
      double turns = std::arg(v) / (2.0 * std::numbers::pi);
      k = mod_floor(static_cast<std::int64_t>(std::llround(
                        turns * static_cast<double>(L))),
                    L);
      if (std::abs(v - PhaseExponent::root(k, L).value()) > kUnimodularTol)
        throw ValidationError(
            "unimodular_support: phase is not a root of unity of order " +
            std::to_string(L));
    }
    found.emplace_back(g.pack(ix.to_element(ch.spec, i)), k);
  }
  std::sort(found.begin(), found.end());

  Subgroup h;
  h.group = g;
  PhaseHom phi;
  phi.modulus = L;
  for (auto& [key, k] : found) {
    h.members.push_back(key);
    phi.exponents.push_back(k);
  }
  if (!is_closed_subgroup(h))
    throw ValidationError(
        "unimodular_support: support is not closed under addition");
  verify_phase_hom(h, phi);
  return {std::move(h), std::move(phi)};
}

}  // namespace weylkit
