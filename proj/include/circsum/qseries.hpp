#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "circsum/cyclotomic.hpp"
#include "circsum/errors.hpp"
#include "circsum/tau.hpp"
#include "circsum/theta.hpp"

namespace circsum {

/// Finite Laurent polynomial in w = e^{iz}; zero coefficients are never stored.
using WLaurent = std::map<long, Cyc>;

/// Truncated series in q^{1/4}. Keys are exponents in quarter units; every
/// exponent <= order is known, everything above is unknown.
struct QSeries {
  CycRingPtr ring;
  long order = 0;
  std::map<long, WLaurent> terms;

  /// Lowest stored exponent, or order + 1 for an empty series.
  long lowest() const { return terms.empty() ? order + 1 : terms.begin()->first; }
};

namespace detail {

inline void require_same_ring(const QSeries& a, const QSeries& b) {
  if (!a.ring || !b.ring || !(*a.ring == *b.ring)) throw RingError("series live in different rings");
}

inline void add_term(const CycRing& ring, WLaurent& poly, long w_exp, const Cyc& c) {
  if (c.is_zero()) return;
  auto it = poly.find(w_exp);
  if (it == poly.end()) {
    poly.emplace(w_exp, c);
    return;
  }
  it->second = ring.add(it->second, c);
  if (it->second.is_zero()) poly.erase(it);
}

inline void add_term(QSeries& s, long q_exp, long w_exp, const Cyc& c) {
  if (q_exp > s.order || c.is_zero()) return;
  WLaurent& poly = s.terms[q_exp];
  add_term(*s.ring, poly, w_exp, c);
  if (poly.empty()) s.terms.erase(q_exp);
}

}  // namespace detail

inline QSeries series_zero(CycRingPtr ring, long order) { return QSeries{std::move(ring), order, {}}; }

inline QSeries series_monomial(CycRingPtr ring, long order, long q_exp, long w_exp, const Cyc& c) {
  QSeries s = series_zero(std::move(ring), order);
  detail::add_term(s, q_exp, w_exp, c);
  return s;
}

inline QSeries series_one(CycRingPtr ring, long order) {
  const Cyc one = ring->one();
  return series_monomial(std::move(ring), order, 0, 0, one);
}

/// Exact expansion of theta_kind(scale_z z + pi shift_num/shift_den | (scale_tau_quarter/4) tau).
inline QSeries theta_qseries(ThetaKind kind, long shift_num, long shift_den, long scale_z,
                             long scale_tau_quarter, long K, const CycRingPtr& ring) {
  if (shift_den < 1) throw DomainError("shift denominator must be positive");
  if (scale_z < 1 || scale_tau_quarter < 1) throw DomainError("scales must be positive");
  const long M = ring->order();
  if (M % 4 != 0 && kind == ThetaKind::One) throw RingError("theta1 needs i in the ring (order divisible by 4)");
  const bool half = kind == ThetaKind::One || kind == ThetaKind::Two;
  if (half && scale_tau_quarter % 4 != 0)
    throw DomainError("theta1/theta2 need an integral tau scale on the quarter grid");
  QSeries s = series_zero(ring, K);
  if (K < 0) return s;
  for (long n = 0;; ++n) {
    bool any = false;
    for (long sgn : {1L, -1L}) {
      if (n == 0 && sgn == -1 && !half) continue;
      // For the half-integer kinds index j runs over all integers via j = n and j = -n-1.
      const long j = half ? (sgn == 1 ? n : -n - 1) : sgn * n;
      const long q_exp = half ? scale_tau_quarter * (2 * j + 1) * (2 * j + 1) / 4 : scale_tau_quarter * j * j;
      if (q_exp > K) continue;
      any = true;
      const long w_mult = half ? 2 * j + 1 : 2 * j;
      // e^{i w_mult pi shift_num/shift_den}
      Cyc c = ring->pi_phase(w_mult * shift_num, shift_den);
      if ((kind == ThetaKind::One || kind == ThetaKind::Four) && (j % 2 != 0)) c = ring->neg(c);
      if (kind == ThetaKind::One) c = ring->mul(c, ring->zeta_power(3 * M / 4));
      detail::add_term(s, q_exp, w_mult * scale_z, c);
    }
    if (!any && n > 0) break;
  }
  return s;
}

inline QSeries series_add(const QSeries& a, const QSeries& b) {
  detail::require_same_ring(a, b);
  QSeries r = series_zero(a.ring, std::min(a.order, b.order));
  for (const auto* s : {&a, &b})
    for (const auto& [e, poly] : s->terms)
      for (const auto& [k, c] : poly) detail::add_term(r, e, k, c);
  return r;
}

inline QSeries series_scale(const QSeries& a, const Cyc& c) {
  QSeries r = series_zero(a.ring, a.order);
  for (const auto& [e, poly] : a.terms)
    for (const auto& [k, v] : poly) detail::add_term(r, e, k, a.ring->mul(v, c));
  return r;
}

inline QSeries series_neg(const QSeries& a) { return series_scale(a, a.ring->from_int(-1)); }

inline QSeries series_sub(const QSeries& a, const QSeries& b) { return series_add(a, series_neg(b)); }

/// Multiplies by q^{q_shift/4} w^{w_shift}; the known range moves with it.
inline QSeries series_shift(const QSeries& a, long q_shift, long w_shift) {
  QSeries r = series_zero(a.ring, a.order + q_shift);
  for (const auto& [e, poly] : a.terms)
    for (const auto& [k, v] : poly) detail::add_term(r, e + q_shift, k + w_shift, v);
  return r;
}

inline QSeries series_mul(const QSeries& a, const QSeries& b) {
  detail::require_same_ring(a, b);
  const CycRing& ring = *a.ring;
  const long order = std::min(a.order + b.lowest(), b.order + a.lowest());
  QSeries r = series_zero(a.ring, order);
  for (const auto& [ea, pa] : a.terms) {
    for (const auto& [eb, pb] : b.terms) {
      if (ea + eb > order) break;
      WLaurent& out = r.terms[ea + eb];
      for (const auto& [ka, ca] : pa)
        for (const auto& [kb, cb] : pb) detail::add_term(ring, out, ka + kb, ring.mul(ca, cb));
      if (out.empty()) r.terms.erase(ea + eb);
    }
  }
  return r;
}

inline QSeries series_pow(const QSeries& a, long n) {
  if (n < 0) throw DomainError("negative series power");
  QSeries r = series_one(a.ring, a.order);
  QSeries base = a;
  while (n > 0) {
    if (n & 1) r = series_mul(r, base);
    n >>= 1;
    if (n > 0) base = series_mul(base, base);
  }
  return r;
}

/// f with f * den = num through min(K, achievable order); den must start with 1 at q^0 w^0.
inline QSeries series_div_unit(const QSeries& num, const QSeries& den, long K) {
  detail::require_same_ring(num, den);
  const CycRing& ring = *num.ring;
  auto lead = den.terms.find(0);
  if (den.lowest() != 0 || lead == den.terms.end() || lead->second.size() != 1 ||
      lead->second.begin()->first != 0 || !(lead->second.begin()->second == ring.one()))
    throw RingError("denominator is not a unit (leading term must be 1 at q^0 w^0)");
  const long low = num.lowest();
  const long order = std::min({K, num.order, den.order + low});
  QSeries f = series_zero(num.ring, order);
  if (num.terms.empty()) return f;
  for (long e = low; e <= order; ++e) {
    WLaurent acc;
    if (auto it = num.terms.find(e); it != num.terms.end()) acc = it->second;
    for (const auto& [d, pd] : den.terms) {
      if (d == 0) continue;
      if (e - d < low) break;
      auto fi = f.terms.find(e - d);
      if (fi == f.terms.end()) continue;
      for (const auto& [kd, cd] : pd)
        for (const auto& [kf, cf] : fi->second) detail::add_term(ring, acc, kd + kf, ring.neg(ring.mul(cd, cf)));
    }
    if (!acc.empty()) f.terms.emplace(e, std::move(acc));
  }
  return f;
}

/// First exponent <= K where a and b differ, if any.
inline std::optional<long> first_difference(const QSeries& a, const QSeries& b, long K) {
  const QSeries d = series_sub(a, b);
  if (d.order < K) {
    std::ostringstream os;
    os << "series known only through " << d.order << " quarter units, " << K << " requested";
    throw ConvergenceError(os.str());
  }
  for (const auto& [e, poly] : d.terms)
    if (e <= K && !poly.empty()) return e;
  return std::nullopt;
}

/// Sums the stored terms at numeric q, w and zeta_M = e^{2 pi i / M}.
template <class Real>
complex_t<Real> evaluate_series(const QSeries& s, const TauPoint<Real>& tau, const complex_t<Real>& z) {
  using std::exp;
  complex_t<Real> sum(Real(0), Real(0));
  const complex_t<Real> iz = imag_unit<Real>() * z;
  for (const auto& [e, poly] : s.terms) {
    for (const auto& [k, c] : poly) {
      sum += s.ring->template evaluate<Real>(c) * exp(tau.log_q() * (Real(e) / Real(4)) + iz * Real(k));
    }
  }
  return sum;
}

}  // namespace circsum
