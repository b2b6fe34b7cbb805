#pragma once

#include <boost/rational.hpp>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include "circsum/catalog.hpp"
#include "circsum/errors.hpp"
#include "circsum/lattice_sum.hpp"
#include "circsum/qseries.hpp"

namespace circsum {

/// Rational multiple of pi.
using PiRational = boost::rational<long long>;

/// Shifts for the exact engine, each x = (p/d) pi.
struct ExactParams {
  long m = 1;
  long n = 2;
  long a = 1;
  long b = 1;
  std::vector<PiRational> shifts_x;
  std::vector<PiRational> shifts_y;
};

struct SeriesCheckResult {
  bool pass = false;
  std::optional<long> first_failure;  // quarter units
  long ring_order = 0;
  long order = 0;
};

inline constexpr long kMaxRingOrder = 720;

namespace detail {

inline Cyc pi_phase(const CycRing& ring, const PiRational& r) { return ring.pi_phase(r.numerator(), r.denominator()); }

// Collapses w to 1, i.e. the z = 0 slice.
inline QSeries w_free(const QSeries& s) {
  QSeries r = series_zero(s.ring, s.order);
  for (const auto& [e, poly] : s.terms)
    for (const auto& [k, c] : poly) add_term(r, e, 0, c);
  return r;
}

inline QSeries theta_at(ThetaKind kind, const PiRational& shift, long scale_z, long scale_tau_quarter, long K,
                        const CycRingPtr& ring) {
  return theta_qseries(kind, shift.numerator(), shift.denominator(), scale_z, scale_tau_quarter, K, ring);
}

}  // namespace detail

/// Exact expansion of a constrained lattice sum with phase weights w_i = weights[i] pi,
/// evaluated at tau_scale * tau. The result is w-free.
inline QSeries lattice_qseries(const SumShape& shape, const std::vector<PiRational>& weights, long tau_scale, long K,
                               const CycRingPtr& ring) {
  if (static_cast<int>(weights.size()) != shape.index_count)
    throw DomainError("phase weight count does not match the index count");
  const CycRing& R = *ring;
  QSeries s = series_zero(ring, K);
  if (shape.constraint && !shape.constraint->feasible()) return s;

  PiRational constant(0);
  for (int i = 0; i < shape.index_count; ++i)
    if (shape.constant_phase_mask[i]) constant += weights[i];
  Cyc prefactor = R.mul(detail::pi_phase(R, constant), R.pi_phase(shape.scalar_i_power, 2));
  prefactor = R.scale(prefactor, shape.scalar_integer);
  const long q_pre = shape.q_prefactor_quarter_units * tau_scale;

  const int t = shape.index_count;
  const int free = shape.free_count();
  const long fixed = shape.constraint ? shape.constraint->value() : 0;
  long lin_abs = std::abs(fixed);
  for (int v : shape.linear_q) lin_abs += std::abs(v);
  const long settle = 2 + lin_abs;

  std::vector<long> full(t), r;
  int quiet = 0;
  for (long radius = 0; radius <= 10000; ++radius) {
    long ring_min = std::numeric_limits<long>::max();
    detail::for_each_on_ring(free, radius, r, [&](const std::vector<long>& v) {
      long rest = 0;
      for (int i = 0; i < free; ++i) {
        full[i] = v[i];
        rest += v[i];
      }
      if (shape.constraint) full[t - 1] = fixed - rest;
      long quad = 0, lin = 0, sign = 0, cross = 0, partial = 0;
      PiRational phase(0);
      for (int i = 0; i < t; ++i) {
        const long x = full[i];
        quad += x * x;
        lin += shape.linear_q[i] * x;
        if (shape.sign_mask[i]) sign += x;
        cross += partial * x;
        partial += x;
        if (x != 0) phase += weights[i] * PiRational(2 * x);
      }
      const long e = q_pre + 4 * tau_scale * (quad + shape.cross_coupling * cross + lin);
      ring_min = std::min(ring_min, e);
      if (e > K) return;
      Cyc c = R.mul(prefactor, detail::pi_phase(R, phase));
      if (sign % 2 != 0) c = R.neg(c);
      detail::add_term(s, e, 0, c);
    });
    if (free == 0) break;
    if (radius >= settle && ring_min > K) {
      if (++quiet == 2) break;
    } else {
      quiet = 0;
    }
  }
  return s;
}

/// Ring order lcm(4, 2mn, 2 * every shift denominator).
inline long required_ring_order(long mn, const std::vector<PiRational>& shifts) {
  long M = std::lcm(4L, 2 * mn);
  for (const auto& r : shifts) M = std::lcm(M, 2 * static_cast<long>(r.denominator()));
  return M;
}

namespace detail {

inline std::vector<std::complex<double>> to_complex(const std::vector<PiRational>& v) {
  std::vector<std::complex<double>> r;
  for (const auto& x : v)
    r.emplace_back(std::acos(-1.0) * static_cast<double>(x.numerator()) / static_cast<double>(x.denominator()), 0.0);
  return r;
}

}  // namespace detail

/// Builds both sides as exact series and compares them through K quarter units.
inline SeriesCheckResult identity_series_check(IdentityId id, const ExactParams& ep, long K) {
  const IdentityShape shape = identity_shape(id);
  if (shape != IdentityShape::Mixed && shape != IdentityShape::SingleProduct && shape != IdentityShape::Boon) {
    std::ostringstream os;
    os << to_string(id) << " has no exact series route (its parameters are not rational multiples of pi)";
    throw DomainError(os.str());
  }
  PiRational total(0);
  for (const auto* v : {&ep.shifts_x, &ep.shifts_y})
    for (const auto& r : *v) total += r;
  if (total != PiRational(0)) throw HypothesisError("shifts must sum to zero");

  IdentityParams p = default_params(id);
  p.m = ep.m;
  p.n = ep.n;
  p.a = ep.a;
  p.b = ep.b;
  p.shifts_x = detail::to_complex(ep.shifts_x);
  p.shifts_y = detail::to_complex(ep.shifts_y);
  // The rational sum is exactly zero; clear rounding in the double copy.
  if (!p.shifts_y.empty() || !p.shifts_x.empty()) {
    std::complex<double> s(0.0, 0.0);
    for (const auto& c : p.shifts_x) s += c;
    for (const auto& c : p.shifts_y) s += c;
    if (!p.shifts_y.empty()) p.shifts_y.back() -= s;
    else p.shifts_x.back() -= s;
  }
  const IdentityInstance inst = validate(id, p);

  const long m = ep.m, n = ep.n, mn = shape == IdentityShape::Boon ? n : m * n;
  std::vector<PiRational> all = ep.shifts_x;
  all.insert(all.end(), ep.shifts_y.begin(), ep.shifts_y.end());
  std::vector<PiRational> ring_shifts = all;
  for (const auto& x : all) ring_shifts.push_back(x * PiRational(2));
  const long M = required_ring_order(mn, ring_shifts);
  if (M > kMaxRingOrder) {
    std::ostringstream os;
    os << "identity needs cyclotomic ring order " << M << ", above the limit " << kMaxRingOrder;
    throw RingError(os.str());
  }
  const CycRingPtr ring = make_ring(M);
  const auto [first, second] = factor_kinds(id);
  // Coefficients may start below q^0 (prefactors such as q^{-n/4}); build the right side deeper.
  const long KR = K + 4 * (n + 4);

  // Left side.
  QSeries lhs = series_zero(ring, K);
  for (long k = 0; k < mn; ++k) {
    const PiRational step(k, mn);
    QSeries prod = series_one(ring, K);
    if (shape == IdentityShape::Boon) {
      prod = detail::theta_at(ThetaKind::Three, step, 1, 4, K, ring);
    } else {
      for (const auto& x : ep.shifts_x) prod = series_mul(prod, detail::theta_at(first, x + step, 1, 4, K, ring));
      for (const auto& y : ep.shifts_y) prod = series_mul(prod, detail::theta_at(second, y + step, 1, 4, K, ring));
    }
    lhs = series_add(lhs, prod);
  }

  // Right side.
  QSeries coeff = series_zero(ring, KR);
  QSeries rhs_theta;
  if (shape == IdentityShape::Boon) {
    coeff = series_monomial(ring, KR, 0, 0, ring->from_int(n));
    rhs_theta = theta_qseries(ThetaKind::Three, 0, 1, n, 4 * n * n, KR, ring);
  } else {
    rhs_theta = theta_qseries(theta_kind_from_int(inst.rhs_kind), 0, 1, mn, 4 * m * mn, KR, ring);
    if (auto pre = app_preset(id)) {
      if (pre->cubic == RFamily::R12) {
        QSeries t1 = detail::w_free(detail::theta_at(ThetaKind::One, ep.shifts_x[0] * PiRational(2), 1, 8, KR, ring));
        coeff = series_shift(series_scale(t1, ring->from_int(-2 * m)), 1, 0);
      } else {
        PiRational u1, u2;
        if (pre->cubic == RFamily::CubicA) {
          u1 = ep.shifts_y[0] - ep.shifts_y[2];
          u2 = ep.shifts_y[1] - ep.shifts_y[2];
        } else if (pre->a == 2) {
          u1 = ep.shifts_x[0] - ep.shifts_y[0];
          u2 = ep.shifts_x[1] - ep.shifts_y[0];
        } else {
          u1 = ep.shifts_y[0] - ep.shifts_x[0];
          u2 = ep.shifts_y[1] - ep.shifts_x[0];
        }
        coeff = lattice_qseries(cubic_shape(pre->cubic), {u1, u2}, 2, KR, ring);
        coeff = series_scale(coeff, ring->from_int(pre->sign * 3 * m));
        if (pre->cubic == RFamily::CubicC || pre->cubic == RFamily::CubicD) coeff = series_shift(coeff, 6, 0);
      }
    } else if (shape == IdentityShape::Mixed) {
      coeff = lattice_qseries(mixed_shape(coefficient_family(id), m, n, ep.a, ep.b), all, 1, KR, ring);
    } else {
      const RFamily fam = coefficient_family(id);
      std::vector<PiRational> w = ep.shifts_y;
      if (fam == RFamily::R1 || fam == RFamily::R2)
        for (auto& v : w) v = -v;
      const SumShape sh = fam == RFamily::Gmn ? g_shape(m, n) : single_shape(fam, m, n);
      coeff = lattice_qseries(sh, w, 1, KR, ring);
    }
  }
  QSeries rhs = series_mul(coeff, rhs_theta);

  SeriesCheckResult res;
  res.ring_order = M;
  res.order = K;
  if (rhs.order < K) {
    std::ostringstream os;
    os << "right side known only through " << rhs.order << " quarter units";
    throw ConvergenceError(os.str());
  }
  res.first_failure = first_difference(lhs, rhs, K);
  res.pass = !res.first_failure.has_value();
  return res;
}

}  // namespace circsum
