#pragma once

#include <vector>

#include "circsum/lattice_sum.hpp"
#include "circsum/numeric.hpp"
#include "circsum/tau.hpp"
#include "circsum/theta.hpp"

namespace circsum {

/// Plain defining series of theta_kind over |n| <= window (n = -window-1 .. window for kinds 1, 2).
template <class Real>
complex_t<Real> oracle_theta(ThetaKind kind, const complex_t<Real>& z, const TauPoint<Real>& tau, long window) {
  using std::exp;
  using C = complex_t<Real>;
  const C i = imag_unit<Real>();
  const C ipt = i * pi<Real>() * tau.tau();
  C s(Real(0), Real(0));
  if (kind == ThetaKind::Three || kind == ThetaKind::Four) {
    for (long n = -window; n <= window; ++n) {
      C t = exp(ipt * Real(n * n) + Real(2 * n) * i * z);
      s += (kind == ThetaKind::Four && n % 2 != 0) ? -t : t;
    }
    return s;
  }
  for (long n = -window - 1; n <= window; ++n) {
    const Real h = Real(n) + Real(1) / Real(2);
    C t = exp(ipt * h * h + Real(2 * n + 1) * i * z);
    s += (kind == ThetaKind::One && n % 2 != 0) ? -t : t;
  }
  return kind == ThetaKind::One ? -i * s : s;
}

/// Box sum over the free indices in [-window, window] with no stopping rule.
template <class Real>
complex_t<Real> oracle_sum(const ConstrainedSumSpec<Real>& spec, const TauPoint<Real>& tau, long window) {
  using std::exp;
  using std::pow;
  using C = complex_t<Real>;
  if (spec.constraint && !spec.constraint->feasible()) return C(Real(0), Real(0));
  const int t = spec.index_count;
  const int free = spec.free_count();
  const C i = imag_unit<Real>();
  const C ipt = i * pi<Real>() * tau.tau();
  std::vector<long> r(free, -window), full(t);
  C s(Real(0), Real(0));
  while (true) {
    long rest = 0;
    for (int j = 0; j < free; ++j) {
      full[j] = r[j];
      rest += r[j];
    }
    if (spec.constraint) full[t - 1] = spec.constraint->value() - rest;
    Real e(0);
    C ph(Real(0), Real(0));
    int sign = 1;
    for (int j = 0; j < t; ++j) {
      e += Real(full[j] * full[j] + spec.linear_q[j] * full[j]);
      for (int l = j + 1; l < t; ++l) e += Real(spec.cross_coupling * full[j] * full[l]);
      if (spec.sign_mask[j] && full[j] % 2 != 0) sign = -sign;
      ph += Real(2 * full[j]) * spec.phase_weights[j];
    }
    C v = exp(ipt * e + i * ph);
    s += sign > 0 ? v : -v;
    int j = 0;
    while (j < free && r[j] == window) r[j++] = -window;
    if (j == free) break;
    ++r[j];
  }
  return spec.scalar_prefactor * spec.constant_phase *
         exp(ipt * Real(spec.q_prefactor_quarter_units) / Real(4)) * s;
}

}  // namespace circsum
