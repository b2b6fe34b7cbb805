#pragma once

#include <sstream>
#include <vector>

#include "circsum/errors.hpp"
#include "circsum/qseries.hpp"

namespace circsum {

namespace detail {

// theta3(z + k pi tau | n tau) = sum_j q^{n j^2 + 2 j k} w^{2j}, in quarter units.
inline QSeries shifted_theta3(const CycRingPtr& ring, long n, long k, long order) {
  QSeries s = series_zero(ring, order);
  const Cyc one = ring->one();
  for (long j = 0;; ++j) {
    bool any = false;
    for (long sgn : {1L, -1L}) {
      if (j == 0 && sgn < 0) continue;
      const long jj = sgn * j;
      const long e = 4 * (n * jj * jj + 2 * jj * k);
      if (e <= order) {
        any = true;
        add_term(s, e, 2 * jj, one);
      }
    }
    if (!any && j > 0 && 4 * (n * j * j - 2 * j * k) > order) break;
  }
  return s;
}

}  // namespace detail

/// Integer q-coefficients of F_n(tau) through q^{floor(K/4)} (K in quarter units),
/// from sum_{k<n} q^{k^2} w^{2k} theta3^n(z + k pi tau | n tau) = theta3(z|tau) F_n(tau).
/// Throws TheoremViolation if the quotient depends on w.
inline std::vector<long long> fn_series(long n, long K) {
  if (n < 2) throw DomainError("fn_series needs n >= 2");
  if (K < 0) throw DomainError("truncation order must be non-negative");
  const CycRingPtr ring = make_ring(1);
  // Factors can start at negative q-powers (j = -1 with 2k > n); pad so the product still reaches K.
  long pad = 0;
  for (long k = 0; k < n; ++k) pad = std::max(pad, 4 * (2 * k - n));
  const long base_order = K + n * pad + 8;

  QSeries lhs = series_zero(ring, base_order);
  bool first = true;
  for (long k = 0; k < n; ++k) {
    QSeries term = series_pow(detail::shifted_theta3(ring, n, k, base_order), n);
    term = series_shift(term, 4 * k * k, 2 * k);
    lhs = first ? term : series_add(lhs, term);
    first = false;
  }
  if (lhs.order < K) {
    std::ostringstream os;
    os << "internal padding too small for F_" << n << " at order " << K;
    throw ConvergenceError(os.str());
  }
  const QSeries t3 = theta_qseries(ThetaKind::Three, 0, 1, 1, 4, base_order, ring);
  const QSeries quotient = series_div_unit(lhs, t3, K);

  std::vector<long long> coeffs(K / 4 + 1, 0);
  for (const auto& [e, poly] : quotient.terms) {
    for (const auto& [w, c] : poly) {
      if (w != 0 || e % 4 != 0 || e < 0) {
        std::ostringstream os;
        os << "F_" << n << " quotient has a term q^{" << e << "/4} w^" << w
           << "; the circular sum is not theta3(z|tau) times a z-free series";
        throw TheoremViolation(os.str());
      }
      coeffs[e / 4] = c.c[0];
    }
  }
  return coeffs;
}

}  // namespace circsum
