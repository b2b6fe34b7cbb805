#pragma once

#include <cmath>
#include <sstream>

#include "circsum/errors.hpp"
#include "circsum/numeric.hpp"
#include "circsum/tau.hpp"

namespace circsum {

enum class ThetaKind : int { One = 1, Two = 2, Three = 3, Four = 4 };

inline ThetaKind theta_kind_from_int(int k) {
  if (k < 1 || k > 4) throw DomainError("theta kind must be 1, 2, 3 or 4");
  return static_cast<ThetaKind>(k);
}

inline int to_int(ThetaKind k) { return static_cast<int>(k); }

/// Smallest N >= 1 with q^{N^2} e^{2N y} < tol/4 and q^{2N+1} e^{2y} < 1/2,
/// where y = |Im z|. Under both conditions the terms beyond the window decay
/// at least geometrically with ratio 1/2, so each discarded tail is below tol.
template <class Real>
int truncation_order(const Real& q_abs, const Real& im_z_abs, const EvalConfig<Real>& cfg) {
  using std::log;
  cfg.validate();
  if (!(q_abs > Real(0))) return 1;
  if (!(q_abs < cfg.q_abs_ceiling)) {
    std::ostringstream os;
    os << "|q| = " << q_abs << " is not below the ceiling " << cfg.q_abs_ceiling;
    throw DomainError(os.str());
  }
  const Real lq = log(q_abs);
  const Real term_bound = log(cfg.tol / Real(4));
  const Real ratio_bound = log(Real(0.5));
  for (int n = 1; n <= cfg.max_terms; ++n) {
    const Real nn(n);
    const bool small = nn * nn * lq + Real(2) * nn * im_z_abs < term_bound;
    const bool decaying = (Real(2) * nn + Real(1)) * lq + Real(2) * im_z_abs < ratio_bound;
    if (small && decaying) return n;
  }
  std::ostringstream os;
  os << "no truncation order <= " << cfg.max_terms << " reaches tol " << cfg.tol
     << " at |q| = " << q_abs << ", |Im z| = " << im_z_abs;
  throw ConvergenceError(os.str());
}

/// Truncated series for the Jacobi theta function of the given kind.
///
///   theta1 = -i q^{1/4} sum (-1)^n q^{n(n+1)} e^{(2n+1)iz}
///   theta2 =    q^{1/4} sum        q^{n(n+1)} e^{(2n+1)iz}
///   theta3 =            sum        q^{n^2}    e^{2niz}
///   theta4 =            sum (-1)^n q^{n^2}    e^{2niz}
///
/// Each term is formed as a single exponential so large |Im z| cannot overflow
/// an intermediate factor.
template <class Real>
complex_t<Real> theta(ThetaKind kind, const complex_t<Real>& z, const TauPoint<Real>& tau,
                      const EvalConfig<Real>& cfg) {
  using std::abs;
  using std::exp;
  using std::imag;
  using C = complex_t<Real>;
  const int N = truncation_order(tau.q_abs(), Real(abs(imag(z))), cfg);
  const C lq = tau.log_q();
  const C iz = imag_unit<Real>() * z;
  C sum(Real(0), Real(0));
  switch (kind) {
    case ThetaKind::One:
    case ThetaKind::Two: {
      const bool alternate = kind == ThetaKind::One;
      for (long n = -N - 1; n <= N; ++n) {
        C t = exp(lq * Real(n * (n + 1)) + iz * Real(2 * n + 1));
        if (alternate && (n % 2 != 0)) t = -t;
        sum += t;
      }
      C pre = tau.qpow(Real(0.25));
      if (alternate) pre *= C(Real(0), Real(-1));
      return pre * sum;
    }
    case ThetaKind::Three:
    case ThetaKind::Four: {
      const bool alternate = kind == ThetaKind::Four;
      for (long n = -N; n <= N; ++n) {
        C t = exp(lq * Real(n * n) + iz * Real(2 * n));
        if (alternate && (n % 2 != 0)) t = -t;
        sum += t;
      }
      return sum;
    }
  }
  throw DomainError("unknown theta kind");
}

/// Right-hand side of theta_k(z + n pi tau | tau) = (+-1)^n q^{-n^2} e^{-2niz} theta_k(z | tau);
/// the sign alternates for kinds 1 and 4.
template <class Real>
complex_t<Real> quasi_shift_reference(ThetaKind kind, const complex_t<Real>& z,
                                      const TauPoint<Real>& tau, long n_shift,
                                      const EvalConfig<Real>& cfg) {
  using std::exp;
  using C = complex_t<Real>;
  C factor = exp(-tau.log_q() * Real(n_shift * n_shift) -
                 imag_unit<Real>() * z * Real(2 * n_shift));
  if ((kind == ThetaKind::One || kind == ThetaKind::Four) && (n_shift % 2 != 0)) factor = -factor;
  return factor * theta(kind, z, tau, cfg);
}

}  // namespace circsum
