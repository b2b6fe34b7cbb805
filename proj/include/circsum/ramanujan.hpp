#pragma once

#include <cmath>
#include <sstream>

#include "circsum/errors.hpp"
#include "circsum/tau.hpp"

namespace circsum {

namespace detail {

// x^e for x >= 0 with 0^0 = 1.
template <class Real>
Real power_or_one(const Real& x, const Real& e) {
  using std::pow;
  if (x == Real(0)) return e == Real(0) ? Real(1) : Real(0);
  return pow(x, e);
}

// Sums exp(log_term(j)) over all integers j, walking outward from 0 in both
// directions. log_term must be concave quadratic in j, so once the step ratio
// drops below 1/2 it stays there and the tail is dominated by a geometric series.
template <class Real, class LogTerm>
Real concave_two_sided_sum(const LogTerm& log_term, const Real& tol, int max_terms) {
  using std::exp;
  using std::log;
  const Real small = log(tol / Real(4));
  const Real half = log(Real(0.5));
  Real total = exp(log_term(0));
  for (int dir : {1, -1}) {
    bool done = false;
    for (long j = dir; std::abs(j) <= max_terms; j += dir) {
      const Real lt = log_term(j);
      total += exp(lt);
      if (lt < small && log_term(j + dir) - lt < half) {
        done = true;
        break;
      }
    }
    if (!done) throw ConvergenceError("theta-type series did not converge within max_terms");
  }
  return total;
}

template <class Real>
void check_ramanujan_domain(const Real& a, const Real& b) {
  if (a < Real(0) || b < Real(0)) throw DomainError("f(a,b) is restricted to a >= 0, b >= 0");
  if (!(a * b < Real(1))) {
    std::ostringstream os;
    os << "f(a,b) requires ab < 1, got ab = " << a * b;
    throw DomainError(os.str());
  }
}

// sum over k = r (mod n) of a^{k(k+1)/(2n)} b^{k(k-1)/(2n)}
template <class Real>
Real residue_class_sum(const Real& a, const Real& b, long n, long r, const Real& tol,
                       int max_terms) {
  using std::log;
  const Real two_n = Real(2 * n);
  if (a == Real(0) || b == Real(0)) {
    // Only |k| <= 1 can avoid a positive power of the zero base.
    Real s(0);
    for (long k = -1; k <= 1; ++k) {
      if (((k - r) % n + n) % n != 0) continue;
      s += power_or_one(a, Real(k * (k + 1)) / two_n) * power_or_one(b, Real(k * (k - 1)) / two_n);
    }
    return s;
  }
  const Real la = log(a);
  const Real lb = log(b);
  auto log_term = [&](long j) {
    const Real k = Real(r + n * j);
    return (k * (k + Real(1)) * la + k * (k - Real(1)) * lb) / two_n;
  };
  return concave_two_sided_sum<Real>(log_term, tol, max_terms);
}

}  // namespace detail

/// Ramanujan's theta function f(a,b) = sum a^{n(n+1)/2} b^{n(n-1)/2}, for real a, b >= 0, ab < 1.
template <class Real>
Real ramanujan_f(const Real& a, const Real& b, const EvalConfig<Real>& cfg) {
  cfg.validate();
  detail::check_ramanujan_domain(a, b);
  return detail::residue_class_sum(a, b, 1, 0, cfg.tol, cfg.max_terms);
}

/// Left side of the circular summation in f(a,b) form:
///   sum_{-n/2 < r <= n/2} ( sum_{k = r mod n} a^{k(k+1)/(2n)} b^{k(k-1)/(2n)} )^n.
/// Inner sums are refined until the n-th powers carry at most tol/2 total error.
template <class Real>
Real ramanujan_lhs(const Real& a, const Real& b, long n, const EvalConfig<Real>& cfg) {
  using std::abs;
  using std::pow;
  cfg.validate();
  if (n < 1) throw DomainError("ramanujan_lhs requires n >= 1");
  detail::check_ramanujan_domain(a, b);
  const long r_lo = -(n / 2) + (n % 2 == 0 ? 1 : 0);
  const long r_hi = n / 2;
  Real total(0);
  for (long r = r_lo; r <= r_hi; ++r) {
    const Real rough = detail::residue_class_sum(a, b, n, r, cfg.tol, cfg.max_terms);
    const Real bound = pow(abs(rough) + Real(1), Real(n - 1));
    const Real inner_tol = cfg.tol / (Real(2 * n * n) * bound);
    const Real s = detail::residue_class_sum(a, b, n, r, inner_tol, cfg.max_terms);
    total += pow(s, Real(n));
  }
  return total;
}

}  // namespace circsum
