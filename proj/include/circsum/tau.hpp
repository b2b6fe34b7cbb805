#pragma once

#include <sstream>

#include "circsum/errors.hpp"
#include "circsum/numeric.hpp"

namespace circsum {

/// Point tau of the upper half plane and its nome q = e^{i pi tau}.
///
/// Every fractional power q^alpha is taken to mean e^{alpha pi i tau}; roots of
/// a complex q are never formed, so q^{1/4}, q^{-n/4}, ... carry no branch choice.
template <class Real>
class TauPoint {
 public:
  using complex_type = complex_t<Real>;

  explicit TauPoint(const complex_type& tau) : tau_(tau) {
    using std::exp;
    using std::imag;
    if (!(imag(tau) > Real(0))) {
      std::ostringstream os;
      os << "Im(tau) must be positive, got " << imag(tau);
      throw DomainError(os.str());
    }
    q_abs_ = exp(-pi<Real>() * imag(tau));
  }

  TauPoint(const Real& re, const Real& im) : TauPoint(complex_type(re, im)) {}

  const complex_type& tau() const noexcept { return tau_; }
  const Real& q_abs() const noexcept { return q_abs_; }

  /// q^alpha := e^{alpha pi i tau}.
  complex_type qpow(const Real& alpha) const {
    using std::exp;
    return exp(log_q() * alpha);
  }

  /// log q = i pi tau (the branch used for every power of q).
  complex_type log_q() const { return imag_unit<Real>() * pi<Real>() * tau_; }

  complex_type nome() const { return qpow(Real(1)); }

  /// tau scaled by a positive rational factor num/den.
  TauPoint scaled(long num, long den = 1) const {
    return TauPoint(tau_ * Real(num) / Real(den));
  }

 private:
  complex_type tau_;
  Real q_abs_;
};

/// Tolerance and resource limits shared by every numeric evaluator.
template <class Real>
struct EvalConfig {
  Real tol = Real(1e-12);      // absolute truncation error target
  int max_terms = 400;         // cap on truncation order / enumeration shells
  Real q_abs_ceiling = Real(0.95);

  void validate() const {
    if (!(tol > Real(0))) throw DomainError("EvalConfig.tol must be positive");
    if (max_terms < 8) throw DomainError("EvalConfig.max_terms must be at least 8");
    if (!(q_abs_ceiling > Real(0) && q_abs_ceiling < Real(1)))
      throw DomainError("EvalConfig.q_abs_ceiling must lie in (0,1)");
  }

  EvalConfig with_tol(const Real& t) const {
    EvalConfig c = *this;
    c.tol = t;
    return c;
  }
};

}  // namespace circsum
