#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "circsum/errors.hpp"
#include "circsum/numeric.hpp"

namespace circsum {

/// Dense integer polynomial, coefficient of x^k at index k.
using IntPoly = std::vector<long long>;

namespace detail {

inline long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw RingError("integer overflow in cyclotomic arithmetic");
  return r;
}

inline long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw RingError("integer overflow in cyclotomic arithmetic");
  return r;
}

inline void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division by a monic polynomial; throws if the remainder is nonzero.
inline IntPoly exact_divide(IntPoly num, const IntPoly& den) {
  trim(num);
  const std::size_t dd = den.size() - 1;
  if (num.size() < den.size()) {
    if (num.empty()) return {};
    throw RingError("inexact polynomial division");
  }
  IntPoly quot(num.size() - dd, 0);
  for (std::size_t i = num.size(); i-- > dd;) {
    const long long c = num[i];
    if (c == 0) continue;
    quot[i - dd] = c;
    for (std::size_t j = 0; j <= dd; ++j)
      num[i - dd + j] = checked_add(num[i - dd + j], -checked_mul(c, den[j]));
  }
  trim(num);
  if (!num.empty()) throw RingError("inexact polynomial division");
  return quot;
}

}  // namespace detail

/// Phi_M by dividing x^M - 1 by Phi_d for every proper divisor d of M.
inline IntPoly cyclotomic_poly(long M) {
  if (M < 1) throw DomainError("cyclotomic order must be at least 1");
  IntPoly p(M + 1, 0);
  p[0] = -1;
  p[M] = 1;
  for (long d = 1; d < M; ++d)
    if (M % d == 0) p = detail::exact_divide(p, cyclotomic_poly(d));
  return p;
}

/// Element of Z[zeta_M] stored as a reduced residue modulo Phi_M.
struct Cyc {
  std::vector<long long> c;

  bool is_zero() const {
    for (long long v : c)
      if (v != 0) return false;
    return true;
  }
  friend bool operator==(const Cyc&, const Cyc&) = default;
};

/// Z[zeta_M] with zeta_M = e^{2 pi i / M}.
class CycRing {
 public:
  explicit CycRing(long order) : order_(order), modulus_(cyclotomic_poly(order)) {
    degree_ = static_cast<int>(modulus_.size()) - 1;
  }

  long order() const { return order_; }
  int degree() const { return degree_; }
  const IntPoly& modulus() const { return modulus_; }

  Cyc zero() const { return Cyc{std::vector<long long>(degree_, 0)}; }
  Cyc from_int(long long v) const {
    Cyc r = zero();
    r.c[0] = v;
    return r;
  }
  Cyc one() const { return from_int(1); }

  /// zeta_M^k for any integer k.
  Cyc zeta_power(long long k) const {
    long long e = k % order_;
    if (e < 0) e += order_;
    IntPoly p(e + 1, 0);
    p[e] = 1;
    return reduce(std::move(p));
  }

  /// e^{i pi num/den}; exact only when 2 den divides num M.
  Cyc pi_phase(long long num, long long den) const {
    const long long scaled = detail::checked_mul(num, order_);
    if (den == 0 || scaled % (2 * den) != 0) {
      std::ostringstream os;
      os << "phase e^{i pi " << num << "/" << den << "} is not in the ring of order " << order_;
      throw RingError(os.str());
    }
    return zeta_power(scaled / (2 * den));
  }

  Cyc reduce(IntPoly p) const {
    for (std::size_t i = p.size(); i-- > static_cast<std::size_t>(degree_);) {
      const long long c = p[i];
      if (c == 0) continue;
      for (int j = 0; j <= degree_; ++j)
        p[i - degree_ + j] = detail::checked_add(p[i - degree_ + j], -detail::checked_mul(c, modulus_[j]));
    }
    p.resize(degree_, 0);
    return Cyc{std::move(p)};
  }

  Cyc add(const Cyc& a, const Cyc& b) const {
    Cyc r = zero();
    for (int i = 0; i < degree_; ++i) r.c[i] = detail::checked_add(a.c[i], b.c[i]);
    return r;
  }
  Cyc neg(const Cyc& a) const {
    Cyc r = zero();
    for (int i = 0; i < degree_; ++i) r.c[i] = detail::checked_mul(a.c[i], -1);
    return r;
  }
  Cyc sub(const Cyc& a, const Cyc& b) const { return add(a, neg(b)); }
  Cyc scale(const Cyc& a, long long k) const {
    Cyc r = zero();
    for (int i = 0; i < degree_; ++i) r.c[i] = detail::checked_mul(a.c[i], k);
    return r;
  }
  Cyc mul(const Cyc& a, const Cyc& b) const {
    IntPoly p(2 * degree_ > 0 ? 2 * degree_ - 1 : 1, 0);
    for (int i = 0; i < degree_; ++i) {
      if (a.c[i] == 0) continue;
      for (int j = 0; j < degree_; ++j)
        if (b.c[j] != 0) p[i + j] = detail::checked_add(p[i + j], detail::checked_mul(a.c[i], b.c[j]));
    }
    return reduce(std::move(p));
  }

  /// Value under zeta_M -> e^{2 pi i root_index / M}.
  template <class Real>
  complex_t<Real> evaluate(const Cyc& a, long root_index = 1) const {
    using std::cos;
    using std::sin;
    complex_t<Real> s(Real(0), Real(0));
    for (int i = 0; i < degree_; ++i) {
      if (a.c[i] == 0) continue;
      const Real ang = Real(2) * pi<Real>() * Real((static_cast<long long>(i) * root_index) % order_) /
                       Real(order_);
      s += Real(a.c[i]) * complex_t<Real>(cos(ang), sin(ang));
    }
    return s;
  }

  bool operator==(const CycRing& o) const { return order_ == o.order_; }

 private:
  long order_;
  IntPoly modulus_;
  int degree_ = 0;
};

using CycRingPtr = std::shared_ptr<const CycRing>;

inline CycRingPtr make_ring(long order) { return std::make_shared<const CycRing>(order); }

}  // namespace circsum
