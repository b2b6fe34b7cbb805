#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace circsum {

// Complex type paired with a real type. Specialized for multiprecision reals
// in extended.hpp.
template <class Real, class = void>
struct complex_of {
  using type = std::complex<Real>;
};

template <class Real>
using complex_t = typename complex_of<Real>::type;

template <class Real>
inline Real pi() {
  using std::acos;
  static const Real value = acos(Real(-1));
  return value;
}

template <class Real>
inline complex_t<Real> imag_unit() {
  return complex_t<Real>(Real(0), Real(1));
}

/// i^k for any integer k.
template <class Real>
inline complex_t<Real> i_power(long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return complex_t<Real>(Real(1), Real(0));
    case 1: return complex_t<Real>(Real(0), Real(1));
    case 2: return complex_t<Real>(Real(-1), Real(0));
    default: return complex_t<Real>(Real(0), Real(-1));
  }
}

inline int parity_sign(long k) { return (k % 2 == 0) ? 1 : -1; }

/// Convert between precisions through the decimal-exact route of the target type.
template <class To, class From>
inline complex_t<To> complex_cast(const From& c) {
  using std::imag;
  using std::real;
  return complex_t<To>(To(real(c)), To(imag(c)));
}

}  // namespace circsum
