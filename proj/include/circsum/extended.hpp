#pragma once

// Extended-precision real/complex types for the cases where double runs out
// of digits (F_n - 1 is of order q^{n-1}).

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "circsum/numeric.hpp"

namespace circsum {

using real50 = boost::multiprecision::cpp_bin_float_50;
using complex50 = boost::multiprecision::cpp_complex_50;
using real100 = boost::multiprecision::cpp_bin_float_100;
using complex100 = boost::multiprecision::cpp_complex_100;

template <>
struct complex_of<real50> {
  using type = complex50;
};

template <>
struct complex_of<real100> {
  using type = complex100;
};

}  // namespace circsum
