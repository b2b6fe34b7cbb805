// Exact q-expansion of F_n: prints coefficients of q^0 .. q^12 for n = 2..6.
#include <iostream>

#include "circsum/fn_series.hpp"

int main() {
  for (long n = 2; n <= 6; ++n) {
    const auto c = circsum::fn_series(n, 4 * 12);
    std::cout << "F_" << n << ":";
    for (long long v : c) std::cout << " " << v;
    std::cout << "\n";
  }
}
