// Theta values at tau = i in double and 50-digit precision.
#include <iomanip>
#include <iostream>

#include "circsum/extended.hpp"
#include "circsum/theta.hpp"

using namespace circsum;

template <class Real>
void print_row(int digits) {
  using std::pow;
  using std::real;
  const TauPoint<Real> tau(Real(0), Real(1));
  EvalConfig<Real> cfg;
  cfg.tol = Real(10) * pow(Real(10), Real(-digits));
  const complex_t<Real> z(Real(1) / Real(5), Real(0));
  std::cout << std::setprecision(digits);
  for (int k = 1; k <= 4; ++k)
    std::cout << "theta" << k << "(0.2|i) = " << real(theta(theta_kind_from_int(k), z, tau, cfg)) << "\n";
}

int main() {
  print_row<double>(16);
  std::cout << "\n";
  print_row<real50>(48);
}
