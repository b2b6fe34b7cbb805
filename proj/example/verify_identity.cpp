// Randomized check of one circular summation identity, report as JSON.
#include <iostream>

#include "circsum/verify.hpp"

using namespace circsum;

int main() {
  IdentityParams p = default_params(IdentityId::LUO6);
  p.m = 1;
  p.n = 3;
  p.a = 2;
  p.b = 1;
  p.shifts_x = {{0.1, 0.0}, {0.25, 0.05}};
  p.shifts_y = {{-0.35, -0.05}};

  const VerificationReport rep = verify<double>(IdentityId::LUO6, p, 16, 1e-9, 7);
  std::cout << report_json(rep).dump(2) << "\n";
  return rep.pass ? 0 : 1;
}
