#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "circsum/extended.hpp"
#include "circsum/oracle.hpp"
#include "circsum/rng.hpp"
#include "circsum/theta.hpp"

using namespace circsum;
using C = std::complex<double>;

namespace {

const ThetaKind kKinds[] = {ThetaKind::One, ThetaKind::Two, ThetaKind::Three, ThetaKind::Four};

C th(ThetaKind k, C z, C tau) { return theta<double>(k, z, TauPoint<double>(tau), EvalConfig<double>{}); }

struct Point {
  C z, tau;
};

Point draw(Xoshiro256& g) {
  return {C(g.uniform(-3.0, 3.0), g.uniform(-0.5, 0.5)), C(g.uniform(-0.5, 0.5), g.uniform(0.5, 2.0))};
}

}  // namespace

// theta3(0|i) = pi^{1/4} / Gamma(3/4); theta2(0|i) = theta4(0|i) = 2^{-1/4} theta3(0|i).
TEST(Theta, ClosedFormsAtTauI) {
  const double t3 = std::pow(M_PI, 0.25) / std::tgamma(0.75);
  EXPECT_NEAR(th(ThetaKind::Three, 0.0, C(0, 1)).real(), t3, 1e-14);
  EXPECT_NEAR(th(ThetaKind::Three, 0.0, C(0, 1)).real(), 1.0864348112133080, 1e-14);
  EXPECT_NEAR(th(ThetaKind::Two, 0.0, C(0, 1)).real(), t3 / std::pow(2.0, 0.25), 1e-14);
  EXPECT_NEAR(th(ThetaKind::Four, 0.0, C(0, 1)).real(), t3 / std::pow(2.0, 0.25), 1e-14);
  EXPECT_LT(std::abs(th(ThetaKind::One, 0.0, C(0, 1))), 1e-16);
}

TEST(Theta, FiftyDigitClosedForm) {
  const TauPoint<real50> tau(real50(0), real50(1));
  EvalConfig<real50> cfg;
  cfg.tol = real50("1e-48");
  const real50 expect = pow(pi<real50>(), real50(0.25)) / boost::math::tgamma(real50(3) / 4);
  const complex50 v = theta<real50>(ThetaKind::Three, complex50(0, 0), tau, cfg);
  EXPECT_LT(static_cast<double>(abs(v - complex50(expect, 0))), 1e-46);
}

TEST(Theta, TruncationOrder) {
  EvalConfig<double> cfg;
  EXPECT_EQ(truncation_order<double>(std::exp(-M_PI), 0.0, cfg.with_tol(1e-14)), 4);
  EXPECT_EQ(truncation_order<double>(0.9, 0.0, cfg.with_tol(1e-12)), 17);
  EXPECT_GT(truncation_order<double>(std::exp(-M_PI), 6.0, cfg), truncation_order<double>(std::exp(-M_PI), 0.0, cfg));
}

TEST(Theta, DomainErrors) {
  EXPECT_THROW(TauPoint<double>(0.0, 0.0), DomainError);
  EXPECT_THROW(TauPoint<double>(0.3, -1.0), DomainError);
  EvalConfig<double> cfg;
  // |q| = e^{-pi * 0.01} > 0.95
  EXPECT_THROW(theta<double>(ThetaKind::Three, 0.0, TauPoint<double>(0.0, 0.01), cfg), DomainError);
  cfg.tol = 0;
  EXPECT_THROW(theta<double>(ThetaKind::Three, 0.0, TauPoint<double>(0.0, 1.0), cfg), DomainError);
  EXPECT_THROW(theta_kind_from_int(5), DomainError);
}

TEST(ThetaProperty, MatchesFixedWindowOracle) {
  Xoshiro256 g(11);
  for (int i = 0; i < 100; ++i) {
    const Point p = draw(g);
    for (ThetaKind k : kKinds) {
      const C ref = oracle_theta<double>(k, p.z, TauPoint<double>(p.tau), 40);
      EXPECT_LT(std::abs(th(k, p.z, p.tau) - ref), 1e-12);
    }
  }
}

TEST(ThetaProperty, QuasiPeriodicity) {
  Xoshiro256 g(12);
  EvalConfig<double> cfg;
  for (int i = 0; i < 200; ++i) {
    const Point p = draw(g);
    const TauPoint<double> tau(p.tau);
    const long s = static_cast<long>(g.next() % 5) - 2;
    for (ThetaKind k : kKinds) {
      // z -> z + pi: sign flip for kinds 1 and 2.
      const double sign = (k == ThetaKind::One || k == ThetaKind::Two) ? -1.0 : 1.0;
      EXPECT_LT(std::abs(th(k, p.z + M_PI, p.tau) - sign * th(k, p.z, p.tau)), 1e-11);
      const C lhs = theta<double>(k, p.z + M_PI * p.tau * double(s), tau, cfg);
      const C rhs = quasi_shift_reference<double>(k, p.z, tau, s, cfg);
      EXPECT_LT(std::abs(lhs - rhs), 1e-11 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST(ThetaProperty, HalfPeriodAndParity) {
  Xoshiro256 g(13);
  for (int i = 0; i < 100; ++i) {
    const Point p = draw(g);
    EXPECT_LT(std::abs(th(ThetaKind::One, p.z + M_PI / 2, p.tau) - th(ThetaKind::Two, p.z, p.tau)), 1e-12);
    EXPECT_LT(std::abs(th(ThetaKind::Three, p.z + M_PI / 2, p.tau) - th(ThetaKind::Four, p.z, p.tau)), 1e-12);
    EXPECT_LT(std::abs(th(ThetaKind::One, -p.z, p.tau) + th(ThetaKind::One, p.z, p.tau)), 1e-12);
    for (ThetaKind k : {ThetaKind::Two, ThetaKind::Three, ThetaKind::Four})
      EXPECT_LT(std::abs(th(k, -p.z, p.tau) - th(k, p.z, p.tau)), 1e-12);
  }
}

TEST(ThetaProperty, JacobiQuarticIdentity) {
  Xoshiro256 g(14);
  for (int i = 0; i < 50; ++i) {
    const C tau(g.uniform(-0.5, 0.5), g.uniform(0.4, 2.0));
    const C t2 = th(ThetaKind::Two, 0.0, tau), t3 = th(ThetaKind::Three, 0.0, tau), t4 = th(ThetaKind::Four, 0.0, tau);
    EXPECT_LT(std::abs(std::pow(t3, 4) - std::pow(t2, 4) - std::pow(t4, 4)), 1e-12);
  }
}
