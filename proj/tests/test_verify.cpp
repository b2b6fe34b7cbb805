#include <gtest/gtest.h>

#include <set>

#include "circsum/extended.hpp"
#include "circsum/rng.hpp"
#include "circsum/verify.hpp"

using namespace circsum;

namespace {

IdentityParams luo4(long m) {
  IdentityParams p = default_params(IdentityId::LUO4);
  p.m = m;
  return p;
}

}  // namespace

TEST(Rng, DeterministicAndInRange) {
  Xoshiro256 a(99), b(99), c(100);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs = differs || x != c.next();
    const double u = a.uniform(-2.0, 3.0);
    b.uniform(-2.0, 3.0);
    c.uniform(-2.0, 3.0);
    EXPECT_GE(u, -2.0);
    EXPECT_LT(u, 3.0);
  }
  EXPECT_TRUE(differs);
}

TEST(Verify, PassingIdentity) {
  const auto r = verify<double>(IdentityId::LUO4, luo4(2), 16, 1e-9, 1);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_LT(r.max_rel_residual, 1e-9);
  EXPECT_EQ(r.samples, 16);
}

// Same seed gives byte-identical JSON (runtime excluded) regardless of the thread count.
TEST(Verify, Deterministic) {
  const auto a = report_json(verify<double>(IdentityId::LUO6, default_params(IdentityId::LUO6), 12, 1e-9, 77, 1), false);
  const auto b = report_json(verify<double>(IdentityId::LUO6, default_params(IdentityId::LUO6), 12, 1e-9, 77, 4), false);
  EXPECT_EQ(a.dump(), b.dump());
  const auto c = report_json(verify<double>(IdentityId::LUO6, default_params(IdentityId::LUO6), 12, 1e-9, 78, 1), false);
  EXPECT_NE(a.dump(), c.dump());
}

TEST(Verify, FailuresAreListed) {
  const auto r = verify<double>(IdentityId::LUO4, luo4(1), 5, 1e-40, 3);
  EXPECT_FALSE(r.pass);
  ASSERT_EQ(r.failures.size(), 5u);
  EXPECT_EQ(r.failures[2].index, 2);
  const auto j = report_json(r);
  EXPECT_EQ(j["status"], "fail");
  EXPECT_EQ(j["failures"].size(), 5u);
  EXPECT_TRUE(j.contains("runtime_ms"));
}

TEST(Verify, Errors) {
  IdentityParams bad = luo4(1);
  bad.n = 3;
  bad.b = 2;
  bad.shifts_y.assign(2, 0.0);
  EXPECT_THROW(verify<double>(IdentityId::LUO4, bad, 4, 1e-9, 1), HypothesisError);
  EXPECT_THROW(verify<double>(IdentityId::LUO4, luo4(1), 0, 1e-9, 1), DomainError);
  EXPECT_THROW(verify<double>(IdentityId::LUO4, luo4(1), 4, 0.0, 1), DomainError);
}

TEST(Verify, ReportSchema) {
  const auto j = report_json(verify<double>(IdentityId::LUO9, default_params(IdentityId::LUO9), 2, 1e-9, 5));
  for (const char* key : {"schema_version", "identity_id", "params", "samples", "seed", "tol", "max_abs_residual",
                          "max_rel_residual", "status", "failures", "runtime_ms"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["identity_id"], "LUO9");
  EXPECT_EQ(j["params"]["shifts_x"].size(), 1u);
  EXPECT_EQ(j["params"]["shifts_x"][0].size(), 2u);
}

TEST(Verify, SamplesKeepZeroSum) {
  Xoshiro256 g(8);
  for (int i = 0; i < 50; ++i) {
    const Sample s = draw_sample(g, IdentityId::LUO7, default_params(IdentityId::LUO7));
    EXPECT_NO_THROW(validate(IdentityId::LUO7, s.params));
    EXPECT_GT(s.tau.imag(), 0.0);
  }
}

TEST(Verify, ExtendedPrecision) {
  const auto r = verify<real50>(IdentityId::LUO5, default_params(IdentityId::LUO5), 3, 1e-9, 4);
  EXPECT_TRUE(r.pass);
}

TEST(Suite, CoversBothParityBranches) {
  const auto suite = default_suite();
  for (IdentityId id : {IdentityId::LUO4, IdentityId::LUO6, IdentityId::LUO8, IdentityId::LUO9}) {
    std::set<int> kinds;
    for (const auto& e : suite)
      if (e.id == id) {
        EXPECT_LE(e.params.m * e.params.n, 6);
        kinds.insert(validate(id, e.params).rhs_kind);
      }
    EXPECT_EQ(kinds, (std::set<int>{3, 4})) << to_string(id);
  }
  for (IdentityId id : kAllIdentities) {
    bool present = false;
    for (const auto& e : suite) present = present || e.id == id;
    EXPECT_TRUE(present) << to_string(id);
  }
}

TEST(Suite, SeedsDerivedPerEntry) {
  const std::vector<SuiteEntry> two = {{IdentityId::LUO7, default_params(IdentityId::LUO7)},
                                       {IdentityId::LUO7, default_params(IdentityId::LUO7)}};
  const auto r = run_suite<double>(two, 2, 1e-9, 10);
  EXPECT_NE(r.reports[0].seed, r.reports[1].seed);
  EXPECT_EQ(r.passed, 2);
  EXPECT_EQ(suite_json(r, false)["summary"]["total"], 2);
}

TEST(FnChecks, LeadingTermAndModularRelation) {
  EvalConfig<double> cfg;
  const auto lead = fn_leading_check<double>(3, TauPoint<double>(0.0, 1.5), cfg);
  EXPECT_TRUE(lead.exact_ok);
  EXPECT_LT(lead.deviation, 1e-6);
  for (long n : {2L, 3L})
    for (double im : {1.0, 1.2}) EXPECT_LT(gn_fn_modular_check<double>(n, TauPoint<double>(0.0, im), cfg), 1e-8);
}
