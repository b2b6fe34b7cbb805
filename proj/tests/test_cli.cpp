#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "circsum/cli.hpp"
#include "circsum/complex_literal.hpp"

using namespace circsum;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "circsum_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(ComplexLiteral, Accepted) {
  using C = std::complex<double>;
  EXPECT_EQ(parse_complex("1"), C(1, 0));
  EXPECT_EQ(parse_complex("2i"), C(0, 2));
  EXPECT_EQ(parse_complex("i"), C(0, 1));
  EXPECT_EQ(parse_complex("-i"), C(0, -1));
  EXPECT_EQ(parse_complex("1.5-2.5i"), C(1.5, -2.5));
  EXPECT_EQ(parse_complex("0.1+1.2i"), C(0.1, 1.2));
  EXPECT_EQ(parse_complex("1e-3+2e2i"), C(1e-3, 2e2));
  EXPECT_EQ(parse_complex("-2.5e-3i"), C(0, -2.5e-3));
  EXPECT_EQ(parse_complex_list("0.1,-0.1+0.2i").size(), 2u);
  EXPECT_TRUE(parse_complex_list("").empty());
}

TEST(ComplexLiteral, Rejected) {
  EXPECT_THROW(parse_complex(""), DomainError);
  for (const char* s : {"abc", "1+", "1+2j", "1 + 2i", "++1", "1+2ii", "0.1,"})
    EXPECT_THROW(parse_complex_list(s), DomainError) << s;
}

TEST(Cli, EvalTheta) {
  const auto r = run_cli({"eval-theta", "--kind", "3", "--z", "0", "--tau", "1i"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("1.08643481121330", 0), 0u) << r.out;
}

TEST(Cli, EvalThetaExtendedPrecision) {
  setenv("THETA_PRECISION", "40", 1);
  const auto r = run_cli({"eval-theta", "--kind", "3", "--z", "0", "--tau", "1i", "--tol", "1e-40"});
  unsetenv("THETA_PRECISION");
  EXPECT_EQ(r.code, 0);
  // pi^{1/4} / Gamma(3/4)
  EXPECT_EQ(r.out.rfind("1.0864348112133080145753161215102234570", 0), 0u) << r.out;
}

TEST(Cli, BadPrecisionEnv) {
  setenv("THETA_PRECISION", "8", 1);
  const auto r = run_cli({"eval-theta", "--kind", "3", "--z", "0", "--tau", "1i"});
  unsetenv("THETA_PRECISION");
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, FnSeries) {
  const auto r = run_cli({"fn-series", "--n", "3", "--order", "6"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1 0 6 0 0 0 6\n");
}

TEST(Cli, EvalCoeffInfeasible) {
  const auto r = run_cli({"eval-coeff", "--family", "R12", "--m", "1", "--n", "3", "--a", "2", "--b", "1", "--shifts",
                          "0.1,0.2,-0.3", "--tau", "1i"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0+0i\n");
  EXPECT_NE(r.err.find("infeasible"), std::string::npos);
}

TEST(Cli, EvalCoeffCubic) {
  const auto r = run_cli({"eval-coeff", "--family", "A", "--shifts", "0,0", "--tau", "3i"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("1.0004", 0), 0u) << r.out;
}

TEST(Cli, VerifyExitCodes) {
  auto ok = run_cli({"verify", "--id", "LUO4", "--m", "2", "--samples", "4"});
  EXPECT_EQ(ok.code, 0);
  const auto j = nlohmann::json::parse(ok.out);
  EXPECT_EQ(j["status"], "pass");
  EXPECT_EQ(j["identity_id"], "LUO4");

  EXPECT_EQ(run_cli({"verify", "--id", "APP_13_M1", "--samples", "2"}).code, 1);

  const auto hyp = run_cli({"verify", "--id", "LUO4", "--n", "3"});
  EXPECT_EQ(hyp.code, 2);
  EXPECT_NE(hyp.err.find("n must be even"), std::string::npos);

  EXPECT_EQ(run_cli({"verify", "--id", "NOPE"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"eval-theta", "--kind", "3", "--z", "1+", "--tau", "1i"}).code, 2);
  EXPECT_EQ(run_cli({"eval-theta", "--kind", "3", "--z", "0", "--tau", "0.5-1i"}).code, 2);
  EXPECT_EQ(run_cli({"eval-theta", "--kind", "7", "--z", "0", "--tau", "1i"}).code, 2);
  EXPECT_EQ(run_cli({"eval-coeff", "--family", "R99", "--tau", "1i"}).code, 2);
  EXPECT_EQ(run_cli({"fn-series", "--n", "1", "--order", "3"}).code, 2);
}

TEST(Cli, ListJson) {
  const auto r = run_cli({"list", "--json"});
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 48u);
  for (const auto& e : j)
    for (const char* key : {"id", "hypotheses", "parameters", "anchor"}) EXPECT_TRUE(e.contains(key)) << key;
}
