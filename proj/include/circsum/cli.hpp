#pragma once

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "circsum/catalog.hpp"
#include "circsum/complex_literal.hpp"
#include "circsum/errors.hpp"
#include "circsum/extended.hpp"
#include "circsum/fn_series.hpp"
#include "circsum/lattice_sum.hpp"
#include "circsum/theta.hpp"
#include "circsum/verify.hpp"

namespace circsum::cli {

enum ExitCode { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

/// Digits requested through THETA_PRECISION (15 when unset).
inline int precision_digits() {
  const char* env = std::getenv("THETA_PRECISION");
  if (!env || !*env) return 15;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 15) throw DomainError("THETA_PRECISION must be an integer >= 15");
  return static_cast<int>(v);
}

/// Runs f.template operator()<Real>() with double, 50 or 100 digit reals.
template <class F>
decltype(auto) with_precision(int digits, F&& f) {
  if (digits <= 16) return f.template operator()<double>();
  if (digits <= 50) return f.template operator()<real50>();
  return f.template operator()<real100>();
}

template <class Real>
std::string format_complex(const complex_t<Real>& c) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<Real>::max_digits10);
  using std::imag;
  using std::real;
  const Real re = real(c), im = imag(c);
  os << re << (im < Real(0) ? "" : "+") << im << "i";
  return os.str();
}

inline void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw DomainError("cannot open output file " + path);
  f << text << "\n";
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Circular summation identities of Jacobi theta functions"};
  app.require_subcommand(1);

  // eval-theta
  auto* eval_theta = app.add_subcommand("eval-theta", "Evaluate theta_K(z|tau)");
  int kind = 3;
  std::string z_text, tau_text;
  double tol = 1e-12;
  eval_theta->add_option("--kind", kind, "Theta kind 1..4")->required()->check(CLI::Range(1, 4));
  eval_theta->add_option("--z", z_text, "Complex argument a+bi")->required();
  eval_theta->add_option("--tau", tau_text, "Complex modulus a+bi with b > 0")->required();
  eval_theta->add_option("--tol", tol, "Absolute truncation tolerance");

  // eval-coeff
  auto* eval_coeff = app.add_subcommand("eval-coeff", "Evaluate a lattice-sum coefficient");
  std::string family_text, shifts_text;
  long m = 1, n = 2, a = 1, b = 1, k = 1;
  eval_coeff->add_option("--family", family_text, "R12 R13 R14 R23 R24 R34 R1 R2 R3 R4 G R33 A B C D")->required();
  eval_coeff->add_option("--m", m);
  eval_coeff->add_option("--n", n);
  eval_coeff->add_option("--a", a);
  eval_coeff->add_option("--b", b);
  eval_coeff->add_option("--k", k, "R33 only");
  eval_coeff->add_option("--shifts", shifts_text, "Comma-separated complex shifts (x_1..x_a then y_1..y_b)");
  eval_coeff->add_option("--tau", tau_text, "Complex modulus")->required();
  eval_coeff->add_option("--tol", tol);

  // fn-series
  auto* fn = app.add_subcommand("fn-series", "Exact coefficients of F_n");
  long fn_n = 3, fn_order = 6;
  fn->add_option("--n", fn_n)->required();
  fn->add_option("--order", fn_order, "Highest power of q")->required();

  // verify
  auto* ver = app.add_subcommand("verify", "Randomized verification of one identity");
  std::string id_text, out_path;
  long samples = 16;
  std::uint64_t seed = 1;
  double vtol = 1e-9;
  double fa = 0.3, fb = 0.2;
  ver->add_option("--id", id_text)->required();
  auto* opt_m = ver->add_option("--m", m);
  auto* opt_n = ver->add_option("--n", n);
  auto* opt_a = ver->add_option("--a", a);
  auto* opt_b = ver->add_option("--b", b);
  auto* opt_k = ver->add_option("--k", k);
  auto* opt_fa = ver->add_option("--fa", fa, "RAMA_F base a");
  auto* opt_fb = ver->add_option("--fb", fb, "RAMA_F base b");
  ver->add_option("--samples", samples);
  ver->add_option("--seed", seed);
  ver->add_option("--tol", vtol);
  ver->add_option("--out", out_path);

  // verify-all
  auto* all = app.add_subcommand("verify-all", "Run the default suite");
  std::string suite_name = "paper";
  all->add_option("--suite", suite_name)->check(CLI::IsMember({"paper", "default"}));
  all->add_option("--samples", samples);
  all->add_option("--seed", seed);
  all->add_option("--tol", vtol);
  all->add_option("--out", out_path);

  // list
  auto* list = app.add_subcommand("list", "Print the identity catalog");
  bool as_json = false;
  list->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    const int digits = precision_digits();

    if (*eval_theta) {
      const auto z = parse_complex(z_text);
      const auto t = parse_complex(tau_text);
      const std::string s = with_precision(digits, [&]<class Real>() {
        const TauPoint<Real> tau(complex_cast<Real>(t));
        EvalConfig<Real> cfg;
        cfg.tol = Real(tol);
        return format_complex<Real>(theta(theta_kind_from_int(kind), complex_cast<Real>(z), tau, cfg));
      });
      out << s << "\n";
      return kOk;
    }

    if (*eval_coeff) {
      const auto fam = rfamily_from_string(family_text);
      if (!fam) throw DomainError("unknown family '" + family_text + "'");
      const auto shifts = parse_complex_list(shifts_text);
      const auto t = parse_complex(tau_text);
      bool infeasible = false;
      const std::string s = with_precision(digits, [&]<class Real>() {
        using C = complex_t<Real>;
        const TauPoint<Real> tau(complex_cast<Real>(t));
        EvalConfig<Real> cfg;
        cfg.tol = Real(tol);
        std::vector<C> sh;
        for (const auto& c : shifts) sh.push_back(complex_cast<Real>(c));
        C v;
        if (is_mixed_family(*fam)) {
          if (static_cast<long>(sh.size()) != a + b) throw HypothesisError("need exactly a + b shifts");
          const std::span<const C> all_sh(sh);
          auto r = eval_R<Real>(*fam, m, n, a, b, all_sh.first(a), all_sh.subspan(a), tau, cfg);
          infeasible = r.infeasible;
          v = r.value;
        } else if (is_single_family(*fam)) {
          auto r = eval_R_single<Real>(*fam, m, n, sh, tau, cfg);
          infeasible = r.infeasible;
          v = r.value;
        } else if (*fam == RFamily::Gmn) {
          v = eval_G<Real>(m, n, sh, tau, cfg);
        } else if (*fam == RFamily::R33) {
          if (sh.size() > 1) throw HypothesisError("R33 takes a single shift y");
          v = eval_R33<Real>(k, n, a, b, sh.empty() ? C(Real(0), Real(0)) : sh[0], tau, cfg);
        } else {
          if (sh.size() != 2) throw HypothesisError("cubic series take two shifts y1,y2");
          v = eval_cubic<Real>(*fam, sh[0], sh[1], tau, cfg);
        }
        return format_complex<Real>(v);
      });
      out << s << "\n";
      if (infeasible) err << "note: constraint has no integer solutions (infeasible); the sum is empty\n";
      return kOk;
    }

    if (*fn) {
      if (fn_order < 0) throw DomainError("--order must be non-negative");
      const auto c = fn_series(fn_n, 4 * fn_order);
      for (std::size_t j = 0; j < c.size(); ++j) out << (j ? " " : "") << c[j];
      out << "\n";
      return kOk;
    }

    if (*ver) {
      const auto id = identity_from_string(id_text);
      if (!id) throw DomainError("unknown identity id '" + id_text + "'");
      IdentityParams p = default_params(*id);
      if (*opt_m) p.m = m;
      if (*opt_n) p.n = n;
      if (*opt_a) p.a = a;
      if (*opt_b) p.b = b;
      if (*opt_k) p.k = k;
      if (*opt_fa) p.f_a = fa;
      if (*opt_fb) p.f_b = fb;
      if (identity_shape(*id) == IdentityShape::SingleProduct) {
        if (!*opt_b) p.b = p.n;
        if (!*opt_a) p.a = 0;
      } else if ((*opt_n || *opt_a) && !*opt_b && identity_shape(*id) != IdentityShape::RamaF) {
        p.b = p.n - p.a;
      }
      if (identity_shape(*id) == IdentityShape::Mixed) {
        p.shifts_x.assign(std::max(p.a, 0L), {0.0, 0.0});
        p.shifts_y.assign(std::max(p.b, 0L), {0.0, 0.0});
      } else if (identity_shape(*id) == IdentityShape::SingleProduct) {
        p.shifts_x.clear();
        p.shifts_y.assign(std::max(p.n, 0L), {0.0, 0.0});
      }
      if (samples < 1) throw DomainError("--samples must be at least 1");
      const VerificationReport rep = with_precision(digits, [&]<class Real>() {
        return verify<Real>(*id, p, samples, vtol, seed);
      });
      write_output(report_json(rep).dump(2), out_path, out);
      return rep.pass ? kOk : kVerificationFailed;
    }

    if (*all) {
      const SuiteResult res = with_precision(digits, [&]<class Real>() {
        return run_suite<Real>(default_suite(), samples, vtol, seed);
      });
      write_output(suite_json(res).dump(2), out_path, out);
      return res.failed == 0 ? kOk : kVerificationFailed;
    }

    if (*list) {
      if (as_json) {
        nlohmann::json arr = nlohmann::json::array();
        for (IdentityId id : kAllIdentities) {
          arr.push_back({{"id", std::string(to_string(id))},
                         {"hypotheses", hypotheses(id)},
                         {"parameters", parameter_schema(id)},
                         {"anchor", anchor(id)}});
        }
        out << arr.dump(2) << "\n";
      } else {
        for (IdentityId id : kAllIdentities) out << std::left << std::setw(14) << to_string(id) << anchor(id) << "\n";
      }
      return kOk;
    }
  } catch (const HypothesisError& e) {
    err << "hypothesis violated: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace circsum::cli
