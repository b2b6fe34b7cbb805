#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "circsum/catalog.hpp"
#include "circsum/errors.hpp"
#include "circsum/fn_series.hpp"
#include "circsum/lattice_sum.hpp"
#include "circsum/rng.hpp"

namespace circsum {

inline constexpr int kReportSchemaVersion = 1;

struct SampleDomain {
  double im_tau_lo = 0.8, im_tau_hi = 2.0;
  double re_tau_lo = -0.5, re_tau_hi = 0.5;
  double z_re = 1.0, z_im = 0.3;
  double shift_re = 1.0, shift_im = 0.3;
};

/// One drawn point: tau, z and the parameters actually evaluated.
struct Sample {
  std::complex<double> tau;
  std::complex<double> z;
  IdentityParams params;
};

struct SampleFailure {
  long index = 0;
  Sample sample;
  double residual = 0;  // NaN when evaluation threw
  std::string error;
};

struct VerificationReport {
  int schema_version = kReportSchemaVersion;
  IdentityId id = IdentityId::LUO4;
  IdentityParams params;
  long samples = 0;
  std::uint64_t seed = 0;
  double tol = 0;
  double max_abs_residual = 0;
  double max_rel_residual = 0;
  bool pass = false;
  std::vector<SampleFailure> failures;
  long runtime_ms = 0;
};

namespace detail {

inline std::complex<double> draw_box(Xoshiro256& g, double re, double im) {
  const double x = g.uniform(-re, re);
  const double y = g.uniform(-im, im);
  return {x, y};
}

inline bool fixed_zero_shifts(IdentityId id) {
  if (auto p = app_preset(id)) return p->zero_shift;
  return id == IdentityId::COR200 || id == IdentityId::COR203 || id == IdentityId::COR206 ||
         id == IdentityId::COR209 || id == IdentityId::RAMA_PI;
}

}  // namespace detail

/// Draws one sample. Shifts sum to zero exactly: the last is the negated sum of the others.
/// RAMA_F takes a = |q| e^{Re z}, b = |q| e^{-Re z} so that ab = |q|^2.
inline Sample draw_sample(Xoshiro256& g, IdentityId id, const IdentityParams& base, const SampleDomain& dom = {}) {
  Sample s;
  const double im = g.uniform(dom.im_tau_lo, dom.im_tau_hi);
  const double re = g.uniform(dom.re_tau_lo, dom.re_tau_hi);
  s.tau = {re, im};
  s.z = detail::draw_box(g, dom.z_re, dom.z_im);
  s.params = base;
  IdentityParams& p = s.params;
  switch (identity_shape(id)) {
    case IdentityShape::Mixed:
    case IdentityShape::SingleProduct: {
      const long a = identity_shape(id) == IdentityShape::Mixed ? p.a : 0;
      const long total = identity_shape(id) == IdentityShape::Mixed ? p.a + p.b : p.n;
      std::vector<std::complex<double>> sh(std::max(total, 0L), {0.0, 0.0});
      if (!detail::fixed_zero_shifts(id) && total > 0) {
        std::complex<double> acc(0.0, 0.0);
        for (long j = 0; j + 1 < total; ++j) {
          sh[j] = detail::draw_box(g, dom.shift_re, dom.shift_im);
          acc += sh[j];
        }
        sh[total - 1] = -acc;
      }
      p.shifts_x.assign(sh.begin(), sh.begin() + std::min(a, total));
      p.shifts_y.assign(sh.begin() + std::min(a, total), sh.end());
      break;
    }
    case IdentityShape::Zeng:
      p.y = (p.a > 0 && p.b > 0) ? detail::draw_box(g, dom.shift_re, dom.shift_im) : std::complex<double>(0.0, 0.0);
      break;
    case IdentityShape::RamaF: {
      const double q_abs = std::exp(-M_PI * im);
      p.f_a = q_abs * std::exp(s.z.real());
      p.f_b = q_abs * std::exp(-s.z.real());
      break;
    }
    default:
      break;
  }
  return s;
}

/// Evaluation tolerance used for a verification tolerance.
inline double eval_tol_for(double tol) { return std::min(1e-12, tol / 1000.0); }

/// Seeded randomized check of one identity. Samples are drawn sequentially, evaluated
/// concurrently and aggregated in index order.
template <class Real = double>
VerificationReport verify(IdentityId id, const IdentityParams& params, long samples, double tol, std::uint64_t seed,
                          unsigned threads = 0) {
  if (samples < 1) throw DomainError("samples must be at least 1");
  if (!(tol > 0)) throw DomainError("tol must be positive");
  const auto start = std::chrono::steady_clock::now();
  validate(id, params);  // hypothesis errors surface before any sampling

  Xoshiro256 g(seed);
  std::vector<Sample> drawn;
  drawn.reserve(samples);
  for (long i = 0; i < samples; ++i) drawn.push_back(draw_sample(g, id, params));

  EvalConfig<Real> cfg;
  cfg.tol = Real(eval_tol_for(tol));
  std::vector<double> abs_res(samples, 0), rel_res(samples, 0);
  std::vector<std::string> errors(samples);
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long i = next++; i < samples; i = next++) {
      try {
        const Sample& s = drawn[i];
        const IdentityInstance inst = validate(id, s.params);
        const TauPoint<Real> tau(Real(s.tau.real()), Real(s.tau.imag()));
        const complex_t<Real> z = complex_cast<Real>(s.z);
        const complex_t<Real> l = lhs_value<Real>(inst, z, tau, cfg);
        const complex_t<Real> r = rhs_value<Real>(inst, z, tau, cfg);
        using std::abs;
        abs_res[i] = static_cast<double>(abs(l - r));
        rel_res[i] = static_cast<double>(relative_residual<Real>(l, r));
      } catch (const std::exception& e) {
        errors[i] = e.what();
        abs_res[i] = rel_res[i] = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<long>(threads, samples));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  VerificationReport rep;
  rep.id = id;
  rep.params = params;
  rep.samples = samples;
  rep.seed = seed;
  rep.tol = tol;
  for (long i = 0; i < samples; ++i) {
    const bool bad = !errors[i].empty() || !(rel_res[i] < tol);
    if (errors[i].empty()) {
      rep.max_abs_residual = std::max(rep.max_abs_residual, abs_res[i]);
      rep.max_rel_residual = std::max(rep.max_rel_residual, rel_res[i]);
    }
    if (bad) rep.failures.push_back({i, drawn[i], rel_res[i], errors[i]});
  }
  rep.pass = rep.failures.empty() && rep.max_rel_residual < tol;
  rep.runtime_ms = static_cast<long>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
  return rep;
}

// ---- JSON ----

inline nlohmann::json complex_json(const std::complex<double>& c) { return nlohmann::json::array({c.real(), c.imag()}); }

inline nlohmann::json params_json(IdentityId id, const IdentityParams& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const std::string& key : parameter_schema(id)) {
    if (key == "m") j["m"] = p.m;
    else if (key == "n") j["n"] = p.n;
    else if (key == "a") j["a"] = p.a;
    else if (key == "b") j["b"] = p.b;
    else if (key == "k") j["k"] = p.k;
    else if (key == "f_a") j["f_a"] = p.f_a;
    else if (key == "f_b") j["f_b"] = p.f_b;
    else if (key == "y") j["y"] = complex_json(p.y);
    else if (key == "shifts_x" || key == "shifts_y") {
      const auto& v = key == "shifts_x" ? p.shifts_x : p.shifts_y;
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& c : v) arr.push_back(complex_json(c));
      j[key] = arr;
    }
  }
  if (app_preset(id)) {
    j["m"] = p.m;
    j["n"] = p.n;
    j["a"] = p.a;
    j["b"] = p.b;
  }
  return j;
}

inline nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline nlohmann::json report_json(const VerificationReport& r, bool include_runtime = true) {
  nlohmann::json j;
  j["schema_version"] = r.schema_version;
  j["identity_id"] = std::string(to_string(r.id));
  j["params"] = params_json(r.id, r.params);
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["tol"] = r.tol;
  j["max_abs_residual"] = r.max_abs_residual;
  j["max_rel_residual"] = r.max_rel_residual;
  j["status"] = r.pass ? "pass" : "fail";
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : r.failures) {
    nlohmann::json fj;
    fj["index"] = f.index;
    fj["z"] = complex_json(f.sample.z);
    fj["tau"] = complex_json(f.sample.tau);
    fj["params"] = params_json(r.id, f.sample.params);
    fj["residual"] = number_or_null(f.residual);
    if (!f.error.empty()) fj["error"] = f.error;
    fails.push_back(fj);
  }
  j["failures"] = fails;
  if (include_runtime) j["runtime_ms"] = r.runtime_ms;
  return j;
}

// ---- default suite ----

struct SuiteEntry {
  IdentityId id;
  IdentityParams params;
};

/// Every identity with each hypothesis-satisfying structural parameter set with mn <= 6.
inline std::vector<SuiteEntry> default_suite() {
  std::vector<SuiteEntry> out;
  auto add = [&](IdentityId id, IdentityParams p) {
    if (identity_shape(id) == IdentityShape::Mixed) {
      p.shifts_x.assign(p.a, {0.0, 0.0});
      p.shifts_y.assign(p.b, {0.0, 0.0});
    } else if (identity_shape(id) == IdentityShape::SingleProduct) {
      p.a = 0;
      p.b = p.n;
      p.shifts_x.clear();
      p.shifts_y.assign(p.n, {0.0, 0.0});
    }
    try {
      validate(id, p);
      out.push_back({id, p});
    } catch (const HypothesisError&) {
    }
  };
  for (IdentityId id : kAllIdentities) {
    const IdentityShape shape = identity_shape(id);
    if (app_preset(id)) {
      add(id, default_params(id));
      continue;
    }
    IdentityParams p = default_params(id);
    switch (shape) {
      case IdentityShape::Mixed:
        for (long n = 1; n <= 6; ++n)
          for (long m = 1; m * n <= 6; ++m)
            for (long a = 0; a <= n; ++a) {
              p.m = m;
              p.n = n;
              p.a = a;
              p.b = n - a;
              add(id, p);
            }
        break;
      case IdentityShape::SingleProduct:
        for (long n = 1; n <= 6; ++n)
          for (long m = 1; m * n <= 6; ++m) {
            p.m = m;
            p.n = n;
            add(id, p);
          }
        break;
      case IdentityShape::Boon:
        for (long n = 1; n <= 6; ++n) {
          p.n = n;
          add(id, p);
        }
        break;
      case IdentityShape::Zeng:
        for (long k = 1; k <= 2; ++k)
          for (long n = 1; n <= 3; ++n)
            for (long a = 0; a <= n; ++a) {
              p.k = k;
              p.n = n;
              p.a = a;
              p.b = n - a;
              add(id, p);
            }
        break;
      case IdentityShape::RamaF:
        for (long n = 1; n <= 6; ++n) {
          p.n = n;
          add(id, p);
        }
        break;
      case IdentityShape::RamaT3:
        for (long n = 2; n <= 6; ++n) {
          p.n = n;
          add(id, p);
        }
        break;
    }
  }
  return out;
}

struct SuiteResult {
  std::vector<VerificationReport> reports;
  long passed = 0;
  long failed = 0;
};

/// Runs every entry of the default suite; each identity gets its own stream derived from the seed.
template <class Real = double>
SuiteResult run_suite(const std::vector<SuiteEntry>& entries, long samples, double tol, std::uint64_t seed) {
  SuiteResult res;
  std::uint64_t sm = seed;
  for (const auto& e : entries) {
    const std::uint64_t s = Xoshiro256::splitmix64(sm);
    res.reports.push_back(verify<Real>(e.id, e.params, samples, tol, s));
    (res.reports.back().pass ? res.passed : res.failed)++;
  }
  return res;
}

inline nlohmann::json suite_json(const SuiteResult& r, bool include_runtime = true) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& rep : r.reports) arr.push_back(report_json(rep, include_runtime));
  nlohmann::json j;
  j["reports"] = arr;
  j["summary"] = {{"total", r.passed + r.failed}, {"passed", r.passed}, {"failed", r.failed}};
  return j;
}

// ---- F_n checks ----

struct FnLeadingResult {
  double deviation = 0;     // |(F_n - 1) / (2n q^{n-1}) - 1| from the numeric route
  bool exact_ok = false;    // fn_series starts 1, 0, ..., 0, 2n
  std::vector<long long> exact_prefix;
};

/// F_n(tau) as the ratio lhs / theta3(z|tau), moving z off theta3 zeros (|theta3| >= 0.1).
template <class Real>
complex_t<Real> fn_numeric(long n, const TauPoint<Real>& tau, const EvalConfig<Real>& cfg) {
  using std::abs;
  Xoshiro256 g(0x5eedULL + static_cast<std::uint64_t>(n));
  complex_t<Real> z(Real(0.3), Real(0.1));
  for (int attempt = 0; attempt < 64; ++attempt) {
    const complex_t<Real> t3 = theta(ThetaKind::Three, z, tau, cfg);
    if (abs(t3) >= Real(0.1)) return rama_t3_lhs<Real>(n, z, tau, cfg) / t3;
    z = complex_t<Real>(Real(g.uniform(-1.0, 1.0)), Real(g.uniform(-0.3, 0.3)));
  }
  throw ConvergenceError("could not find z with |theta3(z|tau)| >= 0.1");
}

template <class Real>
FnLeadingResult fn_leading_check(long n, const TauPoint<Real>& tau, const EvalConfig<Real>& cfg) {
  using std::abs;
  if (n < 2) throw DomainError("fn_leading_check needs n >= 2");
  FnLeadingResult r;
  const complex_t<Real> F = fn_numeric<Real>(n, tau, cfg);
  const complex_t<Real> lead = Real(2 * n) * tau.qpow(Real(n - 1));
  r.deviation = static_cast<double>(abs((F - Real(1)) / lead - Real(1)));
  r.exact_prefix = fn_series(n, 4 * (n - 1));
  r.exact_ok = r.exact_prefix.size() == static_cast<std::size_t>(n) && r.exact_prefix[0] == 1 &&
               r.exact_prefix[n - 1] == 2 * n;
  for (long j = 1; j + 1 < n; ++j) r.exact_ok = r.exact_ok && r.exact_prefix[j] == 0;
  return r;
}

/// |G_n(tau) - sqrt(n) (-i tau)^{(1-n)/2} F_n(-1/(n tau))|, principal branch.
template <class Real>
Real gn_fn_modular_check(long n, const TauPoint<Real>& tau, const EvalConfig<Real>& cfg) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  using C = complex_t<Real>;
  if (n < 1) throw DomainError("n must be positive");
  const std::vector<C> zeros(n, C(Real(0), Real(0)));
  const C G = eval_G<Real>(1, n, zeros, tau, cfg);
  const TauPoint<Real> t2(C(Real(-1), Real(0)) / (Real(n) * tau.tau()));
  const C F = n == 1 ? C(Real(1), Real(0)) : fn_numeric<Real>(n, t2, cfg);
  const C w = -imag_unit<Real>() * tau.tau();
  const C rhs = sqrt(Real(n)) * pow(w, C(Real(1 - n) / Real(2), Real(0))) * F;
  return abs(G - rhs);
}

}  // namespace circsum
