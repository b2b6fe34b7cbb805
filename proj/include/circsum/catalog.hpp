#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circsum/errors.hpp"
#include "circsum/fn_series.hpp"
#include "circsum/lattice_sum.hpp"
#include "circsum/numeric.hpp"
#include "circsum/ramanujan.hpp"
#include "circsum/tau.hpp"
#include "circsum/theta.hpp"

namespace circsum {

enum class IdentityId {
  LUO4, LUO5, LUO6, LUO7, LUO8, LUO9,
  COR149, COR155, COR600, COR400,
  COR200, COR203, COR206, COR209,
  BOON, ZENG, CHANLIU,
  RAMA_F, RAMA_T3, RAMA_PI,
  APP_12_22, APP_12_12,
  APP_13_M1, APP_13_M2, APP_14_M1, APP_14_M2, APP_23_M1, APP_23_M2, APP_24_M1, APP_24_M2,
  APP_34_M1, APP_34_M2, APP_34B_M1, APP_34B_M2, APP_44_M2,
  APP_13_M1_Z, APP_13_M2_Z, APP_14_M1_Z, APP_14_M2_Z, APP_23_M1_Z, APP_23_M2_Z,
  APP_24_M1_Z, APP_24_M2_Z, APP_34_M1_Z, APP_34_M2_Z, APP_34B_M1_Z, APP_34B_M2_Z, APP_44_M2_Z,
};

inline constexpr std::array kAllIdentities = {
    IdentityId::LUO4, IdentityId::LUO5, IdentityId::LUO6, IdentityId::LUO7, IdentityId::LUO8,
    IdentityId::LUO9, IdentityId::COR149, IdentityId::COR155, IdentityId::COR600,
    IdentityId::COR400, IdentityId::COR200, IdentityId::COR203, IdentityId::COR206,
    IdentityId::COR209, IdentityId::BOON, IdentityId::ZENG, IdentityId::CHANLIU,
    IdentityId::RAMA_F, IdentityId::RAMA_T3, IdentityId::RAMA_PI, IdentityId::APP_12_22,
    IdentityId::APP_12_12, IdentityId::APP_13_M1, IdentityId::APP_13_M2, IdentityId::APP_14_M1,
    IdentityId::APP_14_M2, IdentityId::APP_23_M1, IdentityId::APP_23_M2, IdentityId::APP_24_M1,
    IdentityId::APP_24_M2, IdentityId::APP_34_M1, IdentityId::APP_34_M2, IdentityId::APP_34B_M1,
    IdentityId::APP_34B_M2, IdentityId::APP_44_M2, IdentityId::APP_13_M1_Z,
    IdentityId::APP_13_M2_Z, IdentityId::APP_14_M1_Z, IdentityId::APP_14_M2_Z,
    IdentityId::APP_23_M1_Z, IdentityId::APP_23_M2_Z, IdentityId::APP_24_M1_Z,
    IdentityId::APP_24_M2_Z, IdentityId::APP_34_M1_Z, IdentityId::APP_34_M2_Z,
    IdentityId::APP_34B_M1_Z, IdentityId::APP_34B_M2_Z, IdentityId::APP_44_M2_Z,
};

inline std::string_view to_string(IdentityId id) {
  switch (id) {
#define CIRCSUM_ID(X) \
  case IdentityId::X: \
    return #X;
    CIRCSUM_ID(LUO4) CIRCSUM_ID(LUO5) CIRCSUM_ID(LUO6) CIRCSUM_ID(LUO7) CIRCSUM_ID(LUO8)
    CIRCSUM_ID(LUO9) CIRCSUM_ID(COR149) CIRCSUM_ID(COR155) CIRCSUM_ID(COR600)
    CIRCSUM_ID(COR400) CIRCSUM_ID(COR200) CIRCSUM_ID(COR203) CIRCSUM_ID(COR206)
    CIRCSUM_ID(COR209) CIRCSUM_ID(BOON) CIRCSUM_ID(ZENG) CIRCSUM_ID(CHANLIU)
    CIRCSUM_ID(RAMA_F) CIRCSUM_ID(RAMA_T3) CIRCSUM_ID(RAMA_PI) CIRCSUM_ID(APP_12_22)
    CIRCSUM_ID(APP_12_12) CIRCSUM_ID(APP_13_M1) CIRCSUM_ID(APP_13_M2) CIRCSUM_ID(APP_14_M1)
    CIRCSUM_ID(APP_14_M2) CIRCSUM_ID(APP_23_M1) CIRCSUM_ID(APP_23_M2) CIRCSUM_ID(APP_24_M1)
    CIRCSUM_ID(APP_24_M2) CIRCSUM_ID(APP_34_M1) CIRCSUM_ID(APP_34_M2) CIRCSUM_ID(APP_34B_M1)
    CIRCSUM_ID(APP_34B_M2) CIRCSUM_ID(APP_44_M2) CIRCSUM_ID(APP_13_M1_Z)
    CIRCSUM_ID(APP_13_M2_Z) CIRCSUM_ID(APP_14_M1_Z) CIRCSUM_ID(APP_14_M2_Z)
    CIRCSUM_ID(APP_23_M1_Z) CIRCSUM_ID(APP_23_M2_Z) CIRCSUM_ID(APP_24_M1_Z)
    CIRCSUM_ID(APP_24_M2_Z) CIRCSUM_ID(APP_34_M1_Z) CIRCSUM_ID(APP_34_M2_Z)
    CIRCSUM_ID(APP_34B_M1_Z) CIRCSUM_ID(APP_34B_M2_Z) CIRCSUM_ID(APP_44_M2_Z)
#undef CIRCSUM_ID
  }
  return "?";
}

inline std::optional<IdentityId> identity_from_string(std::string_view s) {
  for (IdentityId id : kAllIdentities)
    if (to_string(id) == s) return id;
  return std::nullopt;
}

/// What the identity's left side is built from.
enum class IdentityShape {
  Mixed,         // two theta kinds, a shifts x_j and b shifts y_i
  SingleProduct, // one theta kind, n shifts y_j
  Boon,
  Zeng,
  RamaF,
  RamaT3,
};

/// Closed-form right side of an application preset.
struct AppPreset {
  IdentityId base;     // general theorem the preset instantiates
  long m, n, a, b;
  RFamily cubic;       // cubic series in the closed form (unused for the R12 presets)
  long sign;           // overall sign of the closed form
  bool zero_shift;
};

inline std::optional<AppPreset> app_preset(IdentityId id) {
  using I = IdentityId;
  using F = RFamily;
  switch (id) {
    case I::APP_12_22: return AppPreset{I::LUO4, 2, 2, 1, 1, F::R12, -1, false};
    case I::APP_12_12: return AppPreset{I::LUO4, 1, 2, 1, 1, F::R12, -1, false};
    case I::APP_13_M1: return AppPreset{I::LUO5, 1, 3, 2, 1, F::CubicD, -1, false};
    case I::APP_13_M2: return AppPreset{I::LUO5, 2, 3, 2, 1, F::CubicD, -1, false};
    case I::APP_14_M1: return AppPreset{I::LUO6, 1, 3, 2, 1, F::CubicC, 1, false};
    case I::APP_14_M2: return AppPreset{I::LUO6, 2, 3, 2, 1, F::CubicC, 1, false};
    case I::APP_23_M1: return AppPreset{I::LUO7, 1, 3, 2, 1, F::CubicC, 1, false};
    case I::APP_23_M2: return AppPreset{I::LUO7, 2, 3, 2, 1, F::CubicC, 1, false};
    case I::APP_24_M1: return AppPreset{I::LUO8, 1, 3, 2, 1, F::CubicD, -1, false};
    case I::APP_24_M2: return AppPreset{I::LUO8, 2, 3, 2, 1, F::CubicD, -1, false};
    case I::APP_34_M1: return AppPreset{I::LUO9, 1, 3, 2, 1, F::CubicB, 1, false};
    case I::APP_34_M2: return AppPreset{I::LUO9, 2, 3, 2, 1, F::CubicB, 1, false};
    case I::APP_34B_M1: return AppPreset{I::LUO9, 1, 3, 1, 2, F::CubicB, 1, false};
    case I::APP_34B_M2: return AppPreset{I::LUO9, 2, 3, 1, 2, F::CubicB, 1, false};
    case I::APP_44_M2: return AppPreset{I::COR400, 2, 3, 0, 3, F::CubicA, 1, false};
    case I::APP_13_M1_Z: return AppPreset{I::LUO5, 1, 3, 2, 1, F::CubicD, -1, true};
    case I::APP_13_M2_Z: return AppPreset{I::LUO5, 2, 3, 2, 1, F::CubicD, -1, true};
    case I::APP_14_M1_Z: return AppPreset{I::LUO6, 1, 3, 2, 1, F::CubicC, 1, true};
    case I::APP_14_M2_Z: return AppPreset{I::LUO6, 2, 3, 2, 1, F::CubicC, 1, true};
    case I::APP_23_M1_Z: return AppPreset{I::LUO7, 1, 3, 2, 1, F::CubicC, 1, true};
    case I::APP_23_M2_Z: return AppPreset{I::LUO7, 2, 3, 2, 1, F::CubicC, 1, true};
    case I::APP_24_M1_Z: return AppPreset{I::LUO8, 1, 3, 2, 1, F::CubicD, -1, true};
    case I::APP_24_M2_Z: return AppPreset{I::LUO8, 2, 3, 2, 1, F::CubicD, -1, true};
    case I::APP_34_M1_Z: return AppPreset{I::LUO9, 1, 3, 2, 1, F::CubicB, 1, true};
    case I::APP_34_M2_Z: return AppPreset{I::LUO9, 2, 3, 2, 1, F::CubicB, 1, true};
    case I::APP_34B_M1_Z: return AppPreset{I::LUO9, 1, 3, 1, 2, F::CubicB, 1, true};
    case I::APP_34B_M2_Z: return AppPreset{I::LUO9, 2, 3, 1, 2, F::CubicB, 1, true};
    case I::APP_44_M2_Z: return AppPreset{I::COR400, 2, 3, 0, 3, F::CubicA, 1, true};
    default: return std::nullopt;
  }
}

/// Theorem whose left side the identity uses (itself unless it is a preset).
inline IdentityId base_theorem(IdentityId id) {
  if (auto p = app_preset(id)) return p->base;
  return id;
}

inline IdentityShape identity_shape(IdentityId id) {
  switch (base_theorem(id)) {
    case IdentityId::LUO4: case IdentityId::LUO5: case IdentityId::LUO6:
    case IdentityId::LUO7: case IdentityId::LUO8: case IdentityId::LUO9:
      return IdentityShape::Mixed;
    case IdentityId::BOON: return IdentityShape::Boon;
    case IdentityId::ZENG: return IdentityShape::Zeng;
    case IdentityId::RAMA_F: return IdentityShape::RamaF;
    case IdentityId::RAMA_T3: return IdentityShape::RamaT3;
    default: return IdentityShape::SingleProduct;
  }
}

/// Theta kinds of the x-factors and y-factors (single-product identities use only the second).
inline std::pair<ThetaKind, ThetaKind> factor_kinds(IdentityId id) {
  using T = ThetaKind;
  switch (base_theorem(id)) {
    case IdentityId::LUO4: return {T::One, T::Two};
    case IdentityId::LUO5: return {T::One, T::Three};
    case IdentityId::LUO6: return {T::One, T::Four};
    case IdentityId::LUO7: return {T::Two, T::Three};
    case IdentityId::LUO8: return {T::Two, T::Four};
    case IdentityId::LUO9: return {T::Three, T::Four};
    case IdentityId::COR149: case IdentityId::COR200: return {T::One, T::One};
    case IdentityId::COR155: case IdentityId::COR203: return {T::Two, T::Two};
    case IdentityId::COR400: case IdentityId::COR209: return {T::Four, T::Four};
    default: return {T::Three, T::Three};
  }
}

/// Coefficient family of the general theorem.
inline RFamily coefficient_family(IdentityId id) {
  switch (base_theorem(id)) {
    case IdentityId::LUO4: return RFamily::R12;
    case IdentityId::LUO5: return RFamily::R13;
    case IdentityId::LUO6: return RFamily::R14;
    case IdentityId::LUO7: return RFamily::R23;
    case IdentityId::LUO8: return RFamily::R24;
    case IdentityId::LUO9: return RFamily::R34;
    case IdentityId::COR149: case IdentityId::COR200: return RFamily::R1;
    case IdentityId::COR155: case IdentityId::COR203: return RFamily::R2;
    case IdentityId::COR400: case IdentityId::COR209: return RFamily::R4;
    case IdentityId::COR600: case IdentityId::COR206: return RFamily::R3;
    case IdentityId::ZENG: return RFamily::R33;
    default: return RFamily::Gmn;
  }
}

/// Caller-facing parameters. Unused fields are ignored by identities that do not take them.
struct IdentityParams {
  long m = 1;
  long n = 2;
  long a = 1;
  long b = 1;
  long k = 1;                                  // ZENG only
  std::vector<std::complex<double>> shifts_x;  // length a
  std::vector<std::complex<double>> shifts_y;  // length b (n for single-product identities)
  std::complex<double> y{0.0, 0.0};            // ZENG only
  double f_a = 0.3;                            // RAMA_F only
  double f_b = 0.2;                            // RAMA_F only
};

struct IdentityInstance {
  IdentityId id = IdentityId::LUO4;
  IdentityParams params;
  int rhs_kind = 3;
  bool validated = false;
};

/// Hypotheses, in the order validate() checks them.
inline std::vector<std::string> hypotheses(IdentityId id) {
  std::vector<std::string> h;
  const IdentityId base = base_theorem(id);
  switch (identity_shape(id)) {
    case IdentityShape::Mixed:
      h = {"m must be a positive integer", "n must be a positive integer", "a and b must be non-negative",
           "a + b must equal n"};
      if (base == IdentityId::LUO4) h.push_back("n must be even");
      if (base == IdentityId::LUO5 || base == IdentityId::LUO6 || base == IdentityId::LUO7 ||
          base == IdentityId::LUO8)
        h.push_back("a must be even");
      h.push_back("need exactly a shifts x_j and b shifts y_i");
      h.push_back("shifts must sum to zero");
      break;
    case IdentityShape::SingleProduct:
      h = {"m must be a positive integer", "n must be a positive integer"};
      if (id == IdentityId::COR149 || id == IdentityId::COR155 || id == IdentityId::COR200 ||
          id == IdentityId::COR203 || id == IdentityId::COR209)
        h.push_back("n must be even");
      if (base == IdentityId::COR400) h.push_back("mn must be even");
      if (id == IdentityId::COR200 || id == IdentityId::COR203 || id == IdentityId::COR206 ||
          id == IdentityId::COR209 || id == IdentityId::RAMA_PI)
        h.push_back("m must be 1");
      h.push_back("need exactly n shifts y_j");
      h.push_back("shifts must sum to zero");
      break;
    case IdentityShape::Boon:
      h = {"n must be a positive integer"};
      break;
    case IdentityShape::Zeng:
      h = {"k must be a positive integer", "n must be a positive integer", "a and b must be non-negative",
           "a + b must equal n", "y must be 0 when a or b is 0"};
      break;
    case IdentityShape::RamaF:
      h = {"n must be a positive integer", "a and b must be non-negative reals with ab < 1"};
      break;
    case IdentityShape::RamaT3:
      h = {"n must be at least 2"};
      break;
  }
  if (auto p = app_preset(id)) {
    h.insert(h.begin(), "m, n, a, b are fixed by the preset");
    if (p->zero_shift) h.push_back("shifts must all be zero");
  }
  return h;
}

/// Parameter names each identity reads.
inline std::vector<std::string> parameter_schema(IdentityId id) {
  switch (identity_shape(id)) {
    case IdentityShape::Mixed:
      if (app_preset(id)) return {"shifts_x", "shifts_y"};
      return {"m", "n", "a", "b", "shifts_x", "shifts_y"};
    case IdentityShape::SingleProduct:
      if (app_preset(id)) return {"shifts_y"};
      if (id == IdentityId::COR200 || id == IdentityId::COR203 || id == IdentityId::COR206 ||
          id == IdentityId::COR209 || id == IdentityId::RAMA_PI)
        return {"n"};
      return {"m", "n", "shifts_y"};
    case IdentityShape::Boon: return {"n"};
    case IdentityShape::Zeng: return {"k", "n", "a", "b", "y"};
    case IdentityShape::RamaF: return {"n", "f_a", "f_b"};
    case IdentityShape::RamaT3: return {"n"};
  }
  return {};
}

/// One-line statement of the identity.
inline std::string anchor(IdentityId id) {
  using I = IdentityId;
  switch (id) {
    case I::LUO4: return "sum_{k<mn} prod_j theta1(z+x_j+k pi/mn) prod_i theta2(z+y_i+k pi/mn) = R12(m,n) theta_{3|4}(mnz|m^2n tau)";
    case I::LUO5: return "sum_{k<mn} prod theta1(z+x_j+k pi/mn) prod theta3(z+y_i+k pi/mn) = R13(m,n) theta3(mnz|m^2n tau)";
    case I::LUO6: return "sum_{k<mn} prod theta1(z+x_j+k pi/mn) prod theta4(z+y_i+k pi/mn) = R14(m,n) theta_{3|4}(mnz|m^2n tau)";
    case I::LUO7: return "sum_{k<mn} prod theta2(z+x_j+k pi/mn) prod theta3(z+y_i+k pi/mn) = R23(m,n) theta3(mnz|m^2n tau)";
    case I::LUO8: return "sum_{k<mn} prod theta2(z+x_j+k pi/mn) prod theta4(z+y_i+k pi/mn) = R24(m,n) theta_{3|4}(mnz|m^2n tau)";
    case I::LUO9: return "sum_{k<mn} prod theta3(z+x_j+k pi/mn) prod theta4(z+y_i+k pi/mn) = R34(m,n) theta_{3|4}(mnz|m^2n tau)";
    case I::COR149: return "sum_{k<mn} prod_j theta1(z+y_j+k pi/mn) = R1(m,n) theta3(mnz|m^2n tau)";
    case I::COR155: return "sum_{k<mn} prod_j theta2(z+y_j+k pi/mn) = R2(m,n) theta3(mnz|m^2n tau)";
    case I::COR600: return "sum_{k<mn} prod_j theta3(z+y_j+k pi/mn) = R3(m,n) theta3(mnz|m^2n tau)";
    case I::COR400: return "sum_{k<mn} prod_j theta4(z+y_j+k pi/mn) = R4(m,n) theta3(mnz|m^2n tau)";
    case I::COR200: return "sum_{k<n} theta1^n(z+k pi/n) = R1(n) theta3(nz|n tau)";
    case I::COR203: return "sum_{k<n} theta2^n(z+k pi/n) = R2(n) theta3(nz|n tau)";
    case I::COR206: return "sum_{k<n} theta3^n(z+k pi/n) = R3(n) theta3(nz|n tau)";
    case I::COR209: return "sum_{k<n} theta4^n(z+k pi/n) = R4(n) theta3(nz|n tau)";
    case I::BOON: return "sum_{k<n} theta3(z+k pi/n|tau) = n theta3(nz|n^2 tau)";
    case I::ZENG: return "sum_{s<kn} theta3^a(z/kn+y/a+pi s/kn|T) theta3^b(z/kn-y/b+pi s/kn|T) = R33(a,b; ny/(kab), T) theta3(z|tau), T = tau/(k^2 n)";
    case I::CHANLIU: return "sum_{k<mn} prod_j theta3(z+y_j+k pi/mn) = G_{m,n}(y) theta3(mnz|m^2n tau)";
    case I::RAMA_F: return "sum_{-n/2<r<=n/2} (sum_{k = r mod n} a^{k(k+1)/2n} b^{k(k-1)/2n})^n = f(a,b) F_n(ab)";
    case I::RAMA_T3: return "sum_{k<n} q^{k^2} e^{2kiz} theta3^n(z+k pi tau|n tau) = theta3(z|tau) F_n(tau)";
    case I::RAMA_PI: return "sum_{k<n} theta3^n(z+k pi/n|tau) = G_n(tau) theta3(nz|n tau)";
    default: break;
  }
  const AppPreset p = *app_preset(id);
  std::string s = std::string(to_string(p.base)) + " at m=" + std::to_string(p.m) + ", n=" + std::to_string(p.n) +
                  ", a=" + std::to_string(p.a) + ", b=" + std::to_string(p.b) + ": rhs = ";
  switch (p.cubic) {
    case RFamily::R12: s += "-2m q^{1/4} theta1(2x|2tau) theta_{3|4}(2mz|2m^2 tau)"; break;
    case RFamily::CubicA: s += "3m a(y1-y3, y2-y3|2tau) theta3(3mz|3m^2 tau)"; break;
    case RFamily::CubicB:
      s += p.a == 2 ? "3m b(x1-y1, x2-y1|2tau) theta_{3|4}(3mz|3m^2 tau)"
                    : "3m b(y1-x1, y2-x1|2tau) theta3(3mz|3m^2 tau)";
      break;
    case RFamily::CubicC: s += "3m q^{3/2} c(x1-y1, x2-y1|2tau) theta_{3|4}(3mz|3m^2 tau)"; break;
    default: s += "-3m q^{3/2} d(x1-y1, x2-y1|2tau) theta_{3|4}(3mz|3m^2 tau)"; break;
  }
  if (p.zero_shift) s += ", all shifts zero";
  return s;
}

/// A valid parameter set for every identity (zero shifts).
inline IdentityParams default_params(IdentityId id) {
  IdentityParams p;
  if (auto pre = app_preset(id)) {
    p.m = pre->m;
    p.n = pre->n;
    p.a = pre->a;
    p.b = pre->b;
  } else {
    switch (identity_shape(id)) {
      case IdentityShape::Mixed:
        p.m = 1; p.n = 2; p.a = base_theorem(id) == IdentityId::LUO4 || base_theorem(id) == IdentityId::LUO9 ? 1 : 2;
        p.b = p.n - p.a;
        break;
      case IdentityShape::SingleProduct:
        p.m = 1; p.n = 2; p.a = 0; p.b = 2;
        break;
      case IdentityShape::Zeng:
        p.k = 1; p.n = 2; p.a = 1; p.b = 1;
        break;
      case IdentityShape::Boon:
      case IdentityShape::RamaF:
      case IdentityShape::RamaT3:
        p.n = 3;
        break;
    }
  }
  if (identity_shape(id) == IdentityShape::SingleProduct) {
    p.a = 0;
    p.b = p.n;
  }
  if (identity_shape(id) == IdentityShape::Mixed || identity_shape(id) == IdentityShape::SingleProduct) {
    p.shifts_x.assign(p.a, {0.0, 0.0});
    p.shifts_y.assign(p.b, {0.0, 0.0});
  }
  return p;
}

/// Right-hand theta kind of theta(mnz | m^2 n tau).
inline int rhs_kind(IdentityId id, long m, long n, long a, long b) {
  (void)a;
  const auto even = [](long v) { return v % 2 == 0; };
  switch (base_theorem(id)) {
    case IdentityId::LUO4: return even(m * a) ? 3 : 4;
    case IdentityId::LUO6: return even(m * n) ? 3 : 4;
    case IdentityId::LUO8:
    case IdentityId::LUO9: return even(m * b) ? 3 : 4;
    default: return 3;
  }
}

namespace detail {

inline void require(bool ok, const char* condition) {
  if (!ok) throw HypothesisError(condition);
}

inline bool shifts_sum_zero(const std::vector<std::complex<double>>& x, const std::vector<std::complex<double>>& y) {
  std::complex<double> s(0.0, 0.0);
  double scale = 1.0;
  for (const auto* v : {&x, &y})
    for (const auto& c : *v) {
      s += c;
      scale += std::abs(c);
    }
  return std::abs(s) <= 1e-14 * scale;
}

inline bool all_zero(const std::vector<std::complex<double>>& v) {
  for (const auto& c : v)
    if (c != std::complex<double>(0.0, 0.0)) return false;
  return true;
}

}  // namespace detail

/// Checks every hypothesis of `id` and returns a validated instance.
inline IdentityInstance validate(IdentityId id, const IdentityParams& params) {
  using detail::require;
  const IdentityParams& p = params;
  const IdentityId base = base_theorem(id);
  if (auto pre = app_preset(id)) {
    require(p.m == pre->m && p.n == pre->n && p.a == pre->a && p.b == pre->b,
            "m, n, a, b are fixed by the preset");
  }
  switch (identity_shape(id)) {
    case IdentityShape::Mixed:
      require(p.m >= 1, "m must be a positive integer");
      require(p.n >= 1, "n must be a positive integer");
      require(p.a >= 0 && p.b >= 0, "a and b must be non-negative");
      require(p.a + p.b == p.n, "a + b must equal n");
      if (base == IdentityId::LUO4) require(p.n % 2 == 0, "n must be even");
      if (base == IdentityId::LUO5 || base == IdentityId::LUO6 || base == IdentityId::LUO7 ||
          base == IdentityId::LUO8)
        require(p.a % 2 == 0, "a must be even");
      require(static_cast<long>(p.shifts_x.size()) == p.a && static_cast<long>(p.shifts_y.size()) == p.b,
              "need exactly a shifts x_j and b shifts y_i");
      require(detail::shifts_sum_zero(p.shifts_x, p.shifts_y), "shifts must sum to zero");
      break;
    case IdentityShape::SingleProduct:
      require(p.m >= 1, "m must be a positive integer");
      require(p.n >= 1, "n must be a positive integer");
      if (id == IdentityId::COR149 || id == IdentityId::COR155 || id == IdentityId::COR200 ||
          id == IdentityId::COR203 || id == IdentityId::COR209)
        require(p.n % 2 == 0, "n must be even");
      if (base == IdentityId::COR400) require(p.m * p.n % 2 == 0, "mn must be even");
      if (id == IdentityId::COR200 || id == IdentityId::COR203 || id == IdentityId::COR206 ||
          id == IdentityId::COR209 || id == IdentityId::RAMA_PI)
        require(p.m == 1, "m must be 1");
      require(p.shifts_x.empty() && static_cast<long>(p.shifts_y.size()) == p.n, "need exactly n shifts y_j");
      require(detail::shifts_sum_zero(p.shifts_x, p.shifts_y), "shifts must sum to zero");
      if (id == IdentityId::COR200 || id == IdentityId::COR203 || id == IdentityId::COR206 ||
          id == IdentityId::COR209 || id == IdentityId::RAMA_PI)
        require(detail::all_zero(p.shifts_y), "shifts must all be zero");
      break;
    case IdentityShape::Boon:
      require(p.n >= 1, "n must be a positive integer");
      break;
    case IdentityShape::Zeng:
      require(p.k >= 1, "k must be a positive integer");
      require(p.n >= 1, "n must be a positive integer");
      require(p.a >= 0 && p.b >= 0, "a and b must be non-negative");
      require(p.a + p.b == p.n, "a + b must equal n");
      require((p.a > 0 && p.b > 0) || p.y == std::complex<double>(0.0, 0.0), "y must be 0 when a or b is 0");
      break;
    case IdentityShape::RamaF:
      require(p.n >= 1, "n must be a positive integer");
      require(p.f_a >= 0 && p.f_b >= 0 && p.f_a * p.f_b < 1, "a and b must be non-negative reals with ab < 1");
      break;
    case IdentityShape::RamaT3:
      require(p.n >= 2, "n must be at least 2");
      break;
  }
  if (auto pre = app_preset(id); pre && pre->zero_shift)
    require(detail::all_zero(p.shifts_x) && detail::all_zero(p.shifts_y), "shifts must all be zero");
  IdentityInstance inst;
  inst.id = id;
  inst.params = p;
  inst.rhs_kind = rhs_kind(id, p.m, p.n, p.a, p.b);
  inst.validated = true;
  return inst;
}

namespace detail {

template <class Real>
std::vector<complex_t<Real>> cast_all(const std::vector<std::complex<double>>& v) {
  std::vector<complex_t<Real>> r;
  r.reserve(v.size());
  for (const auto& c : v) r.push_back(complex_cast<Real>(c));
  return r;
}

template <class Real>
void require_validated(const IdentityInstance& inst) {
  if (!inst.validated) throw DomainError("identity instance has not been validated");
}

// q-order for summing the exact F_n coefficients at |q|.
template <class Real>
long fn_order_for(long n, const Real& q_abs, const EvalConfig<Real>& cfg) {
  using std::exp;
  using std::log;
  using std::pow;
  const Real lq = log(q_abs);
  for (long K = n; K <= 400; ++K) {
    const Real bound = Real(2 * n) * pow(Real(K + 2), Real(n)) * exp(lq * Real(K + 1)) / (Real(1) - q_abs);
    if (bound < cfg.tol / Real(10)) return K;
  }
  throw ConvergenceError("F_n series would need more than 400 coefficients at this |q|");
}

inline const std::vector<long long>& cached_fn_series(long n, long K_quarter) {
  static std::mutex mu;
  static std::map<std::pair<long, long>, std::vector<long long>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, K_quarter);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, fn_series(n, K_quarter)).first;
  return it->second;
}

}  // namespace detail

/// F_n(tau) summed from its exact q-coefficients.
template <class Real>
complex_t<Real> fn_value(long n, const TauPoint<Real>& tau, const EvalConfig<Real>& cfg) {
  if (n == 1) return complex_t<Real>(Real(1), Real(0));
  const long K = detail::fn_order_for<Real>(n, tau.q_abs(), cfg);
  const auto& c = detail::cached_fn_series(n, 4 * K);
  complex_t<Real> s(Real(0), Real(0));
  for (long j = static_cast<long>(c.size()) - 1; j >= 0; --j) s = s * tau.nome() + Real(c[j]);
  return s;
}

/// Left side of sum_{k<n} q^{k^2} e^{2kiz} theta3^n(z + k pi tau | n tau).
template <class Real>
complex_t<Real> rama_t3_lhs(long n, const complex_t<Real>& z, const TauPoint<Real>& tau,
                            const EvalConfig<Real>& cfg) {
  using std::exp;
  const TauPoint<Real> ntau = tau.scaled(n, 1);
  const complex_t<Real> i = imag_unit<Real>();
  complex_t<Real> s(Real(0), Real(0));
  for (long k = 0; k < n; ++k) {
    const complex_t<Real> arg = z + pi<Real>() * tau.tau() * Real(k);
    complex_t<Real> th = theta(ThetaKind::Three, arg, ntau, cfg);
    complex_t<Real> p(Real(1), Real(0));
    for (long j = 0; j < n; ++j) p *= th;
    s += exp(tau.log_q() * Real(k * k) + Real(2 * k) * i * z) * p;
  }
  return s;
}

namespace detail {

// tau with q = sqrt(ab): q = e^{i pi tau} so tau = i (-ln(ab)) / (2 pi).
template <class Real>
TauPoint<Real> rama_tau(const Real& ab) {
  using std::log;
  return TauPoint<Real>(Real(0), -log(ab) / (Real(2) * pi<Real>()));
}

template <class Real>
complex_t<Real> mixed_lhs(const IdentityInstance& inst, const complex_t<Real>& z, const TauPoint<Real>& tau,
                          const EvalConfig<Real>& cfg, ThetaKind first, ThetaKind second,
                          const std::vector<complex_t<Real>>& xs, const std::vector<complex_t<Real>>& ys) {
  const long mn = inst.params.m * inst.params.n;
  complex_t<Real> total(Real(0), Real(0));
  for (long k = 0; k < mn; ++k) {
    const complex_t<Real> step(pi<Real>() * Real(k) / Real(mn), Real(0));
    complex_t<Real> prod(Real(1), Real(0));
    for (const auto& x : xs) prod *= theta(first, z + x + step, tau, cfg);
    for (const auto& y : ys) prod *= theta(second, z + y + step, tau, cfg);
    total += prod;
  }
  return total;
}

}  // namespace detail

template <class Real>
complex_t<Real> lhs_value(const IdentityInstance& inst, const complex_t<Real>& z, const TauPoint<Real>& tau,
                          const EvalConfig<Real>& cfg) {
  detail::require_validated<Real>(inst);
  const IdentityParams& p = inst.params;
  const auto [first, second] = factor_kinds(inst.id);
  switch (identity_shape(inst.id)) {
    case IdentityShape::Mixed:
    case IdentityShape::SingleProduct:
      return detail::mixed_lhs<Real>(inst, z, tau, cfg, first, second, detail::cast_all<Real>(p.shifts_x),
                                     detail::cast_all<Real>(p.shifts_y));
    case IdentityShape::Boon: {
      complex_t<Real> s(Real(0), Real(0));
      for (long k = 0; k < p.n; ++k) s += theta(ThetaKind::Three, z + pi<Real>() * Real(k) / Real(p.n), tau, cfg);
      return s;
    }
    case IdentityShape::Zeng: {
      const long kn = p.k * p.n;
      const TauPoint<Real> T = tau.scaled(1, p.k * p.k * p.n);
      const complex_t<Real> y = complex_cast<Real>(p.y);
      complex_t<Real> s(Real(0), Real(0));
      for (long j = 0; j < kn; ++j) {
        const complex_t<Real> base = z / Real(kn) + pi<Real>() * Real(j) / Real(kn);
        complex_t<Real> prod(Real(1), Real(0));
        if (p.a > 0) {
          const complex_t<Real> t = theta(ThetaKind::Three, base + y / Real(p.a), T, cfg);
          for (long i = 0; i < p.a; ++i) prod *= t;
        }
        if (p.b > 0) {
          const complex_t<Real> t = theta(ThetaKind::Three, base - y / Real(p.b), T, cfg);
          for (long i = 0; i < p.b; ++i) prod *= t;
        }
        s += prod;
      }
      return s;
    }
    case IdentityShape::RamaF:
      return complex_t<Real>(ramanujan_lhs<Real>(Real(p.f_a), Real(p.f_b), p.n, cfg), Real(0));
    case IdentityShape::RamaT3:
      return rama_t3_lhs<Real>(p.n, z, tau, cfg);
  }
  return {};
}

/// The z-independent coefficient multiplying the right-hand theta.
template <class Real>
complex_t<Real> coefficient_value(const IdentityInstance& inst, const TauPoint<Real>& tau,
                                  const EvalConfig<Real>& cfg) {
  detail::require_validated<Real>(inst);
  const IdentityParams& p = inst.params;
  using C = complex_t<Real>;
  const auto xs = detail::cast_all<Real>(p.shifts_x);
  const auto ys = detail::cast_all<Real>(p.shifts_y);
  if (auto pre = app_preset(inst.id)) {
    const TauPoint<Real> tau2 = tau.scaled(2, 1);
    const Real scalar = Real(pre->sign * 3 * pre->m);
    if (pre->cubic == RFamily::R12) {
      return Real(-2 * pre->m) * tau.qpow(Real(1) / Real(4)) *
             theta(ThetaKind::One, Real(2) * xs[0], tau2, cfg);
    }
    C u1, u2;
    if (pre->cubic == RFamily::CubicA) {
      u1 = ys[0] - ys[2];
      u2 = ys[1] - ys[2];
    } else if (pre->a == 2) {
      u1 = xs[0] - ys[0];
      u2 = xs[1] - ys[0];
    } else {
      u1 = ys[0] - xs[0];
      u2 = ys[1] - xs[0];
    }
    C v = scalar * eval_cubic<Real>(pre->cubic, u1, u2, tau2, cfg);
    if (pre->cubic == RFamily::CubicC || pre->cubic == RFamily::CubicD) v *= tau.qpow(Real(3) / Real(2));
    return v;
  }
  switch (identity_shape(inst.id)) {
    case IdentityShape::Mixed:
      return eval_R<Real>(coefficient_family(inst.id), p.m, p.n, p.a, p.b, xs, ys, tau, cfg).value;
    case IdentityShape::SingleProduct:
      if (coefficient_family(inst.id) == RFamily::Gmn) return eval_G<Real>(p.m, p.n, ys, tau, cfg);
      return eval_R_single<Real>(coefficient_family(inst.id), p.m, p.n, ys, tau, cfg).value;
    case IdentityShape::Boon:
      return C(Real(p.n), Real(0));
    case IdentityShape::Zeng: {
      const TauPoint<Real> T = tau.scaled(1, p.k * p.k * p.n);
      C y(Real(0), Real(0));
      if (p.a > 0 && p.b > 0)
        y = complex_cast<Real>(p.y) * Real(p.n) / Real(p.k * p.a * p.b);
      return eval_R33<Real>(p.k, p.n, p.a, p.b, y, T, cfg);
    }
    case IdentityShape::RamaF: {
      const Real ab = Real(p.f_a) * Real(p.f_b);
      if (ab == Real(0)) return C(Real(1), Real(0));
      return fn_value<Real>(p.n, detail::rama_tau<Real>(ab), cfg);
    }
    case IdentityShape::RamaT3:
      return fn_value<Real>(p.n, tau, cfg);
  }
  return {};
}

template <class Real>
complex_t<Real> rhs_value(const IdentityInstance& inst, const complex_t<Real>& z, const TauPoint<Real>& tau,
                          const EvalConfig<Real>& cfg) {
  detail::require_validated<Real>(inst);
  const IdentityParams& p = inst.params;
  const complex_t<Real> coeff = coefficient_value<Real>(inst, tau, cfg);
  switch (identity_shape(inst.id)) {
    case IdentityShape::Mixed:
    case IdentityShape::SingleProduct: {
      const long mn = p.m * p.n;
      return coeff * theta(theta_kind_from_int(inst.rhs_kind), z * Real(mn), tau.scaled(p.m * mn, 1), cfg);
    }
    case IdentityShape::Boon:
      return coeff * theta(ThetaKind::Three, z * Real(p.n), tau.scaled(p.n * p.n, 1), cfg);
    case IdentityShape::Zeng:
    case IdentityShape::RamaT3:
      return coeff * theta(ThetaKind::Three, z, tau, cfg);
    case IdentityShape::RamaF:
      return coeff * ramanujan_f<Real>(Real(p.f_a), Real(p.f_b), cfg);
  }
  return {};
}

/// |lhs - rhs| / max(1, |lhs|, |rhs|).
template <class Real>
Real relative_residual(const complex_t<Real>& lhs, const complex_t<Real>& rhs) {
  using std::abs;
  using std::max;
  return abs(lhs - rhs) / max(Real(1), max(abs(lhs), abs(rhs)));
}

}  // namespace circsum
