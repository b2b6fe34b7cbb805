#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "circsum/errors.hpp"
#include "circsum/numeric.hpp"
#include "circsum/tau.hpp"

namespace circsum {

/// Linear constraint sum r_i = num/den. Infeasible when num/den is not an integer.
struct SumConstraint {
  long num = 0;
  long den = 1;

  bool feasible() const { return num % den == 0; }
  long value() const { return num / den; }
};

/// Non-numeric description of a constrained lattice sum
///
///   scalar * i^{i_power} * q^{quarter/4} * e^{i sum_{c in const_mask} w_c}
///     * sum_{r : constraint} (-1)^{sum_{sign} r_i} q^{sum r_i^2 + cross sum_{i<j} r_i r_j + sum lin_i r_i}
///       e^{2i sum r_i w_i}
///
/// with the per-index phase weights w_i supplied separately (numeric or exact).
struct SumShape {
  int index_count = 0;
  std::vector<bool> sign_mask;
  std::vector<int> linear_q;
  int cross_coupling = 0;
  std::vector<bool> constant_phase_mask;
  int q_prefactor_quarter_units = 0;
  long scalar_integer = 1;
  long scalar_i_power = 0;
  std::optional<SumConstraint> constraint;

  explicit SumShape(int t = 0)
      : index_count(t), sign_mask(t, false), linear_q(t, 0), constant_phase_mask(t, false) {}

  int free_count() const { return constraint ? index_count - 1 : index_count; }
};

/// Numeric instance of a constrained multi-index q-lattice sum.
template <class Real>
struct ConstrainedSumSpec {
  using complex_type = complex_t<Real>;

  int index_count = 0;
  std::vector<bool> sign_mask;
  std::vector<int> linear_q;
  int cross_coupling = 0;
  std::vector<complex_type> phase_weights;
  complex_type constant_phase{Real(1), Real(0)};
  int q_prefactor_quarter_units = 0;
  complex_type scalar_prefactor{Real(1), Real(0)};
  std::optional<SumConstraint> constraint;

  int free_count() const { return constraint ? index_count - 1 : index_count; }
};

template <class Real>
struct LatticeSumResult {
  complex_t<Real> value{Real(0), Real(0)};
  bool infeasible = false;
  int shells = 0;  // number of L-infinity rings enumerated
};

enum class RFamily {
  R12, R13, R14, R23, R24, R34,
  R1, R2, R3, R4,
  Gmn, R33,
  CubicA, CubicB, CubicC, CubicD,
};

inline std::string_view to_string(RFamily f) {
  switch (f) {
    case RFamily::R12: return "R12";
    case RFamily::R13: return "R13";
    case RFamily::R14: return "R14";
    case RFamily::R23: return "R23";
    case RFamily::R24: return "R24";
    case RFamily::R34: return "R34";
    case RFamily::R1: return "R1";
    case RFamily::R2: return "R2";
    case RFamily::R3: return "R3";
    case RFamily::R4: return "R4";
    case RFamily::Gmn: return "G";
    case RFamily::R33: return "R33";
    case RFamily::CubicA: return "A";
    case RFamily::CubicB: return "B";
    case RFamily::CubicC: return "C";
    case RFamily::CubicD: return "D";
  }
  return "?";
}

inline std::optional<RFamily> rfamily_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(RFamily::CubicD); ++i) {
    const auto f = static_cast<RFamily>(i);
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

inline bool is_mixed_family(RFamily f) {
  return f == RFamily::R12 || f == RFamily::R13 || f == RFamily::R14 || f == RFamily::R23 ||
         f == RFamily::R24 || f == RFamily::R34;
}

inline bool is_single_family(RFamily f) {
  return f == RFamily::R1 || f == RFamily::R2 || f == RFamily::R3 || f == RFamily::R4;
}

inline bool is_cubic_family(RFamily f) {
  return f == RFamily::CubicA || f == RFamily::CubicB || f == RFamily::CubicC ||
         f == RFamily::CubicD;
}

namespace detail {

// Visits every integer vector of length dim with max |r_i| == radius.
template <class Visit>
void for_each_on_ring(int dim, long radius, std::vector<long>& r, const Visit& visit) {
  r.assign(dim, -radius);
  if (dim == 0) {
    if (radius == 0) visit(r);
    return;
  }
  while (true) {
    bool on_ring = radius == 0;
    for (long v : r) on_ring = on_ring || v == radius || v == -radius;
    if (on_ring) visit(r);
    int i = 0;
    while (i < dim && r[i] == radius) r[i++] = -radius;
    if (i == dim) return;
    ++r[i];
  }
}

inline void check_mixed_params(long m, long n, long a, long b) {
  if (m < 1) throw HypothesisError("m must be a positive integer");
  if (n < 1) throw HypothesisError("n must be a positive integer");
  if (a < 0 || b < 0) throw HypothesisError("a and b must be non-negative");
  if (a + b != n) throw HypothesisError("a + b must equal n");
}

template <class Real>
void check_sum_zero(std::span<const complex_t<Real>> shifts, std::string_view what) {
  using std::abs;
  complex_t<Real> s(Real(0), Real(0));
  Real scale(1);
  for (const auto& v : shifts) {
    s += v;
    scale += abs(v);
  }
  if (abs(s) > Real(1e-12) * scale) {
    std::ostringstream os;
    os << what << " must sum to zero (|sum| = " << abs(s) << ")";
    throw HypothesisError(os.str());
  }
}

}  // namespace detail

/// Shape of the mixed coefficients R_{1,2} ... R_{3,4}; indices are r_1..r_a then s_1..s_b.
inline SumShape mixed_shape(RFamily family, long m, long n, long a, long b) {
  detail::check_mixed_params(m, n, a, b);
  if (!is_mixed_family(family)) throw DomainError("mixed_shape needs one of R12..R34");
  SumShape s(static_cast<int>(n));
  s.scalar_integer = m * n;
  const bool linear_on_r = family == RFamily::R13 || family == RFamily::R14 ||
                           family == RFamily::R23 || family == RFamily::R24;
  for (long i = 0; i < n; ++i) {
    const bool is_r = i < a;
    if ((family == RFamily::R12 || family == RFamily::R13) && is_r) s.sign_mask[i] = true;
    if ((family == RFamily::R24 || family == RFamily::R34) && !is_r) s.sign_mask[i] = true;
    if (linear_on_r && is_r) {
      s.linear_q[i] = 1;
      s.constant_phase_mask[i] = true;
    }
  }
  switch (family) {
    case RFamily::R12:
      // theta1 carries -i q^{1/4}, so the product of a of them gives (-i)^a.
      s.scalar_i_power = -a;
      s.q_prefactor_quarter_units = static_cast<int>(-n);
      s.constraint = SumConstraint{-n, 2};
      break;
    case RFamily::R13:
      s.scalar_i_power = a;
      s.q_prefactor_quarter_units = static_cast<int>(a);
      s.constraint = SumConstraint{-a, 2};
      break;
    case RFamily::R14:
    case RFamily::R23:
    case RFamily::R24:
      s.q_prefactor_quarter_units = static_cast<int>(a);
      s.constraint = SumConstraint{-a, 2};
      break;
    default:  // R34
      s.constraint = SumConstraint{0, 1};
      break;
  }
  return s;
}

/// R_1..R_4 of the single-product circular sums. R1/R2 use weights -y_j
/// (phase e^{-2i sum r y}), R3/R4 use +y_j.
inline SumShape single_shape(RFamily family, long m, long n) {
  if (m < 1 || n < 1) throw HypothesisError("m and n must be positive integers");
  if (!is_single_family(family)) throw DomainError("single_shape needs one of R1..R4");
  SumShape s(static_cast<int>(n));
  s.scalar_integer = m * n;
  if (family == RFamily::R1 || family == RFamily::R2) {
    s.q_prefactor_quarter_units = static_cast<int>(-n);
    s.constraint = SumConstraint{n, 2};
  } else {
    s.constraint = SumConstraint{0, 1};
  }
  return s;
}

inline SumShape g_shape(long m, long n) {
  if (m < 1 || n < 1) throw HypothesisError("m and n must be positive integers");
  SumShape s(static_cast<int>(n));
  s.scalar_integer = m * n;
  s.constraint = SumConstraint{0, 1};
  return s;
}

inline SumShape r33_shape(long k, long n, long a, long b) {
  if (k < 1) throw HypothesisError("k must be a positive integer");
  detail::check_mixed_params(1, n, a, b);
  SumShape s(static_cast<int>(n));
  s.scalar_integer = k * n;
  s.constraint = SumConstraint{0, 1};
  return s;
}

/// Two-variable hexagonal series a, b, c, d: exponent r^2 + rs + s^2 (+ 2r + 2s for c, d).
inline SumShape cubic_shape(RFamily kind) {
  if (!is_cubic_family(kind)) throw DomainError("cubic_shape needs one of A, B, C, D");
  SumShape s(2);
  s.cross_coupling = 1;
  const bool alternating = kind == RFamily::CubicB || kind == RFamily::CubicD;
  const bool shifted = kind == RFamily::CubicC || kind == RFamily::CubicD;
  for (int i = 0; i < 2; ++i) {
    s.sign_mask[i] = alternating;
    if (shifted) {
      s.linear_q[i] = 2;
      s.constant_phase_mask[i] = true;
    }
  }
  return s;
}

/// Binds phase weights to a shape, producing the numeric spec.
template <class Real>
ConstrainedSumSpec<Real> make_spec(const SumShape& shape, std::span<const complex_t<Real>> weights) {
  using std::exp;
  using C = complex_t<Real>;
  if (static_cast<int>(weights.size()) != shape.index_count)
    throw DomainError("phase weight count does not match the index count");
  ConstrainedSumSpec<Real> spec;
  spec.index_count = shape.index_count;
  spec.sign_mask = shape.sign_mask;
  spec.linear_q = shape.linear_q;
  spec.cross_coupling = shape.cross_coupling;
  spec.phase_weights.assign(weights.begin(), weights.end());
  C phase(Real(0), Real(0));
  for (int i = 0; i < shape.index_count; ++i)
    if (shape.constant_phase_mask[i]) phase += weights[i];
  spec.constant_phase = exp(imag_unit<Real>() * phase);
  spec.q_prefactor_quarter_units = shape.q_prefactor_quarter_units;
  spec.scalar_prefactor = i_power<Real>(shape.scalar_i_power) * Real(shape.scalar_integer);
  spec.constraint = shape.constraint;
  return spec;
}

/// Evaluates a constrained lattice sum by L-infinity rings of the free indices
/// (the last index is eliminated by the constraint when present). Stops once two
/// consecutive rings each contribute less than tol/10 in absolute-term mass.
template <class Real>
LatticeSumResult<Real> eval_constrained_sum(const ConstrainedSumSpec<Real>& spec,
                                            const TauPoint<Real>& tau,
                                            const EvalConfig<Real>& cfg) {
  using std::abs;
  using std::exp;
  using C = complex_t<Real>;
  cfg.validate();
  LatticeSumResult<Real> result;
  const int t = spec.index_count;
  if (t < 1) throw DomainError("a lattice sum needs at least one index");
  if (spec.constraint && !spec.constraint->feasible()) {
    result.infeasible = true;
    return result;
  }
  if (!(tau.q_abs() < cfg.q_abs_ceiling)) throw DomainError("|q| is not below the configured ceiling");

  const C prefactor = spec.scalar_prefactor * spec.constant_phase *
                      tau.qpow(Real(spec.q_prefactor_quarter_units) / Real(4));
  const Real pre_abs = abs(prefactor);
  const C lq = tau.log_q();
  const C two_i = imag_unit<Real>() * Real(2);
  const int free = spec.free_count();
  const long fixed = spec.constraint ? spec.constraint->value() : 0;

  std::vector<long> full(t);
  auto term = [&](const std::vector<long>& r_free) -> C {
    long last_sum = 0;
    for (int i = 0; i < free; ++i) {
      full[i] = r_free[i];
      last_sum += r_free[i];
    }
    if (spec.constraint) full[t - 1] = fixed - last_sum;
    long quad = 0, lin = 0, sign = 0, cross = 0, partial = 0;
    C phase(Real(0), Real(0));
    for (int i = 0; i < t; ++i) {
      const long r = full[i];
      quad += r * r;
      lin += spec.linear_q[i] * r;
      if (spec.sign_mask[i]) sign += r;
      cross += partial * r;
      partial += r;
      if (r != 0) phase += spec.phase_weights[i] * Real(r);
    }
    const long exponent = quad + spec.cross_coupling * cross + lin;
    C v = exp(lq * Real(exponent) + two_i * phase);
    return (sign % 2 == 0) ? v : -v;
  };

  C sum(Real(0), Real(0));
  std::vector<long> r;
  if (free == 0) {
    r.clear();
    sum = term(r);
    result.value = prefactor * sum;
    return result;
  }
  const Real threshold = cfg.tol / Real(10);
  int quiet = 0;
  for (long radius = 0; radius <= cfg.max_terms; ++radius) {
    Real mass(0);
    C ring(Real(0), Real(0));
    detail::for_each_on_ring(free, radius, r, [&](const std::vector<long>& v) {
      const C x = term(v);
      ring += x;
      mass += abs(x);
    });
    sum += ring;
    result.shells = static_cast<int>(radius + 1);
    if (radius > 0 && pre_abs * mass < threshold) {
      if (++quiet == 2) {
        result.value = prefactor * sum;
        return result;
      }
    } else {
      quiet = 0;
    }
  }
  std::ostringstream os;
  os << "lattice sum did not converge within " << cfg.max_terms << " shells";
  throw ConvergenceError(os.str());
}

/// Mixed coefficient R_{i,j}(m, n; tau) of the two-kind circular sums.
template <class Real>
LatticeSumResult<Real> eval_R(RFamily family, long m, long n, long a, long b,
                              std::span<const complex_t<Real>> shifts_x,
                              std::span<const complex_t<Real>> shifts_y,
                              const TauPoint<Real>& tau, const EvalConfig<Real>& cfg) {
  const SumShape shape = mixed_shape(family, m, n, a, b);
  if (static_cast<long>(shifts_x.size()) != a || static_cast<long>(shifts_y.size()) != b)
    throw HypothesisError("need exactly a shifts x_j and b shifts y_i");
  std::vector<complex_t<Real>> w(shifts_x.begin(), shifts_x.end());
  w.insert(w.end(), shifts_y.begin(), shifts_y.end());
  detail::check_sum_zero<Real>(w, "x_1..x_a, y_1..y_b");
  return eval_constrained_sum(make_spec<Real>(shape, w), tau, cfg);
}

/// R_1..R_4 of the single-product circular sums.
template <class Real>
LatticeSumResult<Real> eval_R_single(RFamily family, long m, long n,
                                     std::span<const complex_t<Real>> shifts,
                                     const TauPoint<Real>& tau, const EvalConfig<Real>& cfg) {
  const SumShape shape = single_shape(family, m, n);
  if (static_cast<long>(shifts.size()) != n) throw HypothesisError("need exactly n shifts");
  detail::check_sum_zero<Real>(shifts, "y_1..y_n");
  std::vector<complex_t<Real>> w(shifts.begin(), shifts.end());
  if (family == RFamily::R1 || family == RFamily::R2)
    for (auto& v : w) v = -v;
  return eval_constrained_sum(make_spec<Real>(shape, w), tau, cfg);
}

/// G_{m,n}(y_1..y_n | tau) = mn sum_{sum r = 0} q^{sum r^2} e^{2i sum r_j y_j}.
template <class Real>
complex_t<Real> eval_G(long m, long n, std::span<const complex_t<Real>> ys,
                       const TauPoint<Real>& tau, const EvalConfig<Real>& cfg) {
  const SumShape shape = g_shape(m, n);
  if (static_cast<long>(ys.size()) != n) throw HypothesisError("need exactly n shifts");
  detail::check_sum_zero<Real>(ys, "y_1..y_n");
  return eval_constrained_sum(make_spec<Real>(shape, ys), tau, cfg).value;
}

/// R_33(a, b; y, tau) = kn sum_{sum m + sum n' = 0} q^{sum m^2 + sum n'^2} e^{2k(sum m) i y}.
template <class Real>
complex_t<Real> eval_R33(long k, long n, long a, long b, const complex_t<Real>& y,
                         const TauPoint<Real>& tau, const EvalConfig<Real>& cfg) {
  const SumShape shape = r33_shape(k, n, a, b);
  std::vector<complex_t<Real>> w(n, complex_t<Real>(Real(0), Real(0)));
  for (long i = 0; i < a; ++i) w[i] = y * Real(k);
  return eval_constrained_sum(make_spec<Real>(shape, w), tau, cfg).value;
}

/// Multiple theta series a, b, c, d (y1, y2 | tau).
template <class Real>
complex_t<Real> eval_cubic(RFamily kind, const complex_t<Real>& y1, const complex_t<Real>& y2,
                           const TauPoint<Real>& tau, const EvalConfig<Real>& cfg) {
  const SumShape shape = cubic_shape(kind);
  const complex_t<Real> w[2] = {y1, y2};
  return eval_constrained_sum(make_spec<Real>(shape, std::span<const complex_t<Real>>(w, 2)), tau,
                              cfg)
      .value;
}

}  // namespace circsum
