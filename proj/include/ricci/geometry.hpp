#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ricci {

// ---------------------------------------------------------------------------
// Left-invariant metrics on SU(2)
// ---------------------------------------------------------------------------

/// Diagonal entries x_i = g(e_i,e_i) > 0 of a left-invariant metric on SU(2)
/// in a Milnor basis with [e_i, e_{i+1}] = 2 e_{i+2}.
struct Su2Metric {
  double x1, x2, x3;

  double sum() const { return x1 + x2 + x3; }
  std::array<double, 3> entries() const { return {x1, x2, x3}; }
};

/// Diagonal symmetric bilinear form in the same basis. May be indefinite or
/// degenerate (Ricci of a metric often is).
struct DiagonalForm3 {
  double r1, r2, r3;

  std::array<double, 3> entries() const { return {r1, r2, r3}; }
};

inline bool valid(const Su2Metric& g) {
  return g.x1 > 0 && g.x2 > 0 && g.x3 > 0 && std::isfinite(g.x1) &&
         std::isfinite(g.x2) && std::isfinite(g.x3);
}

namespace detail {

/// a - b + c with the subtraction grouped against the larger positive term,
/// so that near-total cancellation between the two dominant entries is exact
/// instead of swallowing the small remainder. All arguments are positive.
inline double signed_sum3(double a, double b, double c) {
  return a >= c ? (a - b) + c : (c - b) + a;
}

}  // namespace detail

/// Ricci curvature of a left-invariant metric on SU(2):
///   r_i = 2 (x_i^2 - (x_{i+1} - x_{i+2})^2) / (x_{i+1} x_{i+2}),
/// indices mod 3. Scale invariant in g. The numerator is evaluated in the
/// factored form (x_i - x_j + x_k)(x_i + x_j - x_k), which stays accurate on
/// nearly degenerate triples (e.g. x_i << x_j = x_k) where the squared form
/// cancels catastrophically.
inline DiagonalForm3 ricci_su2(const Su2Metric& g) {
  const double x1 = g.x1, x2 = g.x2, x3 = g.x3;
  const auto num = [](double xi, double xj, double xk) {
    return detail::signed_sum3(xi, xj, xk) * detail::signed_sum3(xi, xk, xj);
  };
  return {2.0 * num(x1, x2, x3) / (x2 * x3), 2.0 * num(x2, x3, x1) / (x3 * x1),
          2.0 * num(x3, x1, x2) / (x1 * x2)};
}

// ---------------------------------------------------------------------------
// Two-summand Hopf-fibration families
// ---------------------------------------------------------------------------

enum class Fibration {
  CircleFiberSphere,   // S^1  -> S^{2n+1} -> CP^n
  Sp1FiberSphere,      // S^3  -> S^{4n+3} -> HP^n
  Spin7FiberSphere,    // S^7  -> S^15     -> S^8   (n fixed to 1)
  CP1FiberProjective,  // CP^1 -> CP^{2n+1}-> HP^n
};

inline const char* to_string(Fibration k) {
  switch (k) {
    case Fibration::CircleFiberSphere: return "circle";
    case Fibration::Sp1FiberSphere: return "sp1";
    case Fibration::Spin7FiberSphere: return "spin7";
    case Fibration::CP1FiberProjective: return "cp1";
  }
  return "?";
}

struct FibrationFamily {
  Fibration kind;
  int n = 1;

  FibrationFamily(Fibration k, int n_ = 1) : kind(k), n(n_) {
    if (n < 1) throw std::invalid_argument("fibration parameter n must be >= 1");
    if (kind == Fibration::Spin7FiberSphere) n = 1;  // S^15 only
  }

  int fiber_dim() const {
    switch (kind) {
      case Fibration::CircleFiberSphere: return 1;
      case Fibration::Sp1FiberSphere: return 3;
      case Fibration::Spin7FiberSphere: return 7;
      case Fibration::CP1FiberProjective: return 2;
    }
    return 0;
  }
  int base_dim() const {
    switch (kind) {
      case Fibration::CircleFiberSphere: return 2 * n;
      case Fibration::Sp1FiberSphere: return 4 * n;
      case Fibration::Spin7FiberSphere: return 8;
      case Fibration::CP1FiberProjective: return 4 * n;
    }
    return 0;
  }
  bool is_sphere() const { return kind != Fibration::CP1FiberProjective; }

  /// Ricci of the reference metric restricted to a fiber (coefficient of
  /// ghat on the vertical space): d_V - 1 for round sphere fibers, 4 for the
  /// CP^1 fiber of curvature 4.
  double fiber_ricci() const {
    return kind == Fibration::CP1FiberProjective ? 4.0
                                                 : double(fiber_dim() - 1);
  }
  /// Einstein constant of the base of the fibration: d_H + 3 d_V - 1 for the
  /// sphere cases, 4n + 8 for HP^n under the CP^{2n+1} normalization.
  double base_ricci() const {
    return kind == Fibration::CP1FiberProjective
               ? double(4 * n + 8)
               : double(base_dim() + 3 * fiber_dim() - 1);
  }
  /// Slope of the horizontal Ricci coefficient in t/s: 2 d_V for spheres,
  /// 4 for the projective family.
  double horizontal_slope() const {
    return kind == Fibration::CP1FiberProjective ? 4.0
                                                 : 2.0 * fiber_dim();
  }

  bool operator==(const FibrationFamily&) const = default;
};

/// g_{t,s}: reference round metric scaled by t on the fiber and s on the
/// horizontal distribution.
struct TwoSummandMetric {
  FibrationFamily family;
  double t, s;

  double ratio() const { return t / s; }
};

/// Ricci of a two-summand metric expressed against the reference metric ghat:
/// Ric = A ghat|_V + B ghat|_H.
struct TwoSummandForm {
  FibrationFamily family;
  double A, B;
};

inline bool valid(const TwoSummandMetric& g) {
  return g.t > 0 && g.s > 0 && std::isfinite(g.t) && std::isfinite(g.s);
}

/// Two-summand Ricci coefficients. For the sphere families these are the
/// formulas A = (d_V - 1) + d_H (t/s)^2 and B = d_H + 3 d_V - 1 - 2 d_V t/s.
/// The projective family uses A = 4 + 4n (t/s)^2 and B = 4n + 8 - 4 t/s,
/// calibrated so that the Einstein ratios {1/(n+1), 1}, the Fubini--Study
/// constant 4n + 4 and the solvability threshold 1/(n+2) all come out right;
/// see the einstein/prescribed tests for the cross-checks.
inline TwoSummandForm ricci_two_summand(const TwoSummandMetric& g) {
  const double r = g.ratio();
  const FibrationFamily& f = g.family;
  return {f, f.fiber_ricci() + f.base_dim() * r * r,
          f.base_ricci() - f.horizontal_slope() * r};
}

// ---------------------------------------------------------------------------
// Four-parameter family on S^{4n+3}
// ---------------------------------------------------------------------------

/// g_{(x1,x2,x3,s)}: arbitrary left-invariant metric on the S^3 fibers of
/// S^{4n+3} -> HP^n (diagonal entries x_i against ghat), horizontal scale s.
struct FourParamMetric {
  int n;
  double x1, x2, x3, s;

  Su2Metric fiber() const { return {x1, x2, x3}; }
};

/// Symmetric form on S^{4n+3}: fiber diagonal (a1,a2,a3) and horizontal
/// coefficient b, both against the reference metric ghat. (For the metric
/// g itself the horizontal multiplier is b/s.)
struct FourParamForm {
  int n;
  double a1, a2, a3;
  double b;

  std::array<double, 3> fiber_entries() const { return {a1, a2, a3}; }
  double horizontal_multiplier(double s) const { return b / s; }
};

inline bool valid(const FourParamMetric& g) {
  return g.n >= 1 && g.x1 > 0 && g.x2 > 0 && g.x3 > 0 && g.s > 0 &&
         std::isfinite(g.x1) && std::isfinite(g.x2) && std::isfinite(g.x3) &&
         std::isfinite(g.s);
}

/// Ricci of a four-parameter metric:
///   a_i = 4n x_i^2/s^2 + 2 (x_i^2 - (x_{i+1}-x_{i+2})^2) / (x_{i+1} x_{i+2}),
///   b   = 4n + 8 - 2 (x1+x2+x3)/s   (coefficient against ghat|_H; at a
///         symmetric point (x,x,x,s) it reproduces the two-summand B-value).
/// Scale invariant in (x1,x2,x3,s).
inline FourParamForm ricci_four_param(const FourParamMetric& g) {
  const DiagonalForm3 fib = ricci_su2(g.fiber());
  const double q = 4.0 * g.n / (g.s * g.s);
  return {g.n, q * g.x1 * g.x1 + fib.r1, q * g.x2 * g.x2 + fib.r2,
          q * g.x3 * g.x3 + fib.r3,
          4.0 * g.n + 8.0 - 2.0 * (g.x1 + g.x2 + g.x3) / g.s};
}

// ---------------------------------------------------------------------------
// Gauge canonicalization and positivity
// ---------------------------------------------------------------------------

/// The gauge group acts transitively on oriented orthonormal fiber bases, so
/// sorting the fiber entries ascending picks a canonical representative.
inline Su2Metric canonicalize_gauge(const Su2Metric& g) {
  std::array<double, 3> x = {g.x1, g.x2, g.x3};
  std::sort(x.begin(), x.end());
  return {x[0], x[1], x[2]};
}

inline FourParamMetric canonicalize_gauge(const FourParamMetric& g) {
  std::array<double, 3> x = {g.x1, g.x2, g.x3};
  std::sort(x.begin(), x.end());
  return {g.n, x[0], x[1], x[2], g.s};
}

/// True iff every coefficient strictly exceeds eps_pd.
inline bool positivity_check(const DiagonalForm3& f, double eps_pd = 0.0) {
  return f.r1 > eps_pd && f.r2 > eps_pd && f.r3 > eps_pd;
}

inline bool positivity_check(const TwoSummandForm& f, double eps_pd = 0.0) {
  return f.A > eps_pd && f.B > eps_pd;
}

inline bool positivity_check(const FourParamForm& f, double eps_pd = 0.0) {
  return f.a1 > eps_pd && f.a2 > eps_pd && f.a3 > eps_pd && f.b > eps_pd;
}

}  // namespace ricci
