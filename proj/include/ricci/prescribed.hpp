#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "ricci/cubic.hpp"
#include "ricci/geometry.hpp"
#include "ricci/newton.hpp"

namespace ricci {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConvergence : SolveError {
  using SolveError::SolveError;
};
struct RootSelectionAmbiguous : SolveError {
  using SolveError::SolveError;
};
struct ScalingFailure : SolveError {
  using SolveError::SolveError;
};
struct PathFailure : SolveError {
  double last_lambda;
  PathFailure(const std::string& msg, double lam)
      : SolveError(msg), last_lambda(lam) {}
};

// ---------------------------------------------------------------------------
// SU(2) prescribed Ricci: Ric g = c T
// ---------------------------------------------------------------------------

struct SolverOptions {
  double tol = 1e-12;  // absolute residual target on the defining equations
  int max_iter = 100;
  int max_backtrack = 40;
};

struct Su2Solve {
  Su2Metric g;       // normalized to x1 + x2 + x3 = 6
  double c;          // proportionality constant, > 0
  double residual;   // max_i |r_i(g) - c T_i|
  int iterations;
};

namespace detail {

// d r_i / d x_j for the SU(2) Ricci formula.
inline void ricci_su2_jacobian(const std::array<double, 3>& x,
                               std::array<std::array<double, 3>, 3>& J) {
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    const double d = x[j] - x[k];
    const double ri = 2.0 * (x[i] * x[i] - d * d) / (x[j] * x[k]);
    J[i][i] = 4.0 * x[i] / (x[j] * x[k]);
    J[i][j] = -4.0 * d / (x[j] * x[k]) - ri / x[j];
    J[i][k] = 4.0 * d / (x[j] * x[k]) - ri / x[k];
  }
}

/// Newton solve of Ric(x) = c T on the sum-6 slice, iterated in log
/// coordinates u_i = log x_i (c stays linear). The log parametrization keeps
/// every iterate positive and pushes the spurious boundary corner
/// (x_i -> 0, c -> 0) out to infinity, so damped Newton cannot stall there;
/// empirically this makes the basin of attraction cover all moderate starts.
inline std::optional<Su2Solve> try_solve_su2(const std::array<double, 3>& T,
                                             std::array<double, 4> start,
                                             const SolverOptions& opt) {
  if (!(start[0] > 0 && start[1] > 0 && start[2] > 0)) return std::nullopt;
  NewtonOptions<4> nopt;
  nopt.tol = opt.tol;
  nopt.max_iter = opt.max_iter;
  nopt.max_backtrack = opt.max_backtrack;
  auto fn = [&T](const std::array<double, 4>& u, std::array<double, 4>& F) {
    const double x1 = std::exp(u[0]), x2 = std::exp(u[1]), x3 = std::exp(u[2]);
    const DiagonalForm3 r = ricci_su2({x1, x2, x3});
    F[0] = r.r1 - u[3] * T[0];
    F[1] = r.r2 - u[3] * T[1];
    F[2] = r.r3 - u[3] * T[2];
    F[3] = x1 + x2 + x3 - 6.0;
  };
  auto jac = [&T](const std::array<double, 4>& u,
                  std::array<std::array<double, 4>, 4>& J) {
    const std::array<double, 3> x = {std::exp(u[0]), std::exp(u[1]),
                                     std::exp(u[2])};
    std::array<std::array<double, 3>, 3> dr;
    ricci_su2_jacobian(x, dr);
    for (int i = 0; i < 3; ++i) {
      // d/du_j = x_j d/dx_j.
      for (int j = 0; j < 3; ++j) J[i][j] = dr[i][j] * x[j];
      J[i][3] = -T[i];
      J[3][i] = x[i];
    }
    J[3][3] = 0.0;
  };
  const std::array<double, 4> u0 = {std::log(start[0]), std::log(start[1]),
                                    std::log(start[2]), start[3]};
  const NewtonResult<4> r = newton_solve<4>(fn, jac, u0, nopt);
  if (!r.converged || r.x[3] <= 0) return std::nullopt;
  Su2Solve out{{std::exp(r.x[0]), std::exp(r.x[1]), std::exp(r.x[2])},
               r.x[3], r.residual, r.iterations};
  // A genuine solution on the sum-6 slice never collapses an entry to
  // rounding scale for finite targets; reject such degenerate limits.
  if (std::min({out.g.x1, out.g.x2, out.g.x3}) < 1e-8) return std::nullopt;
  return out;
}

}  // namespace detail

/// Hamilton solve: given T with positive entries, find g (normalized to
/// x1+x2+x3 = 6) and c > 0 with Ric g = c T. Existence and uniqueness up to
/// scale are guaranteed, so failure here signals a numerical problem.
inline Su2Solve solve_su2(const DiagonalForm3& T,
                          const SolverOptions& opt = {}) {
  if (!(T.r1 > 0 && T.r2 > 0 && T.r3 > 0))
    throw std::invalid_argument("solve_su2: target must be positive definite");
  const std::array<double, 3> t = {T.r1, T.r2, T.r3};
  const double ts = t[0] + t[1] + t[2];

  std::array<std::array<double, 4>, 4> starts;
  int ns = 0;
  // Target itself (scaled to the normalization slice), then the round metric,
  // then sorted permutations of the target.
  starts[ns++] = {6 * t[0] / ts, 6 * t[1] / ts, 6 * t[2] / ts, 2.0};
  starts[ns++] = {2.0, 2.0, 2.0, 2.0};
  std::array<double, 3> srt = t;
  std::sort(srt.begin(), srt.end());
  starts[ns++] = {6 * srt[0] / ts, 6 * srt[1] / ts, 6 * srt[2] / ts, 2.0};
  starts[ns++] = {6 * srt[2] / ts, 6 * srt[1] / ts, 6 * srt[0] / ts, 2.0};

  for (int i = 0; i < ns; ++i)
    if (auto s = detail::try_solve_su2(t, starts[i], opt)) return *s;
  throw NoConvergence("solve_su2: Newton failed from all initializations");
}

// ---------------------------------------------------------------------------
// The c-function: c(T1,T2,T3) via its cubic in Z
// ---------------------------------------------------------------------------

enum class CBranch { GenericCubic, DegenerateClosedForm };

struct CFunctionResult {
  double c;
  double Z;  // x3/x1 of the induced solution metric
  CBranch branch;
};

namespace detail {

// Closed form for a target with two equal entries: the distinguished value Td
// against the common value Tc (horizontal weight b folded in by the caller).
inline double c_closed_form(double Td, double Tc) {
  return (Td + 4.0 * Tc - std::sqrt(Td * Td + 8.0 * Td * Tc)) / (Tc * Tc);
}

// Ratio x_d / x of the solution metric for such a target.
inline double closed_form_ratio(double Td, double Tc) {
  return (-Td + std::sqrt(Td * Td + 8.0 * Td * Tc)) / (2.0 * Tc);
}

}  // namespace detail

/// The unique constant c for which the SU(2) system Ric g = c T has a
/// positive solution, computed through the cubic in the auxiliary variable
/// Z = x3/x1. Targets with two (nearly) equal entries use the closed form.
/// Scale covariance: c(k T) = c(T)/k.
inline CFunctionResult c_function(double T1, double T2, double T3) {
  if (!(T1 > 0 && T2 > 0 && T3 > 0))
    throw std::invalid_argument("c_function: inputs must be positive");
  const double m = std::max({T1, T2, T3});
  const double eq_tol = 1e-13 * m;

  if (std::fabs(T2 - T3) <= eq_tol) {
    const double rd = detail::closed_form_ratio(T1, T2);  // x1/x
    return {detail::c_closed_form(T1, T2), 1.0 / rd,
            CBranch::DegenerateClosedForm};
  }
  if (std::fabs(T1 - T2) <= eq_tol) {
    return {detail::c_closed_form(T3, T1), detail::closed_form_ratio(T3, T1),
            CBranch::DegenerateClosedForm};
  }
  if (std::fabs(T1 - T3) <= eq_tol) {
    return {detail::c_closed_form(T2, T1), 1.0, CBranch::DegenerateClosedForm};
  }

  const CubicRoots roots = solve_cubic_real(
      T1 * T1 * (T2 - T3), T1 * T3 * (2 * T1 - T2 - T3),
      T1 * T3 * (2 * T3 - T1 - T2), T3 * T3 * (T2 - T1));

  // Accept the root that induces a positive metric actually solving the
  // system; uniqueness of c guarantees at most one.
  double best_res = std::numeric_limits<double>::infinity();
  CFunctionResult best{0, 0, CBranch::GenericCubic};
  for (std::size_t i = 0; i < roots.count; ++i) {
    const double Z = roots.root[i];
    if (!(Z > 0)) continue;
    const double den = T1 * T1 * Z * Z - T3 * T3;
    if (den == 0.0) continue;
    const double c = 8.0 * (T1 * Z * Z - T3) / den;
    if (!(c > 0)) continue;
    const double u2sq = 0.5 * c * T2 * Z + (1.0 - Z) * (1.0 - Z);
    if (!(u2sq > 0)) continue;
    const Su2Metric u{1.0, std::sqrt(u2sq), Z};
    const DiagonalForm3 r = ricci_su2(u);
    const double scale = std::max({c * T1, c * T2, c * T3});
    const double res = std::max({std::fabs(r.r1 - c * T1),
                                 std::fabs(r.r2 - c * T2),
                                 std::fabs(r.r3 - c * T3)}) /
                       scale;
    if (res < 1e-8 && res < best_res) {
      best_res = res;
      best = {c, Z, CBranch::GenericCubic};
    }
  }
  if (!std::isfinite(best_res)) {
    // Near-degenerate targets make the cubic ill-conditioned; fall back to
    // the Newton solve, which computes the same constant directly.
    const Su2Solve s = solve_su2({T1, T2, T3});
    return {s.c, s.g.x3 / s.g.x1, CBranch::GenericCubic};
  }
  return best;
}

// ---------------------------------------------------------------------------
// Two-summand quadratic solve
// ---------------------------------------------------------------------------

struct TwoSummandSolve {
  TwoSummandMetric g;  // normalized to s = 1
  double kappa;
  double residual;
};

/// Solve Ric g = kappa * (a ghat|_V + b ghat|_H) within a two-summand family.
/// Reduces to a quadratic in r = t/s with at most one admissible root; no
/// root with kappa > 0 means the target is genuinely unsolvable (the a/b
/// threshold is fiber_ricci/base_ricci: 0, 1/(2n+4), 3/14, 1/(n+2)).
inline std::optional<TwoSummandSolve> solve_two_summand(
    const FibrationFamily& family, double a, double b) {
  if (!(a > 0 && b > 0))
    throw std::invalid_argument("solve_two_summand: target must be positive");
  const double qa = b * family.base_dim();
  const double qb = a * family.horizontal_slope();
  const double qc = b * family.fiber_ricci() - a * family.base_ricci();
  if (!(qc < 0)) return std::nullopt;  // no strictly positive root
  const double r = (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
  const TwoSummandMetric g{family, r, 1.0};
  const TwoSummandForm f = ricci_two_summand(g);
  const double kappa = f.B / b;
  if (!(kappa > 0)) return std::nullopt;
  const double residual =
      std::max(std::fabs(f.A - kappa * a), std::fabs(f.B - kappa * b));
  return TwoSummandSolve{g, kappa, residual};
}

// ---------------------------------------------------------------------------
// U(1)-symmetric closed form (targets with T2 = T3)
// ---------------------------------------------------------------------------

struct Spu1ClosedForm {
  double x1_over_x;      // fiber shape of the solution family (x2 = x3 = x)
  bool condition_holds;  // c < 4n + 8, the sufficient solvability condition
  double c;
};

inline Spu1ClosedForm spu1_closed_form(int n, double T1, double T2, double b) {
  if (!(T1 > 0 && T2 > 0 && b > 0))
    throw std::invalid_argument("spu1_closed_form: inputs must be positive");
  const double c = b * detail::c_closed_form(T1, T2);
  return {detail::closed_form_ratio(T1, T2), c < 4.0 * n + 8.0, c};
}

// ---------------------------------------------------------------------------
// Four-parameter homotopy continuation
// ---------------------------------------------------------------------------

struct PathReport {
  int steps_accepted = 0;
  int steps_rejected = 0;
  double min_step = 0.0;
  double final_lambda = 0.0;
};

struct FourParamSolve {
  FourParamMetric g;  // s = 1 representative
  double kappa;
  double residual;    // max defect of Ric g = kappa T
  int iterations;     // corrector iterations total
  PathReport path_report;
};

struct HomotopyOptions {
  double tol = 1e-12;            // corrector residual target
  int corrector_max_iter = 25;
  double initial_step_fraction = 1.0 / 64.0;  // of the full lambda range 4n
  double min_step_fraction = 1e-6;
  double domain_lo = 1e-8;       // path-domain guard on x_i and c
  double domain_hi = 1e8;
};

namespace detail {

// Residual of the lambda-family of prescribed Ricci equations at s = 1,
// b = 1: F0 fixes the scale, F1..F3 are the fiber equations.
struct FourParamSystem {
  double lambda;
  int n;
  std::array<double, 3> T;

  void operator()(const std::array<double, 4>& u,
                  std::array<double, 4>& F) const {
    const double x1 = u[0], x2 = u[1], x3 = u[2], c = u[3];
    F[0] = c - (4.0 * n + 8.0) + 2.0 * (x1 + x2 + x3);
    F[1] = lambda * x1 * x1 * x2 * x3 +
           2.0 * (x1 * x1 - (x2 - x3) * (x2 - x3)) - c * T[0] * x2 * x3;
    F[2] = lambda * x2 * x2 * x1 * x3 +
           2.0 * (x2 * x2 - (x1 - x3) * (x1 - x3)) - c * T[1] * x1 * x3;
    F[3] = lambda * x3 * x3 * x1 * x2 +
           2.0 * (x3 * x3 - (x1 - x2) * (x1 - x2)) - c * T[2] * x1 * x2;
  }

  void jacobian(const std::array<double, 4>& u,
                std::array<std::array<double, 4>, 4>& J) const {
    const double x1 = u[0], x2 = u[1], x3 = u[2], c = u[3];
    J[0] = {2.0, 2.0, 2.0, 1.0};
    J[1] = {2.0 * lambda * x1 * x2 * x3 + 4.0 * x1,
            lambda * x1 * x1 * x3 - 4.0 * (x2 - x3) - c * T[0] * x3,
            lambda * x1 * x1 * x2 + 4.0 * (x2 - x3) - c * T[0] * x2,
            -T[0] * x2 * x3};
    J[2] = {lambda * x2 * x2 * x3 - 4.0 * (x1 - x3) - c * T[1] * x3,
            2.0 * lambda * x2 * x1 * x3 + 4.0 * x2,
            lambda * x2 * x2 * x1 + 4.0 * (x1 - x3) - c * T[1] * x1,
            -T[1] * x1 * x3};
    J[3] = {lambda * x3 * x3 * x2 - 4.0 * (x1 - x2) - c * T[2] * x2,
            lambda * x3 * x3 * x1 + 4.0 * (x1 - x2) - c * T[2] * x1,
            2.0 * lambda * x3 * x1 * x2 + 4.0 * x3,
            -T[2] * x1 * x2};
  }

  // dF/dlambda.
  void lambda_derivative(const std::array<double, 4>& u,
                         std::array<double, 4>& d) const {
    d[0] = 0.0;
    d[1] = u[0] * u[0] * u[1] * u[2];
    d[2] = u[1] * u[1] * u[0] * u[2];
    d[3] = u[2] * u[2] * u[0] * u[1];
  }
};

}  // namespace detail

/// Solve Ric g = kappa T in the four-parameter family on S^{4n+3} by natural-
/// parameter continuation in lambda from the SU(2) solve (lambda = 0) to the
/// full system (lambda = 4n). Euler predictor, damped-Newton corrector,
/// adaptive step with halving/doubling, and a box guard on the path.
inline FourParamSolve solve_four_param_homotopy(int n, const FourParamForm& T,
                                                const HomotopyOptions& opt = {},
                                                const SolverOptions& su2_opt = {}) {
  if (n < 1) throw std::invalid_argument("solve_four_param_homotopy: n >= 1");
  if (!(T.a1 > 0 && T.a2 > 0 && T.a3 > 0 && T.b > 0))
    throw std::invalid_argument("solve_four_param_homotopy: target must be positive");

  // Ricci is scale invariant, so solve for the rescaled target with b = 1 and
  // convert kappa back at the end.
  const std::array<double, 3> Tn = {T.a1 / T.b, T.a2 / T.b, T.a3 / T.b};
  const double lam_end = 4.0 * n;

  // lambda = 0: SU(2) solve, rescaled so the scale-fixing equation holds.
  const Su2Solve base = solve_su2({Tn[0], Tn[1], Tn[2]}, su2_opt);
  const double c0 = base.c;
  const double room = 4.0 * n + 8.0 - c0;
  if (!(room > 0))
    throw ScalingFailure("solve_four_param_homotopy: lambda=0 scaling requires c < 4n+8");
  const double gamma = room / (2.0 * base.g.sum());
  std::array<double, 4> u = {gamma * base.g.x1, gamma * base.g.x2,
                             gamma * base.g.x3, c0};

  detail::FourParamSystem sys;
  sys.n = n;
  sys.T = Tn;

  auto in_box = [&opt](const std::array<double, 4>& v) {
    for (double e : v)
      if (!(e > 0) || e < opt.domain_lo || e > opt.domain_hi) return false;
    return true;
  };

  NewtonOptions<4> nopt;
  nopt.tol = opt.tol;
  nopt.max_iter = opt.corrector_max_iter;
  nopt.admissible = [&](const std::array<double, 4>& v) {
    return v[0] > 0 && v[1] > 0 && v[2] > 0;
  };

  PathReport report;
  int total_newton = 0;
  double lambda = 0.0;
  double step = lam_end * opt.initial_step_fraction;
  const double min_step = lam_end * opt.min_step_fraction;
  report.min_step = step;
  int easy_accepts = 0;

  while (lambda < lam_end) {
    const double h = std::min(step, lam_end - lambda);
    const double lam_next = lambda + h;

    // Euler predictor: du/dlambda = -J^{-1} dF/dlambda.
    sys.lambda = lambda;
    std::array<std::array<double, 4>, 4> J;
    sys.jacobian(u, J);
    std::array<double, 4> dl, tangent;
    sys.lambda_derivative(u, dl);
    for (double& e : dl) e = -e;
    std::array<double, 4> pred = u;
    if (solve_linear(J, dl, tangent))
      for (int i = 0; i < 4; ++i) pred[i] += h * tangent[i];
    if (!nopt.admissible(pred)) pred = u;

    // Newton corrector at lam_next.
    sys.lambda = lam_next;
    auto fn = [&sys](const std::array<double, 4>& v, std::array<double, 4>& F) {
      sys(v, F);
    };
    auto jc = [&sys](const std::array<double, 4>& v,
                     std::array<std::array<double, 4>, 4>& M) {
      sys.jacobian(v, M);
    };
    const NewtonResult<4> nr = newton_solve<4>(fn, jc, pred, nopt);
    total_newton += nr.iterations;

    if (nr.converged && in_box(nr.x)) {
      u = nr.x;
      lambda = lam_next;
      ++report.steps_accepted;
      report.min_step = std::min(report.min_step, h);
      if (++easy_accepts >= 3) {
        step = std::min(step * 2.0, lam_end * opt.initial_step_fraction * 8.0);
        easy_accepts = 0;
      }
    } else {
      ++report.steps_rejected;
      easy_accepts = 0;
      step *= 0.5;
      if (step < min_step) {
        report.final_lambda = lambda;
        throw PathFailure("solve_four_param_homotopy: continuation stalled", lambda);
      }
    }
  }
  report.final_lambda = lambda;

  const FourParamMetric g{n, u[0], u[1], u[2], 1.0};
  const double kappa = u[3] / T.b;
  const FourParamForm check = ricci_four_param(g);
  const double residual = std::max(
      {std::fabs(check.a1 - kappa * T.a1), std::fabs(check.a2 - kappa * T.a2),
       std::fabs(check.a3 - kappa * T.a3), std::fabs(check.b - kappa * T.b)});
  return {g, kappa, residual, total_newton, report};
}

// ---------------------------------------------------------------------------
// Solvability predicates for four-parameter targets
// ---------------------------------------------------------------------------

struct SolvabilityPredicates {
  bool theorem_b;    // b/T_i < 2n + 4 for i = 1,2,3
  bool c_condition;  // c(T1/b, T2/b, T3/b) < 4n + 8
};

inline SolvabilityPredicates solvability_predicates(int n,
                                                    const FourParamForm& T) {
  const bool tb = T.b / T.a1 < 2.0 * n + 4.0 && T.b / T.a2 < 2.0 * n + 4.0 &&
                  T.b / T.a3 < 2.0 * n + 4.0;
  const double c = c_function(T.a1 / T.b, T.a2 / T.b, T.a3 / T.b).c;
  return {tb, c < 4.0 * n + 8.0};
}

}  // namespace ricci
