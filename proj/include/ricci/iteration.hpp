#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "ricci/geometry.hpp"
#include "ricci/prescribed.hpp"

namespace ricci {

enum class IterationStatus { Converged, MaxIterations, SolveFailed };

inline const char* to_string(IterationStatus s) {
  switch (s) {
    case IterationStatus::Converged: return "Converged";
    case IterationStatus::MaxIterations: return "MaxIterations";
    case IterationStatus::SolveFailed: return "SolveFailed";
  }
  return "?";
}

struct IterationOptions {
  double tol = 1e-10;  // relative sup-norm convergence detector
  int max_iter = 500;
};

// ---------------------------------------------------------------------------
// SU(2) forward iteration
// ---------------------------------------------------------------------------

/// Trace of the forward Ricci iteration Ric g_{i+1} = g_i (the first step
/// absorbs the free constant: Ric g_1 = c g_0). Metrics are stored in the
/// canonical normalization x1 + x2 + x3 = 6; `constants` records the solver
/// constant of each step so the unnormalized chain can be reconstructed.
struct Su2IterationTrace {
  std::vector<Su2Metric> metrics;   // metrics[0] is the normalized start
  std::vector<double> constants;    // per-step c (one entry per solve)
  IterationStatus status = IterationStatus::MaxIterations;
  int failed_step = -1;             // step index when status == SolveFailed
  std::optional<Su2Metric> limit;

  /// alpha_{kl} = x_k / x_l at step i.
  double ratio(std::size_t i, int k, int l) const {
    const auto e = metrics[i].entries();
    return e[k] / e[l];
  }
};

inline Su2Metric normalize_sum6(const Su2Metric& g) {
  const double f = 6.0 / g.sum();
  return {f * g.x1, f * g.x2, f * g.x3};
}

inline double sup_rel_diff(const Su2Metric& a, const Su2Metric& b) {
  double m = 0.0;
  const auto ea = a.entries(), eb = b.entries();
  for (int i = 0; i < 3; ++i)
    m = std::max(m, std::fabs(ea[i] - eb[i]) / std::max(ea[i], eb[i]));
  return m;
}

inline Su2IterationTrace iterate_su2(const Su2Metric& g0,
                                     const IterationOptions& opt = {},
                                     const SolverOptions& solver = {}) {
  Su2IterationTrace tr;
  Su2Metric cur = normalize_sum6(g0);
  tr.metrics.push_back(cur);
  for (int i = 0; i < opt.max_iter; ++i) {
    Su2Solve s;
    try {
      s = solve_su2({cur.x1, cur.x2, cur.x3}, solver);
    } catch (const SolveError&) {
      tr.status = IterationStatus::SolveFailed;
      tr.failed_step = i + 1;
      return tr;
    }
    tr.constants.push_back(s.c);
    const Su2Metric next = normalize_sum6(s.g);
    tr.metrics.push_back(next);
    if (sup_rel_diff(next, cur) < opt.tol) {
      tr.status = IterationStatus::Converged;
      tr.limit = next;
      return tr;
    }
    cur = next;
  }
  tr.status = IterationStatus::MaxIterations;
  return tr;
}

// ---------------------------------------------------------------------------
// Two-summand forward iteration
// ---------------------------------------------------------------------------

struct TwoSummandIterationTrace {
  FibrationFamily family;
  std::vector<double> ratios;      // t/s per step, ratios[0] from g0
  std::vector<double> constants;   // per-step kappa
  IterationStatus status = IterationStatus::MaxIterations;
  int failed_step = -1;            // genuine non-existence, not a bug
  std::optional<double> limit_ratio;
};

inline TwoSummandIterationTrace iterate_two_summand(
    const FibrationFamily& family, const TwoSummandMetric& g0,
    const IterationOptions& opt = {}) {
  TwoSummandIterationTrace tr{family};
  double r = g0.ratio();
  tr.ratios.push_back(r);
  for (int i = 0; i < opt.max_iter; ++i) {
    const auto s = solve_two_summand(family, r, 1.0);
    if (!s) {
      tr.status = IterationStatus::SolveFailed;
      tr.failed_step = i + 1;
      return tr;
    }
    tr.constants.push_back(s->kappa);
    const double next = s->g.ratio();
    tr.ratios.push_back(next);
    if (std::fabs(next - r) / std::max(next, r) < opt.tol) {
      tr.status = IterationStatus::Converged;
      tr.limit_ratio = next;
      return tr;
    }
    r = next;
  }
  return tr;
}

// ---------------------------------------------------------------------------
// The normalized step map f and its inverse (four-parameter family)
// ---------------------------------------------------------------------------

struct SingularDenominator : SolveError {
  using SolveError::SolveError;
};
struct OutsideDomain : SolveError {
  using SolveError::SolveError;
};

/// One forward Ricci step on normalized fiber coordinates (s = 1):
///   f_i(x) = a_i(x) / c(x),  c(x) = (4n+8) - 2(x1+x2+x3),
/// where a_i is the fiber Ricci coefficient. Ric g_{(x,1)} = c(x) T_{(f(x),1)}.
inline std::array<double, 3> f_map(int n, const std::array<double, 3>& x) {
  const double denom = (4.0 * n + 8.0) - 2.0 * (x[0] + x[1] + x[2]);
  if (std::fabs(denom) < 1e-14)
    throw SingularDenominator("f_map: x1+x2+x3 = 2n+4");
  const FourParamForm f = ricci_four_param({n, x[0], x[1], x[2], 1.0});
  return {f.a1 / denom, f.a2 / denom, f.a3 / denom};
}

struct FMapConfig {
  int n;
  double domain_radius = 0.15;  // sup-norm ball around (1,1,1) accepted
  double newton_tol = 1e-12;
  int newton_max_iter = 60;

  /// Probes the inverse Newton from the corners of the configured ball;
  /// throws if the basin does not cover it.
  explicit FMapConfig(int n_, double radius = 0.15) : n(n_), domain_radius(radius) {
    for (int mask = 0; mask < 8; ++mask) {
      const std::array<double, 3> y = {
          1.0 + ((mask & 1) ? radius : -radius),
          1.0 + ((mask & 2) ? radius : -radius),
          1.0 + ((mask & 4) ? radius : -radius)};
      probe_inverse(y);  // throws NoConvergence on failure
    }
  }

  void probe_inverse(const std::array<double, 3>& y) const;
};

namespace detail {

inline std::array<double, 3> f_inverse_impl(int n, const std::array<double, 3>& y,
                                            double tol, int max_iter) {
  NewtonOptions<3> nopt;
  nopt.tol = tol;
  nopt.max_iter = max_iter;
  nopt.admissible = [n](const std::array<double, 3>& v) {
    return v[0] > 0 && v[1] > 0 && v[2] > 0 &&
           v[0] + v[1] + v[2] < 2.0 * n + 4.0 - 1e-10;
  };
  auto fn = [n, &y](const std::array<double, 3>& v, std::array<double, 3>& F) {
    const auto fv = f_map(n, v);
    for (int i = 0; i < 3; ++i) F[i] = fv[i] - y[i];
  };
  auto jac = [n](const std::array<double, 3>& v,
                 std::array<std::array<double, 3>, 3>& J) {
    // Finite-difference Jacobian; the map is cheap and smooth here.
    const double h = 1e-7;
    std::array<double, 3> base = f_map(n, v);
    for (int j = 0; j < 3; ++j) {
      std::array<double, 3> vp = v;
      vp[j] += h;
      const auto fp = f_map(n, vp);
      for (int i = 0; i < 3; ++i) J[i][j] = (fp[i] - base[i]) / h;
    }
  };
  const NewtonResult<3> r = newton_solve<3>(fn, jac, y, nopt);
  if (!r.converged)
    throw NoConvergence("f_inverse: Newton did not converge");
  return r.x;
}

}  // namespace detail

/// Inverse of f near (1,1,1) by Newton, seeded at y.
inline std::array<double, 3> f_inverse(int n, const std::array<double, 3>& y,
                                       double tol = 1e-12, int max_iter = 60) {
  return detail::f_inverse_impl(n, y, tol, max_iter);
}

inline void FMapConfig::probe_inverse(const std::array<double, 3>& y) const {
  const auto x = detail::f_inverse_impl(n, y, newton_tol, newton_max_iter);
  const auto back = f_map(n, x);
  for (int i = 0; i < 3; ++i)
    if (std::fabs(back[i] - y[i]) > 1e-8)
      throw NoConvergence("FMapConfig: probe round-trip failed");
}

// ---------------------------------------------------------------------------
// Four-parameter iteration near the round metric
// ---------------------------------------------------------------------------

struct FourParamIterationTrace {
  int n;
  std::vector<FourParamMetric> metrics;  // normalized s = 1
  std::vector<double> constants;         // c^{(k)} = 4n+8 - 2 sum(x^{(k+1)})
  IterationStatus status = IterationStatus::MaxIterations;
  int failed_step = -1;
  std::optional<FourParamMetric> limit;
};

inline FourParamIterationTrace iterate_four_param_near_round(
    const FMapConfig& cfg, const FourParamMetric& g0,
    const IterationOptions& opt = {}) {
  const int n = cfg.n;
  std::array<double, 3> y = {g0.x1 / g0.s, g0.x2 / g0.s, g0.x3 / g0.s};
  for (double e : y)
    if (std::fabs(e - 1.0) > cfg.domain_radius)
      throw OutsideDomain("iterate_four_param_near_round: start outside the configured ball");

  FourParamIterationTrace tr{n};
  tr.metrics.push_back({n, y[0], y[1], y[2], 1.0});
  for (int k = 0; k < opt.max_iter; ++k) {
    std::array<double, 3> next;
    try {
      next = f_inverse(n, y, cfg.newton_tol, cfg.newton_max_iter);
    } catch (const SolveError&) {
      tr.status = IterationStatus::SolveFailed;
      tr.failed_step = k + 1;
      return tr;
    }
    tr.constants.push_back(4.0 * n + 8.0 - 2.0 * (next[0] + next[1] + next[2]));
    tr.metrics.push_back({n, next[0], next[1], next[2], 1.0});
    double diff = 0.0;
    for (int i = 0; i < 3; ++i)
      diff = std::max(diff, std::fabs(next[i] - y[i]) / std::max(next[i], y[i]));
    if (diff < opt.tol) {
      tr.status = IterationStatus::Converged;
      tr.limit = tr.metrics.back();
      return tr;
    }
    y = next;
  }
  return tr;
}

/// Best-effort iteration away from the round ball: chains the homotopy solver
/// step by step. No global existence theorem backs this mode; a PathFailure
/// is reported as SolveFailed at that step.
inline FourParamIterationTrace iterate_four_param_global(
    int n, const FourParamMetric& g0, const IterationOptions& opt = {},
    const HomotopyOptions& hopt = {}) {
  FourParamIterationTrace tr{n};
  FourParamMetric cur{n, g0.x1 / g0.s, g0.x2 / g0.s, g0.x3 / g0.s, 1.0};
  tr.metrics.push_back(cur);
  for (int k = 0; k < opt.max_iter; ++k) {
    FourParamSolve s;
    try {
      s = solve_four_param_homotopy(n, {n, cur.x1, cur.x2, cur.x3, 1.0}, hopt);
    } catch (const SolveError&) {
      tr.status = IterationStatus::SolveFailed;
      tr.failed_step = k + 1;
      return tr;
    }
    tr.constants.push_back(s.kappa);
    const FourParamMetric next{n, s.g.x1 / s.g.s, s.g.x2 / s.g.s,
                               s.g.x3 / s.g.s, 1.0};
    tr.metrics.push_back(next);
    double diff = std::fabs(next.x1 - cur.x1);
    diff = std::max(diff, std::fabs(next.x2 - cur.x2));
    diff = std::max(diff, std::fabs(next.x3 - cur.x3));
    if (diff < opt.tol) {
      tr.status = IterationStatus::Converged;
      tr.limit = next;
      return tr;
    }
    cur = next;
  }
  return tr;
}

}  // namespace ricci
