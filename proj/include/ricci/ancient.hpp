#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "ricci/geometry.hpp"

namespace ricci {

enum class AncientStatus {
  StillPositive,
  LostPositivity,
  ConvergedCollapse,
  ConvergedEinstein,
};

inline const char* to_string(AncientStatus s) {
  switch (s) {
    case AncientStatus::StillPositive: return "StillPositive";
    case AncientStatus::LostPositivity: return "LostPositivity";
    case AncientStatus::ConvergedCollapse: return "ConvergedCollapse";
    case AncientStatus::ConvergedEinstein: return "ConvergedEinstein";
  }
  return "?";
}

struct AncientOptions {
  int max_steps = 100;
  double eps_pd = 0.0;              // positivity margin
  double collapse_x1 = 1e-10;       // fiber entry below this counts as collapsed
  double collapse_x23 = 1e-8;       // |x2 - 4| and |x3 - 4| tolerance
  double einstein_ratio_tol = 1e-10;
};

// ---------------------------------------------------------------------------
// SU(2)
// ---------------------------------------------------------------------------

/// Backward iteration g_{i-1} = Ric g_i by direct Ricci evaluation. The trace
/// stores the surviving (positive-definite) metrics in backward order;
/// `offending` is the first indefinite form when positivity is lost.
struct Su2AncientTrace {
  std::vector<Su2Metric> metrics;
  std::vector<double> fiber_length_proxy;  // sqrt of the smallest entry
  int steps_survived = 0;
  AncientStatus status = AncientStatus::StillPositive;
  std::optional<DiagonalForm3> offending;
};

inline Su2AncientTrace ancient_iterate_su2(const Su2Metric& g1,
                                           const AncientOptions& opt = {}) {
  Su2AncientTrace tr;
  Su2Metric cur = g1;
  auto push = [&tr](const Su2Metric& g) {
    tr.metrics.push_back(g);
    tr.fiber_length_proxy.push_back(
        std::sqrt(std::min({g.x1, g.x2, g.x3})));
  };
  push(cur);
  for (int i = 0; i < opt.max_steps; ++i) {
    const DiagonalForm3 r = ricci_su2(cur);
    if (!positivity_check(r, opt.eps_pd)) {
      tr.status = AncientStatus::LostPositivity;
      tr.offending = r;
      return tr;
    }
    cur = {r.r1, r.r2, r.r3};
    push(cur);
    ++tr.steps_survived;
    const Su2Metric c = canonicalize_gauge(cur);
    if (c.x1 < opt.collapse_x1 && std::fabs(c.x2 - 4.0) < opt.collapse_x23 &&
        std::fabs(c.x3 - 4.0) < opt.collapse_x23) {
      tr.status = AncientStatus::ConvergedCollapse;
      return tr;
    }
  }
  tr.status = AncientStatus::StillPositive;
  return tr;
}

/// True iff g admits an ancient iteration: the classification says exactly
/// the scaled Berger metrics (nu, 2, 2) with nu <= 2, i.e. after sorting the
/// two larger entries coincide.
inline bool classify_ancient_su2(const Su2Metric& g, double rel_tol = 1e-12) {
  const Su2Metric c = canonicalize_gauge(g);
  return std::fabs(c.x3 - c.x2) <= rel_tol * c.x3;
}

/// Berger shape c*(nu,2,2) recovered from a raw triple, when two entries
/// coincide to the stated tolerance.
struct BergerForm {
  double nu;
  double scale;
  std::array<int, 3> basis_permutation;  // position of the distinguished entry first
};

inline std::optional<BergerForm> berger_form(const Su2Metric& g,
                                             double rel_tol = 1e-12) {
  const std::array<double, 3> x = g.entries();
  for (int d = 0; d < 3; ++d) {
    const int j = (d + 1) % 3, k = (d + 2) % 3;
    if (std::fabs(x[j] - x[k]) <= rel_tol * std::max(x[j], x[k])) {
      const double scale = x[j] / 2.0;
      return BergerForm{x[d] / scale, scale, {d, j, k}};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Two-summand families
// ---------------------------------------------------------------------------

struct TwoSummandAncientTrace {
  FibrationFamily family;
  std::vector<double> ratios;  // t/s in backward order
  std::vector<double> fiber_length_proxy;  // sqrt(t) at normalized s = 1
  int steps_survived = 0;
  AncientStatus status = AncientStatus::StillPositive;
  std::optional<TwoSummandForm> offending;
};

/// Einstein ratios t/s of a two-summand family (roots of the family's
/// Einstein quadratic; see einstein.hpp for the catalog wrapper).
inline std::array<double, 2> einstein_ratios(const FibrationFamily& f) {
  switch (f.kind) {
    case Fibration::CircleFiberSphere: return {1.0, 1.0};
    case Fibration::Sp1FiberSphere: return {1.0 / (2.0 * f.n + 3.0), 1.0};
    case Fibration::Spin7FiberSphere: return {3.0 / 11.0, 1.0};
    case Fibration::CP1FiberProjective: return {1.0 / (f.n + 1.0), 1.0};
  }
  return {1.0, 1.0};
}

inline TwoSummandAncientTrace ancient_iterate_two_summand(
    const TwoSummandMetric& g1, const AncientOptions& opt = {}) {
  TwoSummandAncientTrace tr{g1.family};
  double r = g1.ratio();
  tr.ratios.push_back(r);
  tr.fiber_length_proxy.push_back(std::sqrt(r));
  const auto einstein = einstein_ratios(g1.family);
  for (int i = 0; i < opt.max_steps; ++i) {
    const TwoSummandForm f = ricci_two_summand({g1.family, r, 1.0});
    if (!positivity_check(f, opt.eps_pd)) {
      tr.status = AncientStatus::LostPositivity;
      tr.offending = f;
      return tr;
    }
    r = f.A / f.B;
    tr.ratios.push_back(r);
    tr.fiber_length_proxy.push_back(std::sqrt(r));
    ++tr.steps_survived;
    if (r < opt.collapse_x1) {
      tr.status = AncientStatus::ConvergedCollapse;  // circle-fiber collapse
      return tr;
    }
    for (double e : einstein) {
      if (std::fabs(r - e) <= opt.einstein_ratio_tol * e) {
        tr.status = AncientStatus::ConvergedEinstein;
        return tr;
      }
    }
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Four-parameter family
// ---------------------------------------------------------------------------

struct FourParamAncientTrace {
  int n;
  std::vector<FourParamMetric> metrics;
  std::vector<double> fiber_length_proxy;  // sqrt(min fiber entry / s)
  int steps_survived = 0;
  AncientStatus status = AncientStatus::StillPositive;
  std::optional<FourParamForm> offending;
  bool necessary_condition_held = true;  // x1 <= x2 = x3 <= s along the trace (reported, not asserted)
};

inline FourParamAncientTrace ancient_iterate_four_param(
    const FourParamMetric& g1, const AncientOptions& opt = {}) {
  FourParamAncientTrace tr{g1.n};
  FourParamMetric cur = g1;
  auto push = [&tr](const FourParamMetric& g) {
    tr.metrics.push_back(g);
    tr.fiber_length_proxy.push_back(
        std::sqrt(std::min({g.x1, g.x2, g.x3}) / g.s));
    const FourParamMetric c = canonicalize_gauge(g);
    if (!(c.x1 <= c.x3 + 1e-12 && c.x3 <= g.s + 1e-12))
      tr.necessary_condition_held = false;
  };
  push(cur);
  for (int i = 0; i < opt.max_steps; ++i) {
    const FourParamForm f = ricci_four_param(cur);
    if (!positivity_check(f, opt.eps_pd)) {
      tr.status = AncientStatus::LostPositivity;
      tr.offending = f;
      return tr;
    }
    cur = {cur.n, f.a1, f.a2, f.a3, f.b};
    push(cur);
    ++tr.steps_survived;
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Region scans
// ---------------------------------------------------------------------------

struct AncientScanPoint {
  std::array<double, 4> point;  // family-dependent coordinates (unused = 0)
  int steps_survived;
  AncientStatus status;
};

inline bool ancient_survived(AncientStatus s) {
  return s != AncientStatus::LostPositivity;
}

/// Grid scan over Berger parameters nu (SU(2) metrics (nu,2,2)).
inline std::vector<AncientScanPoint> ancient_region_scan_su2_berger(
    const std::vector<double>& nus, const AncientOptions& opt = {}) {
  std::vector<AncientScanPoint> out;
  out.reserve(nus.size());
  for (double nu : nus) {
    const auto tr = ancient_iterate_su2({nu, 2.0, 2.0}, opt);
    out.push_back({{nu, 2.0, 2.0, 0.0}, tr.steps_survived, tr.status});
  }
  return out;
}

/// Grid scan over fiber/horizontal ratios t/s of a two-summand family.
inline std::vector<AncientScanPoint> ancient_region_scan_two_summand(
    const FibrationFamily& family, const std::vector<double>& ratios,
    const AncientOptions& opt = {}) {
  std::vector<AncientScanPoint> out;
  out.reserve(ratios.size());
  for (double r : ratios) {
    const auto tr = ancient_iterate_two_summand({family, r, 1.0}, opt);
    out.push_back({{r, 1.0, 0.0, 0.0}, tr.steps_survived, tr.status});
  }
  return out;
}

}  // namespace ricci
