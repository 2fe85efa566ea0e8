#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ricci/ancient.hpp"
#include "ricci/geometry.hpp"

namespace ricci {

struct EinsteinEntry {
  FibrationFamily family;
  double ratio;             // t/s of the Einstein metric
  double einstein_constant; // lambda with Ric = lambda g at s = 1
};

/// Einstein metrics of a two-summand family, computed as the positive roots
/// of (d_H + 2 d_V') r^2 - base_ricci * r + fiber_ricci = 0 (the condition
/// A(r)/r = B(r)). The catalog is {1}, {1/(2n+3), 1}, {3/11, 1}, {1/(n+1), 1}.
inline std::vector<EinsteinEntry> einstein_list(const FibrationFamily& family) {
  const double qa = family.base_dim() + family.horizontal_slope();
  const double qb = -family.base_ricci();
  const double qc = family.fiber_ricci();
  const double disc = qb * qb - 4.0 * qa * qc;
  std::vector<EinsteinEntry> out;
  const double sq = std::sqrt(disc);
  for (double r : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
    if (!(r > 0)) continue;  // the circle family quadratic has a root at 0
    const TwoSummandForm f = ricci_two_summand({family, r, 1.0});
    out.push_back({family, r, f.B});  // lambda = B/s = A/t at an Einstein point
  }
  return out;
}

/// lambda with Ric g = lambda g within tol, if any.
inline std::optional<double> is_einstein(const Su2Metric& g, double tol = 1e-12) {
  const DiagonalForm3 r = ricci_su2(g);
  const double l1 = r.r1 / g.x1, l2 = r.r2 / g.x2, l3 = r.r3 / g.x3;
  const double lam = (l1 + l2 + l3) / 3.0;
  if (std::fabs(l1 - lam) <= tol && std::fabs(l2 - lam) <= tol &&
      std::fabs(l3 - lam) <= tol)
    return lam;
  return std::nullopt;
}

inline std::optional<double> is_einstein(const TwoSummandMetric& g,
                                         double tol = 1e-12) {
  const TwoSummandForm f = ricci_two_summand(g);
  const double lv = f.A / g.t, lh = f.B / g.s;
  if (std::fabs(lv - lh) <= tol * std::max(std::fabs(lv), std::fabs(lh)))
    return 0.5 * (lv + lh);
  return std::nullopt;
}

inline std::optional<double> is_einstein(const FourParamMetric& g,
                                         double tol = 1e-12) {
  const FourParamForm f = ricci_four_param(g);
  const double l1 = f.a1 / g.x1, l2 = f.a2 / g.x2, l3 = f.a3 / g.x3;
  const double lh = f.b / g.s;  // Ric|_H = (b/s) g|_H
  const double lam = (l1 + l2 + l3 + lh) / 4.0;
  for (double l : {l1, l2, l3, lh})
    if (std::fabs(l - lam) > tol) return std::nullopt;
  return lam;
}

// ---------------------------------------------------------------------------
// Appendix uniqueness scan
// ---------------------------------------------------------------------------

struct UniquenessScanReport {
  std::uint64_t samples = 0;
  std::uint64_t flags = 0;  // points with equal fiber Ricci but unequal x
  double max_identity_defect = 0.0;  // difference-identity check (relative)
  std::vector<std::array<double, 3>> flagged_points;
};

struct UniquenessScanOptions {
  double a_spread_tol = 1e-9;  // fiber Ricci coefficients considered equal
  double x_spread_tol = 1e-6;  // metric entries considered distinct
  double lo = 0.1, hi = 5.0;
  std::uint64_t seed = 1;
};

/// Random scan for counterexamples to the fiber-symmetry uniqueness theorem:
/// flags any (x1,x2,x3) at s = 1 whose fiber Ricci coefficients agree while
/// the x_i do not (the expected flag count is zero). Also verifies the
/// difference identities
///   a1 x2 x3 - a2 x1 x3 = (x1 - x2)(4n x1 x2 x3 + 4(x1 + x2 - x3)),
///   a2 x1 x3 - a3 x1 x2 = (x2 - x3)(4n x1 x2 x3 + 4(x2 + x3 - x1))
/// hold as algebraic rearrangements at every sample.
inline UniquenessScanReport sp1_uniqueness_scan(
    int n, std::uint64_t samples, const UniquenessScanOptions& opt = {}) {
  UniquenessScanReport rep;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> dist(opt.lo, opt.hi);
  for (std::uint64_t it = 0; it < samples; ++it) {
    const double x1 = dist(rng), x2 = dist(rng), x3 = dist(rng);
    const FourParamForm f = ricci_four_param({n, x1, x2, x3, 1.0});
    ++rep.samples;

    const double a_spread =
        std::max({f.a1, f.a2, f.a3}) - std::min({f.a1, f.a2, f.a3});
    const double x_spread =
        std::max({x1, x2, x3}) - std::min({x1, x2, x3});
    if (a_spread <= opt.a_spread_tol && x_spread > opt.x_spread_tol) {
      ++rep.flags;
      if (rep.flagged_points.size() < 16)
        rep.flagged_points.push_back({x1, x2, x3});
    }

    const double prod = 4.0 * n * x1 * x2 * x3;
    const double lhs12 = f.a1 * x2 * x3 - f.a2 * x1 * x3;
    const double rhs12 = (x1 - x2) * (prod + 4.0 * (x1 + x2 - x3));
    const double lhs23 = f.a2 * x1 * x3 - f.a3 * x1 * x2;
    const double rhs23 = (x2 - x3) * (prod + 4.0 * (x2 + x3 - x1));
    const double scale = std::max({std::fabs(lhs12), std::fabs(rhs12),
                                   std::fabs(lhs23), std::fabs(rhs23), 1.0});
    rep.max_identity_defect =
        std::max(rep.max_identity_defect,
                 std::max(std::fabs(lhs12 - rhs12), std::fabs(lhs23 - rhs23)) /
                     scale);
  }
  return rep;
}

}  // namespace ricci
