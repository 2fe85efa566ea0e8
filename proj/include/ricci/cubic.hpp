#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace ricci {

struct CubicRoots {
  std::array<double, 3> root{};
  std::size_t count = 0;
};

/// Real roots of a*z^3 + b*z^2 + c*z + d = 0. Falls back to the quadratic
/// (and linear) formula when leading coefficients vanish relative to the
/// largest coefficient. Roots are polished with a few Newton steps.
inline CubicRoots solve_cubic_real(double a, double b, double c, double d) {
  CubicRoots out;
  const double scale =
      std::max({std::fabs(a), std::fabs(b), std::fabs(c), std::fabs(d)});
  if (scale == 0.0) return out;
  const double eps = 1e-14 * scale;

  auto push = [&](double z) { out.root[out.count++] = z; };

  if (std::fabs(a) <= eps) {
    if (std::fabs(b) <= eps) {
      if (std::fabs(c) > eps) push(-d / c);
      return out;
    }
    const double disc = c * c - 4.0 * b * d;
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    // Citardauq form for the small root keeps cancellation in check.
    const double q = -0.5 * (c + std::copysign(sq, c));
    push(q / b);
    if (q != 0.0) push(d / q);
    return out;
  }

  const double p = b / a;
  const double q = c / a;
  const double r = d / a;
  const double Q = (p * p - 3.0 * q) / 9.0;
  const double R = (p * (2.0 * p * p - 9.0 * q) + 27.0 * r) / 54.0;
  const double Q3 = Q * Q * Q;
  const double R2 = R * R;

  if (R2 < Q3) {
    const double theta = std::acos(std::clamp(R / std::sqrt(Q3), -1.0, 1.0));
    const double m = -2.0 * std::sqrt(Q);
    push(m * std::cos(theta / 3.0) - p / 3.0);
    push(m * std::cos((theta + 2.0 * M_PI) / 3.0) - p / 3.0);
    push(m * std::cos((theta - 2.0 * M_PI) / 3.0) - p / 3.0);
  } else {
    const double A =
        -std::copysign(std::cbrt(std::fabs(R) + std::sqrt(R2 - Q3)), R);
    const double B = (A != 0.0) ? Q / A : 0.0;
    push(A + B - p / 3.0);
  }

  // Newton polish against the original coefficients.
  for (std::size_t i = 0; i < out.count; ++i) {
    double z = out.root[i];
    for (int it = 0; it < 3; ++it) {
      const double f = ((a * z + b) * z + c) * z + d;
      const double df = (3.0 * a * z + 2.0 * b) * z + c;
      if (df == 0.0) break;
      z -= f / df;
    }
    out.root[i] = z;
  }
  return out;
}

}  // namespace ricci
