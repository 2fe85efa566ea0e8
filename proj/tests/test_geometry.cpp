#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "ricci/geometry.hpp"

using namespace ricci;

namespace {

std::mt19937_64 rng(12345);

Su2Metric random_metric(double lo = 0.2, double hi = 5.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  return {d(rng), d(rng), d(rng)};
}

double ulps_of(double v) { return std::fabs(v) * 2.22e-16; }

// Magnitude of the terms accumulated while evaluating the i-th su2 Ricci
// entry; rounding error lives at this scale even when the result cancels to
// near zero.
double su2_term_magnitude(const Su2Metric& g, int i) {
  const auto x = g.entries();
  const double d = x[(i + 1) % 3] - x[(i + 2) % 3];
  return 2.0 * (x[i] * x[i] + d * d) / (x[(i + 1) % 3] * x[(i + 2) % 3]);
}

}  // namespace

TEST_CASE("su2 Ricci on reference examples") {
  const DiagonalForm3 round = ricci_su2({2, 2, 2});
  CHECK(round.r1 == 2.0);
  CHECK(round.r2 == 2.0);
  CHECK(round.r3 == 2.0);

  const DiagonalForm3 b = ricci_su2({1, 2, 2});
  CHECK(b.r1 == 0.5);
  CHECK(b.r2 == 3.0);
  CHECK(b.r3 == 3.0);

  const DiagonalForm3 d = ricci_su2({1, 2, 3});
  CHECK(d.r1 == 0.0);
  CHECK(d.r2 == 0.0);
  CHECK(d.r3 == 8.0);

  const DiagonalForm3 e = ricci_su2({3, 2, 2});
  CHECK(e.r1 == 4.5);
  CHECK(e.r2 == 1.0);
  CHECK(e.r3 == 1.0);
}

TEST_CASE("su2 Ricci scale invariance to a few ulps") {
  for (int it = 0; it < 2000; ++it) {
    const Su2Metric g = random_metric();
    std::uniform_real_distribution<double> sc(0.01, 100.0);
    const double k = sc(rng);
    const DiagonalForm3 a = ricci_su2(g);
    const DiagonalForm3 b = ricci_su2({k * g.x1, k * g.x2, k * g.x3});
    const auto ea = a.entries(), eb = b.entries();
    for (int i = 0; i < 3; ++i)
      CHECK(std::fabs(ea[i] - eb[i]) <=
            8.0 * ulps_of(su2_term_magnitude(g, i)) + 1e-18);
  }
}

TEST_CASE("su2 Ricci permutation equivariance (exact)") {
  const std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (int it = 0; it < 500; ++it) {
    const Su2Metric g = random_metric();
    const auto r = ricci_su2(g).entries();
    const auto x = g.entries();
    for (const auto& p : perms) {
      const auto rp =
          ricci_su2({x[p[0]], x[p[1]], x[p[2]]}).entries();
      for (int i = 0; i < 3; ++i) CHECK(rp[i] == r[p[i]]);
    }
  }
}

TEST_CASE("monotonicity of Ricci ratios when Ricci is positive definite") {
  // The implication can fail when Ricci is indefinite (e.g. (5,1,1) has
  // Ricci (50,-6,-6)), so the hypothesis filters to positive-definite Ricci.
  int tested = 0;
  while (tested < 10000) {
    const Su2Metric g = random_metric(0.5, 2.0);
    const DiagonalForm3 rf = ricci_su2(g);
    if (!positivity_check(rf)) continue;
    ++tested;
    const auto x = g.entries();
    const auto r = rf.entries();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        const double ax = x[i] / x[j], ar = r[i] / r[j];
        if (ax >= 1.0)
          CHECK(ar >= ax * (1.0 - 1e-12));
        else
          CHECK(ar < ax * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("two-summand round constants A = B = dim - 1") {
  for (int n = 1; n <= 5; ++n) {
    for (Fibration k : {Fibration::CircleFiberSphere, Fibration::Sp1FiberSphere,
                        Fibration::Spin7FiberSphere}) {
      const FibrationFamily fam(k, n);
      const TwoSummandForm f = ricci_two_summand({fam, 1.0, 1.0});
      const double expect = fam.fiber_dim() + fam.base_dim() - 1;
      CHECK(f.A == expect);
      CHECK(f.B == expect);
    }
    // Projective family: t = s = 1 is the Fubini-Study metric of CP^{2n+1},
    // Einstein with constant 4n + 4.
    const FibrationFamily cp(Fibration::CP1FiberProjective, n);
    const TwoSummandForm f = ricci_two_summand({cp, 1.0, 1.0});
    CHECK(f.A == 4.0 * n + 4.0);
    CHECK(f.B == 4.0 * n + 4.0);
  }
}

TEST_CASE("two-summand scale invariance") {
  std::uniform_real_distribution<double> d(0.1, 4.0);
  for (int it = 0; it < 1000; ++it) {
    const FibrationFamily fam(Fibration::Sp1FiberSphere, 1 + it % 3);
    const double t = d(rng), s = d(rng), k = d(rng);
    const TwoSummandForm a = ricci_two_summand({fam, t, s});
    const TwoSummandForm b = ricci_two_summand({fam, k * t, k * s});
    const double r = t / s;
    const double magA = fam.fiber_ricci() + fam.base_dim() * r * r;
    const double magB = fam.base_ricci() + fam.horizontal_slope() * r;
    CHECK(std::fabs(a.A - b.A) <= 8.0 * ulps_of(magA));
    CHECK(std::fabs(a.B - b.B) <= 8.0 * ulps_of(magB));
  }
}

TEST_CASE("four-parameter round metric has all coefficients 4n + 2") {
  for (int n = 1; n <= 5; ++n) {
    const FourParamForm f = ricci_four_param({n, 1, 1, 1, 1});
    CHECK(f.a1 == 4.0 * n + 2.0);
    CHECK(f.a2 == 4.0 * n + 2.0);
    CHECK(f.a3 == 4.0 * n + 2.0);
    CHECK(f.b == 4.0 * n + 2.0);
  }
}

TEST_CASE("four-parameter example (1,1,2,1) at n=1") {
  const FourParamForm f = ricci_four_param({1, 1, 1, 2, 1});
  CHECK(f.a1 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(f.a2 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(f.a3 == doctest::Approx(24.0).epsilon(1e-14));
}

TEST_CASE("four-parameter scale invariance") {
  std::uniform_real_distribution<double> d(0.2, 3.0);
  for (int it = 0; it < 1000; ++it) {
    const int n = 1 + it % 3;
    const double x1 = d(rng), x2 = d(rng), x3 = d(rng), s = d(rng), k = d(rng);
    const FourParamForm a = ricci_four_param({n, x1, x2, x3, s});
    const FourParamForm b =
        ricci_four_param({n, k * x1, k * x2, k * x3, k * s});
    const Su2Metric fib{x1, x2, x3};
    const std::array<double, 4> va = {a.a1, a.a2, a.a3, a.b};
    const std::array<double, 4> vb = {b.a1, b.a2, b.a3, b.b};
    const std::array<double, 3> xs = {x1, x2, x3};
    for (int i = 0; i < 3; ++i) {
      const double mag =
          4.0 * n * xs[i] * xs[i] / (s * s) + su2_term_magnitude(fib, i);
      CHECK(std::fabs(va[i] - vb[i]) <= 8.0 * ulps_of(mag) + 1e-18);
    }
    const double magb = 4.0 * n + 8.0 + 2.0 * (x1 + x2 + x3) / s;
    CHECK(std::fabs(va[3] - vb[3]) <= 8.0 * ulps_of(magb));
  }
}

TEST_CASE("cross-family consistency: symmetric four-param equals sp1 two-summand") {
  std::uniform_real_distribution<double> d(0.2, 3.0);
  for (int it = 0; it < 1000; ++it) {
    const int n = 1 + it % 4;
    const double x = d(rng), s = d(rng);
    const FourParamForm fp = ricci_four_param({n, x, x, x, s});
    const TwoSummandForm ts =
        ricci_two_summand({{Fibration::Sp1FiberSphere, n}, x, s});
    CHECK(fp.a1 == doctest::Approx(ts.A).epsilon(1e-13));
    CHECK(fp.a2 == doctest::Approx(ts.A).epsilon(1e-13));
    CHECK(fp.a3 == doctest::Approx(ts.A).epsilon(1e-13));
    CHECK(fp.b == doctest::Approx(ts.B).epsilon(1e-13));
  }
}

TEST_CASE("canonicalize_gauge sorts and is idempotent") {
  const Su2Metric g{3, 1, 2};
  const Su2Metric c = canonicalize_gauge(g);
  CHECK(c.x1 == 1.0);
  CHECK(c.x2 == 2.0);
  CHECK(c.x3 == 3.0);
  const Su2Metric c2 = canonicalize_gauge(c);
  CHECK(c2.x1 == c.x1);
  CHECK(c2.x2 == c.x2);
  CHECK(c2.x3 == c.x3);
}

TEST_CASE("positivity_check on indefinite and degenerate forms") {
  CHECK(positivity_check(DiagonalForm3{2, 2, 2}));
  CHECK_FALSE(positivity_check(DiagonalForm3{0, 0, 8}));
  CHECK_FALSE(positivity_check(DiagonalForm3{-5, 1, 1}));
  CHECK(positivity_check(DiagonalForm3{0.5, 3, 3}, 0.1));
  CHECK_FALSE(positivity_check(DiagonalForm3{0.05, 3, 3}, 0.1));
}

TEST_CASE("family metadata") {
  const FibrationFamily sp1(Fibration::Sp1FiberSphere, 2);
  CHECK(sp1.fiber_dim() == 3);
  CHECK(sp1.base_dim() == 8);
  CHECK(sp1.is_sphere());
  const FibrationFamily spin7(Fibration::Spin7FiberSphere, 5);
  CHECK(spin7.n == 1);  // S^15 only
  CHECK(spin7.base_dim() == 8);
  const FibrationFamily cp(Fibration::CP1FiberProjective, 3);
  CHECK_FALSE(cp.is_sphere());
  CHECK(cp.fiber_dim() == 2);
  CHECK_THROWS_AS(FibrationFamily(Fibration::Sp1FiberSphere, 0),
                  std::invalid_argument);
}
