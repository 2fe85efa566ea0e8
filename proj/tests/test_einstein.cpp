#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ricci/einstein.hpp"
#include "ricci/prescribed.hpp"

using namespace ricci;

TEST_CASE("Einstein catalog ratios per family") {
  for (int n = 1; n <= 10; ++n) {
    const auto circle = einstein_list({Fibration::CircleFiberSphere, n});
    REQUIRE(circle.size() == 1);
    CHECK(std::fabs(circle[0].ratio - 1.0) < 1e-12);
    CHECK(std::fabs(circle[0].einstein_constant - 2.0 * n) < 1e-12);

    const auto sp1 = einstein_list({Fibration::Sp1FiberSphere, n});
    REQUIRE(sp1.size() == 2);
    CHECK(std::fabs(sp1[0].ratio - 1.0 / (2.0 * n + 3.0)) < 1e-12);
    CHECK(std::fabs(sp1[1].ratio - 1.0) < 1e-12);
    CHECK(std::fabs(sp1[1].einstein_constant - (4.0 * n + 2.0)) < 1e-12);

    const auto cp = einstein_list({Fibration::CP1FiberProjective, n});
    REQUIRE(cp.size() == 2);
    CHECK(std::fabs(cp[0].ratio - 1.0 / (n + 1.0)) < 1e-12);
    CHECK(std::fabs(cp[1].ratio - 1.0) < 1e-12);
    CHECK(std::fabs(cp[1].einstein_constant - (4.0 * n + 4.0)) < 1e-12);
  }
  const auto spin7 = einstein_list({Fibration::Spin7FiberSphere, 1});
  REQUIRE(spin7.size() == 2);
  CHECK(std::fabs(spin7[0].ratio - 3.0 / 11.0) < 1e-12);
  CHECK(std::fabs(spin7[1].ratio - 1.0) < 1e-12);
  CHECK(std::fabs(spin7[1].einstein_constant - 14.0) < 1e-12);
}

TEST_CASE("each catalog entry passes is_einstein") {
  for (int n = 1; n <= 10; ++n) {
    for (Fibration k : {Fibration::CircleFiberSphere, Fibration::Sp1FiberSphere,
                        Fibration::Spin7FiberSphere,
                        Fibration::CP1FiberProjective}) {
      const FibrationFamily fam(k, n);
      for (const EinsteinEntry& e : einstein_list(fam)) {
        const auto lam = is_einstein(TwoSummandMetric{fam, e.ratio, 1.0}, 1e-12);
        REQUIRE(lam.has_value());
        CHECK(*lam == doctest::Approx(e.einstein_constant).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("catalog ratios are stationary for the prescribed-Ricci map") {
  for (int n : {1, 2, 3}) {
    const FibrationFamily fam(Fibration::Sp1FiberSphere, n);
    for (const EinsteinEntry& e : einstein_list(fam)) {
      const auto s = solve_two_summand(fam, e.ratio, 1.0);
      REQUIRE(s.has_value());
      CHECK(s->g.ratio() == doctest::Approx(e.ratio).epsilon(1e-12));
    }
  }
}

TEST_CASE("is_einstein on SU(2) metrics") {
  const auto round = is_einstein(Su2Metric{2, 2, 2});
  REQUIRE(round.has_value());
  CHECK(*round == 1.0);
  CHECK_FALSE(is_einstein(Su2Metric{1, 2, 2}).has_value());
}

TEST_CASE("is_einstein on four-parameter metrics") {
  for (int n : {1, 2, 5}) {
    const auto lam = is_einstein(FourParamMetric{n, 1, 1, 1, 1});
    REQUIRE(lam.has_value());
    CHECK(*lam == doctest::Approx(4.0 * n + 2.0).epsilon(1e-14));
  }
  CHECK_FALSE(is_einstein(FourParamMetric{1, 1, 1, 2, 1}).has_value());
  // The second catalog point of the sp1 family, viewed four-parameter.
  const double r = 1.0 / 5.0;
  const auto lam = is_einstein(FourParamMetric{1, r, r, r, 1.0}, 1e-12);
  REQUIRE(lam.has_value());
}

TEST_CASE("uniqueness scan flags nothing and the difference identities hold") {
  UniquenessScanOptions opt;
  opt.seed = 20240817;
  const auto rep = sp1_uniqueness_scan(1, 20000, opt);
  CHECK(rep.samples == 20000);
  CHECK(rep.flags == 0);
  CHECK(rep.flagged_points.empty());
  CHECK(rep.max_identity_defect < 1e-12);
}

TEST_CASE("uniqueness scan is deterministic in the seed") {
  UniquenessScanOptions opt;
  opt.seed = 42;
  const auto a = sp1_uniqueness_scan(2, 5000, opt);
  const auto b = sp1_uniqueness_scan(2, 5000, opt);
  CHECK(a.flags == b.flags);
  CHECK(a.max_identity_defect == b.max_identity_defect);
}

TEST_CASE("asymmetric fiber example is not Sp(1)-invariant") {
  const FourParamForm f = ricci_four_param({1, 1, 1, 2, 1});
  CHECK(f.a1 == 4.0);
  CHECK(f.a2 == 4.0);
  CHECK(f.a3 == 24.0);
}
