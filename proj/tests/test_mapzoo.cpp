#include <doctest.h>

#include <cmath>

#include "annrot/zoo.hpp"

using namespace annrot;

TEST_CASE("invert_increasing recovers preimages") {
  auto cube = [](double y) { return y * y * y + y; };
  double y = invert_increasing(cube, 10.0, -10.0, 10.0);
  CHECK(cube(y) == doctest::Approx(10.0).epsilon(1e-10));
}

TEST_CASE("double-Reeb map rotates +1 low, -1 high, and drifts upward") {
  LiftedAnnulusMap map = open_annulus_double_reeb(0.01);
  CoverPoint lo = map.fwd({0.0, -6.0});
  CHECK(lo.x == doctest::Approx(1.0));
  CHECK(lo.y > -6.0);
  CoverPoint hi = map.fwd({0.0, 6.0});
  CHECK(hi.x == doctest::Approx(-1.0));
  CHECK(hi.y > 6.0);
  // drift is strictly positive in the transition zone too
  CHECK(map.fwd({0.0, 0.0}).y > 0.0);
}

TEST_CASE("twice-Reeb plane map is 1-periodic in the band coordinate") {
  LiftedAnnulusMap map = twice_reeb_plane();
  CoverPoint a = map.fwd({0.3, 0.7});
  CoverPoint b = map.fwd({0.3, 1.7});
  CHECK(b.x == doctest::Approx(a.x).epsilon(1e-12));
  CHECK(b.y == doctest::Approx(a.y + 1.0).epsilon(1e-12));
  // band-boundary circles are invariant and rotate by beta
  CoverPoint c = map.fwd({0.1, 2.0});
  CHECK(c.y == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(c.x == doctest::Approx(0.1 + 0.1).epsilon(1e-12));
}

TEST_CASE("skew product fixed circles carry the expected rotations") {
  LiftedAnnulusMap map = map_from_spec(reference_skew_spec(0.0));
  CoverPoint top = map.fwd({0.2, 0.5});
  CHECK(top.y == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(top.x == doctest::Approx(0.2 + 0.3).epsilon(1e-12));
  CoverPoint bot = map.fwd({0.2, -0.5});
  CHECK(bot.y == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(bot.x == doctest::Approx(0.2 - 0.2).epsilon(1e-12));
  // everywhere else the radial coordinate strictly decreases inside the band
  CHECK(map.fwd({0.2, 0.0}).y < 0.0);
  CHECK(map.fwd({0.2, 0.25}).y < 0.25);
}

TEST_CASE("vertical drift with a trapping band") {
  LiftedAnnulusMap map = vertical_drift(alpha_from_json(
      json{{"kind", "band_trap"}, {"y_lo", -0.2}, {"y_hi", 0.2}, {"s", 0.5}}));
  CHECK(map.fwd({0.4, 0.0}).y == doctest::Approx(0.0));   // band is fixed
  CHECK(map.fwd({0.4, 0.5}).y < 0.5);                     // pushed down from above
  CHECK(map.fwd({0.4, -0.5}).y > -0.5);                   // pushed up from below
  CHECK(map.fwd({0.4, 0.5}).x == doctest::Approx(0.4));   // no angular motion
  CoverPoint z{0.1, 0.37};
  CoverPoint back = map.inv(map.fwd(z));
  CHECK(back.y == doctest::Approx(z.y).epsilon(1e-10));
}

TEST_CASE("isotopy-power combinator obeys the affine displacement law") {
  LiftedAnnulusMap base = rigid_rotation(1.0 / 3.0);
  LiftedAnnulusMap pw = rigid_rotation_isotopy_power(base, 1, 2);
  CHECK(rho_n(pw, AnnulusPoint(0.0, 0.0), 6) == doctest::Approx(1.0 + 2.0 / 3.0));
  LiftedAnnulusMap inv_pw = rigid_rotation_isotopy_power(base, 0, -1);
  CHECK(rho_n(inv_pw, AnnulusPoint(0.0, 0.0), 6) == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("compose and conjugate combinators") {
  LiftedAnnulusMap two_thirds =
      compose({rigid_rotation(1.0 / 3.0), rigid_rotation(1.0 / 3.0)});
  CHECK(rho_n(two_thirds, AnnulusPoint(0.1, 0.0), 3) == doctest::Approx(2.0 / 3.0));
  LiftedAnnulusMap conj = conjugate(twist_map(), rigid_rotation(0.25));
  CHECK(rho_n(conj, AnnulusPoint(0.0, 0.75), 8) == doctest::Approx(0.75));
}

TEST_CASE("every family round-trips through its JSON record") {
  for (const auto& map :
       {identity_map(), rigid_rotation(0.3), twist_map(), plane_linear(0.25, 0.5),
        twice_reeb_plane(), open_annulus_double_reeb(0.01),
        map_from_spec(reference_skew_spec(0.01)),
        map_from_spec(reference_tilted_spec())}) {
    LiftedAnnulusMap rebuilt = map_from_spec(map.params);
    INFO(map.name);
    CoverPoint z{0.31, 0.17};
    CoverPoint a = map.fwd(z), b = rebuilt.fwd(z);
    CHECK(a.x == doctest::Approx(b.x).epsilon(1e-14));
    CHECK(a.y == doctest::Approx(b.y).epsilon(1e-14));
    CHECK(rebuilt.horizontal_bound == doctest::Approx(map.horizontal_bound));
  }
}

TEST_CASE("degenerate profile parameters are rejected") {
  CHECK_THROWS_AS(alpha_from_json(json{{"kind", "nope"}}), SchemaError);
  CHECK_THROWS_AS(
      alpha_from_json(json{{"kind", "band_trap"}, {"y_lo", 1.0}, {"y_hi", 0.0}, {"s", 0.5}}),
      SchemaError);
  CHECK_THROWS_AS(map_from_spec(json{{"family", "martian"}}), SchemaError);
}
