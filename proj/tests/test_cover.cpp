#include <doctest.h>

#include <cmath>

#include "annrot/map.hpp"
#include "annrot/zoo.hpp"

using namespace annrot;

TEST_CASE("annulus/cover coordinate round trips") {
  AnnulusPoint a(1.7, -0.3);
  CHECK(a.theta == doctest::Approx(0.7));
  CHECK(project(lift_of(a, 5)).theta == doctest::Approx(0.7));

  double re, im;
  PlaneChart::to_plane(AnnulusPoint(0.25, 0.0), re, im);
  CHECK(re == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(im == doctest::Approx(1.0));
  AnnulusPoint back = PlaneChart::from_plane(re, im);
  CHECK(back.theta == doctest::Approx(0.25));
  CHECK(back.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("origin sits at the y -> +infinity end of the plane chart") {
  AnnulusPoint near_origin = PlaneChart::from_plane(1e-8, 0.0);
  CHECK(near_origin.y > 18.0);
}

TEST_CASE("rho_n of the basic families") {
  CHECK(rho_n(identity_map(), AnnulusPoint(0.3, 0.0), 5) == doctest::Approx(0.0));
  CHECK(rho_n(rigid_rotation(1.0 / 3.0), AnnulusPoint(0.1, 2.0), 7) ==
        doctest::Approx(1.0 / 3.0));
  // twist: rotation equals the height
  CHECK(rho_n(twist_map(), AnnulusPoint(0.0, -1.25), 40) == doctest::Approx(-1.25));
}

TEST_CASE("linear plane maps in the log-polar chart") {
  // z -> z/2 fixes the angle and steps toward the origin by ln 2
  LiftedAnnulusMap half = plane_linear(0.0, 0.5);
  CoverPoint w = half.fwd({0.2, 1.0});
  CHECK(w.x == doctest::Approx(0.2));
  CHECK(w.y == doctest::Approx(1.0 + std::log(2.0)));
  // z -> (i/2) z additionally rotates by a quarter turn
  LiftedAnnulusMap quarter = plane_linear(0.25, 0.5);
  CHECK(rho_n(quarter, AnnulusPoint(0.2, 1.0), 16) == doctest::Approx(0.25));
}

TEST_CASE("displacement traces and escape detection") {
  OrbitTrace t = displacement(twist_map(), {0.0, 0.5}, 10);
  CHECK(t.points.size() == 11);
  CHECK_FALSE(t.escaped);
  CHECK(t.total_displacement == doctest::Approx(5.0));

  OrbitTrace back = displacement(twist_map(), {5.0, 0.5}, -10);
  CHECK(back.total_displacement == doctest::Approx(-5.0));
}

TEST_CASE("lift validation accepts the zoo and sees the declared bound") {
  for (const auto& map : {twist_map(), open_annulus_double_reeb(0.01),
                          map_from_spec(reference_skew_spec(0.0))}) {
    LiftValidationReport rep = validate_lift(map, Rect{0.0, 1.0, -2.0, 2.0}, 400);
    INFO(map.name);
    CHECK(rep.ok);
    CHECK(rep.max_equivariance_error <= 1e-9);
    CHECK(rep.max_inverse_error <= 1e-9);
    CHECK(rep.observed_horizontal_bound <= map.horizontal_bound + 1e-9);
  }
}

TEST_CASE("lift equivariance under the unit translation") {
  LiftedAnnulusMap map = map_from_spec(reference_skew_spec(0.01));
  CoverPoint z{0.37, 0.12};
  CoverPoint a = map.fwd({z.x + 1.0, z.y});
  CoverPoint b = map.fwd(z);
  CHECK(a.x == doctest::Approx(b.x + 1.0).epsilon(1e-12));
  CHECK(a.y == doctest::Approx(b.y).epsilon(1e-12));
}
