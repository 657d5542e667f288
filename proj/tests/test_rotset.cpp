#include <doctest.h>

#include "annrot/rotset.hpp"
#include "annrot/zoo.hpp"

using namespace annrot;

namespace {

RotationSetEstimate from_intervals(std::vector<ExtendedInterval> iv) {
  RotationSetEstimate e;
  e.intervals = std::move(iv);
  return e;
}

GridRegion band(double lo, double hi, int res = 48) {
  return GridRegion::full(Rect{0.0, 1.0, lo, hi}, res, res, true);
}

}  // namespace

TEST_CASE("merge_samples clusters with the eps gap rule") {
  RotationSetEstimate e =
      merge_samples({0.0, 0.005, 0.012, 0.5, 0.509}, 0.01, 1e3, 1, 10);
  REQUIRE(e.intervals.size() == 2);
  CHECK(e.intervals[0].lo == doctest::Approx(0.0));
  CHECK(e.intervals[0].hi == doctest::Approx(0.012));
  CHECK(e.intervals[1].lo == doctest::Approx(0.5));
  CHECK(e.max_gap() == doctest::Approx(0.5 - 0.012));
  CHECK(e.covers(0.008, 0.0));
  CHECK_FALSE(e.covers(0.25, 0.01));
  CHECK_FALSE(e.is_interval());
}

TEST_CASE("samples beyond the finite cap become closure flags") {
  RotationSetEstimate e = merge_samples({0.3, 2000.0, -5000.0}, 0.01, 1e3, 1, 10);
  REQUIRE(e.intervals.size() == 1);
  CHECK(e.intervals[0].hi == doctest::Approx(0.3));
  CHECK(e.flag_plus_inf);
  CHECK(e.flag_minus_inf);

  RotationSetEstimate none = merge_samples({}, 0.01, 1e3, 1, 10);
  CHECK(none.no_samples);
}

TEST_CASE("exact Hausdorff distance between interval unions") {
  RotationSetEstimate a = from_intervals({{0.0, 1.0}});
  RotationSetEstimate b = from_intervals({{0.0, 0.5}, {0.8, 1.0}});
  // farthest point of a from b is the gap midpoint 0.65
  CHECK(hausdorff(a, b) == doctest::Approx(0.15));
  CHECK(hausdorff(b, a) == doctest::Approx(0.15));
  CHECK(hausdorff(a, a) == doctest::Approx(0.0));

  RotationSetEstimate c = from_intervals({{2.0, 3.0}});
  CHECK(hausdorff(a, c) == doctest::Approx(2.0));
  CHECK(hausdorff_to_interval(b, 0.0, 1.0) == doctest::Approx(0.15));
}

TEST_CASE("interval union intersection and affine images") {
  RotationSetEstimate a = from_intervals({{0.0, 1.0}});
  RotationSetEstimate b = from_intervals({{0.5, 2.0}});
  RotationSetEstimate i = intersect_estimates(a, b);
  REQUIRE(i.intervals.size() == 1);
  CHECK(i.intervals[0].lo == doctest::Approx(0.5));
  CHECK(i.intervals[0].hi == doctest::Approx(1.0));

  RotationSetEstimate img = affine_image(a, 2, -3);  // x -> -3x + 2
  REQUIRE(img.intervals.size() == 1);
  CHECK(img.intervals[0].lo == doctest::Approx(-1.0));
  CHECK(img.intervals[0].hi == doctest::Approx(2.0));
}

TEST_CASE("rho_K of a rigid rotation is a point") {
  SeedPlan plan;
  plan.grid_nx = 8;
  plan.grid_ny = 8;
  RhoKResult r = rho_K(rigid_rotation(1.0 / 3.0), band(-1.0, 1.0), 1, 60, plan);
  REQUIRE(r.full.is_interval());
  CHECK(r.full.covers(1.0 / 3.0, 1e-9));
  CHECK(r.full.max_value() - r.full.min_value() < 1e-9);
  CHECK(r.tail.covers(1.0 / 3.0, 1e-9));
}

TEST_CASE("rho_K of the twist map reproduces the seed heights") {
  SeedPlan plan;
  plan.grid_nx = 4;
  plan.grid_ny = 128;
  RhoKResult r = rho_K(twist_map(), band(-0.5, 0.5), 1, 40, plan);
  CHECK(r.full.min_value() == doctest::Approx(-0.5).epsilon(0.02));
  CHECK(r.full.max_value() == doctest::Approx(0.5).epsilon(0.02));
  CHECK(r.full.max_gap() <= 2.0 * Defaults::merge_epsilon);
}

TEST_CASE("rho_VW keeps segments in V with endpoints outside W") {
  SeedPlan plan;
  plan.grid_nx = 8;
  plan.grid_ny = 32;
  RotationSetEstimate e = rho_VW(twist_map(), +1, 1.0, 2.0, 1, 50, plan);
  CHECK_FALSE(e.no_samples);
  CHECK(e.min_value() >= 1.0);
  CHECK(e.max_value() <= 2.0);
  CHECK_THROWS_AS(rho_VW(twist_map(), +1, 2.0, 1.0, 1, 50, plan), PreconditionError);
}

TEST_CASE("local rotation set of the plane contraction z -> z/2") {
  SeedPlan plan;
  plan.grid_nx = 12;
  plan.grid_ny = 12;
  RadiiSchedule sched{1.0, 1.0, 4, 2};
  LocalRotationResult lr = rho_local(plane_linear(0.0, 0.5), +1, sched, 1, 200, plan);
  CHECK_FALSE(lr.extrapolated.no_samples);
  CHECK(lr.extrapolated.covers(0.0, 1e-9));
  CHECK(lr.extrapolated.max_value() - lr.extrapolated.min_value() < 1e-9);
  CHECK(lr.stabilization <= 1e-9);
  CHECK(lr.per_level.size() == 4);
}

TEST_CASE("measured rotation hull of the twist map") {
  SeedPlan plan;
  plan.grid_nx = 4;
  plan.grid_ny = 64;
  MeasuredRotationResult m = rho_measured(twist_map(), band(-0.5, 0.5), 10, 100, plan);
  CHECK_FALSE(m.none);
  CHECK(m.hull_lo == doctest::Approx(-0.5).epsilon(0.02));
  CHECK(m.hull_hi == doctest::Approx(0.5).epsilon(0.02));

  // every orbit of the double-Reeb map escapes the band: no invariant mass
  MeasuredRotationResult gone =
      rho_measured(open_annulus_double_reeb(0.1), band(-0.4, 0.4), 300, 700, plan);
  CHECK(gone.none);
}

TEST_CASE("affine rotation law through the estimator") {
  SeedPlan plan;
  plan.grid_nx = 8;
  plan.grid_ny = 8;
  auto estimator = [&](const LiftedAnnulusMap& mp) {
    return rho_K(mp, band(-1.0, 1.0), 1, 60, plan).full;
  };
  for (auto [p, q] : {std::pair{1, 1}, {-1, 2}, {2, -1}}) {
    AffineLawReport rep =
        affine_law_check(rigid_rotation(1.0 / 3.0), p, q, estimator);
    INFO("p=" << p << " q=" << q);
    CHECK(rep.pass);
    CHECK(rep.deviation <= rep.tolerance);
  }
}
