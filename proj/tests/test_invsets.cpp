#include <doctest.h>

#include <cmath>

#include "annrot/invsets.hpp"
#include "annrot/zoo.hpp"

using namespace annrot;

namespace {

LiftedAnnulusMap trap_map() {
  return vertical_drift(alpha_from_json(
      json{{"kind", "band_trap"}, {"y_lo", -0.2}, {"y_hi", 0.2}, {"s", 0.5}}));
}

}  // namespace

TEST_CASE("free curve classification on the reference maps") {
  LiftedAnnulusMap skew = map_from_spec(reference_skew_spec(0.0));
  CHECK(free_curve_classify(skew, GraphCurve::horizontal(0.9)).cls ==
        CurveClass::FreeAttracting);
  CHECK(free_curve_classify(skew, GraphCurve::horizontal(-0.9)).cls ==
        CurveClass::FreeAttracting);

  LiftedAnnulusMap trap = trap_map();
  CHECK(free_curve_classify(trap, GraphCurve::horizontal(0.5)).cls ==
        CurveClass::FreeAttracting);
  CHECK(free_curve_classify(trap, GraphCurve::horizontal(-0.5)).cls ==
        CurveClass::FreeRepulsing);
  // a fixed curve cannot be certified either way at finite resolution
  CHECK(free_curve_classify(trap, GraphCurve::horizontal(0.0)).cls ==
        CurveClass::Undecided);
}

TEST_CASE("maximal invariant set of a trapping band") {
  LiftedAnnulusMap map = trap_map();
  GridRegion A = GridRegion::full(Rect{0.0, 1.0, -0.5, 0.5}, 64, 64, true);
  ThetaResult th = theta_maximal(map, A, 100);
  CHECK(th.region.count() > 0);
  CHECK(th.escaped_forward + th.escaped_backward > 0);
  const double dy = th.region.dy();
  for (int j = 0; j < th.region.ny; ++j)
    for (int i = 0; i < th.region.nx; ++i) {
      if (th.region.get(i, j))
        CHECK(std::abs(th.region.center(i, j).y) <= 0.2 + 2.0 * dy);
    }
  // the interior of the trapped band survives entirely
  CHECK(th.region.contains(0.5, 0.0));
  CHECK(th.region.contains(0.5, 0.15));
  CHECK_FALSE(th.region.contains(0.5, 0.45));
}

TEST_CASE("one-sided invariant sets require the matching classification") {
  LiftedAnnulusMap map = trap_map();
  Rect w{0.0, 1.0, -1.0, 1.0};
  GridRegion fwd = theta_forward(map, GraphCurve::horizontal(0.5), -1, w, 64, 64, 80);
  CHECK(fwd.count() > 0);
  for (int j = 0; j < fwd.ny; ++j)
    for (int i = 0; i < fwd.nx; ++i)
      if (fwd.get(i, j)) CHECK(fwd.center(i, j).y <= 0.2 + 2.0 * fwd.dy());

  // backward set above an attracting curve of the skew product: only points
  // at or above the semistable circle keep their forward orbit in V
  LiftedAnnulusMap skew = map_from_spec(reference_skew_spec(0.0));
  GridRegion bwd = theta_backward(skew, GraphCurve::horizontal(0.0), +1, w, 64, 64, 400);
  CHECK(bwd.count() > 0);
  CHECK(bwd.contains(0.5, 0.75));
  CHECK_FALSE(bwd.contains(0.5, 0.1));
  for (int j = 0; j < bwd.ny; ++j)
    for (int i = 0; i < bwd.nx; ++i)
      if (bwd.get(i, j)) CHECK(bwd.center(i, j).y >= 0.5 - 2.0 * bwd.dy());

  // the wrong side of an attracting curve is not forward invariant
  CHECK_THROWS_AS(theta_forward(map, GraphCurve::horizontal(0.5), +1, w, 32, 32, 10),
                  PreconditionError);
}

TEST_CASE("connected components with and without x-wrap") {
  GridRegion r = GridRegion::empty(Rect{0.0, 1.0, 0.0, 1.0}, 8, 8, true);
  r.set(0, 2);
  r.set(7, 2);  // adjacent to (0,2) through the wrap
  r.set(4, 6);
  std::vector<GridRegion> comps = r.components();
  CHECK(comps.size() == 2);

  GridRegion flat = GridRegion::empty(Rect{0.0, 1.0, 0.0, 1.0}, 8, 8, false);
  flat.set(0, 2);
  flat.set(7, 2);
  CHECK(flat.components().size() == 2);
}

TEST_CASE("connected invariant set between an attracting/repulsing pair") {
  ConnectedInvariantReport rep = connected_invariant_check(
      trap_map(), GraphCurve::horizontal(0.5), GraphCurve::horizontal(-0.5), 60);
  CHECK(rep.pass);
  CHECK(rep.n_components == 1);
  CHECK(rep.theta_cells > 0);
  // swapping the curves violates the precondition
  CHECK_THROWS_AS(connected_invariant_check(trap_map(), GraphCurve::horizontal(-0.5),
                                            GraphCurve::horizontal(0.5), 10),
                  PreconditionError);
}

TEST_CASE("free horizon in the cover vs with translates") {
  GridRegion K = GridRegion::full(Rect{0.1, 0.35, -0.1, 0.1}, 8, 8, false);
  LiftedAnnulusMap third = rigid_rotation(1.0 / 3.0);

  FreeHorizonReport cover = free_horizon(third, K, 30, false);
  CHECK(cover.found);
  CHECK(cover.n0 == 1);
  CHECK(cover.witness_margin > 0.0);

  // in the annulus the rotation is periodic: every third iterate returns
  FreeHorizonReport ann = free_horizon(third, K, 30, true);
  CHECK_FALSE(ann.found);

  // the twist map pushes a high box steadily right in the cover
  GridRegion Kt = GridRegion::full(Rect{0.1, 0.35, 1.3, 1.45}, 8, 8, false);
  FreeHorizonReport tw = free_horizon(twist_map(), Kt, 20, false);
  CHECK(tw.found);
  CHECK(tw.n0 == 1);

  // wrapping regions are rejected
  GridRegion wrapped = GridRegion::full(Rect{0.0, 1.0, 0.0, 1.0}, 8, 8, true);
  CHECK_THROWS_AS(free_horizon(third, wrapped, 10, false), PreconditionError);
}

TEST_CASE("region RLE serialization round trips") {
  GridRegion r = GridRegion::empty(Rect{0.0, 1.0, -1.0, 1.0}, 16, 12, true);
  r.set(3, 4);
  r.set(4, 4);
  r.set(5, 4);
  r.set(11, 9);
  GridRegion back = GridRegion::from_rle_json(r.to_rle_json());
  CHECK(back.same_geometry(r));
  CHECK(back.count() == r.count());
  for (int j = 0; j < r.ny; ++j)
    for (int i = 0; i < r.nx; ++i) CHECK(back.get(i, j) == r.get(i, j));
}
