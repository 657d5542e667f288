#include <doctest.h>

#include <cmath>

#include "annrot/branches.hpp"
#include "annrot/zoo.hpp"

using namespace annrot;

namespace {

BandSpec upper_band() {
  return BandSpec{GraphCurve::horizontal(0.9), GraphCurve::horizontal(0.0), 0};
}

}  // namespace

TEST_CASE("band_check accepts the skew band and rejects a repulsing floor") {
  LiftedAnnulusMap skew = map_from_spec(reference_skew_spec(0.0));
  BandCheckReport ok = band_check(skew, upper_band());
  CHECK(ok.ok);
  CHECK(ok.upper_cls.cls == CurveClass::FreeAttracting);
  CHECK(ok.lower_cls.cls == CurveClass::FreeAttracting);

  LiftedAnnulusMap trap = vertical_drift(alpha_from_json(
      json{{"kind", "band_trap"}, {"y_lo", -0.2}, {"y_hi", 0.2}, {"s", 0.5}}));
  BandCheckReport bad = band_check(
      trap, BandSpec{GraphCurve::horizontal(0.5), GraphCurve::horizontal(-0.5), 0});
  CHECK_FALSE(bad.ok);
}

TEST_CASE("lambda at depth zero is the band itself") {
  LiftedAnnulusMap skew = map_from_spec(reference_skew_spec(0.0));
  Rect w{-2.0, 2.0, -0.3, 1.2};
  GridRegion l0 = lambda_n(skew, upper_band(), w, 64, 24, 0, BranchSign::Unstable);
  CHECK(l0.contains(0.0, 0.45));
  CHECK(l0.contains(-1.5, 0.1));
  CHECK_FALSE(l0.contains(0.0, 1.1));
  CHECK_FALSE(l0.contains(0.0, -0.25));
}

TEST_CASE("a band without radial motion is invariant at every depth") {
  LiftedAnnulusMap map =
      fibred_rotation(alpha_from_json(json{{"kind", "lorentz"}, {"scale", 0.3}}));
  Rect w{-2.0, 2.0, -0.3, 1.2};
  LambdaField field = lambda_field(map, upper_band(), w, 64, 24, 8,
                                   BranchSign::Unstable);
  size_t n0 = field.at(0).count();
  CHECK(n0 > 0);
  for (long n = 1; n <= 8; ++n) CHECK(field.at(n).count() == n0);
}

TEST_CASE("unstable limit of the untilted skew band is the sub-band up to y_a") {
  LiftedAnnulusMap skew = map_from_spec(reference_skew_spec(0.0));
  Rect w{-2.0, 2.0, -0.3, 1.2};
  GridRegion limit = lambda_limit(skew, upper_band(), w, 64, 24, 40,
                                  BranchSign::Unstable);
  CHECK(limit.contains(0.0, 0.25, 1));
  CHECK(limit.contains(-1.0, 0.45, 1));
  CHECK_FALSE(limit.contains(0.0, 0.75));
  // x-unbounded: the set fills the window to its x-edges
  CHECK(limit.touches_x_edge());

  GridRegion esc = lambda_limit_escape_time(skew, upper_band(), w, 64, 24, 40,
                                            BranchSign::Unstable);
  CHECK(limit.contains_region_dilated(esc, 1));
  CHECK(esc.contains_region_dilated(limit, 1));
}

TEST_CASE("branch flags on the untilted map: unbounded, no diameter claim") {
  LiftedAnnulusMap skew = map_from_spec(reference_skew_spec(0.0));
  Rect w{-2.0, 2.0, -0.3, 1.2};
  BranchResult br = branch_of(skew, upper_band(), w, 64, 24, {0.0, 0.25}, 40,
                              BranchSign::Unstable, false);
  CHECK(br.component.count() > 0);
  CHECK(br.meets_lower);
  CHECK_FALSE(br.compact_in_window);
  CHECK_FALSE(br.diameter_ok);
}

TEST_CASE("h2_check fails immediately for horizontal image circles") {
  LiftedAnnulusMap skew = map_from_spec(reference_skew_spec(0.0));
  H2Report rep = h2_check(skew, GraphCurve::horizontal(0.9),
                          GraphCurve::horizontal(-0.9), 5);
  CHECK_FALSE(rep.holds);
  CHECK(rep.first_fail == 1);
  // the first image sits strictly above the target curve
  CHECK(rep.min_clearance.at(0) > 0.0);
}

TEST_CASE("theorem-c experiment refuses broken hypotheses") {
  TheoremCConfig cfg;
  cfg.theta_horizon = 20;
  cfg.rho_horizon = 50;
  cfg.sweep_max = 10;
  cfg.branch_depth = 10;
  cfg.mixed_k = 50;
  cfg.cells_per_unit = 16;
  GraphCurve g0 = GraphCurve::horizontal(0.9);
  GraphCurve g1 = GraphCurve::horizontal(0.0);
  GraphCurve g2 = GraphCurve::horizontal(-0.9);

  // no radial motion: curves are not free, (H1) gate
  LiftedAnnulusMap fib =
      fibred_rotation(alpha_from_json(json{{"kind", "lorentz"}, {"scale", 0.3}}));
  TheoremCResult h1 = theorem_c_experiment(fib, g0, g1, g2, cfg);
  CHECK(h1.status == CertStatus::Refused);
  CHECK_FALSE(h1.reason.empty());

  // band rotations clear of zero, but not by the demanded margin: (H3) gate
  TheoremCConfig strict = cfg;
  strict.h3_margin = 10.0;
  TheoremCResult h3 = theorem_c_experiment(map_from_spec(reference_skew_spec(0.0)),
                                           g0, g1, g2, strict);
  CHECK(h3.status == CertStatus::Refused);
  CHECK_FALSE(h3.reason.empty());
}

TEST_CASE("theorem-c config round trips through JSON") {
  TheoremCConfig cfg;
  cfg.mixed_k = 123;
  cfg.window_pad = 7.5;
  TheoremCConfig back = theorem_c_config_from_json(theorem_c_config_to_json(cfg));
  CHECK(back.mixed_k == 123);
  CHECK(back.window_pad == doctest::Approx(7.5));
  CHECK(back.sweep_max == cfg.sweep_max);
}
