#pragma once

#include "annrot/map.hpp"

namespace annrot {

// A 1-D profile (rotation profile alpha or radial profile) with a declared
// domain; built from a named-profile JSON record so it can round-trip through
// configs. Radial profiles used as homeomorphism components are checked for
// strict monotonicity by dense sampling.
struct Alpha1D {
  std::function<double(double)> f;
  double dom_lo = -1e9, dom_hi = 1e9;
  json spec;  // {"kind": ..., ...}
  double operator()(double y) const { return f(y); }
};

Alpha1D alpha_from_json(const json& spec);

// Safeguarded Newton/bisection inversion of a strictly increasing function.
double invert_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi, double tol = 1e-13);

// ---- map families ----

LiftedAnnulusMap identity_map();
LiftedAnnulusMap rigid_rotation(double turns);
// Fibred rotation (x,y) -> (x + alpha(y), y); twist_map() is alpha(y) = y.
LiftedAnnulusMap fibred_rotation(const Alpha1D& alpha);
LiftedAnnulusMap twist_map();
// Linear plane map z -> lambda z (lambda = modulus * e^{i tau angle}), in
// log-polar annulus coordinates: (x, y) -> (x + angle, y - ln(modulus)).
LiftedAnnulusMap plane_linear(double angle_turns, double modulus);

// J^p * I^q: lift z -> f̃^q(z) + (p, 0). Every rotation estimator applied to
// the result must satisfy rho(J^p * I^q) = q rho(I) + p.
LiftedAnnulusMap rigid_rotation_isotopy_power(const LiftedAnnulusMap& base, int p,
                                              int q);

// Plane map fixing the origin, self-similar under z -> z/3. In log-polar band
// coordinates (one band rescaled to unit height) the lift is 1-periodic in y:
//   (x, y) -> (x + om(y), y + v(y)),
// om interpolating beta on the band-boundary circles and alpha on the interior
// circle at y_m = 1 - ln2/ln3, v >= 0 vanishing exactly on those circles.
LiftedAnnulusMap twice_reeb_plane(double beta = 0.1, double alpha = -0.1,
                                  double stiffness = 0.05);

// Open-annulus map with rotation +1 near the lower end, -1 near the upper end,
// and a strictly positive upward drift in between: every orbit escapes to an
// end, so there is no invariant compact set, while finite-scale rho_K samples
// fill [-1, 1].
LiftedAnnulusMap open_annulus_double_reeb(double delta = 0.01);

struct SkewLevels {
  double y2, yb, y1, ya, y0;  // y2 < yb < y1 < ya < y0
};

// Skew product plus tilt: (x, y) -> (x + omega(y), radial(y) + eps sin(tau x)).
// radial must have exactly two fixed points ya, yb with radial(y) < y elsewhere
// on [y2, y0]; omega(ya) > 0 > omega(yb); eps small enough that invertibility
// survives (checked: min radial' - tau*eps*max|omega'| > 0).
LiftedAnnulusMap skew_heteroclinic(const SkewLevels& levels, const Alpha1D& omega,
                                   const Alpha1D& radial, double eps);

// Pure vertical drift (x, y) -> (x, y + d(y)); d must keep y + d(y) strictly
// increasing. With the band_trap profile this flanks an invariant band with an
// attracting floor and a repulsing ceiling.
LiftedAnnulusMap vertical_drift(const Alpha1D& drift);

LiftedAnnulusMap compose(const std::vector<LiftedAnnulusMap>& maps);
LiftedAnnulusMap conjugate(const LiftedAnnulusMap& map, const LiftedAnnulusMap& by);

// Build any family (including power/compose/conjugate combinators) from its
// JSON record; inverse of the .params serialization.
LiftedAnnulusMap map_from_spec(const json& spec);

// Pinned reference configurations used across suites.
json reference_skew_spec(double eps = 0.0);  // linear omega, quartic radial
json reference_tilted_spec();  // plateau omega + dip radial, eps=0.01, power 128
SkewLevels reference_levels();

}  // namespace annrot
