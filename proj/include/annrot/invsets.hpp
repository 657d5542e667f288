#pragma once

#include "annrot/grid.hpp"

namespace annrot {

enum class CurveClass { NotFree, FreeAttracting, FreeRepulsing, Undecided };

const char* curve_class_name(CurveClass c);

struct CurveClassReport {
  CurveClass cls = CurveClass::Undecided;
  // min clearance in y between the (forward or inverse) image of the curve and
  // the curve itself; positive for either free classification
  double margin = 0.0;
  double resolution_floor = 0.0;  // clearance below this is "undecided"
  json to_json() const;
};

// Samples f(gamma) and f^-1(gamma) on a dense node set. Free-attracting when
// the forward image is uniformly strictly below the curve, free-repulsing when
// the inverse image is; not-free when the forward image provably crosses.
CurveClassReport free_curve_classify(const LiftedAnnulusMap& map,
                                     const GraphCurve& gamma, int samples = 2048);

struct ThetaResult {
  GridRegion region;   // cells whose center orbit stays in A for |n| <= N
  GridRegion escaped;  // cells with a definite escape certificate
  long horizon = 0;
  size_t escaped_forward = 0, escaped_backward = 0;
  json to_json() const;
};

// Depth-N approximation of the maximal invariant set of A: both orbit
// directions of each occupied cell's center must stay in A (one-cell dilated
// membership, so the result is an outer approximation).
ThetaResult theta_maximal(const LiftedAnnulusMap& map, const GridRegion& A, long N);

// Depth-N approximation of the forward-invariant set of the end neighborhood
// V = {side*(y - gamma(theta)) > 0} (side=-1: strictly below the curve);
// i.e. the decreasing intersection of f^n(V), n <= N. Refuses unless
// f(Cl V) is strictly inside V (checked through free_curve_classify).
GridRegion theta_forward(const LiftedAnnulusMap& map, const GraphCurve& gamma,
                         int side, const Rect& window, int nx, int ny, long N);
GridRegion theta_backward(const LiftedAnnulusMap& map, const GraphCurve& gamma,
                          int side, const Rect& window, int nx, int ny, long N);

struct ComponentSet {
  std::vector<GridRegion> comps;  // ordered by lexicographically least cell
  std::vector<bool> touches_lower, touches_upper;
  json to_json() const;
};

// Flood-fill components plus flags marking which components touch the given
// boundary curves (within one cell).
ComponentSet connected_components(const GridRegion& region,
                                  const GraphCurve* lower = nullptr,
                                  const GraphCurve* upper = nullptr);

struct ConnectedInvariantReport {
  CurveClassReport attracting_cls, repulsing_cls;
  size_t n_components = 0;
  size_t theta_cells = 0;
  bool pass = false;
  json to_json() const;
};

// For an attracting curve above a repulsing one, the maximal invariant set of
// the band between them should be a single connected set; this verifies that
// at a given grid depth. Refuses when either classification fails.
ConnectedInvariantReport connected_invariant_check(const LiftedAnnulusMap& map,
                                                   const GraphCurve& attracting,
                                                   const GraphCurve& repulsing,
                                                   long N, int nx = 128,
                                                   int ny = 128);

struct FreeHorizonReport {
  bool found = false;
  long n0 = -1;          // least n with f^n(K) disjoint from K for all n in [n0, N]
  long tested_to = 0;
  double witness_margin = 0.0;  // min clearance over [n0, N], beyond the cell diagonal
  bool include_translates = false;
  json to_json() const;
};

// K must be a bounded region of the cover (wrap_x off). By default the test is
// disjointness in the cover; include_translates additionally tests against all
// integer x-translates of K (disjointness of the projected sets in the
// annulus), which requires K to have x-extent < 1.
FreeHorizonReport free_horizon(const LiftedAnnulusMap& map, const GridRegion& K,
                               long N, bool include_translates = false);

}  // namespace annrot
