#pragma once

#include "annrot/invsets.hpp"
#include "annrot/rotset.hpp"

namespace annrot {

// A closed band of the annulus delimited by two disjoint graph curves, both
// free-attracting for the map under test (verified by band_check).
struct BandSpec {
  GraphCurve upper;  // the band's ceiling
  GraphCurve lower;  // the band's floor
  int index = 0;
};

struct BandCheckReport {
  CurveClassReport upper_cls, lower_cls;
  bool ok = false;
  json to_json() const;
};

BandCheckReport band_check(const LiftedAnnulusMap& map, const BandSpec& band);

enum class BranchSign { Unstable, Stable };

// Per-cell membership horizons for the truncated sets
//   unstable: L_n = f^n(Cl U^-(upper)) ∩ Cl U^+(lower)
//   stable:   L_n = Cl U^-(upper) ∩ f^-n(Cl U^+(lower))
// over a non-wrapping cover window. Because both curves are attracting, the
// sets are nested in n, so a single backward (resp. forward) trace per cell
// yields every L_n at once: horizon[c] is the largest n with the cell in L_n
// (kCaptured when the trace settles onto a fixed point, i.e. member for all n).
// Each cell is probed on a subsample grid and keeps its best probe: the sets
// can be much thinner than a cell, and a cell belongs to the estimate as soon
// as any point of it does.
struct LambdaField {
  static constexpr int32_t kCaptured = INT32_MAX;
  Rect window;
  int nx = 0, ny = 0;
  long depth = 0;
  BranchSign sign = BranchSign::Unstable;
  std::vector<int32_t> horizon;  // -1: not in L_0
  std::vector<CoverPoint> rep;   // the cell's longest-surviving probe

  GridRegion at(long n) const;
  GridRegion limit() const { return at(depth); }
};

LambdaField lambda_field(const LiftedAnnulusMap& map, const BandSpec& band,
                         const Rect& window, int nx, int ny, long depth,
                         BranchSign sign);

GridRegion lambda_n(const LiftedAnnulusMap& map, const BandSpec& band,
                    const Rect& window, int nx, int ny, long n, BranchSign sign);
GridRegion lambda_limit(const LiftedAnnulusMap& map, const BandSpec& band,
                        const Rect& window, int nx, int ny, long depth,
                        BranchSign sign);

// Independent characterization of the same limit: cells whose trace stays in
// the band for `depth` steps against the flow direction. Must agree with
// lambda_limit up to one dilation cell.
GridRegion lambda_limit_escape_time(const LiftedAnnulusMap& map, const BandSpec& band,
                                    const Rect& window, int nx, int ny, long depth,
                                    BranchSign sign);

struct BranchResult {
  CoverPoint base;
  GridRegion component;
  std::vector<CoverPoint> reps;   // surviving probe of each component cell
  bool meets_lower = false;       // branch reaches the band's floor curve
  bool compact_in_window = false; // does not touch the window's x-boundary
  double p1_diameter = 0.0;
  double diameter_bound = 0.0;    // 2*M0 + 1 (+ grid slack); asserted only
  bool diameter_ok = false;       // when the caller certifies the band
                                  // hypothesis via h2_check
  json to_json() const;
};

BranchResult branch_of(const LiftedAnnulusMap& map, const BandSpec& band,
                       const Rect& window, int nx, int ny, const CoverPoint& x,
                       long depth, BranchSign sign, bool h2_verified);

// Choose the base point anchoring a branch among candidate members of the
// band's invariant-set estimate. Requires the candidate's one-sided trace to
// survive the branch depth (slack loosens the curve test, cell sets the probe
// spacing); prefers a member with a nearby probe that also leaves the band
// through its far curve under the opposite flow, anchoring the component that
// carries the connecting orbits.
CoverPoint pick_branch_base(const LiftedAnnulusMap& map, const BandSpec& band,
                            const std::vector<CoverPoint>& members, long depth,
                            BranchSign sign, double slack, double cell);

struct H2Report {
  long tested_to = 0;
  bool holds = false;
  long first_fail = -1;
  // per-n min/max signed clearance of the image of the upper curve against the
  // target curve; intersection needs both signs
  std::vector<double> min_clearance, max_clearance;
  json to_json() const;
};

// Does f^n(gamma0) meet gamma2 for every n <= N?
H2Report h2_check(const LiftedAnnulusMap& map, const GraphCurve& gamma0,
                  const GraphCurve& gamma2, long N);

struct TheoremCConfig {
  long h2_horizon = 50;
  long theta_horizon = 100;   // depth of the invariant-set estimates
  long rho_horizon = 400;     // orbit length for the band rotation gates
  double h3_margin = 0.05;    // required distance of the band rotations from 0
  long branch_depth = 100;    // depth of the branch fields
  long sweep_max = 200;       // n-sweep of the intersection test
  int cells_per_unit = 32;
  double window_pad = 40.0;   // extra x-width beyond the diameter bound
  long mixed_k = 1000;        // minimal half-length of mixed orbit segments
  double mixed_tol = 0.02;
  long bisection_steps = 40;
  uint64_t seed = 1;
};

TheoremCConfig theorem_c_config_from_json(const json& j);
json theorem_c_config_to_json(const TheoremCConfig& c);

enum class CertStatus { Certified, Refused, Inconclusive };

struct WitnessCertificate {
  double x = 0.0;
  double y_lo = 0.0, y_hi = 0.0;  // final bisection interval along the column
  long n_minus = 0, n_plus = 0;
  double mixed_average = 0.0;
  double backward_final_p1 = 0.0, forward_final_p1 = 0.0;
  bool revalidated = false;
  json to_json() const;
};

struct TheoremCResult {
  CertStatus status = CertStatus::Inconclusive;
  std::string reason;            // refusal diagnostic / inconclusive horizon
  std::string route;             // "branch-intersection" or "direct-orbit"
  BandCheckReport h1_band0, h1_band1;
  // sampled rotation ranges of the two bands' invariant-set estimates; the
  // gate uses rho_band0_min > margin and rho_band1_max < -margin
  double rho_band0_min = 0.0, rho_band0_max = 0.0;
  double rho_band1_min = 0.0, rho_band1_max = 0.0;
  H2Report h2;
  long intersection_n = -1;
  WitnessCertificate witness;
  json to_json() const;
};

// The branch-intersection experiment certifying that the mixed orbit segments
// through a heteroclinic-like witness have rotation number ~0 while both bands
// rotate strictly (so 0 lies in the rotation set of the maximal invariant
// set). Refuses when a hypothesis gate fails; reports "inconclusive" (never a
// negative) when no intersection is found within the sweep horizon.
TheoremCResult theorem_c_experiment(const LiftedAnnulusMap& map,
                                    const GraphCurve& gamma0,
                                    const GraphCurve& gamma1,
                                    const GraphCurve& gamma2,
                                    const TheoremCConfig& cfg);

}  // namespace annrot
