#pragma once

#include "annrot/grid.hpp"
#include "annrot/map.hpp"

namespace annrot {

// Closed interval over the extended reals (infinite endpoints only at the
// outer ends of an estimate).
struct ExtendedInterval {
  double lo = 0.0, hi = 0.0;
};

// A finite union of closed intervals obtained by eps-merging rotation samples.
// Samples beyond the finite cap are recorded as flags rather than intervals
// (the closure in the extended reals is reported that way).
struct RotationSetEstimate {
  std::vector<ExtendedInterval> intervals;  // sorted, gaps > merge_epsilon
  size_t sample_count = 0;
  long horizon_lo = 0, horizon_hi = 0;
  double merge_epsilon = Defaults::merge_epsilon;
  bool flag_plus_inf = false, flag_minus_inf = false;
  bool no_samples = false;  // "no returning orbits": distinct from empty interval

  bool is_interval() const { return intervals.size() <= 1; }
  double max_gap() const;
  double min_value() const;
  double max_value() const;
  bool covers(double v, double tol) const;
  json to_json() const;
};

RotationSetEstimate merge_samples(std::vector<double> samples, double merge_eps,
                                  double cap, long m, long N);

// Exact Hausdorff distance between two finite unions of closed intervals
// (infinite if exactly one is empty, 0 if both are).
double hausdorff(const RotationSetEstimate& a, const RotationSetEstimate& b);
double hausdorff_to_interval(const RotationSetEstimate& a, double lo, double hi);

// Interval-union intersection (used when collapsing schedule levels).
RotationSetEstimate intersect_estimates(const RotationSetEstimate& a,
                                        const RotationSetEstimate& b);

// x -> q x + p applied to an estimate.
RotationSetEstimate affine_image(const RotationSetEstimate& e, int p, int q);

struct SeedPlan {
  int grid_nx = 48, grid_ny = 48;
  double jitter = 0.0;  // fraction of a seed cell; low-discrepancy, seeded
  uint64_t seed = 1;
  long n_stride = 1;  // sample horizons n = m, m+stride, ... (memory knob)
};

struct RhoKResult {
  RotationSetEstimate full;  // n in [m, N]
  RotationSetEstimate tail;  // n in [N/2, N]: the intersection-over-m proxy
  size_t seeds_used = 0;
  json to_json() const;
};

// rho_K: collect rho_n(z) over seeded z in K and n in [m, N] with f^n(z)
// back in K (cell membership), then eps-merge.
RhoKResult rho_K(const LiftedAnnulusMap& map, const GridRegion& K, long m, long N,
                 const SeedPlan& plan, double merge_eps = Defaults::merge_epsilon,
                 double cap = Defaults::infinite_cap);

// rho_{V,W} at an end of the annulus. V and W are end-neighborhoods
// {side*y > side*threshold}; W strictly inside V. The sample filter is exactly:
// endpoints outside W, the whole orbit segment inside V.
RotationSetEstimate rho_VW(const LiftedAnnulusMap& map, int end_side /*+1 upper*/,
                           double v_level, double w_level, long m, long N,
                           const SeedPlan& plan,
                           double merge_eps = Defaults::merge_epsilon,
                           double cap = Defaults::infinite_cap);

struct RadiiSchedule {
  double v0 = 0.0;      // first V threshold
  double step = 1.0;    // y-increment per level (radius shrink factor e^-step)
  int depth = 6;        // number of V levels
  int w_levels = 4;     // inner W thresholds per level
};

struct LocalRotationResult {
  std::vector<RotationSetEstimate> per_level;
  RotationSetEstimate extrapolated;  // intersection of the deepest levels
  double stabilization;              // Hausdorff between the last two levels
  json to_json() const;
};

LocalRotationResult rho_local(const LiftedAnnulusMap& map, int end_side,
                              const RadiiSchedule& sched, long m, long N,
                              const SeedPlan& plan,
                              double merge_eps = Defaults::merge_epsilon,
                              double cap = Defaults::infinite_cap);

struct AnnularRotationResult {
  std::vector<RotationSetEstimate> per_window;
  RotationSetEstimate combined;
  json to_json() const;
};

// rho_ann: union of rho_K over a growing schedule of bands |y| <= B_k.
AnnularRotationResult rho_ann(const LiftedAnnulusMap& map,
                              const std::vector<double>& window_heights, long m,
                              long N, const SeedPlan& plan, int grid_res = 128,
                              double merge_eps = Defaults::merge_epsilon,
                              double cap = Defaults::infinite_cap);

struct MeasuredRotationResult {
  std::vector<double> averages;  // one Birkhoff proxy per surviving seed
  double hull_lo = 0.0, hull_hi = 0.0;
  bool none = false;  // "no invariant mass detected"
  RotationSetEstimate merged;
  json to_json() const;
};

MeasuredRotationResult rho_measured(const LiftedAnnulusMap& map, const GridRegion& K,
                                    long burn_in, long length, const SeedPlan& plan,
                                    double merge_eps = Defaults::merge_epsilon);

struct AffineLawReport {
  RotationSetEstimate base, transformed_base, direct;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  json to_json() const;
};

// Runs `estimator` on map and on J^p * I^q built from it, then compares the
// direct estimate with the affine image q*rho+p of the base one.
AffineLawReport affine_law_check(
    const LiftedAnnulusMap& map, int p, int q,
    const std::function<RotationSetEstimate(const LiftedAnnulusMap&)>& estimator,
    double merge_eps = Defaults::merge_epsilon, double extra_tol = 1e-9);

}  // namespace annrot
