#include "annrot/rotset.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "annrot/parallel.hpp"
#include "annrot/zoo.hpp"

namespace annrot {

double RotationSetEstimate::max_gap() const {
  double g = 0.0;
  for (size_t k = 1; k < intervals.size(); ++k)
    g = std::max(g, intervals[k].lo - intervals[k - 1].hi);
  return g;
}

double RotationSetEstimate::min_value() const {
  return intervals.empty() ? std::nan("") : intervals.front().lo;
}
double RotationSetEstimate::max_value() const {
  return intervals.empty() ? std::nan("") : intervals.back().hi;
}

bool RotationSetEstimate::covers(double v, double tol) const {
  for (const auto& iv : intervals)
    if (v >= iv.lo - tol && v <= iv.hi + tol) return true;
  return false;
}

json RotationSetEstimate::to_json() const {
  json j;
  json ivs = json::array();
  for (const auto& iv : intervals) ivs.push_back({iv.lo, iv.hi});
  j["intervals"] = ivs;
  j["is_interval"] = is_interval();
  j["max_gap"] = max_gap();
  j["sample_count"] = sample_count;
  j["horizon"] = {horizon_lo, horizon_hi};
  j["merge_epsilon"] = merge_epsilon;
  j["flag_plus_inf"] = flag_plus_inf;
  j["flag_minus_inf"] = flag_minus_inf;
  j["no_samples"] = no_samples;
  return j;
}

RotationSetEstimate merge_samples(std::vector<double> samples, double merge_eps,
                                  double cap, long m, long N) {
  RotationSetEstimate e;
  e.merge_epsilon = merge_eps;
  e.horizon_lo = m;
  e.horizon_hi = N;
  std::vector<double> finite;
  finite.reserve(samples.size());
  for (double v : samples) {
    if (!std::isfinite(v)) continue;
    if (v > cap) { e.flag_plus_inf = true; continue; }
    if (v < -cap) { e.flag_minus_inf = true; continue; }
    finite.push_back(v);
  }
  e.sample_count = finite.size();
  if (finite.empty()) {
    e.no_samples = !e.flag_plus_inf && !e.flag_minus_inf;
    return e;
  }
  std::sort(finite.begin(), finite.end());
  ExtendedInterval cur{finite[0], finite[0]};
  for (double v : finite) {
    if (v - cur.hi > merge_eps) {
      e.intervals.push_back(cur);
      cur = {v, v};
    } else {
      cur.hi = v;
    }
  }
  e.intervals.push_back(cur);
  return e;
}

namespace {

double dist_to_union(double x, const std::vector<ExtendedInterval>& ivs) {
  double d = 1e300;
  for (const auto& iv : ivs) {
    if (x < iv.lo) d = std::min(d, iv.lo - x);
    else if (x > iv.hi) d = std::min(d, x - iv.hi);
    else return 0.0;
  }
  return d;
}

// sup over the union A of the distance to the union B; the sup is attained at
// an interval endpoint of A or at a B-gap midpoint inside an A-interval
double directed_hausdorff(const std::vector<ExtendedInterval>& A,
                          const std::vector<ExtendedInterval>& B) {
  double h = 0.0;
  for (const auto& a : A) {
    h = std::max(h, dist_to_union(a.lo, B));
    h = std::max(h, dist_to_union(a.hi, B));
    for (size_t k = 1; k < B.size(); ++k) {
      double mid = 0.5 * (B[k - 1].hi + B[k].lo);
      if (mid >= a.lo && mid <= a.hi) h = std::max(h, dist_to_union(mid, B));
    }
    // also the case of B entirely to one side handled by endpoints above
  }
  return h;
}

}  // namespace

double hausdorff(const RotationSetEstimate& a, const RotationSetEstimate& b) {
  if (a.intervals.empty() && b.intervals.empty()) return 0.0;
  if (a.intervals.empty() || b.intervals.empty()) return 1e300;
  return std::max(directed_hausdorff(a.intervals, b.intervals),
                  directed_hausdorff(b.intervals, a.intervals));
}

double hausdorff_to_interval(const RotationSetEstimate& a, double lo, double hi) {
  RotationSetEstimate ref;
  ref.intervals.push_back({lo, hi});
  return hausdorff(a, ref);
}

RotationSetEstimate intersect_estimates(const RotationSetEstimate& a,
                                        const RotationSetEstimate& b) {
  RotationSetEstimate out;
  out.merge_epsilon = std::min(a.merge_epsilon, b.merge_epsilon);
  out.horizon_lo = std::max(a.horizon_lo, b.horizon_lo);
  out.horizon_hi = std::min(a.horizon_hi, b.horizon_hi);
  out.sample_count = std::min(a.sample_count, b.sample_count);
  out.flag_plus_inf = a.flag_plus_inf && b.flag_plus_inf;
  out.flag_minus_inf = a.flag_minus_inf && b.flag_minus_inf;
  for (const auto& x : a.intervals)
    for (const auto& y : b.intervals) {
      double lo = std::max(x.lo, y.lo), hi = std::min(x.hi, y.hi);
      if (lo <= hi) out.intervals.push_back({lo, hi});
    }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const ExtendedInterval& u, const ExtendedInterval& v) { return u.lo < v.lo; });
  out.no_samples = out.intervals.empty() && !out.flag_plus_inf && !out.flag_minus_inf;
  return out;
}

RotationSetEstimate affine_image(const RotationSetEstimate& e, int p, int q) {
  RotationSetEstimate out = e;
  out.intervals.clear();
  for (const auto& iv : e.intervals) {
    double a = q * iv.lo + p, b = q * iv.hi + p;
    out.intervals.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const ExtendedInterval& u, const ExtendedInterval& v) { return u.lo < v.lo; });
  out.merge_epsilon = std::abs(q) * e.merge_epsilon;
  if (q < 0) std::swap(out.flag_plus_inf, out.flag_minus_inf);
  return out;
}

namespace {

struct Seeds {
  std::vector<AnnulusPoint> pts;
};

Seeds make_seeds(const GridRegion& K, const SeedPlan& plan) {
  Seeds s;
  std::mt19937_64 rng(plan.seed);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  const double w = K.window.x_hi - K.window.x_lo;
  const double h = K.window.y_hi - K.window.y_lo;
  for (int j = 0; j < plan.grid_ny; ++j)
    for (int i = 0; i < plan.grid_nx; ++i) {
      double jx = plan.jitter != 0.0 ? plan.jitter * U(rng) : 0.0;
      double jy = plan.jitter != 0.0 ? plan.jitter * U(rng) : 0.0;
      double x = K.window.x_lo + (i + 0.5 + jx) * w / plan.grid_nx;
      double y = K.window.y_lo + (j + 0.5 + jy) * h / plan.grid_ny;
      if (K.contains(x, y)) s.pts.push_back(AnnulusPoint(x, y));
    }
  return s;
}

}  // namespace

json RhoKResult::to_json() const {
  json j;
  j["estimate"] = full.to_json();
  j["tail_estimate"] = tail.to_json();
  j["seeds_used"] = seeds_used;
  return j;
}

RhoKResult rho_K(const LiftedAnnulusMap& map, const GridRegion& K, long m, long N,
                 const SeedPlan& plan, double merge_eps, double cap) {
  if (!(1 <= m && m <= N)) throw PreconditionError("rho_K: need 1 <= m <= N");
  Seeds seeds = make_seeds(K, plan);
  std::vector<std::vector<double>> per_seed(seeds.pts.size());
  std::vector<std::vector<double>> per_seed_tail(seeds.pts.size());
  const long stride = std::max<long>(1, plan.n_stride);
  const long tail_lo = std::max(m, N / 2);
  parallel_for(seeds.pts.size(), [&](size_t k) {
    CoverPoint z = lift_of(seeds.pts[k]);
    CoverPoint cur = z;
    for (long n = 1; n <= N; ++n) {
      cur = map.fwd(cur);
      if (std::abs(cur.x) > Defaults::overflow_guard ||
          std::abs(cur.y) > Defaults::overflow_guard)
        break;
      if (n < m || (n - m) % stride != 0) continue;
      AnnulusPoint p = project(cur);
      if (!K.contains(p.theta, p.y)) continue;
      double rho = (cur.x - z.x) / n;
      per_seed[k].push_back(rho);
      if (n >= tail_lo) per_seed_tail[k].push_back(rho);
    }
  });
  std::vector<double> all, tail;
  for (auto& v : per_seed) all.insert(all.end(), v.begin(), v.end());
  for (auto& v : per_seed_tail) tail.insert(tail.end(), v.begin(), v.end());
  RhoKResult r;
  r.full = merge_samples(std::move(all), merge_eps, cap, m, N);
  r.tail = merge_samples(std::move(tail), merge_eps, cap, tail_lo, N);
  r.seeds_used = seeds.pts.size();
  return r;
}

namespace {

// shared sample collector for rho_VW / rho_local; V = {side*y > side*v_level},
// W = {side*y > side*w_level}
void collect_vw_samples(const LiftedAnnulusMap& map, int side, double v_level,
                        double w_level, long m, long N, const SeedPlan& plan,
                        std::vector<double>& out) {
  if (side != 1 && side != -1) throw PreconditionError("rho_VW: side must be +-1");
  if (!(side * (w_level - v_level) > 0))
    throw PreconditionError("rho_VW: W must be strictly inside V");
  auto in_V = [&](double y) { return side * y > side * v_level; };
  auto in_W = [&](double y) { return side * y > side * w_level; };
  // seeds in V \ W
  double lo = std::min(v_level, w_level), hi = std::max(v_level, w_level);
  std::vector<AnnulusPoint> seeds;
  std::mt19937_64 rng(plan.seed);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  for (int j = 0; j < plan.grid_ny; ++j)
    for (int i = 0; i < plan.grid_nx; ++i) {
      double jx = plan.jitter != 0.0 ? plan.jitter * U(rng) : 0.0;
      double jy = plan.jitter != 0.0 ? plan.jitter * U(rng) : 0.0;
      double x = (i + 0.5 + jx) / plan.grid_nx;
      double y = lo + (j + 0.5 + jy) * (hi - lo) / plan.grid_ny;
      if (in_V(y) && !in_W(y)) seeds.push_back(AnnulusPoint(x, y));
    }
  std::vector<std::vector<double>> per_seed(seeds.size());
  const long stride = std::max<long>(1, plan.n_stride);
  parallel_for(seeds.size(), [&](size_t k) {
    CoverPoint z = lift_of(seeds[k]);
    CoverPoint cur = z;
    for (long n = 1; n <= N; ++n) {
      cur = map.fwd(cur);
      if (!in_V(cur.y)) break;  // the whole segment z..f^n(z) must stay in V
      if (std::abs(cur.x) > Defaults::overflow_guard ||
          std::abs(cur.y) > Defaults::overflow_guard)
        break;
      if (n < m || (n - m) % stride != 0) continue;
      if (in_W(cur.y)) continue;  // endpoints must lie outside W
      per_seed[k].push_back((cur.x - z.x) / n);
    }
  });
  for (auto& v : per_seed) out.insert(out.end(), v.begin(), v.end());
}

}  // namespace

RotationSetEstimate rho_VW(const LiftedAnnulusMap& map, int side, double v_level,
                           double w_level, long m, long N, const SeedPlan& plan,
                           double merge_eps, double cap) {
  std::vector<double> samples;
  collect_vw_samples(map, side, v_level, w_level, m, N, plan, samples);
  return merge_samples(std::move(samples), merge_eps, cap, m, N);
}

json LocalRotationResult::to_json() const {
  json j;
  json lv = json::array();
  for (const auto& e : per_level) lv.push_back(e.to_json());
  j["per_level"] = lv;
  j["extrapolated"] = extrapolated.to_json();
  j["stabilization"] = stabilization;
  return j;
}

LocalRotationResult rho_local(const LiftedAnnulusMap& map, int side,
                              const RadiiSchedule& sched, long m, long N,
                              const SeedPlan& plan, double merge_eps, double cap) {
  if (sched.depth < 2) throw PreconditionError("rho_local: schedule depth must be >= 2");
  LocalRotationResult res;
  for (int k = 0; k < sched.depth; ++k) {
    double v = sched.v0 + side * k * sched.step;
    std::vector<double> samples;
    for (int j = 1; j <= sched.w_levels; ++j) {
      double w = v + side * j * sched.step;
      collect_vw_samples(map, side, v, w, m, N, plan, samples);
    }
    res.per_level.push_back(merge_samples(std::move(samples), merge_eps, cap, m, N));
  }
  const auto& a = res.per_level[res.per_level.size() - 2];
  const auto& b = res.per_level.back();
  res.extrapolated = intersect_estimates(a, b);
  res.stabilization = hausdorff(a, b);
  return res;
}

json AnnularRotationResult::to_json() const {
  json j;
  json w = json::array();
  for (const auto& e : per_window) w.push_back(e.to_json());
  j["per_window"] = w;
  j["combined"] = combined.to_json();
  return j;
}

AnnularRotationResult rho_ann(const LiftedAnnulusMap& map,
                              const std::vector<double>& window_heights, long m,
                              long N, const SeedPlan& plan, int grid_res,
                              double merge_eps, double cap) {
  if (window_heights.empty()) throw PreconditionError("rho_ann: empty window schedule");
  AnnularRotationResult res;
  std::vector<double> all;
  for (double B : window_heights) {
    GridRegion K = GridRegion::full(Rect{0.0, 1.0, -B, B}, grid_res, grid_res, true);
    RhoKResult rk = rho_K(map, K, m, N, plan, merge_eps, cap);
    // fold this window's samples into the union via its interval endpoints --
    // the merged union below is rebuilt from fresh samples, so keep raw values
    res.per_window.push_back(rk.full);
    for (const auto& iv : rk.full.intervals) { all.push_back(iv.lo); all.push_back(iv.hi); }
  }
  // the union across windows: re-collect every per-window interval and merge;
  // interval interiors are already eps-dense by construction
  std::vector<double> samples;
  size_t total = 0;
  for (const auto& e : res.per_window) {
    total += e.sample_count;
    for (const auto& iv : e.intervals) {
      // endpoints plus eps-spaced fill so merging cannot introduce fake gaps
      long steps = std::max<long>(1, static_cast<long>((iv.hi - iv.lo) / merge_eps) + 1);
      for (long s = 0; s <= steps; ++s)
        samples.push_back(iv.lo + (iv.hi - iv.lo) * s / steps);
    }
  }
  res.combined = merge_samples(std::move(samples), merge_eps, cap, m, N);
  res.combined.sample_count = total;
  for (const auto& e : res.per_window) {
    res.combined.flag_plus_inf = res.combined.flag_plus_inf || e.flag_plus_inf;
    res.combined.flag_minus_inf = res.combined.flag_minus_inf || e.flag_minus_inf;
  }
  return res;
}

json MeasuredRotationResult::to_json() const {
  json j;
  j["surviving_seeds"] = averages.size();
  j["hull"] = {hull_lo, hull_hi};
  j["none"] = none;
  j["merged"] = merged.to_json();
  return j;
}

MeasuredRotationResult rho_measured(const LiftedAnnulusMap& map, const GridRegion& K,
                                    long burn_in, long length, const SeedPlan& plan,
                                    double merge_eps) {
  if (!(length > burn_in && burn_in >= 0))
    throw PreconditionError("rho_measured: need length > burn_in >= 0");
  Seeds seeds = make_seeds(K, plan);
  std::vector<double> avg(seeds.pts.size(), std::nan(""));
  parallel_for(seeds.pts.size(), [&](size_t k) {
    CoverPoint z = lift_of(seeds.pts[k]);
    CoverPoint cur = z;
    double x_burn = z.x;
    for (long n = 1; n <= length; ++n) {
      cur = map.fwd(cur);
      AnnulusPoint p = project(cur);
      if (!K.contains(p.theta, p.y)) return;  // seed does not survive in K
      if (n == burn_in) x_burn = cur.x;
    }
    avg[k] = (cur.x - x_burn) / static_cast<double>(length - burn_in);
  });
  MeasuredRotationResult res;
  for (double v : avg)
    if (std::isfinite(v)) res.averages.push_back(v);
  if (res.averages.empty()) {
    res.none = true;
    res.merged.no_samples = true;
    return res;
  }
  res.hull_lo = *std::min_element(res.averages.begin(), res.averages.end());
  res.hull_hi = *std::max_element(res.averages.begin(), res.averages.end());
  res.merged = merge_samples(res.averages, merge_eps, Defaults::infinite_cap, burn_in,
                             length);
  return res;
}

json AffineLawReport::to_json() const {
  json j;
  j["base"] = base.to_json();
  j["transformed_base"] = transformed_base.to_json();
  j["direct"] = direct.to_json();
  j["deviation"] = deviation;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  return j;
}

AffineLawReport affine_law_check(
    const LiftedAnnulusMap& map, int p, int q,
    const std::function<RotationSetEstimate(const LiftedAnnulusMap&)>& estimator,
    double merge_eps, double extra_tol) {
  if (q == 0) throw PreconditionError("affine_law_check: q must be nonzero");
  AffineLawReport rep;
  rep.base = estimator(map);
  rep.transformed_base = affine_image(rep.base, p, q);
  rep.direct = estimator(rigid_rotation_isotopy_power(map, p, q));
  rep.deviation = hausdorff(rep.transformed_base, rep.direct);
  rep.tolerance = std::abs(q) * merge_eps + extra_tol;
  rep.pass = rep.deviation <= rep.tolerance;
  return rep;
}

}  // namespace annrot
