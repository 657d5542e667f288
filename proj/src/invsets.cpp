#include "annrot/invsets.hpp"

#include <algorithm>
#include <cmath>

#include "annrot/parallel.hpp"

namespace annrot {

const char* curve_class_name(CurveClass c) {
  switch (c) {
    case CurveClass::NotFree: return "not-free";
    case CurveClass::FreeAttracting: return "free-attracting";
    case CurveClass::FreeRepulsing: return "free-repulsing";
    default: return "undecided";
  }
}

json CurveClassReport::to_json() const {
  return json{{"class", curve_class_name(cls)},
              {"margin", margin},
              {"resolution_floor", resolution_floor}};
}

CurveClassReport free_curve_classify(const LiftedAnnulusMap& map,
                                     const GraphCurve& gamma, int samples) {
  // signed clearance of the image of each curve node against the curve graph
  std::vector<double> fwd(samples), bwd(samples);
  parallel_for(static_cast<size_t>(samples), [&](size_t k) {
    double th = static_cast<double>(k) / samples;
    CoverPoint z{th, gamma.at(th)};
    CoverPoint a = map.fwd(z);
    CoverPoint b = map.inv(z);
    fwd[k] = a.y - gamma.at(a.x);
    bwd[k] = b.y - gamma.at(b.x);
  });
  // the curve between samples can deviate by about one adjacent-sample jump;
  // clearances below that floor are not trustworthy at this resolution
  double floor_f = 0.0;
  for (int k = 0; k < samples; ++k) {
    double jf = std::abs(fwd[(k + 1) % samples] - fwd[k]);
    double jb = std::abs(bwd[(k + 1) % samples] - bwd[k]);
    floor_f = std::max(floor_f, std::max(jf, jb));
  }
  auto mm_f = std::minmax_element(fwd.begin(), fwd.end());
  auto mm_b = std::minmax_element(bwd.begin(), bwd.end());
  CurveClassReport rep;
  rep.resolution_floor = floor_f;
  if (*mm_f.second < -floor_f) {
    rep.cls = CurveClass::FreeAttracting;
    rep.margin = -*mm_f.second;
  } else if (*mm_b.second < -floor_f) {
    rep.cls = CurveClass::FreeRepulsing;
    rep.margin = -*mm_b.second;
  } else if (*mm_f.first < -floor_f && *mm_f.second > floor_f) {
    rep.cls = CurveClass::NotFree;  // forward image provably crosses the curve
    rep.margin = std::min(-*mm_f.first, *mm_f.second);
  } else if (*mm_f.first > floor_f && *mm_b.first > floor_f) {
    // both images uniformly above: the curve is free with the roles of the
    // ends swapped; report through the same two classes via the inverse view
    rep.cls = CurveClass::FreeRepulsing;
    rep.margin = *mm_f.first;
  } else {
    rep.cls = CurveClass::Undecided;
    rep.margin = std::max(std::abs(*mm_f.first), std::abs(*mm_f.second));
  }
  return rep;
}

json ThetaResult::to_json() const {
  json j;
  j["region"] = region.summary_json();
  j["horizon"] = horizon;
  j["escaped_forward"] = escaped_forward;
  j["escaped_backward"] = escaped_backward;
  return j;
}

ThetaResult theta_maximal(const LiftedAnnulusMap& map, const GridRegion& A, long N) {
  if (N < 1) throw PreconditionError("theta_maximal: horizon must be >= 1");
  ThetaResult res;
  res.horizon = N;
  res.region = GridRegion::empty(A.window, A.nx, A.ny, A.wrap_x);
  res.escaped = GridRegion::empty(A.window, A.nx, A.ny, A.wrap_x);
  std::vector<int8_t> verdict(A.ncells(), 0);  // 0 member, 1 fwd escape, 2 bwd
  parallel_for(A.ncells(), [&](size_t c) {
    int i = static_cast<int>(c % A.nx), j = static_cast<int>(c / A.nx);
    if (!A.get(i, j)) { verdict[c] = 3; return; }
    CoverPoint z0 = A.center(i, j);
    for (int dir : {+1, -1}) {
      CoverPoint z = z0;
      CoverPoint prev = z;
      for (long n = 1; n <= N; ++n) {
        z = dir > 0 ? map.fwd(z) : map.inv(z);
        AnnulusPoint p = project(z);
        if (!A.contains(p.theta, p.y, 1)) {
          verdict[c] = dir > 0 ? 1 : 2;
          return;
        }
        // orbit settled onto a fixed point inside A: member for every horizon
        if (std::abs(z.x - prev.x) + std::abs(z.y - prev.y) < 1e-13) break;
        prev = z;
      }
    }
  });
  for (int j = 0; j < A.ny; ++j)
    for (int i = 0; i < A.nx; ++i) {
      int8_t v = verdict[res.region.idx(i, j)];
      if (v == 0) res.region.set(i, j);
      else if (v == 1) { res.escaped.set(i, j); ++res.escaped_forward; }
      else if (v == 2) { res.escaped.set(i, j); ++res.escaped_backward; }
    }
  return res;
}

namespace {

GridRegion theta_one_sided(const LiftedAnnulusMap& map, const GraphCurve& gamma,
                           int side, const Rect& window, int nx, int ny, long N,
                           int orbit_dir) {
  if (side != 1 && side != -1)
    throw PreconditionError("theta end set: side must be +-1");
  if (N < 1) throw PreconditionError("theta end set: horizon must be >= 1");
  // f(Cl V) inside V: with V below the curve that is exactly the attracting
  // free-curve condition (for the backward set, under the inverse map)
  CurveClassReport cls = free_curve_classify(map, gamma);
  CurveClass need = (side * orbit_dir < 0) ? CurveClass::FreeAttracting
                                           : CurveClass::FreeRepulsing;
  if (cls.cls != need)
    throw PreconditionError(
        std::string("theta end set: image of the boundary curve is not strictly "
                    "inside V (needed ") + curve_class_name(need) + ", got " +
        curve_class_name(cls.cls) + " with margin " + std::to_string(cls.margin) + ")");
  auto in_V = [&](double x, double y) { return side * (y - gamma.at(x)) > 0.0; };
  GridRegion out = GridRegion::empty(window, nx, ny, true);
  std::vector<uint8_t> member(out.ncells(), 0);
  parallel_for(out.ncells(), [&](size_t c) {
    int i = static_cast<int>(c % nx), j = static_cast<int>(c / nx);
    CoverPoint z = out.center(i, j);
    if (!in_V(z.x, z.y)) return;
    CoverPoint prev = z;
    // z lies in every f^n(V), n <= N, iff the orbit of z against the orbit
    // direction stays in V
    for (long n = 1; n <= N; ++n) {
      z = orbit_dir > 0 ? map.inv(z) : map.fwd(z);
      if (!in_V(z.x, z.y)) return;
      if (std::abs(z.x - prev.x) + std::abs(z.y - prev.y) < 1e-13) break;
      prev = z;
    }
    member[c] = 1;
  });
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (member[out.idx(i, j)]) out.set(i, j);
  return out;
}

}  // namespace

GridRegion theta_forward(const LiftedAnnulusMap& map, const GraphCurve& gamma,
                         int side, const Rect& window, int nx, int ny, long N) {
  return theta_one_sided(map, gamma, side, window, nx, ny, N, +1);
}

GridRegion theta_backward(const LiftedAnnulusMap& map, const GraphCurve& gamma,
                          int side, const Rect& window, int nx, int ny, long N) {
  return theta_one_sided(map, gamma, side, window, nx, ny, N, -1);
}

json ComponentSet::to_json() const {
  json j;
  j["count"] = comps.size();
  json arr = json::array();
  for (size_t k = 0; k < comps.size(); ++k) {
    json c = comps[k].summary_json();
    if (!touches_lower.empty()) c["touches_lower"] = static_cast<bool>(touches_lower[k]);
    if (!touches_upper.empty()) c["touches_upper"] = static_cast<bool>(touches_upper[k]);
    arr.push_back(c);
  }
  j["components"] = arr;
  return j;
}

namespace {

bool region_touches_curve(const GridRegion& r, const GraphCurve& c) {
  for (int j = 0; j < r.ny; ++j)
    for (int i = 0; i < r.nx; ++i) {
      if (!r.get(i, j)) continue;
      CoverPoint z = r.center(i, j);
      if (std::abs(c.at(z.x) - z.y) <= r.dy()) return true;
    }
  return false;
}

}  // namespace

ComponentSet connected_components(const GridRegion& region, const GraphCurve* lower,
                                  const GraphCurve* upper) {
  ComponentSet out;
  out.comps = region.components();
  for (const auto& c : out.comps) {
    if (lower) out.touches_lower.push_back(region_touches_curve(c, *lower));
    if (upper) out.touches_upper.push_back(region_touches_curve(c, *upper));
  }
  return out;
}

json ConnectedInvariantReport::to_json() const {
  return json{{"attracting", attracting_cls.to_json()},
              {"repulsing", repulsing_cls.to_json()},
              {"components", n_components},
              {"theta_cells", theta_cells},
              {"pass", pass}};
}

ConnectedInvariantReport connected_invariant_check(const LiftedAnnulusMap& map,
                                                   const GraphCurve& attracting,
                                                   const GraphCurve& repulsing,
                                                   long N, int nx, int ny) {
  ConnectedInvariantReport rep;
  rep.attracting_cls = free_curve_classify(map, attracting);
  rep.repulsing_cls = free_curve_classify(map, repulsing);
  if (rep.attracting_cls.cls != CurveClass::FreeAttracting)
    throw PreconditionError("connected_invariant_check: first curve is not "
                            "free-attracting (got " +
                            std::string(curve_class_name(rep.attracting_cls.cls)) + ")");
  if (rep.repulsing_cls.cls != CurveClass::FreeRepulsing)
    throw PreconditionError("connected_invariant_check: second curve is not "
                            "free-repulsing (got " +
                            std::string(curve_class_name(rep.repulsing_cls.cls)) + ")");
  if (!(repulsing.max_y() < attracting.min_y()))
    throw PreconditionError("connected_invariant_check: the repulsing curve must "
                            "lie strictly below the attracting one");
  double margin = 2.0 * (attracting.max_y() - repulsing.min_y() + 1.0) / ny;
  Rect w{0.0, 1.0, repulsing.min_y() - margin, attracting.max_y() + margin};
  GridRegion A = GridRegion::below_curve(w, nx, ny, true, attracting);
  A &= GridRegion::above_curve(w, nx, ny, true, repulsing);
  ThetaResult theta = theta_maximal(map, A, N);
  rep.theta_cells = theta.region.count();
  rep.n_components = theta.region.components().size();
  rep.pass = rep.n_components == 1;
  return rep;
}

json FreeHorizonReport::to_json() const {
  json j;
  j["found"] = found;
  if (found) j["n0"] = n0;
  j["tested_to"] = tested_to;
  j["witness_margin"] = witness_margin;
  j["include_translates"] = include_translates;
  return j;
}

FreeHorizonReport free_horizon(const LiftedAnnulusMap& map, const GridRegion& K,
                               long N, bool include_translates) {
  if (K.wrap_x)
    throw PreconditionError("free_horizon: K must be a bounded cover region "
                            "(wrap_x off)");
  if (K.empty_region()) throw PreconditionError("free_horizon: K is empty");
  double klo, khi;
  K.occupied_x_range(klo, khi);
  if (include_translates && !(khi - klo < 1.0))
    throw PreconditionError("free_horizon: translate test needs x-extent < 1");
  // occupied cell boxes of K, and a sample cloud (corners + center per cell)
  struct Box { double x0, x1, y0, y1; };
  std::vector<Box> boxes;
  std::vector<CoverPoint> pts;
  for (int j = 0; j < K.ny; ++j)
    for (int i = 0; i < K.nx; ++i) {
      if (!K.get(i, j)) continue;
      double x0 = K.window.x_lo + i * K.dx(), y0 = K.window.y_lo + j * K.dy();
      boxes.push_back({x0, x0 + K.dx(), y0, y0 + K.dy()});
      pts.push_back({x0, y0});
      pts.push_back({x0 + K.dx(), y0});
      pts.push_back({x0, y0 + K.dy()});
      pts.push_back({x0 + K.dx(), y0 + K.dy()});
      pts.push_back({x0 + 0.5 * K.dx(), y0 + 0.5 * K.dy()});
    }
  auto dist_to_K = [&](const CoverPoint& p) {
    double best = 1e300;
    for (const auto& b : boxes) {
      double dy = p.y < b.y0 ? b.y0 - p.y : (p.y > b.y1 ? p.y - b.y1 : 0.0);
      double dx;
      if (include_translates) {
        // nearest integer translate of the box in x
        double k = std::round(0.5 * (b.x0 + b.x1) - p.x);
        dx = 1e300;
        for (double kk : {k - 1.0, k, k + 1.0}) {
          double x0 = b.x0 - kk, x1 = b.x1 - kk;
          double d = p.x < x0 ? x0 - p.x : (p.x > x1 ? p.x - x1 : 0.0);
          dx = std::min(dx, d);
        }
      } else {
        dx = p.x < b.x0 ? b.x0 - p.x : (p.x > b.x1 ? p.x - b.x1 : 0.0);
      }
      best = std::min(best, std::hypot(dx, dy));
    }
    return best;
  };
  const double threshold = std::hypot(K.dx(), K.dy());  // one-cell-diagonal slack
  std::vector<double> clearance(static_cast<size_t>(N), 0.0);
  std::vector<CoverPoint> cur = pts;
  for (long n = 1; n <= N; ++n) {
    std::vector<double> d(cur.size());
    parallel_for(cur.size(), [&](size_t k) {
      cur[k] = map.fwd(cur[k]);
      d[k] = dist_to_K(cur[k]);
    });
    clearance[n - 1] = *std::min_element(d.begin(), d.end());
  }
  FreeHorizonReport rep;
  rep.tested_to = N;
  rep.include_translates = include_translates;
  // least n0 such that every tested n in [n0, N] is clear of K
  long n0 = N + 1;
  double margin = 1e300;
  for (long n = N; n >= 1; --n) {
    if (clearance[n - 1] <= threshold) break;
    n0 = n;
    margin = std::min(margin, clearance[n - 1] - threshold);
  }
  if (n0 <= N) {
    rep.found = true;
    rep.n0 = n0;
    rep.witness_margin = margin;
  }
  return rep;
}

}  // namespace annrot
