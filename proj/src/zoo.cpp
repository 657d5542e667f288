#include "annrot/zoo.hpp"

#include <algorithm>
#include <cmath>

namespace annrot {

namespace {

double smoothstep01(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

double sample_max_abs(const std::function<double(double)>& f, double lo, double hi,
                      int n = 20001) {
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    double y = lo + (hi - lo) * i / (n - 1);
    m = std::max(m, std::abs(f(y)));
  }
  return m;
}

double numeric_derivative(const std::function<double(double)>& f, double y) {
  const double h = 1e-6;
  return (f(y + h) - f(y - h)) / (2.0 * h);
}

}  // namespace

double invert_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi, double tol) {
  // expand the bracket if needed (callers give generous hints already)
  double flo = f(lo), fhi = f(hi);
  for (int g = 0; g < 64 && flo > target; ++g) { lo -= (hi - lo); flo = f(lo); }
  for (int g = 0; g < 64 && fhi < target; ++g) { hi += (hi - lo); fhi = f(hi); }
  if (flo > target || fhi < target)
    throw MapEvalError("invert_increasing: target not bracketed");
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double fy = f(y);
    if (fy > target) hi = y; else lo = y;
    double d = numeric_derivative(f, y);
    double ynewton = (d > 1e-12) ? y - (fy - target) / d : y;
    double ynext = (ynewton > lo && ynewton < hi) ? ynewton : 0.5 * (lo + hi);
    if (std::abs(ynext - y) < tol) return ynext;
    y = ynext;
  }
  return y;
}

Alpha1D alpha_from_json(const json& spec) {
  Alpha1D a;
  a.spec = spec;
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "const") {
    double v = spec.at("value").get<double>();
    a.f = [v](double) { return v; };
  } else if (kind == "affine") {
    double p = spec.at("a").get<double>(), q = spec.at("b").get<double>();
    a.f = [p, q](double y) { return p + q * y; };
  } else if (kind == "sin_exp") {
    // sin(1/r) in plane coordinates, expressed in turns
    a.f = [](double y) { return std::sin(std::exp(y)) / kTau; };
  } else if (kind == "lorentz") {
    double s = spec.at("scale").get<double>();
    a.f = [s](double y) { return s / (1.0 + y * y); };
  } else if (kind == "plateau_pm1") {
    // -1 below -g, +1 above +g, smooth monotone between; on the plateaus the
    // angular coordinate is frozen mod 1, which is what lets the tilt both
    // trap orbits (fixed points in sin>0 columns) and leak them through.
    double g = spec.value("half_gap", 0.4);
    a.f = [g](double y) { return -1.0 + 2.0 * smoothstep01((y + g) / (2.0 * g)); };
  } else if (kind == "band_trap") {
    // vertical drift pushing into the band [y_lo, y_hi]: upward below it,
    // downward above it, zero inside; bounded ramp so y + drift stays monotone
    double lo = spec.at("y_lo").get<double>();
    double hi = spec.at("y_hi").get<double>();
    double s = spec.at("s").get<double>();
    if (!(lo < hi)) throw SchemaError("band_trap: need y_lo < y_hi");
    if (!(s > 0.0 && s < 1.0)) throw SchemaError("band_trap: need 0 < s < 1");
    a.f = [lo, hi, s](double y) {
      if (y < lo) return s * std::tanh(lo - y);
      if (y > hi) return -s * std::tanh(y - hi);
      return 0.0;
    };
  } else if (kind == "quartic_radial") {
    // radial(y) = y - D(y) with fixed points exactly at +-1/2:
    //   D(y) = c (clamp(y,-1,1)^2 - 1/4)^2 + dip cos^2(pi y / 0.6) [|y|<0.3]
    // The dip term speeds the transit between the two semi-stable circles
    // without adding fixed points.
    double c = spec.at("c").get<double>();
    double dip = spec.value("dip", 0.0);
    a.f = [c, dip](double y) {
      double t = std::clamp(y, -1.0, 1.0);
      double q = t * t - 0.25;
      double d = c * q * q;
      if (dip != 0.0 && std::abs(y) < 0.3) {
        double w = std::cos(M_PI * y / 0.6);
        d += dip * w * w;
      }
      return y - d;
    };
  } else {
    throw SchemaError("alpha_from_json: unknown profile kind '" + kind + "'");
  }
  return a;
}

LiftedAnnulusMap identity_map() {
  LiftedAnnulusMap m;
  m.name = "identity";
  m.params = json{{"family", "identity"}};
  m.forward_lift = [](const CoverPoint& z) { return z; };
  m.inverse_lift = [](const CoverPoint& z) { return z; };
  m.horizontal_bound = 0.0;
  return m;
}

LiftedAnnulusMap rigid_rotation(double turns) {
  LiftedAnnulusMap m;
  m.name = "rigid";
  m.params = json{{"family", "rigid"}, {"turns", turns}};
  m.forward_lift = [turns](const CoverPoint& z) { return CoverPoint{z.x + turns, z.y}; };
  m.inverse_lift = [turns](const CoverPoint& z) { return CoverPoint{z.x - turns, z.y}; };
  m.horizontal_bound = std::abs(turns);
  return m;
}

LiftedAnnulusMap fibred_rotation(const Alpha1D& alpha) {
  LiftedAnnulusMap m;
  m.name = "fibred";
  m.params = json{{"family", "fibred"}, {"alpha", alpha.spec}};
  auto f = alpha.f;
  m.forward_lift = [f](const CoverPoint& z) { return CoverPoint{z.x + f(z.y), z.y}; };
  m.inverse_lift = [f](const CoverPoint& z) { return CoverPoint{z.x - f(z.y), z.y}; };
  m.horizontal_bound = sample_max_abs(f, m.band_lo, m.band_hi);
  return m;
}

LiftedAnnulusMap twist_map() {
  Alpha1D a = alpha_from_json(json{{"kind", "affine"}, {"a", 0.0}, {"b", 1.0}});
  LiftedAnnulusMap m = fibred_rotation(a);
  m.name = "twist";
  m.params = json{{"family", "twist"}};
  return m;
}

LiftedAnnulusMap plane_linear(double angle_turns, double modulus) {
  if (!(modulus > 0.0)) throw PreconditionError("plane_linear: modulus must be > 0");
  LiftedAnnulusMap m;
  m.name = "plane_linear";
  m.params = json{{"family", "plane_linear"}, {"angle_turns", angle_turns},
                  {"modulus", modulus}};
  const double dy = -std::log(modulus);  // y = -ln r: contraction moves toward +inf
  m.forward_lift = [angle_turns, dy](const CoverPoint& z) {
    return CoverPoint{z.x + angle_turns, z.y + dy};
  };
  m.inverse_lift = [angle_turns, dy](const CoverPoint& z) {
    return CoverPoint{z.x - angle_turns, z.y - dy};
  };
  m.horizontal_bound = std::abs(angle_turns);
  return m;
}

LiftedAnnulusMap rigid_rotation_isotopy_power(const LiftedAnnulusMap& base, int p,
                                              int q) {
  if (q == 0) throw PreconditionError("rigid_rotation_isotopy_power: q must be nonzero");
  LiftedAnnulusMap m;
  m.name = base.name + "^" + std::to_string(q) + "+" + std::to_string(p);
  m.params = json{{"family", "power"}, {"map", base.params}, {"p", p}, {"q", q}};
  m.forward_lift = [base, p, q](const CoverPoint& z) {
    CoverPoint w = base.iterate(z, q);
    return CoverPoint{w.x + p, w.y};
  };
  m.inverse_lift = [base, p, q](const CoverPoint& z) {
    return base.iterate({z.x - p, z.y}, -q);
  };
  m.horizontal_bound = std::abs(q) * base.horizontal_bound + std::abs(p);
  m.band_lo = base.band_lo;
  m.band_hi = base.band_hi;
  return m;
}

LiftedAnnulusMap twice_reeb_plane(double beta, double alpha, double stiffness) {
  // Interior circle sits at y_m = 1 - ln2/ln3 within each unit band.
  const double ym = 1.0 - std::log(2.0) / std::log(3.0);
  auto om = [beta, alpha, ym](double y) {
    double t = y - std::floor(y);
    if (t <= ym) return beta + (alpha - beta) * smoothstep01(t / ym);
    return alpha + (beta - alpha) * smoothstep01((t - ym) / (1.0 - ym));
  };
  auto v = [stiffness, ym](double y) {
    double t = y - std::floor(y);
    double u = (t <= ym) ? t / ym : (t - ym) / (1.0 - ym);
    double b = u * (1.0 - u);
    return stiffness * 16.0 * b * b;
  };
  // reject parameter sets that create a fixed point away from the origin:
  // min over one period of the annulus displacement must stay positive
  double min_disp = 1e9;
  const int res = 256;
  for (int j = 0; j < res; ++j) {
    double y = (j + 0.5) / res;
    double dx = std::abs(om(y));
    dx = std::min(dx - std::floor(dx), 1.0 - (dx - std::floor(dx)));
    double d = std::hypot(dx, v(y));
    min_disp = std::min(min_disp, d);
  }
  if (min_disp < 1e-6)
    throw PreconditionError(
        "twice_reeb_plane: rotation profile crosses 0 where the radial "
        "displacement vanishes (fixed point created); min grid displacement " +
        std::to_string(min_disp));

  LiftedAnnulusMap m;
  m.name = "twice_reeb";
  m.params = json{{"family", "twice_reeb"}, {"beta", beta}, {"alpha", alpha},
                  {"stiffness", stiffness}};
  const double vmax = sample_max_abs(v, 0.0, 1.0);
  m.forward_lift = [om, v](const CoverPoint& z) {
    return CoverPoint{z.x + om(z.y), z.y + v(z.y)};
  };
  m.inverse_lift = [om, v, vmax](const CoverPoint& z) {
    auto g = [v](double y) { return y + v(y); };
    double y = invert_increasing(g, z.y, z.y - vmax - 0.01, z.y + 0.01);
    return CoverPoint{z.x - om(y), y};
  };
  m.horizontal_bound = std::max(std::abs(beta), std::abs(alpha));
  return m;
}

LiftedAnnulusMap open_annulus_double_reeb(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw PreconditionError("open_annulus_double_reeb: need 0 < delta < 1");
  // rotation +1 for y <= -1, -1 for y >= +1, smooth monotone between; the
  // drift delta/(1+y^2) is strictly positive, so every orbit escapes upward
  // forward and downward backward: no invariant compact set.
  auto w = [](double y) { return 1.0 - 2.0 * smoothstep01((y + 1.0) / 2.0); };
  auto v = [delta](double y) { return delta / (1.0 + y * y); };
  LiftedAnnulusMap m;
  m.name = "double_reeb";
  m.params = json{{"family", "double_reeb"}, {"delta", delta}};
  m.forward_lift = [w, v](const CoverPoint& z) {
    return CoverPoint{z.x + w(z.y), z.y + v(z.y)};
  };
  m.inverse_lift = [w, v, delta](const CoverPoint& z) {
    auto g = [v](double y) { return y + v(y); };
    double y = invert_increasing(g, z.y, z.y - delta - 0.01, z.y + 0.01);
    return CoverPoint{z.x - w(y), y};
  };
  m.horizontal_bound = 1.0;
  return m;
}

LiftedAnnulusMap skew_heteroclinic(const SkewLevels& lv, const Alpha1D& omega,
                                   const Alpha1D& radial, double eps) {
  if (!(lv.y2 < lv.yb && lv.yb < lv.y1 && lv.y1 < lv.ya && lv.ya < lv.y0))
    throw PreconditionError("skew_heteroclinic: levels must satisfy y2<yb<y1<ya<y0");
  if (eps < 0.0) throw PreconditionError("skew_heteroclinic: tilt must be >= 0");
  if (std::abs(radial(lv.ya) - lv.ya) > 1e-9 || std::abs(radial(lv.yb) - lv.yb) > 1e-9)
    throw PreconditionError("skew_heteroclinic: radial must fix ya and yb");
  if (!(omega(lv.ya) > 0.0) || !(omega(lv.yb) < 0.0))
    throw PreconditionError("skew_heteroclinic: need omega(ya) > 0 > omega(yb)");
  // radial(y) < y away from the two fixed points, and strictly increasing
  const int ns = 4001;
  double min_rp = 1e9, max_abs_op = 0.0;
  for (int i = 0; i < ns; ++i) {
    double y = lv.y2 - 1.0 + (lv.y0 - lv.y2 + 2.0) * i / (ns - 1);
    min_rp = std::min(min_rp, numeric_derivative(radial.f, y));
    max_abs_op = std::max(max_abs_op, std::abs(numeric_derivative(omega.f, y)));
    if (y >= lv.y2 && y <= lv.y0 && std::abs(y - lv.ya) > 0.02 &&
        std::abs(y - lv.yb) > 0.02 && !(radial(y) < y))
      throw PreconditionError("skew_heteroclinic: radial(y) < y violated at y=" +
                              std::to_string(y));
  }
  if (!(min_rp > 0.0))
    throw PreconditionError("skew_heteroclinic: radial profile is not increasing");
  if (!(min_rp - kTau * eps * max_abs_op > 0.0))
    throw PreconditionError(
        "skew_heteroclinic: tilt too large, fiber monotonicity lost (margin " +
        std::to_string(min_rp - kTau * eps * max_abs_op) + ")");

  LiftedAnnulusMap m;
  m.name = "skew_het";
  m.params = json{{"family", "skew_het"},
                  {"levels", {lv.y2, lv.yb, lv.y1, lv.ya, lv.y0}},
                  {"omega", omega.spec},
                  {"radial", radial.spec},
                  {"eps", eps}};
  auto om = omega.f;
  auto rad = radial.f;
  m.forward_lift = [om, rad, eps](const CoverPoint& z) {
    return CoverPoint{z.x + om(z.y), rad(z.y) + eps * std::sin(kTau * z.x)};
  };
  // D(y) = y - radial(y) >= 0 is bounded; bracket the radial inverse with it.
  double dmax = 0.0;
  for (int i = 0; i < ns; ++i) {
    double y = lv.y2 - 2.0 + (lv.y0 - lv.y2 + 4.0) * i / (ns - 1);
    dmax = std::max(dmax, y - rad(y));
  }
  dmax += 0.1;
  m.inverse_lift = [om, rad, eps, dmax](const CoverPoint& z) {
    // solve X = x + om(y), Y = rad(y) + eps sin(tau x); the y-update is a
    // contraction since eps * tau * |om'| < min rad' (checked above)
    double y = z.y;
    for (int it = 0; it < 100; ++it) {
      double x = z.x - om(y);
      double target = z.y - eps * std::sin(kTau * x);
      double ynew = invert_increasing(rad, target, target, target + dmax);
      if (std::abs(ynew - y) < 1e-13) { y = ynew; break; }
      y = ynew;
    }
    return CoverPoint{z.x - om(y), y};
  };
  m.band_lo = lv.y2 - 1.0;
  m.band_hi = lv.y0 + 1.0;
  m.horizontal_bound = sample_max_abs(om, m.band_lo, m.band_hi);
  return m;
}

LiftedAnnulusMap vertical_drift(const Alpha1D& drift) {
  auto d = drift.f;
  auto g = [d](double y) { return y + d(y); };
  double dmax = 0.0, min_slope = 1e9;
  const int ns = 8001;
  for (int i = 0; i < ns; ++i) {
    double y = -12.0 + 24.0 * i / (ns - 1);
    dmax = std::max(dmax, std::abs(d(y)));
    min_slope = std::min(min_slope, numeric_derivative(g, y));
  }
  if (!(min_slope > 0.0))
    throw PreconditionError("vertical_drift: y + drift(y) is not increasing");
  LiftedAnnulusMap m;
  m.name = "vertical_drift";
  m.params = json{{"family", "vertical_drift"}, {"drift", drift.spec}};
  m.forward_lift = [g](const CoverPoint& z) { return CoverPoint{z.x, g(z.y)}; };
  dmax += 0.01;
  m.inverse_lift = [g, dmax](const CoverPoint& z) {
    return CoverPoint{z.x, invert_increasing(g, z.y, z.y - dmax, z.y + dmax)};
  };
  m.horizontal_bound = 0.0;
  return m;
}

LiftedAnnulusMap compose(const std::vector<LiftedAnnulusMap>& maps) {
  if (maps.empty()) throw PreconditionError("compose: need at least one map");
  LiftedAnnulusMap m;
  m.name = "compose";
  json specs = json::array();
  double bound = 0.0;
  for (const auto& mp : maps) { specs.push_back(mp.params); bound += mp.horizontal_bound; }
  m.params = json{{"family", "compose"}, {"maps", specs}};
  m.forward_lift = [maps](const CoverPoint& z) {
    CoverPoint w = z;
    for (const auto& mp : maps) w = mp.fwd(w);
    return w;
  };
  m.inverse_lift = [maps](const CoverPoint& z) {
    CoverPoint w = z;
    for (auto it = maps.rbegin(); it != maps.rend(); ++it) w = it->inv(w);
    return w;
  };
  m.horizontal_bound = bound;
  return m;
}

LiftedAnnulusMap conjugate(const LiftedAnnulusMap& map, const LiftedAnnulusMap& by) {
  LiftedAnnulusMap m;
  m.name = "conj(" + map.name + ")";
  m.params = json{{"family", "conjugate"}, {"map", map.params}, {"by", by.params}};
  m.forward_lift = [map, by](const CoverPoint& z) {
    return by.fwd(map.fwd(by.inv(z)));
  };
  m.inverse_lift = [map, by](const CoverPoint& z) {
    return by.fwd(map.inv(by.inv(z)));
  };
  m.horizontal_bound = map.horizontal_bound + 2.0 * by.horizontal_bound;
  m.band_lo = map.band_lo;
  m.band_hi = map.band_hi;
  return m;
}

LiftedAnnulusMap map_from_spec(const json& spec) {
  const std::string fam = spec.at("family").get<std::string>();
  if (fam == "identity") return identity_map();
  if (fam == "rigid") return rigid_rotation(spec.at("turns").get<double>());
  if (fam == "twist") return twist_map();
  if (fam == "fibred") return fibred_rotation(alpha_from_json(spec.at("alpha")));
  if (fam == "plane_linear")
    return plane_linear(spec.at("angle_turns").get<double>(),
                        spec.at("modulus").get<double>());
  if (fam == "twice_reeb")
    return twice_reeb_plane(spec.at("beta").get<double>(),
                            spec.at("alpha").get<double>(),
                            spec.at("stiffness").get<double>());
  if (fam == "double_reeb")
    return open_annulus_double_reeb(spec.at("delta").get<double>());
  if (fam == "skew_het") {
    auto l = spec.at("levels");
    SkewLevels lv{l.at(0).get<double>(), l.at(1).get<double>(), l.at(2).get<double>(),
                  l.at(3).get<double>(), l.at(4).get<double>()};
    return skew_heteroclinic(lv, alpha_from_json(spec.at("omega")),
                             alpha_from_json(spec.at("radial")),
                             spec.at("eps").get<double>());
  }
  if (fam == "vertical_drift")
    return vertical_drift(alpha_from_json(spec.at("drift")));
  if (fam == "power")
    return rigid_rotation_isotopy_power(map_from_spec(spec.at("map")),
                                        spec.at("p").get<int>(),
                                        spec.at("q").get<int>());
  if (fam == "compose") {
    std::vector<LiftedAnnulusMap> maps;
    for (const auto& s : spec.at("maps")) maps.push_back(map_from_spec(s));
    return compose(maps);
  }
  if (fam == "conjugate")
    return conjugate(map_from_spec(spec.at("map")), map_from_spec(spec.at("by")));
  throw SchemaError("map_from_spec: unknown family '" + fam + "'");
}

SkewLevels reference_levels() { return SkewLevels{-1.0, -0.5, 0.0, 0.5, 1.0}; }

json reference_skew_spec(double eps) {
  return json{{"family", "skew_het"},
              {"levels", {-1.0, -0.5, 0.0, 0.5, 1.0}},
              {"omega", {{"kind", "affine"}, {"a", 0.05}, {"b", 0.5}}},
              {"radial", {{"kind", "quartic_radial"}, {"c", 0.2}, {"dip", 0.0}}},
              {"eps", eps}};
}

json reference_tilted_spec() {
  json base{{"family", "skew_het"},
            {"levels", {-1.0, -0.5, 0.0, 0.5, 1.0}},
            {"omega", {{"kind", "plateau_pm1"}, {"half_gap", 0.4}}},
            {"radial", {{"kind", "quartic_radial"}, {"c", 0.2}, {"dip", 0.05}}},
            {"eps", 0.01}};
  // the hypotheses of the branch machinery hold for an iterate of the tilted
  // map (one application must already carry the upper boundary curve below the
  // lower one); 128 exceeds the measured minimal descent time of ~122 steps
  return json{{"family", "power"}, {"map", base}, {"p", 0}, {"q", 128}};
}

}  // namespace annrot
