#include "annrot/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "annrot/branches.hpp"
#include "annrot/svg.hpp"
#include "annrot/zoo.hpp"

namespace annrot {

namespace {

const json& need(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw SchemaError("config: missing required field '" + path + "." + key + "'");
  return j.at(key);
}

double need_num(const json& j, const std::string& key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number())
    throw SchemaError("config: field '" + path + "." + key + "' must be a number");
  return v.get<double>();
}

json map_spec_from(const json& cfg) {
  const json& m = need(cfg, "map", "");
  if (m.is_object()) return m;
  if (!m.is_string())
    throw SchemaError("config: field '.map' must be a family object or a name");
  std::string name = m.get<std::string>();
  if (name == "identity") return json{{"family", "identity"}};
  if (name == "twist") return json{{"family", "twist"}};
  if (name == "double-reeb") return json{{"family", "double_reeb"}, {"delta", 0.01}};
  if (name == "twice-reeb")
    return json{{"family", "twice_reeb"}, {"beta", 0.1}, {"alpha", -0.1},
                {"stiffness", 0.05}};
  if (name == "skew-het") return reference_skew_spec(cfg.value("eps", 0.0));
  if (name == "tilted") return reference_tilted_spec();
  throw SchemaError("config: unknown map name '" + name + "'");
}

SeedPlan plan_from(const json& cfg) {
  SeedPlan p;
  if (!cfg.contains("plan")) return p;
  const json& j = cfg.at("plan");
  p.grid_nx = j.value("grid_nx", p.grid_nx);
  p.grid_ny = j.value("grid_ny", p.grid_ny);
  p.jitter = j.value("jitter", p.jitter);
  p.seed = j.value("seed", p.seed);
  p.n_stride = j.value("n_stride", p.n_stride);
  return p;
}

void add_assert(ResultRecord& rec, const std::string& name, double lhs,
                const std::string& op, double rhs) {
  AssertEntry a{name, lhs, op, rhs, false};
  a.pass = evaluate_assert(a);
  rec.asserts.push_back(a);
}

GridRegion band_region(double y_lo, double y_hi, int res_x, int res_y) {
  return GridRegion::full(Rect{0.0, 1.0, y_lo, y_hi}, res_x, res_y, true);
}

}  // namespace

json load_config(const std::string& name) {
  std::string dir = ANNROT_CONFIG_DIR;
  if (const char* env = std::getenv("ANNROT_CONFIG_DIR")) dir = env;
  std::string path = dir + "/" + name + ".json";
  return json::parse(read_text_file(path));
}

RunOutcome run_config(const json& cfg) {
  RunOutcome out;
  out.record.config = cfg;
  if (cfg.contains("schema") && cfg.at("schema").get<std::string>() != "annrot-config-v1")
    throw SchemaError("config: unknown schema tag '.schema'");
  std::string op = need(cfg, "op", "").get<std::string>();
  LiftedAnnulusMap map = map_from_spec(map_spec_from(cfg));
  SeedPlan plan = plan_from(cfg);
  const double eps = cfg.value("merge_epsilon", Defaults::merge_epsilon);
  const double cap = cfg.value("infinite_cap", Defaults::infinite_cap);
  json& payload = out.record.payload;

  if (op == "rho-n") {
    const json& pt = need(cfg, "point", "");
    long n = static_cast<long>(need_num(cfg, "n", ""));
    double v = rho_n(map, AnnulusPoint(pt.at(0).get<double>(), pt.at(1).get<double>()), n);
    payload["value"] = v;
  } else if (op == "rho-k") {
    double y_lo = need_num(cfg, "y_lo", ""), y_hi = need_num(cfg, "y_hi", "");
    int res = cfg.value("grid_res", 96);
    long m = static_cast<long>(need_num(cfg, "m", ""));
    long N = static_cast<long>(need_num(cfg, "horizon", ""));
    RhoKResult r = rho_K(map, band_region(y_lo, y_hi, res, res), m, N, plan, eps, cap);
    payload["rho_k"] = r.to_json();
  } else if (op == "rho-loc") {
    const json& s = need(cfg, "schedule", "");
    RadiiSchedule sched;
    sched.v0 = need_num(s, "v0", "schedule");
    sched.step = need_num(s, "step", "schedule");
    sched.depth = static_cast<int>(need_num(s, "depth", "schedule"));
    sched.w_levels = static_cast<int>(s.value("w_levels", sched.w_levels));
    int side = static_cast<int>(cfg.value("side", 1));
    long m = static_cast<long>(cfg.value("m", 1));
    long N = static_cast<long>(need_num(cfg, "horizon", ""));
    LocalRotationResult r = rho_local(map, side, sched, m, N, plan, eps, cap);
    payload["local"] = r.to_json();
  } else if (op == "rho-ann") {
    std::vector<double> heights;
    if (cfg.contains("window_heights"))
      for (const auto& h : cfg.at("window_heights")) heights.push_back(h.get<double>());
    else
      heights = {2.0, 4.0, 6.0};
    long m = static_cast<long>(cfg.value("m", 50));
    long N = static_cast<long>(need_num(cfg, "horizon", ""));
    AnnularRotationResult r =
        rho_ann(map, heights, m, N, plan, cfg.value("grid_res", 128), eps, cap);
    payload["annular"] = r.to_json();
  } else if (op == "rho-mes") {
    double y_lo = need_num(cfg, "y_lo", ""), y_hi = need_num(cfg, "y_hi", "");
    int res = cfg.value("grid_res", 96);
    long burn = static_cast<long>(cfg.value("burn_in", 500));
    long len = static_cast<long>(need_num(cfg, "length", ""));
    MeasuredRotationResult r =
        rho_measured(map, band_region(y_lo, y_hi, res, res), burn, len, plan, eps);
    payload["measured"] = r.to_json();
  } else if (op == "theta") {
    std::string mode = cfg.value("mode", "maximal");
    long N = static_cast<long>(need_num(cfg, "horizon", ""));
    int res = cfg.value("grid_res", 128);
    if (mode == "maximal") {
      double y_lo = need_num(cfg, "y_lo", ""), y_hi = need_num(cfg, "y_hi", "");
      ThetaResult th = theta_maximal(map, band_region(y_lo, y_hi, res, res), N);
      payload["theta"] = th.to_json();
      payload["theta"]["region_rle"] = th.region.to_rle_json();
      payload["components"] = connected_components(th.region).to_json();
    } else if (mode == "forward" || mode == "backward") {
      double level = need_num(cfg, "level", "");
      int side = static_cast<int>(need_num(cfg, "side", ""));
      double y_lo = need_num(cfg, "y_lo", ""), y_hi = need_num(cfg, "y_hi", "");
      GraphCurve c = GraphCurve::horizontal(level);
      Rect w{0.0, 1.0, y_lo, y_hi};
      GridRegion r = mode == "forward"
                         ? theta_forward(map, c, side, w, res, res, N)
                         : theta_backward(map, c, side, w, res, res, N);
      payload["region_rle"] = r.to_rle_json();
    } else if (mode == "classify") {
      GraphCurve c = GraphCurve::horizontal(need_num(cfg, "level", ""));
      payload["classification"] = free_curve_classify(map, c).to_json();
    } else {
      throw SchemaError("config: unknown theta mode '.mode'");
    }
  } else if (op == "branches") {
    BandSpec band{GraphCurve::horizontal(need_num(cfg, "upper", "")),
                  GraphCurve::horizontal(need_num(cfg, "lower", "")), 0};
    double x_lo = need_num(cfg, "x_lo", ""), x_hi = need_num(cfg, "x_hi", "");
    int cpu = cfg.value("cells_per_unit", 32);
    double pad = 4.0 / cpu;
    Rect w{x_lo, x_hi, band.lower.min_y() - pad, band.upper.max_y() + pad};
    int nx = static_cast<int>(std::ceil((w.x_hi - w.x_lo) * cpu));
    int ny = static_cast<int>(std::ceil((w.y_hi - w.y_lo) * cpu));
    long depth = static_cast<long>(need_num(cfg, "depth", ""));
    BranchSign sign = cfg.value("sign", "unstable") == std::string("stable")
                          ? BranchSign::Stable
                          : BranchSign::Unstable;
    payload["band_check"] = band_check(map, band).to_json();
    GridRegion limit = lambda_limit(map, band, w, nx, ny, depth, sign);
    payload["limit_rle"] = limit.to_rle_json();
    if (cfg.contains("base_point")) {
      const json& pt = cfg.at("base_point");
      BranchResult br = branch_of(map, band, w, nx, ny,
                                  {pt.at(0).get<double>(), pt.at(1).get<double>()},
                                  depth, sign, cfg.value("h2_verified", false));
      payload["branch"] = br.to_json();
      payload["branch"]["region_rle"] = br.component.to_rle_json();
    }
  } else if (op == "theorem-c") {
    GraphCurve g0 = GraphCurve::horizontal(need_num(cfg, "gamma0", ""));
    GraphCurve g1 = GraphCurve::horizontal(need_num(cfg, "gamma1", ""));
    GraphCurve g2 = GraphCurve::horizontal(need_num(cfg, "gamma2", ""));
    TheoremCConfig tc = theorem_c_config_from_json(cfg);
    TheoremCResult r = theorem_c_experiment(map, g0, g1, g2, tc);
    payload["certificate"] = r.to_json();
    if (r.status == CertStatus::Refused) {
      out.exit_code = kExitRefused;
      out.message = r.reason;
    } else if (r.status == CertStatus::Inconclusive) {
      out.exit_code = kExitInconclusive;
      out.message = r.reason;
    }
  } else {
    throw SchemaError("config: unknown operation '" + op + "'");
  }
  if (out.exit_code == kExitOk && !out.record.all_pass()) out.exit_code = kExitAssert;
  return out;
}

// ---- acceptance suites ----

ResultRecord suite_paper_values() {
  json cfg = load_config("suite_paper_values");
  ResultRecord rec;
  rec.config = cfg;

  {  // local rotation of the linear plane contractions
    const json& c = cfg.at("local_plane");
    RadiiSchedule sched{c.at("v0").get<double>(), c.at("step").get<double>(),
                       c.at("depth").get<int>(), c.at("w_levels").get<int>()};
    long m = c.at("m").get<long>(), N = c.at("horizon").get<long>();
    double tol = c.at("tol").get<double>();
    SeedPlan plan = plan_from(c);
    const std::pair<const char*, double> cases[] = {{"contraction", 0.0},
                                                    {"quarter_turn_contraction", 0.25}};
    for (const auto& [name, angle] : cases) {
      LiftedAnnulusMap map = plane_linear(angle, 0.5);
      LocalRotationResult lr = rho_local(map, +1, sched, m, N, plan);
      rec.payload["local_plane"][name] = lr.to_json();
      add_assert(rec, std::string(name) + "_has_samples",
                 lr.extrapolated.no_samples ? 1.0 : 0.0, "==", 0.0);
      add_assert(rec, std::string(name) + "_lo",
                 std::abs(lr.extrapolated.min_value() - angle), "<=", tol);
      add_assert(rec, std::string(name) + "_hi",
                 std::abs(lr.extrapolated.max_value() - angle), "<=", tol);
    }
  }

  {  // annular rotation set of the escaping double-Reeb map
    const json& c = cfg.at("annular_double_reeb");
    LiftedAnnulusMap map =
        open_annulus_double_reeb(c.at("delta").get<double>());
    std::vector<double> heights;
    for (const auto& h : c.at("window_heights")) heights.push_back(h.get<double>());
    long m = c.at("m").get<long>(), N = c.at("horizon").get<long>();
    SeedPlan plan = plan_from(c);
    AnnularRotationResult ar =
        rho_ann(map, heights, m, N, plan, c.at("grid_res").get<int>());
    rec.payload["annular_double_reeb"] = ar.to_json();
    double h = hausdorff_to_interval(ar.combined, -1.0, 1.0);
    add_assert(rec, "double_reeb_hausdorff_to_unit_interval", h, "<=",
               c.at("hausdorff_tol").get<double>());
    // no invariant compact set: the radial motion is independent of the
    // angle, so the 512x512 survival test reduces to one probe per row
    int rows = c.at("survival_rows").get<int>();
    double B = heights.back();
    long survive = 0;
    for (int j = 0; j < rows; ++j) {
      double y = -B + (j + 0.5) * (2.0 * B) / rows;
      bool ok_f = true, ok_b = true;
      CoverPoint z{0.0, y};
      for (long n = 0; n < N && ok_f; ++n) {
        z = map.fwd(z);
        ok_f = std::abs(z.y) <= B;
      }
      z = {0.0, y};
      for (long n = 0; n < N && ok_b; ++n) {
        z = map.inv(z);
        ok_b = std::abs(z.y) <= B;
      }
      if (ok_f && ok_b) ++survive;
    }
    rec.payload["annular_double_reeb"]["surviving_rows"] = survive;
    add_assert(rec, "double_reeb_no_invariant_core", static_cast<double>(survive),
               "==", 0.0);
  }

  {  // self-similar plane map: 0 in the rotation set of three successive bands
    const json& c = cfg.at("twice_reeb_bands");
    LiftedAnnulusMap map = twice_reeb_plane(
        c.at("beta").get<double>(), c.at("alpha").get<double>(),
        c.at("stiffness").get<double>());
    long m = c.at("m").get<long>(), N = c.at("horizon").get<long>();
    int res = c.at("grid_res").get<int>();
    SeedPlan plan = plan_from(c);
    for (int band = 0; band < 3; ++band) {
      RhoKResult r = rho_K(map, band_region(band, band + 1.0, res, res), m, N, plan);
      rec.payload["twice_reeb_bands"]["band" + std::to_string(band)] = r.to_json();
      add_assert(rec, "band" + std::to_string(band) + "_contains_zero",
                 r.full.covers(0.0, Defaults::merge_epsilon) ? 1.0 : 0.0, "==", 1.0);
    }
    // displacement never vanishes away from the origin (grid minimum)
    double min_disp = 1e300;
    const int g = 256;
    for (int j = 0; j < g; ++j) {
      double y = (j + 0.5) / g;
      CoverPoint z{0.0, y};
      CoverPoint w = map.fwd(z);
      double dx = w.x - z.x;
      dx = std::abs(dx - std::round(dx));
      min_disp = std::min(min_disp, std::hypot(dx, w.y - z.y));
    }
    rec.payload["twice_reeb_bands"]["min_grid_displacement"] = min_disp;
    add_assert(rec, "twice_reeb_min_displacement", min_disp, ">",
               c.at("min_displacement").get<double>());
  }
  return rec;
}

ResultRecord suite_interval_props() {
  json cfg = load_config("suite_interval_props");
  ResultRecord rec;
  rec.config = cfg;
  double y_lo = cfg.at("y_lo").get<double>(), y_hi = cfg.at("y_hi").get<double>();
  int res = cfg.at("grid_res").get<int>();
  long m = cfg.at("m").get<long>();
  std::vector<long> horizons;
  for (const auto& h : cfg.at("horizons")) horizons.push_back(h.get<long>());
  double gap_tol = cfg.at("gap_tol").get<double>();
  SeedPlan plan = plan_from(cfg);
  json table = json::array();
  for (const auto& spec : cfg.at("maps")) {
    LiftedAnnulusMap map = map_from_spec(spec);
    std::string name = map.name;
    std::vector<double> gaps;
    RotationSetEstimate last;
    for (long N : horizons) {
      RhoKResult r = rho_K(map, band_region(y_lo, y_hi, res, res), m, N, plan);
      double gap = 0.0;  // total gap measure of the union
      for (size_t k = 1; k < r.full.intervals.size(); ++k)
        gap += r.full.intervals[k].lo - r.full.intervals[k - 1].hi;
      gaps.push_back(gap);
      last = r.full;
      table.push_back(json{{"map", name}, {"horizon", N}, {"gap_measure", gap},
                          {"intervals", last.intervals.size()}});
    }
    add_assert(rec, name + "_final_gap", last.max_gap(), "<=", gap_tol);
    // seeds and sampled iterates are nested across horizon levels, so the
    // sample union can only grow: the gap measure must not increase
    for (size_t k = 1; k < gaps.size(); ++k)
      add_assert(rec, name + "_gap_monotone_" + std::to_string(k),
                 gaps[k] - gaps[k - 1], "<=", 1e-12);
  }
  rec.payload["convergence_table"] = table;
  return rec;
}

namespace {

void store_certificate(ResultRecord& rec, const std::string& key,
                       const LiftedAnnulusMap& map, const TheoremCResult& r) {
  rec.payload[key] = r.to_json();
  // decimated witness displacement traces for plots / CSV dumps
  const long steps = 200;
  std::vector<double> fwd, bwd;
  CoverPoint z{r.witness.x, 0.5 * (r.witness.y_lo + r.witness.y_hi)};
  CoverPoint w = z;
  for (long n = 0; n <= steps; ++n) { fwd.push_back(w.x); if (n < steps) w = map.fwd(w); }
  w = z;
  for (long n = 0; n <= steps; ++n) { bwd.push_back(w.x); if (n < steps) w = map.inv(w); }
  rec.payload[key]["witness_trace_forward"] = fwd;
  rec.payload[key]["witness_trace_backward"] = bwd;
}

}  // namespace

ResultRecord suite_theorem_c() {
  json cfg = load_config("suite_theorem_c");
  ResultRecord rec;
  rec.config = cfg;

  {  // untilted skew product: direct heteroclinic certificate
    const json& c = cfg.at("untilted");
    LiftedAnnulusMap map = map_from_spec(reference_skew_spec(0.0));
    TheoremCConfig tc = theorem_c_config_from_json(c);
    TheoremCResult r = theorem_c_experiment(
        map, GraphCurve::horizontal(c.at("gamma0").get<double>()),
        GraphCurve::horizontal(c.at("gamma1").get<double>()),
        GraphCurve::horizontal(c.at("gamma2").get<double>()), tc);
    store_certificate(rec, "untilted", map, r);
    add_assert(rec, "untilted_certified",
               r.status == CertStatus::Certified ? 1.0 : 0.0, "==", 1.0);
    add_assert(rec, "untilted_rho_upper_min", r.rho_band0_min, ">", 0.25);
    add_assert(rec, "untilted_rho_upper_max", r.rho_band0_max, "<", 0.35);
    add_assert(rec, "untilted_rho_lower_min", r.rho_band1_min, ">", -0.25);
    add_assert(rec, "untilted_rho_lower_max", r.rho_band1_max, "<", -0.15);
    add_assert(rec, "untilted_mixed_average", std::abs(r.witness.mixed_average),
               "<=", tc.mixed_tol);
  }

  {  // tilted iterate: branch-intersection certificate
    const json& c = cfg.at("tilted");
    LiftedAnnulusMap map = map_from_spec(reference_tilted_spec());
    TheoremCConfig tc = theorem_c_config_from_json(c);
    TheoremCResult r = theorem_c_experiment(
        map, GraphCurve::horizontal(c.at("gamma0").get<double>()),
        GraphCurve::horizontal(c.at("gamma1").get<double>()),
        GraphCurve::horizontal(c.at("gamma2").get<double>()), tc);
    store_certificate(rec, "tilted", map, r);
    add_assert(rec, "tilted_certified",
               r.status == CertStatus::Certified ? 1.0 : 0.0, "==", 1.0);
    add_assert(rec, "tilted_route_is_branch",
               r.route == "branch-intersection" ? 1.0 : 0.0, "==", 1.0);
    add_assert(rec, "tilted_intersection_found",
               static_cast<double>(r.intersection_n), ">=", 1.0);
    add_assert(rec, "tilted_intersection_horizon",
               static_cast<double>(r.intersection_n), "<=",
               c.at("intersection_max_n").get<double>());
    add_assert(rec, "tilted_witness_revalidates",
               r.witness.revalidated ? 1.0 : 0.0, "==", 1.0);
  }
  return rec;
}

ResultRecord suite_structure() {
  json cfg = load_config("suite_structure");
  ResultRecord rec;
  rec.config = cfg;
  LiftedAnnulusMap map = map_from_spec(reference_tilted_spec());
  GraphCurve g0 = GraphCurve::horizontal(cfg.at("gamma0").get<double>());
  GraphCurve g1 = GraphCurve::horizontal(cfg.at("gamma1").get<double>());
  GraphCurve g2 = GraphCurve::horizontal(cfg.at("gamma2").get<double>());
  BandSpec band0{g0, g1, 0};
  long depth = cfg.at("depth").get<long>();
  int cpu = cfg.at("cells_per_unit").get<int>();
  double pad_x = cfg.at("window_pad").get<double>();
  const double Mb = 2.0 * map.horizontal_bound + 1.0;

  H2Report h2 = h2_check(map, g0, g2, depth);
  rec.payload["h2"] = h2.to_json();
  add_assert(rec, "h2_holds", h2.holds ? 1.0 : 0.0, "==", 1.0);

  // base point from the invariant-set estimate of the upper band
  double pad_y = 4.0 / cpu;
  Rect bw{0.0, 1.0, g1.min_y() - pad_y, g0.max_y() + pad_y};
  int bny = static_cast<int>(std::ceil((bw.y_hi - bw.y_lo) * cpu));
  GridRegion A = GridRegion::below_curve(bw, std::max(64, cpu), bny, true, g0);
  A &= GridRegion::above_curve(bw, std::max(64, cpu), bny, true, g1);
  ThetaResult th = theta_maximal(map, A, cfg.at("theta_horizon").get<long>());
  add_assert(rec, "theta_band0_nonempty", static_cast<double>(th.region.count()),
             ">", 0.0);
  std::vector<CoverPoint> members;
  for (int j = 0; j < th.region.ny; ++j)
    for (int i = 0; i < th.region.nx; ++i)
      if (th.region.get(i, j)) members.push_back(th.region.center(i, j));
  CoverPoint xbase{0.0, 0.0};
  if (!members.empty())
    xbase = pick_branch_base(map, band0, members, depth, BranchSign::Unstable,
                             pad_y, 1.0 / cpu);

  Rect w0{xbase.x - Mb - pad_x, xbase.x + Mb + pad_x, g1.min_y() - pad_y,
          g0.max_y() + pad_y};
  int nx = static_cast<int>(std::ceil((w0.x_hi - w0.x_lo) * cpu));
  int ny = static_cast<int>(std::ceil((w0.y_hi - w0.y_lo) * cpu));
  LambdaField field = lambda_field(map, band0, w0, nx, ny, depth, BranchSign::Unstable);

  // nesting across n
  long nesting_violations = 0;
  GridRegion prev = field.at(0);
  for (long n = 1; n <= depth; n += std::max<long>(1, depth / 10)) {
    GridRegion curn = field.at(n);
    if (!prev.contains_region(curn)) ++nesting_violations;
    prev = curn;
  }
  add_assert(rec, "lambda_nesting_violations",
             static_cast<double>(nesting_violations), "==", 0.0);

  // independent escape-time characterization agrees up to one dilation cell
  GridRegion limit = field.limit();
  GridRegion esc = lambda_limit_escape_time(map, band0, w0, nx, ny, depth,
                                            BranchSign::Unstable);
  bool agree = limit.contains_region_dilated(esc, 1) &&
               esc.contains_region_dilated(limit, 1);
  add_assert(rec, "escape_time_cross_check", agree ? 1.0 : 0.0, "==", 1.0);

  // branch through the base point
  BranchResult br = branch_of(map, band0, w0, nx, ny, xbase, depth,
                              BranchSign::Unstable, h2.holds);
  rec.payload["branch"] = br.to_json();
  add_assert(rec, "branch_meets_lower_curve", br.meets_lower ? 1.0 : 0.0, "==", 1.0);
  add_assert(rec, "branch_compact_in_window", br.compact_in_window ? 1.0 : 0.0,
             "==", 1.0);
  add_assert(rec, "branch_p1_diameter", br.p1_diameter, "<=", br.diameter_bound);

  // backward invariance, checked pointwise on each limit cell's surviving
  // representative: its inverse image must land in the depth-1 estimate up to
  // one cell, or — where the set is thinner than the grid and the estimate
  // can miss its cell — itself pass the depth-1 membership trace. The field
  // is 1-periodic in x, so one period of columns covers every case.
  long invariance_violations = 0;
  GridRegion at_prev = field.at(depth - 1);
  auto under_ceiling_for = [&](CoverPoint z, long steps) {
    CoverPoint p = z;
    double prev_y = z.y;
    int settled = 0;
    for (long n = 1; n <= steps; ++n) {
      p = map.inv(p);
      if (p.y > g0.at(p.x) + limit.dy()) return false;
      if (std::abs(p.y - prev_y) < 1e-13) {
        if (++settled >= 5) return true;
      } else {
        settled = 0;
      }
      prev_y = p.y;
    }
    return true;
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < std::min(nx, cpu); ++i) {
      if (!limit.get(i, j)) continue;
      CoverPoint z = field.rep[static_cast<size_t>(j) * nx + i];
      CoverPoint w = map.inv(z);
      if (at_prev.contains(w.x, w.y, 1)) continue;
      if (!under_ceiling_for(w, depth - 1)) ++invariance_violations;
    }
  add_assert(rec, "backward_invariance_violations",
             static_cast<double>(invariance_violations), "==", 0.0);
  rec.payload["limit_cells"] = limit.count();
  return rec;
}

ResultRecord suite_hulls() {
  json cfg = load_config("suite_hulls");
  ResultRecord rec;
  rec.config = cfg;
  double y_lo = cfg.at("y_lo").get<double>(), y_hi = cfg.at("y_hi").get<double>();
  int res = cfg.at("grid_res").get<int>();
  long m = cfg.at("m").get<long>(), N = cfg.at("horizon").get<long>();
  long burn = cfg.at("burn_in").get<long>(), len = cfg.at("length").get<long>();
  double tol = cfg.at("tol").get<double>();
  SeedPlan plan = plan_from(cfg);
  for (const auto& spec : cfg.at("maps")) {
    LiftedAnnulusMap map = map_from_spec(spec);
    GridRegion K = band_region(y_lo, y_hi, res, res);
    RhoKResult rk = rho_K(map, K, m, N, plan);
    MeasuredRotationResult mes = rho_measured(map, K, burn, len, plan);
    rec.payload[map.name]["rho_k"] = rk.to_json();
    rec.payload[map.name]["measured"] = mes.to_json();
    add_assert(rec, map.name + "_hull_lo", std::abs(rk.full.min_value() - mes.hull_lo),
               "<=", tol);
    add_assert(rec, map.name + "_hull_hi", std::abs(rk.full.max_value() - mes.hull_hi),
               "<=", tol);
    // the band rotation estimate must sit inside the measured hull of the
    // maximal invariant set, with the same tolerance
    ThetaResult th = theta_maximal(map, K, cfg.at("theta_horizon").get<long>());
    MeasuredRotationResult mth = rho_measured(map, th.region, burn, len, plan);
    rec.payload[map.name]["theta_measured"] = mth.to_json();
    add_assert(rec, map.name + "_in_theta_hull_lo", rk.full.min_value(), ">=",
               mth.hull_lo - tol);
    add_assert(rec, map.name + "_in_theta_hull_hi", rk.full.max_value(), "<=",
               mth.hull_hi + tol);
  }
  return rec;
}

ResultRecord suite_algebra() {
  json cfg = load_config("suite_algebra");
  ResultRecord rec;
  rec.config = cfg;
  double y_lo = cfg.at("y_lo").get<double>(), y_hi = cfg.at("y_hi").get<double>();
  int res = cfg.at("grid_res").get<int>();
  long m = cfg.at("m").get<long>(), N = cfg.at("horizon").get<long>();
  double extra = cfg.at("extra_tol").get<double>();
  SeedPlan plan = plan_from(cfg);
  auto estimator = [&](const LiftedAnnulusMap& mp) {
    return rho_K(mp, band_region(y_lo, y_hi, res, res), m, N, plan).full;
  };

  for (const auto& spec : cfg.at("affine_maps")) {
    LiftedAnnulusMap map = map_from_spec(spec);
    for (const auto& pq : cfg.at("pq_pairs")) {
      int p = pq.at(0).get<int>(), q = pq.at(1).get<int>();
      AffineLawReport rep = affine_law_check(map, p, q, estimator,
                                             Defaults::merge_epsilon, extra);
      std::string name = map.name + "_p" + std::to_string(p) + "_q" + std::to_string(q);
      rec.payload["affine"][name] = rep.to_json();
      add_assert(rec, name + "_affine_law", rep.deviation, "<=", rep.tolerance);
    }
  }

  for (const auto& pair : cfg.at("conjugacy")) {
    LiftedAnnulusMap map = map_from_spec(pair.at("map"));
    LiftedAnnulusMap by = map_from_spec(pair.at("by"));
    RotationSetEstimate a = estimator(map);
    RotationSetEstimate b = estimator(conjugate(map, by));
    std::string name = map.name + "_conj_" + by.name;
    rec.payload["conjugacy"][name] = {{"base", a.to_json()}, {"conjugated", b.to_json()}};
    add_assert(rec, name + "_invariance", hausdorff(a, b), "<=",
               cfg.at("conjugacy_tol").get<double>());
  }

  const double lift_tol = 100.0 * Defaults::tol_lift;
  for (const auto& spec : cfg.at("lift_maps")) {
    LiftedAnnulusMap map = map_from_spec(spec);
    LiftValidationReport rep =
        validate_lift(map, Rect{0.0, 1.0, y_lo, y_hi}, 1000, lift_tol);
    rec.payload["lifts"][map.name] = {{"equivariance", rep.max_equivariance_error},
                                      {"inverse", rep.max_inverse_error}};
    add_assert(rec, map.name + "_equivariance", rep.max_equivariance_error, "<=",
               lift_tol);
    add_assert(rec, map.name + "_inverse", rep.max_inverse_error, "<=", lift_tol);
    // cocycle identity on random points, displacements composed two ways
    std::mt19937_64 rng(cfg.value("seed", 7));
    std::uniform_real_distribution<double> UX(0.0, 1.0), UY(y_lo, y_hi);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      CoverPoint z{UX(rng), UY(rng)};
      long n1 = 1 + static_cast<long>(k % 4), n2 = 1 + static_cast<long>((k / 4) % 4);
      OrbitTrace full = displacement(map, z, n1 + n2);
      OrbitTrace first = displacement(map, z, n1);
      OrbitTrace second = displacement(map, first.points.back(), n2);
      worst = std::max(worst, std::abs(full.total_displacement -
                                       first.total_displacement -
                                       second.total_displacement));
    }
    rec.payload["lifts"][map.name]["cocycle"] = worst;
    add_assert(rec, map.name + "_cocycle", worst, "<=", lift_tol);
  }
  return rec;
}

RunOutcome run_suite(const std::string& name) {
  RunOutcome out;
  if (name == "paper-values") out.record = suite_paper_values();
  else if (name == "interval-props") out.record = suite_interval_props();
  else if (name == "theorem-c") out.record = suite_theorem_c();
  else if (name == "structure") out.record = suite_structure();
  else if (name == "hulls") out.record = suite_hulls();
  else if (name == "algebra") out.record = suite_algebra();
  else if (name == "full") {
    ResultRecord merged;
    merged.config = json{{"suite", "full"}};
    const char* parts[] = {"paper-values", "interval-props", "theorem-c",
                           "structure", "hulls", "algebra"};
    for (const char* part : parts) {
      RunOutcome one = run_suite(part);
      merged.payload[part] = one.record.to_json();
      for (const auto& a : one.record.asserts) merged.asserts.push_back(a);
    }
    out.record = merged;
  } else {
    throw SchemaError("unknown suite '" + name + "'");
  }
  if (!out.record.all_pass()) {
    out.exit_code = kExitAssert;
    for (const auto& a : out.record.asserts)
      if (!a.pass) out.message += (out.message.empty() ? "" : "; ") + a.name;
  }
  return out;
}

std::vector<std::string> plot_record(const ResultRecord& rec,
                                     const std::string& out_dir) {
  std::vector<std::string> written;
  std::filesystem::create_directories(out_dir);
  auto emit = [&](const std::string& name, const std::string& svg) {
    std::string path = out_dir + "/" + name + ".svg";
    write_text_file(path, svg);
    written.push_back(path);
  };
  // walk the payload for plottable sections
  std::function<void(const json&, const std::string&)> walk =
      [&](const json& j, const std::string& prefix) {
        if (!j.is_object()) return;
        if (j.contains("per_level")) {
          std::vector<RotationSetEstimate> levels;
          for (const auto& lv : j.at("per_level")) {
            RotationSetEstimate e;
            for (const auto& iv : lv.at("intervals"))
              e.intervals.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
            e.no_samples = lv.value("no_samples", false);
            levels.push_back(e);
          }
          emit(prefix + "staircase", svg_staircase(levels, prefix + "schedule levels"));
          return;
        }
        if (j.contains("rle_rows")) {
          GridRegion r = GridRegion::from_rle_json(j);
          if (r.count() == 0) {
            emit(prefix + "region", svg_placard("no returning orbits"));
          } else {
            SvgLayer layer{&r, "#88aadd"};
            emit(prefix + "region",
                 svg_regions(r.window, {layer}, {}, {}, prefix + "region"));
          }
          return;
        }
        if (j.contains("witness_trace_forward")) {
          std::vector<double> fwd, bwd;
          for (const auto& v : j.at("witness_trace_forward")) fwd.push_back(v.get<double>());
          for (const auto& v : j.at("witness_trace_backward")) bwd.push_back(v.get<double>());
          emit(prefix + "witness", svg_trace(bwd, fwd, prefix + "witness displacement"));
        }
        for (auto it = j.begin(); it != j.end(); ++it)
          walk(it.value(), prefix + it.key() + "_");
      };
  walk(rec.payload, "");
  if (written.empty())
    emit("placard", svg_placard("record contains no plottable sections"));
  return written;
}

}  // namespace annrot
