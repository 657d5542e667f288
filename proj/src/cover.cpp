#include "annrot/map.hpp"

#include <algorithm>
#include <cmath>

namespace annrot {

namespace {
// 2-D Kronecker lattice (plastic-number rotations): deterministic, well
// spread, no RNG state to thread through.
inline double frac(double v) { return v - std::floor(v); }
}  // namespace

LiftValidationReport validate_lift(const LiftedAnnulusMap& map, const Rect& window,
                                   int samples, double tol) {
  if (samples < 1) throw PreconditionError("validate_lift: samples must be >= 1");
  if (!(window.x_hi > window.x_lo) || !(window.y_hi > window.y_lo))
    throw PreconditionError("validate_lift: empty window");

  constexpr double a1 = 0.7548776662466927;  // 1/rho, rho^3 = rho + 1
  constexpr double a2 = 0.5698402909980532;  // 1/rho^2
  LiftValidationReport rep;
  try {
    for (int i = 0; i < samples; ++i) {
      CoverPoint z{window.x_lo + frac(0.5 + a1 * i) * (window.x_hi - window.x_lo),
                   window.y_lo + frac(0.5 + a2 * i) * (window.y_hi - window.y_lo)};
      CoverPoint w = map.fwd(z);
      CoverPoint wT = map.fwd({z.x + 1.0, z.y});
      double eq = std::max(std::abs(wT.x - w.x - 1.0), std::abs(wT.y - w.y));
      CoverPoint back = map.inv(w);
      double ie = std::max(std::abs(back.x - z.x), std::abs(back.y - z.y));
      rep.max_equivariance_error = std::max(rep.max_equivariance_error, eq);
      rep.max_inverse_error = std::max(rep.max_inverse_error, ie);
      rep.observed_horizontal_bound =
          std::max(rep.observed_horizontal_bound, std::abs(w.x - z.x));
    }
  } catch (const MapEvalError& e) {
    rep.failure = e.what();
    return rep;
  }
  if (rep.max_equivariance_error > tol)
    rep.failure = "equivariance error exceeds tol_lift";
  else if (rep.max_inverse_error > tol)
    rep.failure = "inverse consistency error exceeds tol_lift";
  rep.ok = rep.failure.empty();
  return rep;
}

OrbitTrace displacement(const LiftedAnnulusMap& map, const CoverPoint& z, long n,
                        double guard) {
  OrbitTrace tr;
  const long steps = std::abs(n);
  tr.points.reserve(static_cast<size_t>(steps) + 1);
  tr.points.push_back(z);
  CoverPoint cur = z;
  for (long k = 1; k <= steps; ++k) {
    cur = (n >= 0) ? map.fwd(cur) : map.inv(cur);
    tr.points.push_back(cur);
    if (std::abs(cur.x) > guard || std::abs(cur.y) > guard) {
      tr.escaped = true;
      tr.escape_step = k;
      break;
    }
  }
  tr.total_displacement = tr.points.back().x - z.x;
  return tr;
}

double rho_n(const LiftedAnnulusMap& map, const AnnulusPoint& z, long n) {
  if (n < 1) throw PreconditionError("rho_n: n must be >= 1");
  OrbitTrace tr = displacement(map, lift_of(z), n);
  if (tr.escaped)
    throw MapEvalError("rho_n: orbit escape at step " + std::to_string(tr.escape_step));
  return tr.total_displacement / static_cast<double>(n);
}

}  // namespace annrot
