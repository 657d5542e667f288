#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "annrot/geom.hpp"

namespace annrot {

using json = nlohmann::ordered_json;

struct Defaults {
  static constexpr double tol_lift = 1e-9;
  static constexpr double overflow_guard = 1e9;
  static constexpr double merge_epsilon = 1e-2;  // turns
  static constexpr double infinite_cap = 1e3;    // |rho| beyond this sets a flag
};

// Malformed configuration (CLI exit code 2).
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// A mathematical precondition of an operation is violated (CLI exit code 3).
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// A map produced a non-finite value at a concrete point.
struct MapEvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An annulus homeomorphism represented by its lift to the universal cover
// R x R, together with the inverse lift and a certified bound on the
// horizontal displacement over a declared band. Lifts must commute with the
// unit translation T(x,y) = (x+1,y); this is validated by sampling.
struct LiftedAnnulusMap {
  std::string name;
  json params;  // constructor record, serializable into configs/results
  std::function<CoverPoint(const CoverPoint&)> forward_lift;
  std::function<CoverPoint(const CoverPoint&)> inverse_lift;
  double horizontal_bound = 0.0;  // M0 over [band_lo, band_hi]
  double band_lo = -6.0, band_hi = 6.0;

  CoverPoint fwd(const CoverPoint& z) const {
    CoverPoint w = forward_lift(z);
    if (!std::isfinite(w.x) || !std::isfinite(w.y))
      throw MapEvalError("map evaluation failure (forward) at x=" +
                         std::to_string(z.x) + " y=" + std::to_string(z.y));
    return w;
  }
  CoverPoint inv(const CoverPoint& z) const {
    CoverPoint w = inverse_lift(z);
    if (!std::isfinite(w.x) || !std::isfinite(w.y))
      throw MapEvalError("map evaluation failure (inverse) at x=" +
                         std::to_string(z.x) + " y=" + std::to_string(z.y));
    return w;
  }
  // n-th lift iterate, n may be negative (uses the inverse lift).
  CoverPoint iterate(CoverPoint z, long n) const {
    for (long k = 0; k < (n >= 0 ? n : -n); ++k) z = (n >= 0) ? fwd(z) : inv(z);
    return z;
  }
};

struct LiftValidationReport {
  double max_equivariance_error = 0.0;
  double max_inverse_error = 0.0;
  double observed_horizontal_bound = 0.0;
  bool ok = false;
  std::string failure;  // empty when ok
};

// Samples the lift axioms on a deterministic low-discrepancy point set.
LiftValidationReport validate_lift(const LiftedAnnulusMap& map, const Rect& window,
                                   int samples, double tol = Defaults::tol_lift);

struct OrbitTrace {
  std::vector<CoverPoint> points;  // z, f(z), ..., f^n(z) (or inverse orbit)
  bool escaped = false;            // left the overflow guard box
  long escape_step = -1;
  double total_displacement = 0.0;  // p1(last) - p1(first), valid when !escaped
};

// Total lifted x-displacement over n iterates (inverse lift when n < 0),
// with the full orbit trace. Stops early if the orbit leaves the guard box.
OrbitTrace displacement(const LiftedAnnulusMap& map, const CoverPoint& z, long n,
                        double guard = Defaults::overflow_guard);

// rho_n(z) = (p1(f̃^n(z̃)) - p1(z̃)) / n; independent of the chosen lift.
double rho_n(const LiftedAnnulusMap& map, const AnnulusPoint& z, long n);

}  // namespace annrot
