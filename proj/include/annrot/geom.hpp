#pragma once

#include <cmath>

namespace annrot {

inline constexpr double kTau = 6.283185307179586476925286766559;

// All angular quantities are measured in turns (full revolutions). Rotation
// numbers are then the average lifted x-displacement per iterate.

struct AnnulusPoint {
  double theta = 0.0;  // in [0,1)
  double y = 0.0;
  AnnulusPoint() = default;
  AnnulusPoint(double t, double yy) : theta(t - std::floor(t)), y(yy) {
    if (theta >= 1.0) theta = 0.0;  // guard against frac rounding to 1
  }
};

struct CoverPoint {
  double x = 0.0;  // lifted angle, turns
  double y = 0.0;
};

inline AnnulusPoint project(const CoverPoint& p) { return AnnulusPoint(p.x, p.y); }

inline CoverPoint lift_of(const AnnulusPoint& z, int sheet = 0) {
  return {z.theta + sheet, z.y};
}

struct Rect {
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
};

// Log-polar identification of the punctured plane with the open annulus:
// the plane point with polar coordinates (r, phi) corresponds to
// theta = phi/tau, y = -ln r, so the fixed origin is the y -> +infinity end.
// Rotation values near 0 are reported in plane orientation (counterclockwise
// positive); the chart is orientation-compatible with that convention.
struct PlaneChart {
  static AnnulusPoint from_plane(double re, double im) {
    const double r = std::hypot(re, im);
    const double phi = std::atan2(im, re);
    return AnnulusPoint(phi / kTau, -std::log(r));
  }
  static void to_plane(const AnnulusPoint& z, double& re, double& im) {
    const double r = std::exp(-z.y);
    re = r * std::cos(kTau * z.theta);
    im = r * std::sin(kTau * z.theta);
  }
};

}  // namespace annrot
