#pragma once

#include <cstdint>
#include <vector>

#include "annrot/map.hpp"

namespace annrot {

// An essential curve given as the graph y = g(theta) of a 1-periodic function,
// sampled at evenly spaced nodes (linear interpolation between nodes).
struct GraphCurve {
  std::vector<double> g;  // node i at theta = i / g.size()
  double at(double theta) const;
  double min_y() const;
  double max_y() const;
  static GraphCurve horizontal(double y, int nodes = 256);
};

// Occupancy grid over a rectangular cover window. With wrap_x the window is
// one fundamental domain [0,1) wide and x-arithmetic is T-periodic; without it
// the window is a bounded piece of the cover (used for branches and compact
// sets). Set operations are exact on the bitset; map images are conservative
// outer approximations (corner/center sampling, bounding box, one-cell
// dilation).
struct GridRegion {
  Rect window;
  int nx = 0, ny = 0;
  bool wrap_x = true;
  bool overflow = false;  // an image left a non-wrapping window in x
  std::vector<uint64_t> bits;

  static GridRegion empty(const Rect& w, int nx, int ny, bool wrap);
  static GridRegion full(const Rect& w, int nx, int ny, bool wrap);
  // cells whose closed box meets [y_lo, y_hi] (full x-extent)
  static GridRegion band(const Rect& w, int nx, int ny, bool wrap, double y_lo,
                         double y_hi);
  // cells whose closed box meets the closed region below/above the curve
  static GridRegion below_curve(const Rect& w, int nx, int ny, bool wrap,
                                const GraphCurve& c);
  static GridRegion above_curve(const Rect& w, int nx, int ny, bool wrap,
                                const GraphCurve& c);

  double dx() const { return (window.x_hi - window.x_lo) / nx; }
  double dy() const { return (window.y_hi - window.y_lo) / ny; }
  size_t ncells() const { return static_cast<size_t>(nx) * ny; }
  size_t idx(int i, int j) const { return static_cast<size_t>(j) * nx + i; }
  bool get(int i, int j) const { return bits[idx(i, j) >> 6] >> (idx(i, j) & 63) & 1; }
  void set(int i, int j) { bits[idx(i, j) >> 6] |= uint64_t(1) << (idx(i, j) & 63); }
  void clear(int i, int j) { bits[idx(i, j) >> 6] &= ~(uint64_t(1) << (idx(i, j) & 63)); }
  CoverPoint center(int i, int j) const {
    return {window.x_lo + (i + 0.5) * dx(), window.y_lo + (j + 0.5) * dy()};
  }
  // column index for a cover x (wrapped if wrap_x); -1 when outside
  int col_of(double x) const;
  int row_of(double y) const;
  bool contains(double x, double y, int dilate = 0) const;
  void mark_box(double x0, double x1, double y0, double y1);

  size_t count() const;
  bool empty_region() const { return count() == 0; }
  bool same_geometry(const GridRegion& o) const;
  GridRegion& operator&=(const GridRegion& o);
  GridRegion& operator|=(const GridRegion& o);
  GridRegion& operator-=(const GridRegion& o);
  bool intersects(const GridRegion& o) const;
  bool contains_region(const GridRegion& o) const;  // o subset of this
  bool contains_region_dilated(const GridRegion& o, int dilate) const;
  GridRegion dilated(int cells) const;
  bool touches_x_edge() const;
  // bounding x-range of occupied cells (cover coordinates); undefined if empty
  void occupied_x_range(double& lo, double& hi) const;

  // conservative image under map^steps (direction +1 forward, -1 backward),
  // rendered into the same window; marks overflow when a sampled image lands
  // beyond a non-wrapping window's x-range
  GridRegion image(const LiftedAnnulusMap& map, int direction, long steps = 1) const;

  // 4-connectivity flood fill (x-wrap aware), components ordered by their
  // lexicographically least cell
  std::vector<GridRegion> components() const;

  json summary_json() const;
  // summary plus run-length-encoded rows; round-trips through from_rle_json
  json to_rle_json() const;
  static GridRegion from_rle_json(const json& j);
};

}  // namespace annrot
