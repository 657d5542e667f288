#pragma once

#include "annrot/grid.hpp"
#include "annrot/rotset.hpp"

namespace annrot {

// Staircase plot of per-level interval estimates (one row per schedule level,
// deepest at the bottom). Deterministic bytes for a given input.
std::string svg_staircase(const std::vector<RotationSetEstimate>& levels,
                          const std::string& title);

struct SvgLayer {
  const GridRegion* region = nullptr;
  std::string fill;  // CSS color
};

// Region raster overlay: run-length rectangles per layer, graph curves as
// polylines, optional witness orbit trace (x vs y polyline with markers).
std::string svg_regions(const Rect& window, const std::vector<SvgLayer>& layers,
                        const std::vector<const GraphCurve*>& curves,
                        const std::vector<CoverPoint>& witness_trace,
                        const std::string& title);

// Witness displacement trace: p1 against iterate count.
std::string svg_trace(const std::vector<double>& backward_p1,
                      const std::vector<double>& forward_p1,
                      const std::string& title);

// Annotated placard for empty results ("no returning orbits").
std::string svg_placard(const std::string& message);

}  // namespace annrot
