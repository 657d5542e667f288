#include "annrot/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace annrot {

namespace {

constexpr double kW = 800.0, kH = 500.0, kPad = 50.0;

std::ostringstream make_doc() {
  std::ostringstream s;
  s.precision(6);
  s << std::fixed;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)kW
    << "\" height=\"" << (int)kH << "\" viewBox=\"0 0 " << (int)kW << " " << (int)kH
    << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return s;
}

void add_title(std::ostringstream& s, const std::string& title) {
  s << "<text x=\"" << kPad << "\" y=\"28\" font-family=\"monospace\" "
       "font-size=\"16\">" << title << "</text>\n";
}

}  // namespace

std::string svg_staircase(const std::vector<RotationSetEstimate>& levels,
                          const std::string& title) {
  if (levels.empty()) return svg_placard("no schedule levels");
  double lo = 1e300, hi = -1e300;
  for (const auto& e : levels)
    for (const auto& iv : e.intervals) {
      lo = std::min(lo, iv.lo);
      hi = std::max(hi, iv.hi);
    }
  if (lo > hi) return svg_placard("no returning orbits");
  double span = std::max(hi - lo, 1e-6);
  lo -= 0.05 * span;
  hi += 0.05 * span;
  auto X = [&](double v) { return kPad + (v - lo) / (hi - lo) * (kW - 2 * kPad); };
  auto s = make_doc();
  add_title(s, title);
  double row_h = (kH - 2 * kPad) / levels.size();
  for (size_t k = 0; k < levels.size(); ++k) {
    double y = kPad + (k + 0.5) * row_h;
    s << "<line x1=\"" << kPad << "\" y1=\"" << y << "\" x2=\"" << (kW - kPad)
      << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    for (const auto& iv : levels[k].intervals)
      s << "<line x1=\"" << X(iv.lo) << "\" y1=\"" << y << "\" x2=\""
        << X(std::max(iv.hi, iv.lo + (hi - lo) * 1e-3)) << "\" y2=\"" << y
        << "\" stroke=\"#003366\" stroke-width=\"6\"/>\n";
    s << "<text x=\"4\" y=\"" << (y + 4) << "\" font-family=\"monospace\" "
         "font-size=\"11\">L" << k << "</text>\n";
  }
  s << "<text x=\"" << kPad << "\" y=\"" << (kH - 14)
    << "\" font-family=\"monospace\" font-size=\"12\">" << lo << "</text>\n";
  s << "<text x=\"" << (kW - kPad - 60) << "\" y=\"" << (kH - 14)
    << "\" font-family=\"monospace\" font-size=\"12\">" << hi << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::string svg_regions(const Rect& window, const std::vector<SvgLayer>& layers,
                        const std::vector<const GraphCurve*>& curves,
                        const std::vector<CoverPoint>& witness_trace,
                        const std::string& title) {
  auto s = make_doc();
  add_title(s, title);
  auto X = [&](double x) {
    return kPad + (x - window.x_lo) / (window.x_hi - window.x_lo) * (kW - 2 * kPad);
  };
  auto Y = [&](double y) {
    return kH - kPad - (y - window.y_lo) / (window.y_hi - window.y_lo) * (kH - 2 * kPad);
  };
  for (const auto& layer : layers) {
    const GridRegion& r = *layer.region;
    for (int j = 0; j < r.ny; ++j) {
      int i = 0;
      while (i < r.nx) {
        if (!r.get(i, j)) { ++i; continue; }
        int run = i;
        while (run < r.nx && r.get(run, j)) ++run;
        double x0 = r.window.x_lo + i * r.dx(), x1 = r.window.x_lo + run * r.dx();
        double y0 = r.window.y_lo + j * r.dy(), y1 = y0 + r.dy();
        s << "<rect x=\"" << X(x0) << "\" y=\"" << Y(y1) << "\" width=\""
          << (X(x1) - X(x0)) << "\" height=\"" << (Y(y0) - Y(y1)) << "\" fill=\""
          << layer.fill << "\"/>\n";
        i = run;
      }
    }
  }
  for (const auto* c : curves) {
    s << "<polyline fill=\"none\" stroke=\"#cc0000\" stroke-width=\"1.5\" points=\"";
    const int n = 256;
    for (int k = 0; k <= n; ++k) {
      double x = window.x_lo + (window.x_hi - window.x_lo) * k / n;
      s << X(x) << "," << Y(c->at(x)) << " ";
    }
    s << "\"/>\n";
  }
  if (!witness_trace.empty()) {
    s << "<polyline fill=\"none\" stroke=\"#007700\" stroke-width=\"1\" points=\"";
    for (const auto& p : witness_trace) s << X(p.x) << "," << Y(p.y) << " ";
    s << "\"/>\n";
    s << "<circle cx=\"" << X(witness_trace.front().x) << "\" cy=\""
      << Y(witness_trace.front().y) << "\" r=\"4\" fill=\"#007700\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string svg_trace(const std::vector<double>& backward_p1,
                      const std::vector<double>& forward_p1,
                      const std::string& title) {
  double lo = 1e300, hi = -1e300;
  for (double v : backward_p1) { lo = std::min(lo, v); hi = std::max(hi, v); }
  for (double v : forward_p1) { lo = std::min(lo, v); hi = std::max(hi, v); }
  if (lo > hi) return svg_placard("empty trace");
  double span = std::max(hi - lo, 1e-9);
  long nb = static_cast<long>(backward_p1.size());
  long nf = static_cast<long>(forward_p1.size());
  auto X = [&](long n) {  // n in [-nb, nf]
    return kPad + static_cast<double>(n + nb) / (nb + nf) * (kW - 2 * kPad);
  };
  auto Y = [&](double v) { return kH - kPad - (v - lo) / span * (kH - 2 * kPad); };
  auto s = make_doc();
  add_title(s, title);
  s << "<polyline fill=\"none\" stroke=\"#003366\" stroke-width=\"1\" points=\"";
  for (long n = nb - 1; n >= 0; --n) s << X(-n) << "," << Y(backward_p1[n]) << " ";
  for (long n = 0; n < nf; ++n) s << X(n) << "," << Y(forward_p1[n]) << " ";
  s << "\"/>\n";
  s << "<line x1=\"" << X(0) << "\" y1=\"" << kPad << "\" x2=\"" << X(0)
    << "\" y2=\"" << (kH - kPad) << "\" stroke=\"#cccccc\"/>\n";
  s << "</svg>\n";
  return s.str();
}

std::string svg_placard(const std::string& message) {
  auto s = make_doc();
  s << "<text x=\"" << (kW / 2) << "\" y=\"" << (kH / 2)
    << "\" font-family=\"monospace\" font-size=\"20\" text-anchor=\"middle\">"
    << message << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace annrot
