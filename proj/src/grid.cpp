#include "annrot/grid.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "annrot/parallel.hpp"

namespace annrot {

double GraphCurve::at(double theta) const {
  const int n = static_cast<int>(g.size());
  double t = (theta - std::floor(theta)) * n;
  int i = static_cast<int>(t);
  if (i >= n) i = n - 1;
  double frac = t - i;
  return g[i] * (1.0 - frac) + g[(i + 1) % n] * frac;
}

double GraphCurve::min_y() const { return *std::min_element(g.begin(), g.end()); }
double GraphCurve::max_y() const { return *std::max_element(g.begin(), g.end()); }

GraphCurve GraphCurve::horizontal(double y, int nodes) {
  GraphCurve c;
  c.g.assign(nodes, y);
  return c;
}

GridRegion GridRegion::empty(const Rect& w, int nx, int ny, bool wrap) {
  GridRegion r;
  r.window = w;
  r.nx = nx;
  r.ny = ny;
  r.wrap_x = wrap;
  r.bits.assign((r.ncells() + 63) / 64, 0);
  return r;
}

GridRegion GridRegion::full(const Rect& w, int nx, int ny, bool wrap) {
  GridRegion r = empty(w, nx, ny, wrap);
  r.bits.assign(r.bits.size(), ~uint64_t(0));
  // clear the tail beyond ncells
  size_t n = r.ncells();
  if (n & 63) r.bits.back() = (uint64_t(1) << (n & 63)) - 1;
  return r;
}

GridRegion GridRegion::band(const Rect& w, int nx, int ny, bool wrap, double y_lo,
                            double y_hi) {
  GridRegion r = empty(w, nx, ny, wrap);
  for (int j = 0; j < ny; ++j) {
    double c_lo = w.y_lo + j * r.dy();
    double c_hi = c_lo + r.dy();
    if (c_hi < y_lo || c_lo > y_hi) continue;
    for (int i = 0; i < nx; ++i) r.set(i, j);
  }
  return r;
}

GridRegion GridRegion::below_curve(const Rect& w, int nx, int ny, bool wrap,
                                   const GraphCurve& c) {
  GridRegion r = empty(w, nx, ny, wrap);
  for (int i = 0; i < nx; ++i) {
    // conservative: use the larger curve value over the cell's x-extent
    double x0 = w.x_lo + i * r.dx(), x1 = x0 + r.dx();
    double cv = std::max(c.at(x0), std::max(c.at(0.5 * (x0 + x1)), c.at(x1)));
    for (int j = 0; j < ny; ++j) {
      if (w.y_lo + j * r.dy() <= cv) r.set(i, j);
    }
  }
  return r;
}

GridRegion GridRegion::above_curve(const Rect& w, int nx, int ny, bool wrap,
                                   const GraphCurve& c) {
  GridRegion r = empty(w, nx, ny, wrap);
  for (int i = 0; i < nx; ++i) {
    double x0 = w.x_lo + i * r.dx(), x1 = x0 + r.dx();
    double cv = std::min(c.at(x0), std::min(c.at(0.5 * (x0 + x1)), c.at(x1)));
    for (int j = 0; j < ny; ++j) {
      if (w.y_lo + (j + 1) * r.dy() >= cv) r.set(i, j);
    }
  }
  return r;
}

int GridRegion::col_of(double x) const {
  double t = (x - window.x_lo) / dx();
  if (wrap_x) {
    double w = nx;  // window is one period wide in units of cells
    t -= std::floor(t / w) * w;
  }
  int i = static_cast<int>(std::floor(t));
  if (i < 0 || i >= nx) return -1;
  return i;
}

int GridRegion::row_of(double y) const {
  int j = static_cast<int>(std::floor((y - window.y_lo) / dy()));
  if (j < 0 || j >= ny) return -1;
  return j;
}

bool GridRegion::contains(double x, double y, int dilate) const {
  double tx = (x - window.x_lo) / dx();
  double ty = (y - window.y_lo) / dy();
  if (wrap_x) tx -= std::floor(tx / nx) * nx;
  int i = static_cast<int>(std::floor(tx));
  int j = static_cast<int>(std::floor(ty));
  for (int dj = -dilate; dj <= dilate; ++dj) {
    int jj = j + dj;
    if (jj < 0 || jj >= ny) continue;
    for (int di = -dilate; di <= dilate; ++di) {
      int ii = i + di;
      if (wrap_x) ii = ((ii % nx) + nx) % nx;
      if (ii < 0 || ii >= nx) continue;
      if (get(ii, jj)) return true;
    }
  }
  return false;
}

void GridRegion::mark_box(double x0, double x1, double y0, double y1) {
  int j0 = static_cast<int>(std::floor((y0 - window.y_lo) / dy()));
  int j1 = static_cast<int>(std::floor((y1 - window.y_lo) / dy()));
  j0 = std::max(j0, 0);
  j1 = std::min(j1, ny - 1);
  if (j0 > j1) return;
  if (wrap_x && x1 - x0 >= (window.x_hi - window.x_lo)) {
    for (int j = j0; j <= j1; ++j)
      for (int i = 0; i < nx; ++i) set(i, j);
    return;
  }
  long i0 = static_cast<long>(std::floor((x0 - window.x_lo) / dx()));
  long i1 = static_cast<long>(std::floor((x1 - window.x_lo) / dx()));
  if (!wrap_x) {
    if (i1 < 0 || i0 >= nx) { overflow = true; return; }
    if (i0 < 0 || i1 >= nx) overflow = true;
    i0 = std::max<long>(i0, 0);
    i1 = std::min<long>(i1, nx - 1);
  }
  for (int j = j0; j <= j1; ++j)
    for (long i = i0; i <= i1; ++i) {
      int ii = wrap_x ? static_cast<int>(((i % nx) + nx) % nx) : static_cast<int>(i);
      set(ii, j);
    }
}

size_t GridRegion::count() const {
  size_t c = 0;
  for (uint64_t w : bits) c += static_cast<size_t>(__builtin_popcountll(w));
  return c;
}

bool GridRegion::same_geometry(const GridRegion& o) const {
  return nx == o.nx && ny == o.ny && wrap_x == o.wrap_x &&
         std::abs(window.x_lo - o.window.x_lo) < 1e-12 &&
         std::abs(window.x_hi - o.window.x_hi) < 1e-12 &&
         std::abs(window.y_lo - o.window.y_lo) < 1e-12 &&
         std::abs(window.y_hi - o.window.y_hi) < 1e-12;
}

GridRegion& GridRegion::operator&=(const GridRegion& o) {
  for (size_t k = 0; k < bits.size(); ++k) bits[k] &= o.bits[k];
  return *this;
}
GridRegion& GridRegion::operator|=(const GridRegion& o) {
  for (size_t k = 0; k < bits.size(); ++k) bits[k] |= o.bits[k];
  return *this;
}
GridRegion& GridRegion::operator-=(const GridRegion& o) {
  for (size_t k = 0; k < bits.size(); ++k) bits[k] &= ~o.bits[k];
  return *this;
}

bool GridRegion::intersects(const GridRegion& o) const {
  for (size_t k = 0; k < bits.size(); ++k)
    if (bits[k] & o.bits[k]) return true;
  return false;
}

bool GridRegion::contains_region(const GridRegion& o) const {
  for (size_t k = 0; k < bits.size(); ++k)
    if (o.bits[k] & ~bits[k]) return false;
  return true;
}

bool GridRegion::contains_region_dilated(const GridRegion& o, int dilate) const {
  if (dilate == 0) return contains_region(o);
  return dilated(dilate).contains_region(o);
}

GridRegion GridRegion::dilated(int cells) const {
  GridRegion r = *this;
  for (int pass = 0; pass < cells; ++pass) {
    GridRegion src = r;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (src.get(i, j)) continue;
        bool on = false;
        for (int d = 0; d < 4 && !on; ++d) {
          static const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
          int ii = i + di[d], jj = j + dj[d];
          if (wrap_x) ii = (ii + nx) % nx;
          if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
          on = src.get(ii, jj);
        }
        if (on) r.set(i, j);
      }
  }
  return r;
}

bool GridRegion::touches_x_edge() const {
  if (wrap_x) return false;
  for (int j = 0; j < ny; ++j)
    if (get(0, j) || get(nx - 1, j)) return true;
  return false;
}

void GridRegion::occupied_x_range(double& lo, double& hi) const {
  lo = 1e300;
  hi = -1e300;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (get(i, j)) {
        lo = std::min(lo, window.x_lo + i * dx());
        hi = std::max(hi, window.x_lo + (i + 1) * dx());
      }
}

GridRegion GridRegion::image(const LiftedAnnulusMap& map, int direction,
                             long steps) const {
  GridRegion out = empty(window, nx, ny, wrap_x);
  out.overflow = overflow;
  // collect occupied cells, map corner+center samples in parallel
  std::vector<std::pair<int, int>> cells;
  cells.reserve(count());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (get(i, j)) cells.emplace_back(i, j);
  struct Box { double x0, x1, y0, y1; };
  std::vector<Box> boxes(cells.size());
  const long n = direction >= 0 ? steps : -steps;
  parallel_for(cells.size(), [&](size_t k) {
    auto [i, j] = cells[k];
    double x0 = window.x_lo + i * dx(), y0 = window.y_lo + j * dy();
    const double xs[3] = {x0, x0 + 0.5 * dx(), x0 + dx()};
    const double ys[3] = {y0, y0 + 0.5 * dy(), y0 + dy()};
    Box b{1e300, -1e300, 1e300, -1e300};
    const int pick[5][2] = {{0, 0}, {2, 0}, {0, 2}, {2, 2}, {1, 1}};
    for (auto& p : pick) {
      CoverPoint w = map.iterate({xs[p[0]], ys[p[1]]}, n);
      b.x0 = std::min(b.x0, w.x);
      b.x1 = std::max(b.x1, w.x);
      b.y0 = std::min(b.y0, w.y);
      b.y1 = std::max(b.y1, w.y);
    }
    boxes[k] = b;
  });
  for (const Box& b : boxes)
    out.mark_box(b.x0 - dx(), b.x1 + dx(), b.y0 - dy(), b.y1 + dy());
  return out;
}

std::vector<GridRegion> GridRegion::components() const {
  std::vector<GridRegion> out;
  std::vector<int32_t> label(ncells(), -1);
  int32_t next = 0;
  for (int j0 = 0; j0 < ny; ++j0)
    for (int i0 = 0; i0 < nx; ++i0) {
      if (!get(i0, j0) || label[idx(i0, j0)] >= 0) continue;
      GridRegion comp = empty(window, nx, ny, wrap_x);
      std::queue<std::pair<int, int>> q;
      q.emplace(i0, j0);
      label[idx(i0, j0)] = next;
      comp.set(i0, j0);
      while (!q.empty()) {
        auto [i, j] = q.front();
        q.pop();
        static const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          int ii = i + di[d], jj = j + dj[d];
          if (wrap_x) ii = (ii + nx) % nx;
          if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
          if (!get(ii, jj) || label[idx(ii, jj)] >= 0) continue;
          label[idx(ii, jj)] = next;
          comp.set(ii, jj);
          q.emplace(ii, jj);
        }
      }
      out.push_back(std::move(comp));
      ++next;
    }
  return out;
}

json GridRegion::summary_json() const {
  json j;
  j["window"] = {window.x_lo, window.x_hi, window.y_lo, window.y_hi};
  j["resolution"] = {nx, ny};
  j["wrap_x"] = wrap_x;
  j["occupied_cells"] = count();
  j["overflow"] = overflow;
  return j;
}

json GridRegion::to_rle_json() const {
  json j = summary_json();
  json rows = json::array();
  for (int row = 0; row < ny; ++row) {
    json runs = json::array();
    int i = 0;
    while (i < nx) {
      if (!get(i, row)) { ++i; continue; }
      int run = i;
      while (run < nx && get(run, row)) ++run;
      runs.push_back({i, run - i});
      i = run;
    }
    rows.push_back(runs);
  }
  j["rle_rows"] = rows;
  return j;
}

GridRegion GridRegion::from_rle_json(const json& j) {
  auto w = j.at("window");
  auto res = j.at("resolution");
  GridRegion r = empty(Rect{w.at(0).get<double>(), w.at(1).get<double>(),
                            w.at(2).get<double>(), w.at(3).get<double>()},
                       res.at(0).get<int>(), res.at(1).get<int>(),
                       j.at("wrap_x").get<bool>());
  r.overflow = j.value("overflow", false);
  const auto& rows = j.at("rle_rows");
  for (int row = 0; row < r.ny; ++row)
    for (const auto& run : rows.at(row)) {
      int start = run.at(0).get<int>(), len = run.at(1).get<int>();
      for (int i = start; i < start + len; ++i) r.set(i, row);
    }
  return r;
}

}  // namespace annrot
