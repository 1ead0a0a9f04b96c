#include "svgout.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "level.hpp"

namespace flattile {

namespace {

struct SvgOut {
  std::ostringstream os;
  double minx = 0, miny = 0, w = 1, h = 1;

  void open(double x0, double y0, double x1, double y1, double pad) {
    minx = x0 - pad;
    miny = y0 - pad;
    w = (x1 - x0) + 2 * pad;
    h = (y1 - y0) + 2 * pad;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << minx << " "
       << miny << " " << w << " " << h << "\" width=\"900\" height=\""
       << (900.0 * h / std::max(w, 1e-12)) << "\">\n";
    os << "<rect x=\"" << minx << "\" y=\"" << miny << "\" width=\"" << w
       << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  }
  void line(Vec2 a, Vec2 b, const std::string& stroke, double width,
            const std::string& extra = "") {
    os << "<line x1=\"" << a.x << "\" y1=\"" << a.y << "\" x2=\"" << b.x
       << "\" y2=\"" << b.y << "\" stroke=\"" << stroke << "\" stroke-width=\""
       << width << "\" " << extra << "/>\n";
  }
  void rect(double x, double y, double rw, double rh, const std::string& fill,
            const std::string& stroke, double sw) {
    os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << rw
       << "\" height=\"" << rh << "\" fill=\"" << fill << "\" stroke=\"" << stroke
       << "\" stroke-width=\"" << sw << "\"/>\n";
  }
  void circle(Vec2 p, double r, const std::string& fill) {
    os << "<circle cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"" << r
       << "\" fill=\"" << fill << "\"/>\n";
  }
  std::string close() {
    os << "</svg>\n";
    return os.str();
  }
};

std::string level_color(double t) {
  // simple blue->red ramp
  int r = static_cast<int>(255 * t);
  int b = static_cast<int>(255 * (1 - t));
  std::ostringstream os;
  os << "rgb(" << r << ",64," << b << ")";
  return os.str();
}

}  // namespace

std::string render_levels_svg(const PlanarComplex& c, const HarmonicField& f,
                              int regular_samples) {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& p : c.vertices()) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  SvgOut svg;
  double pad = 0.05 * std::max(x1 - x0, y1 - y0);
  svg.open(x0, y0, x1, y1, pad);
  double lw = 0.0018 * std::max(x1 - x0, y1 - y0);

  for (int e = 0; e < c.edge_count(); ++e) {
    auto [u, v] = c.edges()[e];
    bool bdry = c.is_boundary_edge(e);
    std::string col = "#cccccc";
    if (bdry) col = c.edge_boundary_cycle(e) == 0 ? "#2255bb" : "#22aa55";
    svg.line(c.position(u), c.position(v), col, bdry ? 2.2 * lw : lw);
  }

  // Level values: critical set plus a uniform sample of regular values.
  std::set<double> values;
  TracingMesh mesh(c);
  bool have_index = true;
  std::vector<std::pair<int, int>> singular;
  try {
    CriticalValues K = critical_values(f, c);
    for (size_t i = 1; i + 1 < K.values.size(); ++i) values.insert(K.values[i]);
    IndexReport rep = index_formula_check(f, c);
    for (const auto& e : rep.entries)
      if (e.index != 0) singular.push_back({e.vertex, e.index});
  } catch (...) {
    have_index = false;
  }
  for (int i = 1; i <= regular_samples; ++i) {
    double h = f.k * i / (regular_samples + 1);
    bool near = false;
    for (double v : f.values)
      if (std::abs(v - h) < 1e-9 * f.k) near = true;
    if (!near) values.insert(h);
  }

  for (double h : values) {
    std::string col = level_color(h / f.k);
    try {
      LevelCurve curve = extract_level(f, c, mesh, h);
      for (const auto& comp : curve.components)
        for (const auto& cyc : comp.cycles)
          for (size_t i = 0; i < cyc.nodes.size(); ++i) {
            Vec2 a = curve.nodes[cyc.nodes[i]].pos;
            Vec2 b = curve.nodes[cyc.nodes[(i + 1) % cyc.nodes.size()]].pos;
            svg.line(a, b, col, 1.6 * lw);
          }
    } catch (...) {
      // degenerate sample value; skip it
    }
  }

  if (have_index)
    for (auto [v, idx] : singular) svg.circle(c.position(v), 4 * lw, "#ee8800");
  return svg.close();
}

std::string render_cylinder_svg(const Cylinder& cyl) {
  const double C = cyl.circumference;
  const double H = std::max(cyl.height(), 1e-12);
  SvgOut svg;
  svg.open(0, 0, C, H, 0.04 * std::max(C, H));
  double lw = 0.0015 * std::max(C, H);

  auto draw_rect = [&](const Rect& r, double sx) {
    double y = cyl.top_value - r.top;  // flip so the top of the band is y = 0
    svg.rect(sx, y, r.width, r.height(), "#f2e8d5", "#555555", lw);
  };
  for (const auto& r : cyl.rects) {
    double s = std::fmod(r.s, C);
    if (s < 0) s += C;
    if (s + r.width <= C) {
      draw_rect(r, s);
    } else {
      draw_rect(r, s);       // clipped visually by the viewBox
      draw_rect(r, s - C);   // wraparound copy
    }
  }
  for (const auto& m : cyl.markers) {
    double s = std::fmod(m.s, C);
    if (s < 0) s += C;
    svg.line({s, H - m.b}, {s, H - m.a}, "#cc2222", 1.5 * lw);
  }
  // seam
  svg.line({0, 0}, {0, H}, "#333333", 1.5 * lw,
           "stroke-dasharray=\"" + std::to_string(0.02 * H) + "\"");
  // top/bottom edges
  svg.line({0, 0}, {C, 0}, "#2255bb", 2 * lw);
  svg.line({0, H}, {C, H}, "#22aa55", 2 * lw);
  for (const auto& g : cyl.bottom_quotient)
    for (double p : g.positions) svg.circle({p, H}, 5 * lw, "#ee8800");
  return svg.close();
}

}  // namespace flattile
