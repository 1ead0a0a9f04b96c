#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "errors.hpp"
#include "level.hpp"
#include "surgery.hpp"
#include "tolerances.hpp"

namespace flattile {

namespace {

void add(VerifyReport& rep, const std::string& name, double residual, double tol) {
  rep.checks.push_back({name, residual, tol, residual <= tol});
}

double recompute_area(const FlatSurface& s) {
  double a = 0;
  for (const auto& cyl : s.cylinders)
    for (const auto& r : cyl.rects) a += r.area();
  return a;
}

// Height of the band stack from a cylinder up to the root.
double path_height(const FlatSurface& s, int cyl_id) {
  double h = 0;
  int cur = cyl_id;
  std::set<int> seen;
  while (cur >= 0) {
    if (!seen.insert(cur).second) throw ConsistencyError("cylinder tree has a loop");
    h += s.cylinders[cur].height();
    cur = s.cylinders[cur].parent;
  }
  return h;
}

void check_surface_geometry(VerifyReport& rep, const PlanarComplex& c,
                            const HarmonicField& f, const FlatSurface& s) {
  const double g = Tol::global();
  double E = energy(f, c);

  double area = recompute_area(s);
  add(rep, "energy = area", std::abs(area - E), g * std::max(E, 1e-300));

  // Per-cylinder tiling certificates; report the worst case in units of its
  // own tolerance. Gates scale with the global tolerance: at the default
  // 1e-9 they equal the documented 1e-9 (area, overlap) and 1e-8 (gap).
  double worst_area = 0, worst_overlap = 0, worst_gap = 0;
  double worst_area_tol = 1e-300, worst_overlap_tol = 1e-300, worst_gap_tol = 1e-300;
  for (const auto& cyl : s.cylinders) {
    TilingReport tr = verify_tiling(cyl);
    double scale = std::max(cyl.area(), 1e-300);
    double at = g * scale;
    double ot = g * scale;
    double gt = 10 * g * std::max(cyl.circumference, 1e-300);
    if (tr.area_residual / at > worst_area / worst_area_tol) {
      worst_area = tr.area_residual;
      worst_area_tol = at;
    }
    if (tr.max_overlap / ot > worst_overlap / worst_overlap_tol) {
      worst_overlap = tr.max_overlap;
      worst_overlap_tol = ot;
    }
    if (tr.max_gap / gt > worst_gap / worst_gap_tol) {
      worst_gap = tr.max_gap;
      worst_gap_tol = gt;
    }
  }
  add(rep, "tiling area", worst_area, worst_area_tol);
  add(rep, "tiling overlap", worst_overlap, worst_overlap_tol);
  add(rep, "tiling gap sweep", worst_gap, worst_gap_tol);

  // Rectangle widths carry the parent edge flux.
  double worst_width = 0;
  for (const auto& cyl : s.cylinders)
    for (const auto& r : cyl.rects)
      if (r.edge >= 0 && r.edge < c.edge_count())
        worst_width = std::max(
            worst_width, std::abs(r.width - edge_flux(f, c, r.edge)));
  add(rep, "rectangle width = edge flux", worst_width,
      g * std::max(s.outer_length, 1.0));

  // Boundary lengths against the flux sums.
  double C = outer_flux_length(f, c);
  add(rep, "outer boundary length", std::abs(s.outer_length - C),
      g * std::max(C, 1e-300));
  double worst_inner = 0, worst_inner_tol = 0;
  for (size_t i = 0; i < s.inner_lengths.size(); ++i) {
    double want = std::abs(boundary_flux(f, c, static_cast<int>(i) + 1));
    worst_inner = std::max(worst_inner, std::abs(s.inner_lengths[i] - want));
    worst_inner_tol = std::max(worst_inner_tol, g * std::max(want, 1e-300));
  }
  if (!s.inner_lengths.empty())
    add(rep, "inner boundary lengths", worst_inner, worst_inner_tol);

  // Cone angles: 2(n+1)pi with n = -index, and n+1 children glued there.
  double worst_cone = 0;
  bool cone_struct_ok = true;
  for (const auto& sp : s.singular_points) {
    int n = -sp.index;
    double want = 2.0 * (n + 1) * M_PI;
    worst_cone = std::max(worst_cone, std::abs(sp.cone_angle - want));
    if (static_cast<int>(sp.cylinders.size()) != n + 2) cone_struct_ok = false;
  }
  add(rep, "cone angle = 2(n+1)pi", worst_cone, Tol::cone_angle_abs);
  add(rep, "cone point cylinder count", cone_struct_ok ? 0.0 : 1.0, 0.5);

  // Boundary preservation: an edge leaving the outer boundary has a rectangle
  // whose top lies on the outer circle; an edge reaching an inner boundary
  // has one whose bottom lies on that leaf's bottom circle.
  {
    const double eps = 1e-9 * std::max(s.k, 1.0);
    std::vector<char> top_ok(c.edge_count(), 0), bottom_ok(c.edge_count(), 0);
    std::vector<int> bottom_cyl(c.edge_count(), -1);
    for (const auto& cyl : s.cylinders)
      for (const auto& r : cyl.rects) {
        if (r.edge < 0 || r.edge >= c.edge_count()) continue;
        if (cyl.parent < 0 && std::abs(r.top - s.k) <= eps) top_ok[r.edge] = 1;
        if (cyl.bottom_boundary >= 0 && std::abs(r.bottom) <= eps) {
          bottom_ok[r.edge] = 1;
          bottom_cyl[r.edge] = cyl.bottom_boundary;
        }
      }
    bool ok = true;
    for (int e = 0; e < c.edge_count(); ++e) {
      auto [u, v] = c.edges()[e];
      if (std::abs(f.values[u] - f.values[v]) <= 1e-12 * s.k) continue;  // flat
      int hi = f.values[u] > f.values[v] ? u : v;
      int lo = hi == u ? v : u;
      if (c.boundary_cycle_of(hi) == 0 && !top_ok[e]) ok = false;
      int bc = c.boundary_cycle_of(lo);
      if (bc > 0 && (!bottom_ok[e] || bottom_cyl[e] != bc - 1)) ok = false;
    }
    add(rep, "boundary preservation", ok ? 0.0 : 1.0, 0.5);
  }

  // Height sums along every root-to-leaf path equal k.
  double worst_height = 0;
  for (const auto& cyl : s.cylinders)
    if (cyl.bottom_boundary >= 0)
      worst_height = std::max(worst_height, std::abs(path_height(s, cyl.id) - s.k));
  add(rep, "heights sum to k", worst_height, Tol::height_sum_abs * std::max(s.k, 1.0));

  // Gluing intervals of every child tile its own circle.
  double worst_glue = 0;
  for (const auto& cyl : s.cylinders) {
    if (cyl.parent < 0) continue;
    double total = 0;
    for (const auto& gi : cyl.glue) total += gi.length;
    worst_glue = std::max(worst_glue, std::abs(total - cyl.circumference));
  }
  add(rep, "gluing covers child top", worst_glue,
      g * std::max(s.outer_length, 1.0));
}

}  // namespace

VerifyReport verify_field(const PlanarComplex& c, const HarmonicField& f) {
  VerifyReport rep;
  const double g = Tol::global();

  int maxdeg = 0;
  double maxc = 0;
  for (int v = 0; v < c.vertex_count(); ++v)
    maxdeg = std::max(maxdeg, static_cast<int>(c.neighbors_ccw(v).size()));
  for (double cc : c.conductances()) maxc = std::max(maxc, cc);
  add(rep, "harmonicity residual", f.residual, 1e-10 * f.k * maxdeg * maxc);

  double C = outer_flux_length(f, c);
  double total = boundary_flux(f, c, 0);
  for (int i = 1; i < c.boundary_cycle_count(); ++i) total += boundary_flux(f, c, i);
  add(rep, "total boundary flux = 0", std::abs(total),
      g * std::max(C, 1e-300));

  double E = energy(f, c);
  add(rep, "energy = k * outer flux", std::abs(E - f.k * C),
      g * std::max(E, 1e-300));

  // Maximum principle: interior values strictly inside (0, k).
  double lo = f.k, hi = 0;
  for (int v : c.interior_vertices()) {
    lo = std::min(lo, f.values[v]);
    hi = std::max(hi, f.values[v]);
  }
  bool maxp = c.interior_vertices().empty() || (lo > 0 && hi < f.k);
  add(rep, "maximum principle", maxp ? 0.0 : 1.0, 0.5);
  return rep;
}

VerifyReport verify_surface(const PlanarComplex& c, const HarmonicField& f,
                            const FlatSurface& s) {
  const double g = Tol::global();
  VerifyReport rep = verify_field(c, f);
  check_surface_geometry(rep, c, f, s);

  // Two-sided length equality at every interior cut level.
  std::set<double> levels;
  for (const auto& cyl : s.cylinders)
    if (cyl.bottom_label == "level") levels.insert(cyl.bottom_value);
  double worst = 0, worst_tol = 0;
  TracingMesh mesh(c);
  for (double h : levels) {
    LevelCurve curve = extract_level(f, c, mesh, h);
    TwoSidedLength tsl = two_sided_length(c, f, curve);
    worst = std::max(worst, std::abs(tsl.interior - tsl.exterior));
    worst_tol = std::max(worst_tol, g * std::max(tsl.exterior, 1e-300));
  }
  if (!levels.empty()) add(rep, "two-sided level length", worst, worst_tol);

  // Length constancy: each cylinder's bottom coverage equals its top length.
  double worst_const = 0, worst_const_tol = 0;
  for (const auto& cyl : s.cylinders) {
    double bottom_total = 0;
    for (const auto& r : cyl.rects)
      if (std::abs(r.bottom - cyl.bottom_value) <= 1e-12 * std::max(s.k, 1.0))
        bottom_total += r.width;
    if (cyl.bottom_label == "level") {
      worst_const = std::max(worst_const, std::abs(bottom_total - cyl.circumference));
      worst_const_tol = std::max(
          worst_const_tol, g * std::max(cyl.circumference, 1e-300));
    }
  }
  add(rep, "level length constancy", worst_const, std::max(worst_const_tol, 1e-300));
  return rep;
}

VerifyReport verify_surface_document(const PlanarComplex& c, const Json& surface) {
  FlatSurface s;
  try {
    s = surface_from_json(surface);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw InvalidInput(std::string("surface document: ") + e.what());
  }
  // The document must belong to a network of this shape.
  if (s.m != c.boundary_cycle_count() ||
      s.inner_lengths.size() != c.inner_boundaries().size())
    throw InvalidInput("surface document does not match the network's boundary count");
  if (!(s.k > 0) || std::abs(s.k - c.k()) > 1e-12 * c.k())
    throw InvalidInput("surface document k differs from the network's k");
  for (const auto& cyl : s.cylinders) {
    if (cyl.parent >= static_cast<int>(s.cylinders.size()) ||
        cyl.bottom_boundary >= static_cast<int>(c.inner_boundaries().size()))
      throw InvalidInput("surface document references unknown ids");
    for (const auto& r : cyl.rects)
      if (r.edge < 0 || r.edge >= c.edge_count())
        throw InvalidInput("surface document references an unknown edge");
  }
  HarmonicField f = solve(c, s.k);
  VerifyReport rep = verify_field(c, f);
  check_surface_geometry(rep, c, f, s);

  // The stored energy/area fields must agree with the recomputed ones.
  const double g = Tol::global();
  double E = energy(f, c);
  add(rep, "stored energy", std::abs(s.energy - E), g * std::max(E, 1e-300));
  add(rep, "stored area", std::abs(s.area - recompute_area(s)),
      g * std::max(E, 1e-300));
  return rep;
}

Json verify_report_to_json(const VerifyReport& rep) {
  Json j;
  j["kind"] = "verification";
  j["ok"] = rep.ok();
  Json checks = Json::array();
  for (const auto& chk : rep.checks)
    checks.push_back({{"name", chk.name},
                      {"residual", chk.residual},
                      {"tolerance", chk.tolerance},
                      {"pass", chk.pass}});
  j["checks"] = std::move(checks);
  return j;
}

}  // namespace flattile
