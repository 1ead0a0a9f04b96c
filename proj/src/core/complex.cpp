#include "complex.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"

namespace flattile {

namespace {

std::pair<int, int> key(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

}  // namespace

PlanarComplex::PlanarComplex(std::vector<Vec2> vertices,
                             std::vector<std::pair<int, int>> edges,
                             std::vector<std::vector<int>> faces,
                             std::vector<int> outer_boundary,
                             std::vector<std::vector<int>> inner_boundaries,
                             std::vector<double> conductance, double k)
    : vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      faces_(std::move(faces)),
      outer_boundary_(std::move(outer_boundary)),
      inner_boundaries_(std::move(inner_boundaries)),
      conductance_(std::move(conductance)),
      k_(k) {
  const int nv = vertex_count();
  auto in_range = [nv](int v) { return v >= 0 && v < nv; };

  for (size_t e = 0; e < edges_.size(); ++e) {
    auto [u, v] = edges_[e];
    if (in_range(u) && in_range(v) && u != v)
      edge_index_.emplace(key(u, v), static_cast<int>(e));
  }

  adj_ccw_.assign(nv, {});
  adj_edges_ccw_.assign(nv, {});
  for (size_t e = 0; e < edges_.size(); ++e) {
    auto [u, v] = edges_[e];
    if (!in_range(u) || !in_range(v) || u == v) continue;
    adj_ccw_[u].push_back(v);
    adj_edges_ccw_[u].push_back(static_cast<int>(e));
    adj_ccw_[v].push_back(u);
    adj_edges_ccw_[v].push_back(static_cast<int>(e));
  }
  // Sort each fan counterclockwise; ties broken by neighbor id so the order
  // is deterministic even on degenerate coordinates.
  for (int v = 0; v < nv; ++v) {
    auto& nb = adj_ccw_[v];
    auto& ne = adj_edges_ccw_[v];
    std::vector<int> idx(nb.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      double aa = angle_of(vertices_[nb[a]] - vertices_[v]);
      double ab = angle_of(vertices_[nb[b]] - vertices_[v]);
      if (aa != ab) return aa < ab;
      return nb[a] < nb[b];
    });
    std::vector<int> nb2(nb.size()), ne2(ne.size());
    for (size_t i = 0; i < idx.size(); ++i) {
      nb2[i] = nb[idx[i]];
      ne2[i] = ne[idx[i]];
    }
    nb = std::move(nb2);
    ne = std::move(ne2);
  }

  edge_faces_.assign(edges_.size(), {});
  for (size_t f = 0; f < faces_.size(); ++f) {
    const auto& cyc = faces_[f];
    for (size_t i = 0; i < cyc.size(); ++i) {
      int u = cyc[i], v = cyc[(i + 1) % cyc.size()];
      if (!in_range(u) || !in_range(v)) continue;
      auto it = edge_index_.find(key(u, v));
      if (it != edge_index_.end()) edge_faces_[it->second].push_back(static_cast<int>(f));
    }
  }

  boundary_of_vertex_.assign(nv, -1);
  edge_boundary_cycle_.assign(edges_.size(), -1);
  auto mark_cycle = [&](const std::vector<int>& cyc, int bid) {
    for (size_t i = 0; i < cyc.size(); ++i) {
      int u = cyc[i], v = cyc[(i + 1) % cyc.size()];
      if (in_range(u)) boundary_of_vertex_[u] = bid;
      if (in_range(u) && in_range(v)) {
        auto it = edge_index_.find(key(u, v));
        if (it != edge_index_.end()) edge_boundary_cycle_[it->second] = bid;
      }
    }
  };
  mark_cycle(outer_boundary_, 0);
  for (size_t i = 0; i < inner_boundaries_.size(); ++i)
    mark_cycle(inner_boundaries_[i], static_cast<int>(i) + 1);
}

int PlanarComplex::edge_index(int u, int v) const {
  auto it = edge_index_.find(key(u, v));
  return it == edge_index_.end() ? -1 : it->second;
}

std::vector<int> PlanarComplex::interior_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < vertex_count(); ++v)
    if (!is_boundary_vertex(v)) out.push_back(v);
  return out;
}

ValidationReport PlanarComplex::validate() const {
  ValidationReport rep;
  const int nv = vertex_count();
  auto in_range = [nv](int v) { return v >= 0 && v < nv; };
  auto issue = [&rep](std::string code, std::string msg) -> ValidationIssue& {
    rep.issues.push_back({std::move(code), std::move(msg), {}, {}, {}});
    return rep.issues.back();
  };

  // Edge sanity.
  {
    std::set<std::pair<int, int>> seen;
    for (size_t e = 0; e < edges_.size(); ++e) {
      auto [u, v] = edges_[e];
      if (!in_range(u) || !in_range(v))
        issue("edge-bad-endpoint", "edge references an unknown vertex").edges.push_back((int)e);
      else if (u == v)
        issue("edge-loop", "edge is a self-loop").edges.push_back((int)e);
      else if (!seen.insert(key(u, v)).second)
        issue("edge-duplicate", "edge listed twice").edges.push_back((int)e);
    }
  }

  // Conductances.
  for (size_t e = 0; e < conductance_.size(); ++e) {
    double c = conductance_[e];
    if (!(c > 0) || !std::isfinite(c))
      issue("conductance-nonpositive", "conductance must be positive and finite")
          .edges.push_back((int)e);
  }
  if (conductance_.size() != edges_.size())
    issue("conductance-count", "conductance array length differs from edge count");
  if (!(k_ > 0) || !std::isfinite(k_))
    issue("k-nonpositive", "boundary value k must be positive and finite");

  // Faces: size, edges present, counterclockwise with positive area.
  for (size_t f = 0; f < faces_.size(); ++f) {
    const auto& cyc = faces_[f];
    if (cyc.size() != 3 && cyc.size() != 4) {
      issue("face-size", "face is not a triangle or quadrilateral").faces.push_back((int)f);
      continue;
    }
    bool broken = false;
    for (size_t i = 0; i < cyc.size(); ++i) {
      int u = cyc[i], v = cyc[(i + 1) % cyc.size()];
      if (!in_range(u) || !in_range(v) || edge_index(u, v) < 0) {
        issue("face-missing-edge", "face references a missing edge").faces.push_back((int)f);
        broken = true;
        break;
      }
    }
    if (broken) continue;
    std::vector<Vec2> pts;
    for (int v : cyc) pts.push_back(vertices_[v]);
    if (polygon_signed_area(pts) <= 0)
      issue("face-orientation", "face is not counterclockwise / has nonpositive area")
          .faces.push_back((int)f);
  }

  // Edge/face incidence: interior edges in exactly 2 faces, boundary in 1.
  for (size_t e = 0; e < edges_.size(); ++e) {
    size_t nf = edge_faces_[e].size();
    bool bdry = edge_boundary_cycle_[e] >= 0;
    if (bdry && nf != 1)
      issue("boundary-edge-faces", "boundary edge not in exactly one face").edges.push_back((int)e);
    if (!bdry && nf != 2)
      issue("interior-edge-faces", "interior edge not in exactly two faces").edges.push_back((int)e);
  }

  // Boundary cycles: simple, made of edges, vertex-disjoint, oriented.
  {
    std::set<int> used;
    auto check_cycle = [&](const std::vector<int>& cyc, int bid) {
      std::string where = bid == 0 ? "outer boundary" : "inner boundary";
      if (cyc.size() < 3) {
        issue("boundary-short", where + " cycle has fewer than 3 vertices");
        return;
      }
      std::set<int> local;
      for (int v : cyc) {
        if (!in_range(v)) {
          issue("boundary-bad-vertex", where + " references an unknown vertex");
          return;
        }
        if (!local.insert(v).second)
          issue("boundary-not-simple", where + " cycle repeats a vertex").vertices.push_back(v);
        if (!used.insert(v).second)
          issue("boundary-overlap", "boundary cycles share a vertex").vertices.push_back(v);
      }
      for (size_t i = 0; i < cyc.size(); ++i) {
        if (edge_index(cyc[i], cyc[(i + 1) % cyc.size()]) < 0)
          issue("boundary-missing-edge", where + " uses a non-edge").vertices.push_back(cyc[i]);
      }
      std::vector<Vec2> pts;
      for (int v : cyc)
        if (in_range(v)) pts.push_back(vertices_[v]);
      double area = polygon_signed_area(pts);
      if (bid == 0 && area <= 0)
        issue("boundary-orientation", "outer boundary must be counterclockwise");
      if (bid > 0 && area >= 0)
        issue("boundary-orientation", "inner boundary must be clockwise");
    };
    check_cycle(outer_boundary_, 0);
    for (size_t i = 0; i < inner_boundaries_.size(); ++i)
      check_cycle(inner_boundaries_[i], static_cast<int>(i) + 1);
  }

  // Containment: the outer cycle must enclose every inner cycle.
  {
    std::vector<Vec2> outer;
    for (int v : outer_boundary_)
      if (in_range(v)) outer.push_back(vertices_[v]);
    if (outer.size() >= 3) {
      for (size_t i = 0; i < inner_boundaries_.size(); ++i) {
        for (int v : inner_boundaries_[i]) {
          if (in_range(v) && !point_in_polygon(vertices_[v], outer)) {
            issue("boundary-containment",
                  "inner boundary not enclosed by the outer boundary")
                .vertices.push_back(v);
            break;
          }
        }
      }
    }
  }

  // Euler characteristic.
  {
    int m = boundary_cycle_count();
    if (euler_characteristic() != 2 - m)
      issue("euler-characteristic",
            "edge count vs. Euler characteristic: V - E + F != 2 - m");
  }

  // Connectivity (the solver needs one component).
  if (nv > 0) {
    std::vector<int> seen(nv, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int cnt = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj_ccw_[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++cnt;
          stack.push_back(w);
        }
    }
    if (cnt != nv) issue("disconnected", "graph is not connected");
  }

  // Straight-line embedding: edges meet only at shared endpoints. Grid hash
  // keeps this near-linear on meshes.
  {
    double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
    for (const auto& p : vertices_) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
    double w = std::max(maxx - minx, 1e-12), h = std::max(maxy - miny, 1e-12);
    int gridn = std::max(1, (int)std::sqrt((double)edges_.size()));
    auto cell_range = [&](size_t e, int& x0, int& x1, int& y0, int& y1) {
      auto [u, v] = edges_[e];
      Vec2 a = vertices_[u], b = vertices_[v];
      x0 = (int)((std::min(a.x, b.x) - minx) / w * gridn);
      x1 = (int)((std::max(a.x, b.x) - minx) / w * gridn);
      y0 = (int)((std::min(a.y, b.y) - miny) / h * gridn);
      y1 = (int)((std::max(a.y, b.y) - miny) / h * gridn);
      x0 = std::clamp(x0, 0, gridn - 1);
      x1 = std::clamp(x1, 0, gridn - 1);
      y0 = std::clamp(y0, 0, gridn - 1);
      y1 = std::clamp(y1, 0, gridn - 1);
    };
    std::map<std::pair<int, int>, std::vector<int>> buckets;
    for (size_t e = 0; e < edges_.size(); ++e) {
      auto [u, v] = edges_[e];
      if (!in_range(u) || !in_range(v) || u == v) continue;
      int x0, x1, y0, y1;
      cell_range(e, x0, x1, y0, y1);
      for (int gx = x0; gx <= x1; ++gx)
        for (int gy = y0; gy <= y1; ++gy) buckets[{gx, gy}].push_back((int)e);
    }
    std::set<std::pair<int, int>> reported;
    for (auto& [cell, list] : buckets) {
      for (size_t i = 0; i < list.size(); ++i)
        for (size_t j = i + 1; j < list.size(); ++j) {
          int e1 = list[i], e2 = list[j];
          auto [a1, b1] = edges_[e1];
          auto [a2, b2] = edges_[e2];
          if (a1 == a2 || a1 == b2 || b1 == a2 || b1 == b2) continue;
          if (segments_cross(vertices_[a1], vertices_[b1], vertices_[a2], vertices_[b2])) {
            auto k2 = std::minmax(e1, e2);
            if (reported.insert({k2.first, k2.second}).second) {
              auto& is = issue("embedding-crossing", "edges cross away from shared vertices");
              is.edges = {k2.first, k2.second};
            }
          }
        }
    }
  }

  return rep;
}

}  // namespace flattile
