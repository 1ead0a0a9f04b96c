#include "surgery.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"
#include "tolerances.hpp"

namespace flattile {

namespace {

// Split conductance so the sub-edge carries the parent flux: for a point x on
// (u,v) with value g(x), ct(u,x) (g(u) - g(x)) = c (g(u) - g(v)).
double split_conductance(double c, double g_from, double g_other, double g_at) {
  return c * (g_from - g_other) / (g_from - g_at);
}

struct CurveInfo {
  // per component in use
  std::vector<int> comps;
  // crossing node -> (component, cycle) and new vertex id
  std::map<int, std::pair<int, int>> node_cycle;
  std::map<int, int> node_vid;  // crossing nodes on network edges
  std::set<int> on_vertices;    // vertices lying on the curve
  std::map<int, int> crossed_edge_node;  // parent edge -> node id
};

CurveInfo analyze(const PlanarComplex& c, const LevelCurve& curve, int component) {
  CurveInfo info;
  for (int ci = 0; ci < static_cast<int>(curve.components.size()); ++ci)
    if (component < 0 || ci == component) info.comps.push_back(ci);

  std::vector<std::pair<std::pair<int, double>, int>> crossings;  // ((edge,t),node)
  for (int ci : info.comps) {
    const auto& comp = curve.components[ci];
    for (int cy = 0; cy < static_cast<int>(comp.cycles.size()); ++cy) {
      for (int n : comp.cycles[cy].nodes) {
        const LevelNode& node = curve.nodes[n];
        if (node.kind == LevelNode::kAtVertex) {
          info.on_vertices.insert(node.vertex);
        } else if (node.xedge < c.edge_count()) {
          info.node_cycle[n] = {ci, cy};
          crossings.push_back({{node.xedge, node.t}, n});
          info.crossed_edge_node[node.xedge] = n;
        } else {
          info.node_cycle[n] = {ci, cy};  // diagonal: geometric only
        }
      }
    }
  }
  std::sort(crossings.begin(), crossings.end());
  int next = c.vertex_count();
  for (auto& [key, n] : crossings) info.node_vid[n] = next++;
  return info;
}

}  // namespace

std::vector<int> below_region_vertices(const PlanarComplex& c,
                                       const HarmonicField& f,
                                       const LevelCurve& curve,
                                       const LevelComponent& comp,
                                       const LevelCycle& cycle) {
  const double h = curve.value;
  const double snap = Tol::level_snap_rel * f.k;
  std::set<int> crossed_edges;
  std::set<int> on_vertices;
  for (const auto& comp2 : curve.components)
    for (const auto& cyc : comp2.cycles)
      for (int n : cyc.nodes) {
        const auto& node = curve.nodes[n];
        if (node.kind == LevelNode::kCrossing && node.xedge < c.edge_count())
          crossed_edges.insert(node.xedge);
        if (node.kind == LevelNode::kAtVertex) on_vertices.insert(node.vertex);
      }

  std::vector<char> seen(c.vertex_count(), 0);
  std::vector<int> stack;
  auto push = [&](int v) {
    if (v >= 0 && !seen[v] && f.values[v] < h - snap && !on_vertices.count(v)) {
      seen[v] = 1;
      stack.push_back(v);
    }
  };
  // Seeds: below endpoints of this cycle's crossings, below-sector neighbors
  // of its visits.
  for (int n : cycle.nodes) {
    const auto& node = curve.nodes[n];
    if (node.kind == LevelNode::kCrossing && node.xedge < c.edge_count()) {
      auto [u, v] = c.edges()[node.xedge];
      push(f.values[u] < h ? u : v);
    }
  }
  for (const auto& visit : cycle.visits) {
    int v = visit.vertex;
    const auto& nbrs = c.neighbors_ccw(v);
    double span = cw_offset(visit.ray_in, visit.ray_out);
    for (int w : nbrs) {
      if (f.values[w] >= h - snap) continue;
      double off = cw_offset(visit.ray_in, angle_of(c.position(w) - c.position(v)));
      if (off < span) push(w);
    }
  }
  std::vector<int> out;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    out.push_back(v);
    const auto& nbrs = c.neighbors_ccw(v);
    const auto& eids = c.neighbor_edges_ccw(v);
    for (size_t i = 0; i < nbrs.size(); ++i) {
      if (crossed_edges.count(eids[i])) continue;
      push(nbrs[i]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CutResult cut_along(const PlanarComplex& c, const HarmonicField& f,
                    const LevelCurve& curve, int component) {
  const double h = curve.value;
  const double snap = Tol::level_snap_rel * f.k;
  CurveInfo info = analyze(c, curve, component);
  CutResult result;
  result.value = h;

  // Flat edges crossing the level (both endpoints on it outside the cut set)
  // are a degeneracy for surgery.
  for (int e = 0; e < c.edge_count(); ++e) {
    auto [u, v] = c.edges()[e];
    if (std::abs(f.values[u] - h) <= snap && std::abs(f.values[v] - h) <= snap &&
        !(info.on_vertices.count(u) && info.on_vertices.count(v)))
      throw DegenerateValues("cut_along: flat edge at the cut level", {u, v}, {e});
  }

  for (auto& [n, vid] : info.node_vid) {
    const auto& node = curve.nodes[n];
    result.vertex_provenance[vid] = {node.xedge, node.t};
  }

  // Assign strictly-below vertices to cycles of the cut components.
  std::map<int, std::pair<int, int>> region_of;  // vertex -> (component, cycle)
  for (int ci : info.comps) {
    const auto& comp = curve.components[ci];
    for (int cy = 0; cy < static_cast<int>(comp.cycles.size()); ++cy) {
      auto verts = below_region_vertices(c, f, curve, comp, comp.cycles[cy]);
      for (int v : verts) {
        if (region_of.count(v))
          throw ConsistencyError("cut_along: vertex claimed by two cycle interiors");
        region_of[v] = {ci, cy};
      }
    }
  }

  auto piece_for = [&](bool interior, int ci, int cy) {
    CutPiece p;
    p.is_interior = interior;
    p.component = ci;
    p.cycle = cy;
    return p;
  };

  std::vector<CutPiece> interiors;
  std::map<std::pair<int, int>, int> interior_index;
  for (int ci : info.comps) {
    const auto& comp = curve.components[ci];
    for (int cy = 0; cy < static_cast<int>(comp.cycles.size()); ++cy) {
      interior_index[{ci, cy}] = static_cast<int>(interiors.size());
      interiors.push_back(piece_for(true, ci, cy));
    }
  }
  CutPiece exterior = piece_for(false, -1, -1);

  std::set<int> ext_verts;
  std::map<std::pair<int, int>, std::set<int>> int_verts;
  for (int v = 0; v < c.vertex_count(); ++v) {
    if (info.on_vertices.count(v)) continue;
    auto it = region_of.find(v);
    if (it != region_of.end())
      int_verts[it->second].insert(v);
    else
      ext_verts.insert(v);
  }
  // Curve vertices belong to every piece they bound.
  auto add_vertex = [&](CutPiece& p, int vid, double val, Vec2 pos, bool pin) {
    if (!p.values.count(vid)) {
      p.vertices.push_back(vid);
      p.values[vid] = val;
      p.coords[vid] = pos;
      if (pin) p.pinned.push_back(vid);
    }
  };

  auto emit_cycle_boundary = [&](CutPiece& p, int ci, int cy) {
    const auto& cyc = curve.components[ci].cycles[cy];
    // Arcs join consecutive real nodes (network crossings and vertices).
    std::vector<int> real_vids;
    for (int n : cyc.nodes) {
      const auto& node = curve.nodes[n];
      if (node.kind == LevelNode::kAtVertex) {
        add_vertex(p, node.vertex, f.values[node.vertex], node.pos, true);
        real_vids.push_back(node.vertex);
      } else if (node.xedge < c.edge_count()) {
        int vid = info.node_vid.at(n);
        add_vertex(p, vid, h, node.pos, true);
        real_vids.push_back(vid);
      }
    }
    for (size_t i = 0; i < real_vids.size(); ++i) {
      int a = real_vids[i], b = real_vids[(i + 1) % real_vids.size()];
      if (a == b) continue;
      p.edges.push_back({a, b, 0.0, -1, CutPiece::PieceEdge::kArc});
    }
  };

  for (int ci : info.comps) {
    const auto& comp = curve.components[ci];
    for (int cy = 0; cy < static_cast<int>(comp.cycles.size()); ++cy) {
      emit_cycle_boundary(interiors[interior_index[{ci, cy}]], ci, cy);
      emit_cycle_boundary(exterior, ci, cy);
    }
  }

  auto region_piece = [&](int v) -> CutPiece& {
    auto it = region_of.find(v);
    if (it == region_of.end()) return exterior;
    return interiors[interior_index[it->second]];
  };

  for (auto& [key, verts] : int_verts) {
    auto& p = interiors[interior_index[key]];
    for (int v : verts)
      add_vertex(p, v, f.values[v], c.position(v), c.is_boundary_vertex(v));
  }
  for (int v : ext_verts)
    add_vertex(exterior, v, f.values[v], c.position(v), c.is_boundary_vertex(v));

  // Distribute edges.
  for (int e = 0; e < c.edge_count(); ++e) {
    auto [u, v] = c.edges()[e];
    auto cn = info.crossed_edge_node.find(e);
    if (cn != info.crossed_edge_node.end()) {
      int vid = info.node_vid.at(cn->second);
      int above = f.values[u] > h ? u : v;
      int below = above == u ? v : u;
      double cc = c.conductance(e);
      double c_above = split_conductance(cc, f.values[above], f.values[below], h);
      double c_below = split_conductance(cc, f.values[below], f.values[above], h);
      CutPiece& pa = region_piece(above);
      pa.edges.push_back({above, vid, c_above, e, CutPiece::PieceEdge::kSub});
      CutPiece& pb = region_piece(below);
      pb.edges.push_back({below, vid, c_below, e, CutPiece::PieceEdge::kSub});
      continue;
    }
    bool u_on = info.on_vertices.count(u), v_on = info.on_vertices.count(v);
    if (u_on && v_on) {
      // Flat edge lying on the curve was rejected above unless both endpoints
      // are curve vertices joined by an arc; keep it out of the pieces.
      continue;
    }
    int anchor = u_on ? v : u;
    CutPiece& p = region_piece(anchor);
    p.edges.push_back({u, v, c.conductance(e), e, CutPiece::PieceEdge::kFull});
    // Make sure both endpoints exist in the piece (curve vertices already do).
    add_vertex(p, u, f.values[u], c.position(u), c.is_boundary_vertex(u) || u_on);
    add_vertex(p, v, f.values[v], c.position(v), c.is_boundary_vertex(v) || v_on);
  }

  // Inner boundary bookkeeping.
  for (size_t b = 0; b < c.inner_boundaries().size(); ++b) {
    int v0 = c.inner_boundaries()[b][0];
    auto it = region_of.find(v0);
    if (it != region_of.end())
      interiors[interior_index[it->second]].inner_boundaries.push_back((int)b + 1);
    else
      exterior.inner_boundaries.push_back((int)b + 1);
  }

  for (auto& p : interiors) {
    std::sort(p.vertices.begin(), p.vertices.end());
    std::sort(p.pinned.begin(), p.pinned.end());
    p.pinned.erase(std::unique(p.pinned.begin(), p.pinned.end()), p.pinned.end());
  }
  std::sort(exterior.vertices.begin(), exterior.vertices.end());
  std::sort(exterior.pinned.begin(), exterior.pinned.end());
  exterior.pinned.erase(std::unique(exterior.pinned.begin(), exterior.pinned.end()),
                        exterior.pinned.end());

  result.interior = std::move(interiors);
  result.exterior = std::move(exterior);
  return result;
}

std::map<int, double> resolve_piece(const CutPiece& piece) {
  // Compact the shared ids.
  std::map<int, int> local;
  for (size_t i = 0; i < piece.vertices.size(); ++i)
    local[piece.vertices[i]] = static_cast<int>(i);
  ConductanceGraph g;
  g.vertex_count = static_cast<int>(piece.vertices.size());
  for (const auto& e : piece.edges)
    g.edges.push_back({local.at(e.u), local.at(e.v), e.c});
  std::vector<char> pinned(g.vertex_count, 0);
  std::vector<double> pv(g.vertex_count, 0.0);
  for (int v : piece.pinned) {
    pinned[local.at(v)] = 1;
    pv[local.at(v)] = piece.values.at(v);
  }
  auto x = solve_pinned(g, pinned, pv);
  std::map<int, double> out;
  for (auto& [vid, li] : local) out[vid] = x[li];
  return out;
}

TwoSidedLength two_sided_length(const PlanarComplex& c, const HarmonicField& f,
                                const LevelCurve& curve, int component) {
  TwoSidedLength out;
  const double h = curve.value;
  std::set<int> on_done;
  for (int ci = 0; ci < static_cast<int>(curve.components.size()); ++ci) {
    if (component >= 0 && ci != component) continue;
    for (const auto& cyc : curve.components[ci].cycles) {
      for (int n : cyc.nodes) {
        const auto& node = curve.nodes[n];
        if (node.kind == LevelNode::kCrossing) {
          if (node.xedge < c.edge_count()) {
            double fl = edge_flux(f, c, node.xedge);
            out.interior += fl;
            out.exterior += fl;
          }
        } else if (on_done.insert(node.vertex).second) {
          int v = node.vertex;
          const auto& nbrs = c.neighbors_ccw(v);
          const auto& eids = c.neighbor_edges_ccw(v);
          for (size_t i = 0; i < nbrs.size(); ++i) {
            double d = f.values[v] - f.values[nbrs[i]];
            double fl = c.conductance(eids[i]) * std::abs(d);
            if (f.values[nbrs[i]] < h)
              out.interior += fl;
            else if (f.values[nbrs[i]] > h)
              out.exterior += fl;
          }
        }
      }
    }
  }
  return out;
}

RefinedNetwork ensure_separation(const PlanarComplex& c, const HarmonicField& f,
                                 const std::vector<double>& levels) {
  const double snap = Tol::level_snap_rel * std::max(f.k, 1e-300);
  std::vector<double> lv = levels;
  std::sort(lv.begin(), lv.end(), std::greater<double>());

  RefinedNetwork out;
  out.coords = c.vertices();
  out.values = f.values;
  out.graph.vertex_count = c.vertex_count();

  // Level index of a vertex value, or -1.
  auto level_of = [&](double value) {
    for (size_t i = 0; i < lv.size(); ++i)
      if (std::abs(value - lv[i]) <= snap) return static_cast<int>(i);
    return -1;
  };

  struct Chain {
    std::vector<int> vids;     // along the edge from endpoint u to v
    std::vector<double> ts;
  };

  // Pass 1: type I vertices at crossings, sorted by (edge, t).
  std::vector<Chain> chains(c.edge_count());
  for (int e = 0; e < c.edge_count(); ++e) {
    auto [u, v] = c.edges()[e];
    double gu = f.values[u], gv = f.values[v];
    for (double h : lv) {
      if ((gu - h) * (gv - h) < 0 && std::abs(gu - h) > snap && std::abs(gv - h) > snap) {
        double t = (h - gu) / (gv - gu);
        chains[e].ts.push_back(t);
      }
    }
    std::sort(chains[e].ts.begin(), chains[e].ts.end());
  }
  int next_vid = c.vertex_count();
  for (int e = 0; e < c.edge_count(); ++e) {
    auto [u, v] = c.edges()[e];
    for (double t : chains[e].ts) {
      int vid = next_vid++;
      chains[e].vids.push_back(vid);
      out.coords.push_back(lerp(c.position(u), c.position(v), t));
      out.values.push_back(f.values[u] + t * (f.values[v] - f.values[u]));
      out.vertex_provenance[vid] = {e, t};
      out.type1.push_back(vid);
      out.changed = true;
    }
  }

  // Refined edge list after the type I pass.
  struct RE {
    int u, v;
    double cc;
    int parent;
    double t_mid;  // parameter of the midpoint on the parent edge
  };
  std::vector<RE> refined;
  for (int e = 0; e < c.edge_count(); ++e) {
    auto [u, v] = c.edges()[e];
    double cc = c.conductance(e);
    if (chains[e].vids.empty()) {
      refined.push_back({u, v, cc, e, 0.5});
      continue;
    }
    std::vector<int> pts{u};
    std::vector<double> tpts{0.0};
    for (size_t i = 0; i < chains[e].vids.size(); ++i) {
      pts.push_back(chains[e].vids[i]);
      tpts.push_back(chains[e].ts[i]);
    }
    pts.push_back(v);
    tpts.push_back(1.0);
    double gu = f.values[u], gv = f.values[v];
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      double ga = out.values[pts[i]], gb = out.values[pts[i + 1]];
      // Flux-preserving split of the parent conductance.
      double csub = cc * (gu - gv) / (ga - gb);
      refined.push_back({pts[i], pts[i + 1], csub, e, 0.5 * (tpts[i] + tpts[i + 1])});
    }
  }

  // Pass 2: a type II vertex on every refined edge joining two consecutive
  // level curves directly.
  std::vector<std::pair<RE, bool>> staged;
  for (const auto& re : refined) {
    int la = level_of(out.values[re.u]);
    int lb = level_of(out.values[re.v]);
    bool consecutive = la >= 0 && lb >= 0 && std::abs(la - lb) == 1;
    staged.push_back({re, consecutive});
  }
  std::stable_sort(staged.begin(), staged.end(), [](auto& a, auto& b) {
    if (a.first.parent != b.first.parent) return a.first.parent < b.first.parent;
    return a.first.t_mid < b.first.t_mid;
  });
  for (auto& [re, split] : staged) {
    if (!split) {
      out.graph.edges.push_back({re.u, re.v, re.cc});
      out.edge_parent.push_back(re.parent);
      continue;
    }
    int vid = next_vid++;
    double ga = out.values[re.u], gb = out.values[re.v];
    double gm = 0.5 * (ga + gb);
    out.coords.push_back(lerp(out.coords[re.u], out.coords[re.v], 0.5));
    out.values.push_back(gm);
    out.vertex_provenance[vid] = {re.parent, re.t_mid};
    out.type2.push_back(vid);
    out.changed = true;
    double c1 = re.cc * (ga - gb) / (ga - gm);
    double c2 = re.cc * (gb - ga) / (gb - gm);
    out.graph.edges.push_back({re.u, vid, c1});
    out.edge_parent.push_back(re.parent);
    out.graph.edges.push_back({vid, re.v, c2});
    out.edge_parent.push_back(re.parent);
  }
  out.graph.vertex_count = next_vid;
  return out;
}

}  // namespace flattile
