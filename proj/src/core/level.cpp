#include "level.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "errors.hpp"
#include "tolerances.hpp"

namespace flattile {

TracingMesh::TracingMesh(const PlanarComplex& c) {
  xedges.resize(c.edge_count());
  for (int e = 0; e < c.edge_count(); ++e) {
    auto [u, v] = c.edges()[e];
    xedges[e].u = std::min(u, v);
    xedges[e].v = std::max(u, v);
    xedges[e].parent_edge = e;
  }
  auto attach = [&](int xe, int tri) {
    auto& x = xedges[xe];
    if (x.tri_count < 2) x.tri[x.tri_count] = tri;
    ++x.tri_count;
  };
  auto add_tri = [&](int a, int b, int cc, int face) {
    Tri t;
    t.v[0] = a;
    t.v[1] = b;
    t.v[2] = cc;
    t.face = face;
    tris.push_back(t);
    return static_cast<int>(tris.size()) - 1;
  };
  for (int f = 0; f < c.face_count(); ++f) {
    const auto& cyc = c.faces()[f];
    if (cyc.size() == 3) {
      int ti = add_tri(cyc[0], cyc[1], cyc[2], f);
      for (int i = 0; i < 3; ++i) {
        int e = c.edge_index(cyc[i], cyc[(i + 1) % 3]);
        tris[ti].xe[i] = e;
        attach(e, ti);
      }
    } else if (cyc.size() == 4) {
      // Diagonal from the smallest corner id.
      int s = 0;
      for (int i = 1; i < 4; ++i)
        if (cyc[i] < cyc[s]) s = i;
      int a = cyc[s], b = cyc[(s + 1) % 4], d = cyc[(s + 2) % 4], e4 = cyc[(s + 3) % 4];
      XEdge diag;
      diag.u = std::min(a, d);
      diag.v = std::max(a, d);
      diag.parent_edge = -1;
      diag.face = f;
      int dxe = static_cast<int>(xedges.size());
      xedges.push_back(diag);
      int t1 = add_tri(a, b, d, f);
      tris[t1].xe[0] = c.edge_index(a, b);
      tris[t1].xe[1] = c.edge_index(b, d);
      tris[t1].xe[2] = dxe;
      attach(tris[t1].xe[0], t1);
      attach(tris[t1].xe[1], t1);
      attach(dxe, t1);
      int t2 = add_tri(a, d, e4, f);
      tris[t2].xe[0] = dxe;
      tris[t2].xe[1] = c.edge_index(d, e4);
      tris[t2].xe[2] = c.edge_index(e4, a);
      attach(dxe, t2);
      attach(tris[t2].xe[1], t2);
      attach(tris[t2].xe[2], t2);
    }
  }
}

int sign_changes(const HarmonicField& f, const PlanarComplex& c, int v) {
  if (c.is_boundary_vertex(v))
    throw InvalidInput("sign_changes: vertex lies on the boundary");
  const auto& nbrs = c.neighbors_ccw(v);
  const auto& eids = c.neighbor_edges_ccw(v);
  const double tol = Tol::flat_edge_rel * std::max(f.k, 1e-300);
  std::vector<int> signs;
  signs.reserve(nbrs.size());
  for (size_t i = 0; i < nbrs.size(); ++i) {
    double d = f.values[nbrs[i]] - f.values[v];
    if (std::abs(d) <= tol)
      throw DegenerateValues("sign_changes: neighbor ties the vertex value",
                             {v, nbrs[i]}, {eids[i]});
    signs.push_back(d > 0 ? 1 : -1);
  }
  int sgc = 0;
  for (size_t i = 0; i < signs.size(); ++i)
    if (signs[i] != signs[(i + 1) % signs.size()]) ++sgc;
  return sgc;
}

int vertex_index(const HarmonicField& f, const PlanarComplex& c, int v) {
  int sgc = sign_changes(f, c, v);
  return 1 - sgc / 2;
}

IndexReport index_formula_check(const HarmonicField& f, const PlanarComplex& c) {
  IndexReport rep;
  rep.euler_characteristic = c.euler_characteristic();
  std::vector<int> bad_vertices;
  std::vector<int> bad_edges;
  for (int v : c.interior_vertices()) {
    try {
      int sgc = sign_changes(f, c, v);
      rep.entries.push_back({v, sgc, 1 - sgc / 2});
    } catch (const DegenerateValues& e) {
      bad_vertices.insert(bad_vertices.end(), e.vertices.begin(), e.vertices.end());
      bad_edges.insert(bad_edges.end(), e.edges.begin(), e.edges.end());
    }
  }
  if (!bad_vertices.empty())
    throw DegenerateValues("index formula: adjacent vertices share a g-value",
                           bad_vertices, bad_edges);
  rep.index_sum = 0;
  for (const auto& e : rep.entries) rep.index_sum += e.index;
  return rep;
}

namespace {

struct Seg {
  int a, b;   // node ids, oriented with the below side on the left
  int tri;    // owning triangle (flat sides keep one of the two)
};

struct NodeKey {
  int kind;  // 0 vertex, 1 crossing
  int id;
  bool operator<(const NodeKey& o) const {
    return kind != o.kind ? kind < o.kind : id < o.id;
  }
};

NodeKey node_key(const LevelNode& n) {
  return n.kind == LevelNode::kAtVertex ? NodeKey{0, n.vertex} : NodeKey{1, n.xedge};
}

}  // namespace

LevelCurve extract_level(const HarmonicField& f, const PlanarComplex& c,
                         const TracingMesh& mesh, double h) {
  if (!(h > 0) || !(h < f.k))
    throw InvalidInput("extract_level: h must lie strictly between 0 and k");
  const double snap = Tol::level_snap_rel * f.k;

  const int nv = c.vertex_count();
  std::vector<int> state(nv);  // -1 below, 0 on, +1 above
  for (int v = 0; v < nv; ++v) {
    double d = f.values[v] - h;
    state[v] = std::abs(d) <= snap ? 0 : (d > 0 ? 1 : -1);
  }

  LevelCurve curve;
  curve.value = h;
  std::vector<int> vertex_node(nv, -1);
  std::vector<int> xedge_node(mesh.xedges.size(), -1);

  auto get_vertex_node = [&](int v) {
    if (vertex_node[v] < 0) {
      LevelNode n;
      n.kind = LevelNode::kAtVertex;
      n.vertex = v;
      n.pos = c.position(v);
      vertex_node[v] = static_cast<int>(curve.nodes.size());
      curve.nodes.push_back(n);
    }
    return vertex_node[v];
  };
  auto get_crossing_node = [&](int xe) {
    if (xedge_node[xe] < 0) {
      const auto& x = mesh.xedges[xe];
      double gu = f.values[x.u], gv = f.values[x.v];
      double t = (h - gu) / (gv - gu);
      LevelNode n;
      n.kind = LevelNode::kCrossing;
      n.xedge = xe;
      n.t = t;
      n.pos = lerp(c.position(x.u), c.position(x.v), t);
      xedge_node[xe] = static_cast<int>(curve.nodes.size());
      curve.nodes.push_back(n);
    }
    return xedge_node[xe];
  };

  std::vector<Seg> segs;
  std::set<int> flat_emitted;  // xedge ids of emitted flat sides
  std::vector<int> degenerate_edges;
  std::vector<int> degenerate_vertices;

  for (size_t ti = 0; ti < mesh.tris.size(); ++ti) {
    const auto& tr = mesh.tris[ti];
    int st[3] = {state[tr.v[0]], state[tr.v[1]], state[tr.v[2]]};
    int n_on = (st[0] == 0) + (st[1] == 0) + (st[2] == 0);

    if (n_on == 3) {
      for (int i = 0; i < 3; ++i) degenerate_vertices.push_back(tr.v[i]);
      continue;
    }

    // Crossing nodes on strictly straddled sides.
    int cross_nodes[3];
    int nc = 0;
    int cross_sides[3];
    for (int i = 0; i < 3; ++i) {
      int a = tr.v[i], b = tr.v[(i + 1) % 3];
      if (state[a] * state[b] < 0) {
        cross_sides[nc] = i;
        cross_nodes[nc++] = get_crossing_node(tr.xe[i]);
      }
    }

    if (n_on == 0) {
      if (nc == 2) segs.push_back({cross_nodes[0], cross_nodes[1], (int)ti});
      continue;
    }
    if (n_on == 1) {
      int on_corner = st[0] == 0 ? 0 : (st[1] == 0 ? 1 : 2);
      if (nc == 1)
        segs.push_back({get_vertex_node(tr.v[on_corner]), cross_nodes[0], (int)ti});
      // nc == 0: the level only touches the corner; nothing to emit here.
      continue;
    }
    // n_on == 2: the side joining the two on-corners lies in the level.
    {
      int off = st[0] != 0 ? 0 : (st[1] != 0 ? 1 : 2);
      int side = (off + 1) % 3;  // side between the two on-corners
      int xe = tr.xe[side];
      if (flat_emitted.insert(xe).second) {
        // Orient later using adjacent triangles' third corners.
        segs.push_back({get_vertex_node(tr.v[side]),
                        get_vertex_node(tr.v[(side + 1) % 3]), (int)ti});
        if (mesh.xedges[xe].parent_edge >= 0)
          degenerate_edges.push_back(mesh.xedges[xe].parent_edge);
      }
      continue;
    }
  }

  // Orient every segment with the strictly-below side on the left.
  for (auto& s : segs) {
    const LevelNode& na = curve.nodes[s.a];
    const LevelNode& nb = curve.nodes[s.b];
    bool flat = na.kind == LevelNode::kAtVertex && nb.kind == LevelNode::kAtVertex;
    Vec2 below_pt;
    bool found = false;
    if (!flat) {
      const auto& tr = mesh.tris[s.tri];
      for (int i = 0; i < 3; ++i)
        if (state[tr.v[i]] < 0) {
          below_pt = c.position(tr.v[i]);
          found = true;
        }
    } else {
      // Flat side: exactly one adjacent triangle must hold the below side.
      int xe = -1;
      const auto& tr = mesh.tris[s.tri];
      for (int i = 0; i < 3; ++i) {
        int a = tr.v[i], b = tr.v[(i + 1) % 3];
        if ((a == na.vertex && b == nb.vertex) || (a == nb.vertex && b == na.vertex))
          xe = tr.xe[i];
      }
      int below_count = 0, above_count = 0;
      const auto& x = mesh.xedges[xe];
      for (int tcount = 0; tcount < std::min(x.tri_count, 2); ++tcount) {
        const auto& tr2 = mesh.tris[x.tri[tcount]];
        for (int i = 0; i < 3; ++i) {
          int w = tr2.v[i];
          if (w == na.vertex || w == nb.vertex) continue;
          if (state[w] < 0) {
            ++below_count;
            below_pt = c.position(w);
            found = true;
          } else if (state[w] > 0) {
            ++above_count;
          }
        }
      }
      if (below_count != 1 || above_count != 1) {
        degenerate_vertices.push_back(na.vertex);
        degenerate_vertices.push_back(nb.vertex);
        continue;
      }
    }
    if (!found)
      throw ConsistencyError("level segment without a below side");
    if (cross(nb.pos - na.pos, below_pt - na.pos) < 0) std::swap(s.a, s.b);
  }

  if (!degenerate_vertices.empty() && degenerate_edges.empty()) {
    std::sort(degenerate_vertices.begin(), degenerate_vertices.end());
    degenerate_vertices.erase(
        std::unique(degenerate_vertices.begin(), degenerate_vertices.end()),
        degenerate_vertices.end());
    throw DegenerateValues("extract_level: flat region at the level value",
                           degenerate_vertices, {});
  }

  // Incidence: outgoing and incoming segments per node.
  std::vector<std::vector<int>> out_segs(curve.nodes.size());
  std::vector<std::vector<int>> in_segs(curve.nodes.size());
  for (size_t i = 0; i < segs.size(); ++i) {
    out_segs[segs[i].a].push_back(static_cast<int>(i));
    in_segs[segs[i].b].push_back(static_cast<int>(i));
  }
  for (size_t n = 0; n < curve.nodes.size(); ++n) {
    if (curve.nodes[n].kind == LevelNode::kCrossing) {
      if (out_segs[n].size() != 1 || in_segs[n].size() != 1)
        throw ConsistencyError("crossing node without exactly one in and out segment");
    } else {
      if (out_segs[n].size() != in_segs[n].size() || out_segs[n].empty())
        throw DegenerateValues("extract_level: isolated or unbalanced on-level vertex",
                               {curve.nodes[n].vertex}, {});
    }
  }

  auto ray_angle = [&](int node, int seg) {
    const Seg& s = segs[seg];
    int other = s.a == node ? s.b : s.a;
    return angle_of(curve.nodes[other].pos - curve.nodes[node].pos);
  };

  // Trace cycles: at a vertex node continue along the outgoing segment whose
  // ray is next clockwise from the arrival ray; this keeps the bounded below
  // sector on the left and splits bouquets into simple cycles.
  std::vector<char> used(segs.size(), 0);
  struct RawCycle {
    std::vector<int> nodes;
    std::vector<LevelVisit> visits;
    NodeKey min_key;
  };
  std::vector<RawCycle> raws;

  // Deterministic start order: segments sorted by (key(a), key(b)).
  std::vector<int> seg_order(segs.size());
  for (size_t i = 0; i < segs.size(); ++i) seg_order[i] = static_cast<int>(i);
  std::sort(seg_order.begin(), seg_order.end(), [&](int i, int j) {
    NodeKey ai = node_key(curve.nodes[segs[i].a]), aj = node_key(curve.nodes[segs[j].a]);
    if (aj < ai || ai < aj) return ai < aj;
    return node_key(curve.nodes[segs[i].b]) < node_key(curve.nodes[segs[j].b]);
  });

  for (int start : seg_order) {
    if (used[start]) continue;
    RawCycle rc;
    int seg = start;
    rc.min_key = node_key(curve.nodes[segs[seg].a]);
    size_t guard = 0;
    while (true) {
      if (used[seg]) throw ConsistencyError("level tracing revisited a segment");
      used[seg] = 1;
      rc.nodes.push_back(segs[seg].a);
      int nxt_node = segs[seg].b;
      NodeKey kk = node_key(curve.nodes[nxt_node]);
      if (kk < rc.min_key) rc.min_key = kk;
      int next_seg;
      if (curve.nodes[nxt_node].kind == LevelNode::kCrossing) {
        next_seg = out_segs[nxt_node][0];
      } else {
        double rin = ray_angle(nxt_node, seg);
        next_seg = -1;
        double best = 1e9;
        for (int cand : out_segs[nxt_node]) {
          double off = cw_offset(rin, ray_angle(nxt_node, cand));
          if (off < best) {
            best = off;
            next_seg = cand;
          }
        }
        rc.visits.push_back({curve.nodes[nxt_node].vertex, nxt_node, rin,
                             ray_angle(nxt_node, next_seg)});
      }
      if (next_seg == start) {
        // close the cycle; record the final node if it is the start node
        break;
      }
      seg = next_seg;
      if (++guard > segs.size() + 1)
        throw ConsistencyError("level tracing did not close");
    }
    raws.push_back(std::move(rc));
  }

  // Rotate each cycle so its smallest node leads; simple-cycle check.
  for (auto& rc : raws) {
    size_t best = 0;
    for (size_t i = 1; i < rc.nodes.size(); ++i)
      if (node_key(curve.nodes[rc.nodes[i]]) < node_key(curve.nodes[rc.nodes[best]]))
        best = i;
    std::rotate(rc.nodes.begin(), rc.nodes.begin() + best, rc.nodes.end());
    std::set<int> uniq(rc.nodes.begin(), rc.nodes.end());
    if (uniq.size() != rc.nodes.size())
      throw ConsistencyError("traced level cycle is not simple");
  }
  std::sort(raws.begin(), raws.end(),
            [](const RawCycle& a, const RawCycle& b) { return a.min_key < b.min_key; });

  // Group cycles sharing a vertex node into components.
  std::vector<int> comp(raws.size());
  for (size_t i = 0; i < raws.size(); ++i) comp[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  std::map<int, int> vertex_owner;  // node id -> raw cycle
  std::map<int, std::set<int>> vertex_users;
  for (size_t i = 0; i < raws.size(); ++i)
    for (int n : raws[i].nodes)
      if (curve.nodes[n].kind == LevelNode::kAtVertex) {
        vertex_users[n].insert(static_cast<int>(i));
        auto it = vertex_owner.find(n);
        if (it == vertex_owner.end())
          vertex_owner[n] = static_cast<int>(i);
        else
          comp[find((int)i)] = find(it->second);
      }

  std::map<int, int> comp_index;
  for (size_t i = 0; i < raws.size(); ++i) {
    int r = find(static_cast<int>(i));
    if (!comp_index.count(r)) {
      comp_index[r] = static_cast<int>(curve.components.size());
      curve.components.push_back({});
    }
    auto& target = curve.components[comp_index[r]];
    LevelCycle cyc;
    cyc.nodes = raws[i].nodes;
    cyc.visits = raws[i].visits;
    target.cycles.push_back(std::move(cyc));
  }
  for (auto& [n, users] : vertex_users) {
    if (users.size() >= 2) {
      int ci = comp_index[find(*users.begin())];
      curve.components[ci].tangencies.push_back(curve.nodes[n].vertex);
    }
  }
  for (auto& comp2 : curve.components) {
    std::sort(comp2.tangencies.begin(), comp2.tangencies.end());
    for (int v : comp2.tangencies) {
      if (!c.is_boundary_vertex(v)) {
        int idx = vertex_index(f, c, v);
        curve.singular_vertices.push_back({v, idx});
      }
    }
  }
  std::sort(curve.singular_vertices.begin(), curve.singular_vertices.end());
  return curve;
}

LevelCurve extract_level(const HarmonicField& f, const PlanarComplex& c, double h) {
  TracingMesh mesh(c);
  return extract_level(f, c, mesh, h);
}

CriticalValues critical_values(const HarmonicField& f, const PlanarComplex& c) {
  IndexReport rep = index_formula_check(f, c);
  CriticalValues out;
  std::vector<std::pair<double, int>> crit;  // (value, vertex)
  for (const auto& e : rep.entries)
    if (e.index != 0) crit.push_back({f.values[e.vertex], e.vertex});
  std::sort(crit.begin(), crit.end(), [](auto& a, auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  out.values.push_back(f.k);
  const double tol = Tol::level_snap_rel * f.k;
  for (auto& [val, v] : crit) {
    if (std::abs(out.values.back() - val) > tol) out.values.push_back(val);
    int idx = static_cast<int>(out.values.size()) - 1;
    if (idx > 0) out.vertices_at[idx].push_back(v);
  }
  out.values.push_back(0.0);
  return out;
}

EnclosingCurve enclosing_singular_curve(const HarmonicField& f,
                                        const PlanarComplex& c,
                                        const TracingMesh& mesh) {
  if (c.boundary_cycle_count() < 3)
    throw NotApplicable("enclosing_singular_curve: needs m >= 3 boundary cycles");
  CriticalValues K = critical_values(f, c);

  // Representative point per inner boundary.
  std::vector<Vec2> reps;
  for (const auto& cyc : c.inner_boundaries()) reps.push_back(c.position(cyc[0]));

  std::vector<EnclosingCurve> hits;
  for (size_t vi = 1; vi + 1 < K.values.size(); ++vi) {
    LevelCurve curve = extract_level(f, c, mesh, K.values[vi]);
    for (size_t ci = 0; ci < curve.components.size(); ++ci) {
      const auto& comp = curve.components[ci];
      if (comp.tangencies.empty()) continue;  // regular component
      bool all = true;
      for (const Vec2& p : reps) {
        bool inside = false;
        for (const auto& cyc : comp.cycles)
          if (cycle_encloses_point(curve, cyc, p)) inside = true;
        if (!inside) {
          all = false;
          break;
        }
      }
      if (all) {
        EnclosingCurve ec;
        ec.curve = curve;
        ec.component = static_cast<int>(ci);
        hits.push_back(std::move(ec));
      }
    }
  }
  if (hits.empty())
    throw NotFound("no singular level curve encloses all inner boundaries");
  if (hits.size() > 1)
    throw ConsistencyError("enclosing singular level curve is not unique");
  return hits.front();
}

double edge_flux(const HarmonicField& f, const PlanarComplex& c, int edge) {
  auto [u, v] = c.edges()[edge];
  return c.conductance(edge) * std::abs(f.values[u] - f.values[v]);
}

double cycle_crossing_flux(const HarmonicField& f, const PlanarComplex& c,
                           const LevelCurve& curve, const LevelCycle& cycle) {
  double s = 0;
  for (int n : cycle.nodes) {
    const auto& node = curve.nodes[n];
    if (node.kind != LevelNode::kCrossing) continue;
    // diagonals carry no conductance; only network edges contribute
    if (node.xedge < c.edge_count()) s += edge_flux(f, c, node.xedge);
  }
  return s;
}

double visit_sector_flux(const HarmonicField& f, const PlanarComplex& c,
                         const LevelVisit& visit, double h, bool below) {
  int v = visit.vertex;
  const auto& nbrs = c.neighbors_ccw(v);
  const auto& eids = c.neighbor_edges_ccw(v);
  double span = cw_offset(visit.ray_in, visit.ray_out);
  double s = 0;
  for (size_t i = 0; i < nbrs.size(); ++i) {
    int w = nbrs[i];
    bool side = below ? f.values[w] < h : f.values[w] > h;
    if (!side) continue;
    double off = cw_offset(visit.ray_in, angle_of(c.position(w) - c.position(v)));
    if (off < span) s += c.conductance(eids[i]) * std::abs(f.values[v] - f.values[w]);
  }
  return s;
}

double cycle_inside_length(const HarmonicField& f, const PlanarComplex& c,
                           const LevelCurve& curve, const LevelCycle& cycle) {
  double s = cycle_crossing_flux(f, c, curve, cycle);
  for (const auto& visit : cycle.visits)
    s += visit_sector_flux(f, c, visit, curve.value, /*below=*/true);
  return s;
}

std::vector<Vec2> cycle_polygon(const LevelCurve& curve, const LevelCycle& cycle) {
  std::vector<Vec2> pts;
  pts.reserve(cycle.nodes.size());
  for (int n : cycle.nodes) pts.push_back(curve.nodes[n].pos);
  return pts;
}

bool cycle_encloses_point(const LevelCurve& curve, const LevelCycle& cycle, Vec2 p) {
  return point_in_polygon(p, cycle_polygon(curve, cycle));
}

}  // namespace flattile
