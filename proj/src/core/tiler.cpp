#include "tiler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "errors.hpp"
#include "surgery.hpp"
#include "tolerances.hpp"

namespace flattile {

namespace {

// ---------------------------------------------------------------------------
// Sweep state: circular sequence of active columns at the current level. The
// ring order matches the crossing order of the level curve, so the incoming
// columns of a vertex form one contiguous block that its outgoing columns
// replace in place.
// ---------------------------------------------------------------------------

struct SweepCol {
  int edge = -1;
  double width = 0;
  double s = 0;
  double top = 0;  // g-value where the column's rectangle starts
  int lower = -1;  // vertex at the lower end of the remaining sub-edge
  int next = -1, prev = -1;
  bool alive = false;
};

struct Ring {
  std::vector<SweepCol> cols;
  std::unordered_map<int, std::vector<int>> by_lower;

  int add(const SweepCol& c) {
    cols.push_back(c);
    int id = static_cast<int>(cols.size()) - 1;
    cols[id].alive = true;
    by_lower[c.lower].push_back(id);
    return id;
  }
  void link(int a, int b) {
    cols[a].next = b;
    cols[b].prev = a;
  }
  std::vector<int> alive_in_order() const {
    int start = -1;
    double best = 0;
    for (size_t i = 0; i < cols.size(); ++i)
      if (cols[i].alive && (start < 0 || cols[i].s < best)) {
        start = static_cast<int>(i);
        best = cols[i].s;
      }
    std::vector<int> out;
    if (start < 0) return out;
    int cur = start;
    do {
      out.push_back(cur);
      cur = cols[cur].next;
    } while (cur != start && out.size() <= cols.size());
    if (cur != start) throw ConsistencyError("sweep ring is not closed");
    return out;
  }
};

struct InitCol {
  int edge;
  double width;
  double s;
  int lower;
};

struct BottomCol {
  int edge;
  double width;
  double s;
  int lower;
};

struct Context {
  int cyl_id = -1;
  int parent = -1;
  double top_value = 0;
  std::string top_label;
  double circumference = 0;
  std::vector<InitCol> init;
  std::vector<char> region;  // vertex mask; empty = everything
  std::vector<GlueInterval> glue;
};

struct SingularComponent {
  double value = 0;
  int curve_index = -1;
  int component = -1;
  std::vector<int> tangencies;
};

// Distance of two circle positions given as possibly unrolled coordinates.
bool circ_close(double a, double b, double mod, double tol) {
  double d = std::abs(a - b);
  d = std::min(d, std::abs(d - mod));
  return d <= tol;
}

// One tangency passage on a singular bottom circle.
struct Junction {
  int vertex = -1;
  double start = 0, end = 0;  // parent-bottom positions of the in-flux block
  double alpha = 0;
  int c_prev = -1, c_next = -1;  // flanking cycles
  double pinch = 0;
  double z = 0;  // portion of the block right of the pinch
};

class TilerEngine {
 public:
  TilerEngine(const PlanarComplex& c, const HarmonicField& f, bool flat_ok)
      : c_(c), f_(f), flat_ok_(flat_ok), mesh_(c) {
    flat_tol_ = Tol::flat_edge_rel * f.k;
    snap_ = Tol::level_snap_rel * f.k;
  }

  FlatSurface run(const std::string& mode) {
    const int m = c_.boundary_cycle_count();
    std::string eff = mode;
    if (eff == "auto") eff = m == 2 ? "annulus" : "ladder";
    if (eff == "annulus" && m != 2)
      throw InvalidInput("mode/connectivity mismatch: annulus needs m = 2");
    if (eff == "pants" && m != 3)
      throw InvalidInput("mode/connectivity mismatch: pants needs m = 3");
    if (eff == "ladder" && m < 3)
      throw InvalidInput("mode/connectivity mismatch: ladder needs m >= 3");
    if (eff != "annulus" && eff != "pants" && eff != "ladder")
      throw InvalidInput("unknown tiling mode: " + eff);

    scan_flat_edges();
    surface_.mode = eff;
    surface_.m = m;
    surface_.k = f_.k;
    surface_.energy = energy(f_, c_);
    inner_lengths_.assign(c_.inner_boundaries().size(), 0.0);

    if (m >= 3) collect_singular_structure();

    Context root;
    root.cyl_id = new_cylinder();
    root.parent = -1;
    root.top_value = f_.k;
    root.top_label = "E1";
    init_from_outer_boundary(root);
    surface_.outer_length = root.circumference;

    std::deque<Context> queue;
    queue.push_back(std::move(root));
    while (!queue.empty()) {
      Context ctx = std::move(queue.front());
      queue.pop_front();
      run_band(ctx, queue);
    }

    finalize_surface();
    return std::move(surface_);
  }

 private:
  const PlanarComplex& c_;
  const HarmonicField& f_;
  bool flat_ok_;
  TracingMesh mesh_;
  double flat_tol_ = 0, snap_ = 0;

  std::vector<char> flat_edge_;
  std::vector<int> flat_edges_list_;
  std::vector<LevelCurve> curves_;
  std::vector<SingularComponent> sing_;
  std::map<int, int> vertex_index_;

  FlatSurface surface_;
  std::vector<double> inner_lengths_;
  std::map<int, SingularPoint> cone_points_;

  int new_cylinder() {
    Cylinder cyl;
    cyl.id = static_cast<int>(surface_.cylinders.size());
    surface_.cylinders.push_back(std::move(cyl));
    return surface_.cylinders.back().id;
  }

  void scan_flat_edges() {
    flat_edge_.assign(c_.edge_count(), 0);
    std::vector<int> offenders;
    for (int e = 0; e < c_.edge_count(); ++e) {
      auto [u, v] = c_.edges()[e];
      if (std::abs(f_.values[u] - f_.values[v]) <= flat_tol_) {
        flat_edge_[e] = 1;
        flat_edges_list_.push_back(e);
        // Chords joining one boundary cycle to itself are pinned flat by the
        // boundary condition; only interior coincidences are degenerate.
        bool same_cycle_chord = c_.is_boundary_vertex(u) &&
                                c_.boundary_cycle_of(u) == c_.boundary_cycle_of(v);
        if (!same_cycle_chord) offenders.push_back(e);
      }
    }
    if (!offenders.empty() && !flat_ok_) {
      std::vector<int> verts;
      for (int e : offenders) {
        verts.push_back(c_.edges()[e].first);
        verts.push_back(c_.edges()[e].second);
      }
      throw DegenerateValues("tiling: adjacent vertices share a g-value", verts,
                             offenders);
    }
  }

  void collect_singular_structure() {
    IndexReport rep = index_formula_check(f_, c_);
    if (!rep.matches())
      throw ConsistencyError("index sum does not equal 2 - m on this input");
    for (const auto& e : rep.entries)
      if (e.index != 0) vertex_index_[e.vertex] = e.index;

    CriticalValues K = critical_values(f_, c_);
    std::set<int> seen;
    for (size_t vi = 1; vi + 1 < K.values.size(); ++vi) {
      curves_.push_back(extract_level(f_, c_, mesh_, K.values[vi]));
      int ci = static_cast<int>(curves_.size()) - 1;
      const LevelCurve& cur = curves_.back();
      for (int comp = 0; comp < static_cast<int>(cur.components.size()); ++comp) {
        const auto& lc = cur.components[comp];
        if (lc.tangencies.empty()) continue;
        SingularComponent sc;
        sc.value = K.values[vi];
        sc.curve_index = ci;
        sc.component = comp;
        sc.tangencies = lc.tangencies;
        for (int t : lc.tangencies) seen.insert(t);
        sing_.push_back(std::move(sc));
      }
    }
    for (auto& [v, idx] : vertex_index_)
      if (!seen.count(v))
        throw ConsistencyError("singular vertex missing from every level curve");
  }

  double direction_to(int from, int to) const {
    return angle_of(c_.position(to) - c_.position(from));
  }

  int other_end(int edge, int v) const {
    auto [a, b] = c_.edges()[edge];
    return a == v ? b : a;
  }

  void init_from_outer_boundary(Context& ctx) {
    // E1 counterclockwise starting at the smallest id; per vertex the
    // descending edges go clockwise from the direction of the previous vertex.
    std::vector<int> cyc = c_.outer_boundary();
    size_t start = 0;
    for (size_t i = 1; i < cyc.size(); ++i)
      if (cyc[i] < cyc[start]) start = i;
    std::rotate(cyc.begin(), cyc.begin() + start, cyc.end());

    double s = 0;
    for (size_t i = 0; i < cyc.size(); ++i) {
      int x = cyc[i];
      int prev = cyc[(i + cyc.size() - 1) % cyc.size()];
      double ref = direction_to(x, prev);
      for (auto [eid, y] : descending_edges_cw(x, ref)) {
        double w = edge_flux(f_, c_, eid);
        ctx.init.push_back({eid, w, s, y});
        s += w;
      }
    }
    ctx.circumference = s;
  }

  std::vector<std::pair<int, int>> descending_edges_cw(int x, double ref) const {
    const auto& nbrs = c_.neighbors_ccw(x);
    const auto& eids = c_.neighbor_edges_ccw(x);
    std::vector<std::pair<int, int>> out;
    for (size_t i = 0; i < nbrs.size(); ++i) {
      if (flat_edge_[eids[i]]) continue;
      if (f_.values[nbrs[i]] < f_.values[x]) out.push_back({eids[i], nbrs[i]});
    }
    std::sort(out.begin(), out.end(), [&](auto a, auto b) {
      double da = cw_offset(ref, direction_to(x, a.second));
      double db = cw_offset(ref, direction_to(x, b.second));
      if (da != db) return da < db;
      return a.second < b.second;
    });
    return out;
  }

  std::vector<std::pair<int, int>> sector_edges_cw(const LevelVisit& visit,
                                                   double h) const {
    int x = visit.vertex;
    const auto& nbrs = c_.neighbors_ccw(x);
    const auto& eids = c_.neighbor_edges_ccw(x);
    double span = cw_offset(visit.ray_in, visit.ray_out);
    std::vector<std::pair<double, std::pair<int, int>>> picks;
    for (size_t i = 0; i < nbrs.size(); ++i) {
      if (flat_edge_[eids[i]]) continue;
      if (!(f_.values[nbrs[i]] < h - flat_tol_)) continue;
      double off = cw_offset(visit.ray_in, direction_to(x, nbrs[i]));
      if (off < span) picks.push_back({off, {eids[i], nbrs[i]}});
    }
    std::sort(picks.begin(), picks.end());
    std::vector<std::pair<int, int>> out;
    for (auto& p : picks) out.push_back(p.second);
    return out;
  }

  int find_bottom_component(const Context& ctx) const {
    int best = -1;
    for (size_t i = 0; i < sing_.size(); ++i) {
      const auto& sc = sing_[i];
      if (sc.value >= ctx.top_value - snap_) continue;
      if (!component_in_region(sc, ctx.region)) continue;
      if (best < 0 || sc.value > sing_[best].value)
        best = static_cast<int>(i);
      else if (sc.value == sing_[best].value)
        throw ConsistencyError("two topmost singular components at one value");
    }
    return best;
  }

  bool component_in_region(const SingularComponent& sc,
                           const std::vector<char>& region) const {
    if (region.empty()) return true;
    // The below endpoint of any crossing lies strictly inside the component's
    // interior, hence inside exactly the region that contains the component.
    const LevelCurve& curve = curves_[sc.curve_index];
    const auto& comp = curve.components[sc.component];
    for (const auto& cyc : comp.cycles)
      for (int n : cyc.nodes) {
        const auto& node = curve.nodes[n];
        if (node.kind != LevelNode::kCrossing || node.xedge >= c_.edge_count())
          continue;
        auto [u, v] = c_.edges()[node.xedge];
        int below = f_.values[u] < sc.value ? u : v;
        return region[below];
      }
    return !sc.tangencies.empty() && region[sc.tangencies.front()];
  }

  std::vector<int> inner_boundaries_in_region(const std::vector<char>& region) const {
    std::vector<int> out;
    for (size_t b = 0; b < c_.inner_boundaries().size(); ++b) {
      int v0 = c_.inner_boundaries()[b][0];
      if (region.empty() || region[v0]) out.push_back(static_cast<int>(b));
    }
    return out;
  }

  // --- band construction ----------------------------------------------------

  void run_band(Context& ctx, std::deque<Context>& queue) {
    Cylinder& cyl = surface_.cylinders[ctx.cyl_id];
    cyl.parent = ctx.parent;
    cyl.top_value = ctx.top_value;
    cyl.top_label = ctx.top_label;
    cyl.circumference = ctx.circumference;
    cyl.glue = ctx.glue;

    int sc_idx = surface_.m >= 3 ? find_bottom_component(ctx) : -1;
    double bottom_value;
    if (sc_idx >= 0) {
      bottom_value = sing_[sc_idx].value;
      cyl.bottom_label = "level";
    } else {
      auto inner = inner_boundaries_in_region(ctx.region);
      if (inner.size() != 1)
        throw ConsistencyError(
            "band without a singular bottom must contain exactly one inner boundary");
      bottom_value = 0;
      cyl.bottom_boundary = inner[0];
      cyl.bottom_label = "E2#" + std::to_string(inner[0]);
    }
    cyl.bottom_value = bottom_value;

    std::vector<std::pair<double, int>> order;
    for (int v = 0; v < c_.vertex_count(); ++v) {
      if (c_.is_boundary_vertex(v)) continue;
      if (!ctx.region.empty() && !ctx.region[v]) continue;
      double g = f_.values[v];
      if (g > bottom_value + snap_ && g < ctx.top_value - snap_)
        order.push_back({g, v});
    }
    std::sort(order.begin(), order.end(), [](auto& a, auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });

    Ring ring;
    {
      int prev_col = -1, first_col = -1;
      for (const auto& ic : ctx.init) {
        SweepCol col;
        col.edge = ic.edge;
        col.width = ic.width;
        col.s = ic.s;
        col.top = ctx.top_value;
        col.lower = ic.lower;
        int id = ring.add(col);
        if (prev_col >= 0) ring.link(prev_col, id);
        if (first_col < 0) first_col = id;
        prev_col = id;
      }
      if (first_col < 0) throw ConsistencyError("band with no initial columns");
      ring.link(prev_col, first_col);
    }

    const double balance_tol = 1e-9 * std::max(ctx.circumference, 1.0);

    for (auto& [g, w] : order) {
      auto it = ring.by_lower.find(w);
      if (it == ring.by_lower.end() || it->second.empty())
        throw ConsistencyError("band vertex with no incoming columns");
      std::set<int> block(it->second.begin(), it->second.end());
      for (int cid : block)
        if (!ring.cols[cid].alive)
          throw ConsistencyError("incoming column already consumed");

      int leftmost = -1;
      for (int cid : block)
        if (!block.count(ring.cols[cid].prev)) {
          if (leftmost >= 0)
            throw ConsistencyError("incoming columns are not contiguous");
          leftmost = cid;
        }
      bool whole_ring = leftmost < 0;
      if (whole_ring) leftmost = *block.begin();

      std::vector<int> block_ids;
      {
        int cur = leftmost;
        for (size_t i = 0; i < block.size(); ++i) {
          if (!block.count(cur))
            throw ConsistencyError("incoming columns are not contiguous");
          block_ids.push_back(cur);
          cur = ring.cols[cur].next;
        }
      }
      int before = ring.cols[leftmost].prev;
      int after = ring.cols[block_ids.back()].next;
      double block_s = ring.cols[leftmost].s;
      double in_width = 0;
      for (int cid : block_ids) {
        const SweepCol& col = ring.cols[cid];
        cyl.rects.push_back({col.edge, col.s, col.top, g, col.width});
        in_width += col.width;
        ring.cols[cid].alive = false;
      }
      ring.by_lower.erase(w);

      int up = other_end(ring.cols[leftmost].edge, w);
      double ref = direction_to(w, up);
      auto outs = descending_edges_cw(w, ref);
      if (outs.empty())
        throw ConsistencyError("interior vertex with no descending edges");

      double s = block_s;
      int first_out = -1, prev2 = -1;
      for (auto [eid, y] : outs) {
        SweepCol col;
        col.edge = eid;
        col.width = edge_flux(f_, c_, eid);
        col.s = s;
        col.top = g;
        col.lower = y;
        s += col.width;
        int id = ring.add(col);
        if (prev2 >= 0) ring.link(prev2, id);
        if (first_out < 0) first_out = id;
        prev2 = id;
      }
      if (whole_ring) {
        ring.link(prev2, first_out);
      } else {
        ring.link(before, first_out);
        ring.link(prev2, after);
      }
      if (std::abs((s - block_s) - in_width) > balance_tol)
        throw ConsistencyError("flux balance violated at a band vertex");
    }

    std::vector<int> ring_ids = ring.alive_in_order();
    std::vector<BottomCol> bottom;
    for (int id : ring_ids) {
      const SweepCol& col = ring.cols[id];
      cyl.rects.push_back({col.edge, col.s, col.top, bottom_value, col.width});
      bottom.push_back({col.edge, col.width, col.s, col.lower});
    }

    if (sc_idx < 0) {
      double total = 0;
      for (auto& b : bottom) total += b.width;
      if (cyl.bottom_boundary >= 0) inner_lengths_[cyl.bottom_boundary] = total;
      finalize_cylinder(cyl);
      return;
    }

    // Children are appended to the cylinder vector inside; re-fetch after.
    build_singular_bottom(ctx, sing_[sc_idx], bottom, queue);
    finalize_cylinder(surface_.cylinders[ctx.cyl_id]);
  }

  void finalize_cylinder(Cylinder& cyl) {
    std::sort(cyl.rects.begin(), cyl.rects.end(), [](const Rect& a, const Rect& b) {
      if (a.edge != b.edge) return a.edge < b.edge;
      return a.top > b.top;
    });
    cyl.markers.clear();
    for (const auto& r : cyl.rects)
      cyl.markers.push_back(
          {r.s, r.bottom - cyl.bottom_value, r.top - cyl.bottom_value});
  }

  void build_singular_bottom(Context& ctx, const SingularComponent& sc,
                             const std::vector<BottomCol>& bottom,
                             std::deque<Context>& queue) {
    Cylinder& cyl = surface_.cylinders[ctx.cyl_id];  // no children exist yet
    const int parent_id = ctx.cyl_id;
    const LevelCurve& curve = curves_[sc.curve_index];
    const LevelComponent& comp = curve.components[sc.component];
    const double h = sc.value;
    const double tol = Tol::glue_rel * std::max(ctx.circumference, 1.0);

    std::map<int, int> edge_cycle;
    std::map<int, std::vector<int>> vertex_cycles;
    std::map<std::pair<int, int>, const LevelVisit*> visit_of;
    for (int cy = 0; cy < static_cast<int>(comp.cycles.size()); ++cy) {
      for (int n : comp.cycles[cy].nodes) {
        const auto& node = curve.nodes[n];
        if (node.kind == LevelNode::kCrossing && node.xedge < c_.edge_count())
          edge_cycle[node.xedge] = cy;
      }
      for (const auto& visit : comp.cycles[cy].visits) {
        vertex_cycles[visit.vertex].push_back(cy);
        visit_of[{cy, visit.vertex}] = &visit;
      }
    }
    std::set<int> tangency_set(comp.tangencies.begin(), comp.tangencies.end());

    struct Item {
      bool junction = false;
      int vertex = -1;
      int cycle = -1;
      double start = 0, width = 0;
    };
    std::vector<Item> items;
    std::map<int, double> edge_parent_s;   // crossing edge -> bottom position
    std::map<int, double> regon_parent_s;  // regular on-vertex -> block start
    for (const auto& col : bottom) {
      bool on_vertex = std::abs(f_.values[col.lower] - h) <= snap_;
      if (!on_vertex) {
        auto it = edge_cycle.find(col.edge);
        if (it == edge_cycle.end())
          throw ConsistencyError("bottom crossing does not belong to the cut curve");
        items.push_back({false, -1, it->second, col.s, col.width});
        edge_parent_s[col.edge] = col.s;
      } else {
        int v = col.lower;
        bool tang = tangency_set.count(v) > 0;
        if (!items.empty() && items.back().vertex == v) {
          items.back().width += col.width;
        } else {
          int cycle = -1;
          if (!tang) {
            auto vc = vertex_cycles.find(v);
            if (vc == vertex_cycles.end() || vc->second.size() != 1)
              throw ConsistencyError("on-level vertex without a unique cycle");
            cycle = vc->second[0];
            regon_parent_s[v] = col.s;
          }
          items.push_back({tang, v, cycle, col.s, col.width});
        }
      }
    }
    if (items.empty()) throw ConsistencyError("empty singular bottom");
    // A vertex block split by the ring seam: rejoin it at the tail, keeping
    // the unrolled start; downstream comparisons are wrap-aware.
    if (items.size() >= 2 && items.front().vertex >= 0 &&
        items.front().vertex == items.back().vertex) {
      items.back().width += items.front().width;
      items.erase(items.begin());
    }
    {
      size_t j0 = 0;
      while (j0 < items.size() && !items[j0].junction) ++j0;
      if (j0 == items.size())
        throw ConsistencyError("singular bottom without a tangency block");
      std::rotate(items.begin(), items.begin() + j0, items.end());
    }

    std::vector<Junction> junctions;
    std::vector<std::vector<int>> stretch_items;
    for (size_t i = 0; i < items.size(); ++i) {
      if (items[i].junction) {
        Junction j;
        j.vertex = items[i].vertex;
        j.start = items[i].start;
        j.alpha = items[i].width;
        j.end = j.start + j.alpha;
        junctions.push_back(j);
        stretch_items.push_back({});
      } else {
        if (junctions.empty())
          throw ConsistencyError("stretch before the first junction");
        stretch_items.back().push_back(static_cast<int>(i));
      }
    }
    const int J = static_cast<int>(junctions.size());
    for (int j = 0; j < J; ++j) {
      int cycle = -1;
      for (int ii : stretch_items[j]) {
        if (cycle < 0) cycle = items[ii].cycle;
        if (items[ii].cycle != cycle)
          throw ConsistencyError("stretch mixes cycles of the cut curve");
      }
      if (cycle < 0)
        throw ConsistencyError("empty stretch between tangency passages");
      junctions[j].c_next = cycle;
      junctions[(j + 1) % J].c_prev = cycle;
    }

    auto beta = [&](int vertex, int cycle) {
      const LevelVisit* visit = visit_of.at({cycle, vertex});
      return visit_sector_flux(f_, c_, *visit, h, /*below=*/true);
    };

    // Per-vertex pinch placement.
    std::map<int, std::vector<int>> vertex_junctions;
    for (int j = 0; j < J; ++j) vertex_junctions[junctions[j].vertex].push_back(j);
    for (auto& [v, js] : vertex_junctions) {
      const int r = static_cast<int>(js.size());
      std::vector<double> D(r, 0.0);
      for (int t = 1; t < r; ++t)
        D[t] = D[t - 1] + junctions[js[t]].alpha -
               beta(v, junctions[js[t - 1]].c_next);
      double lo = 0, hi = 1e300;
      for (int t = 0; t < r; ++t) {
        double cap =
            std::min(junctions[js[t]].alpha, beta(v, junctions[js[t]].c_next));
        lo = std::max(lo, -D[t]);
        hi = std::min(hi, cap - D[t]);
      }
      if (lo > hi + tol)
        throw ConsistencyError("pinch placement infeasible at a tangency");
      double z1 = std::max(lo, 0.0);
      for (int t = 0; t < r; ++t) {
        double z = std::min(std::max(z1 + D[t], 0.0), junctions[js[t]].alpha);
        junctions[js[t]].z = z;
        junctions[js[t]].pinch = junctions[js[t]].end - z;
      }
    }

    for (auto& [v, js] : vertex_junctions) {
      PinchGroup g;
      g.vertex = v;
      for (int j : js) {
        double p = std::fmod(junctions[j].pinch, ctx.circumference);
        if (p < 0) p += ctx.circumference;
        g.positions.push_back(p);
      }
      std::sort(g.positions.begin(), g.positions.end());
      cyl.bottom_quotient.push_back(std::move(g));

      auto& sp = cone_points_[v];
      sp.vertex = v;
      sp.index = vertex_index_.count(v) ? vertex_index_.at(v) : 0;
      if (sp.cylinders.empty() || sp.cylinders.front() != cyl.id)
        sp.cylinders.insert(sp.cylinders.begin(), cyl.id);
      int r = static_cast<int>(js.size());
      if (r != 1 - sp.index)
        throw ConsistencyError(
            "tangency passage count differs from 1 - index at a singular vertex");
      sp.cone_angle = 2.0 * r * M_PI;
    }
    std::sort(cyl.bottom_quotient.begin(), cyl.bottom_quotient.end(),
              [](const PinchGroup& a, const PinchGroup& b) {
                return a.vertex < b.vertex;
              });

    // Children. new_cylinder() may reallocate; `cyl` must not be used below.
    for (int cy = 0; cy < static_cast<int>(comp.cycles.size()); ++cy) {
      Context child;
      child.cyl_id = new_cylinder();
      child.parent = parent_id;
      child.top_value = h;
      child.top_label = "level";
      build_child_top(curve, comp, cy, junctions, edge_parent_s, regon_parent_s,
                      tangency_set, h, tol, ctx.circumference, child);
      child.region.assign(c_.vertex_count(), 0);
      for (int v :
           below_region_vertices(c_, f_, curve, comp, comp.cycles[cy]))
        child.region[v] = 1;
      for (const auto& visit : comp.cycles[cy].visits)
        if (tangency_set.count(visit.vertex))
          cone_points_[visit.vertex].cylinders.push_back(child.cyl_id);
      queue.push_back(std::move(child));
    }
  }

  void build_child_top(const LevelCurve& curve, const LevelComponent& comp,
                       int cy, const std::vector<Junction>& junctions,
                       const std::map<int, double>& edge_parent_s,
                       const std::map<int, double>& regon_parent_s,
                       const std::set<int>& tangency_set, double h, double tol,
                       double parent_C, Context& child) {
    const LevelCycle& cycle = comp.cycles[cy];

    // enter/exit junction per tangency vertex of this cycle.
    std::map<int, int> enter_j, exit_j;
    for (size_t j = 0; j < junctions.size(); ++j) {
      if (junctions[j].c_next == cy) {
        if (enter_j.count(junctions[j].vertex))
          throw ConsistencyError("cycle entered twice at one tangency");
        enter_j[junctions[j].vertex] = static_cast<int>(j);
      }
      if (junctions[j].c_prev == cy) {
        if (exit_j.count(junctions[j].vertex))
          throw ConsistencyError("cycle exited twice at one tangency");
        exit_j[junctions[j].vertex] = static_cast<int>(j);
      }
    }

    // Entry visit: the smallest tangency vertex on the cycle.
    int entry_vertex = -1;
    for (const auto& visit : cycle.visits)
      if (tangency_set.count(visit.vertex))
        if (entry_vertex < 0 || visit.vertex < entry_vertex)
          entry_vertex = visit.vertex;
    if (entry_vertex < 0)
      throw ConsistencyError("bouquet cycle without a tangency vertex");
    if (!enter_j.count(entry_vertex) || !exit_j.count(entry_vertex))
      throw ConsistencyError("tangency without enter/exit junctions");

    // Rotate traversal to start at the entry vertex node.
    std::vector<int> nodes = cycle.nodes;
    {
      size_t pos = 0;
      bool found = false;
      for (size_t i = 0; i < nodes.size(); ++i) {
        const auto& node = curve.nodes[nodes[i]];
        if (node.kind == LevelNode::kAtVertex && node.vertex == entry_vertex) {
          pos = i;
          found = true;
          break;
        }
      }
      if (!found) throw ConsistencyError("entry vertex not on its cycle");
      std::rotate(nodes.begin(), nodes.begin() + pos, nodes.end());
    }
    std::map<int, const LevelVisit*> visits_by_vertex;
    for (const auto& visit : cycle.visits) visits_by_vertex[visit.vertex] = &visit;

    auto exit_portion = [&](int v) {
      const Junction& j = junctions[exit_j.at(v)];
      return j.alpha - j.z;
    };

    double after_entry = exit_portion(entry_vertex);
    double cursor = -after_entry;
    double stretch_offset = junctions[enter_j.at(entry_vertex)].pinch;  // - 0
    double glue_child_start = 0;
    double glue_parent_start = stretch_offset;

    struct RawCol {
      int edge;
      double width;
      double s;
      int lower;
    };
    std::vector<RawCol> raw;
    std::vector<GlueInterval> glue;

    auto emit_block = [&](const LevelVisit& visit) {
      for (auto [eid, y] : sector_edges_cw(visit, h)) {
        double w = edge_flux(f_, c_, eid);
        raw.push_back({eid, w, cursor, y});
        cursor += w;
      }
    };

    for (size_t i = 0; i < nodes.size(); ++i) {
      const auto& node = curve.nodes[nodes[i]];
      if (node.kind == LevelNode::kAtVertex) {
        int v = node.vertex;
        auto vit = visits_by_vertex.find(v);
        if (vit == visits_by_vertex.end())
          throw ConsistencyError("on-level vertex without a recorded visit");
        if (tangency_set.count(v)) {
          if (i != 0) {
            // Close the current stretch at this pinch.
            double pinch_child = cursor + exit_portion(v);
            const Junction& jex = junctions[exit_j.at(v)];
            if (!circ_close(pinch_child + stretch_offset, jex.pinch, parent_C, tol))
              throw ConsistencyError("gluing: pinch misaligned with the parent");
            glue.push_back({glue_child_start, glue_parent_start,
                            pinch_child - glue_child_start});
            emit_block(*vit->second);
            // Start the next stretch.
            const Junction& jen = junctions[enter_j.at(v)];
            stretch_offset = jen.pinch - pinch_child;
            glue_child_start = pinch_child;
            glue_parent_start = jen.pinch;
          } else {
            emit_block(*vit->second);
          }
        } else {
          // Regular on-level vertex: block must sit where the parent block sat.
          if (regon_parent_s.count(v) &&
              !circ_close(cursor + stretch_offset, regon_parent_s.at(v), parent_C, tol))
            throw ConsistencyError("gluing: on-level block misaligned");
          emit_block(*vit->second);
        }
      } else if (node.xedge < c_.edge_count()) {
        auto [u, v2] = c_.edges()[node.xedge];
        int below = f_.values[u] < h ? u : v2;
        double w = edge_flux(f_, c_, node.xedge);
        if (!circ_close(cursor + stretch_offset, edge_parent_s.at(node.xedge),
                        parent_C, tol))
          throw ConsistencyError("gluing: crossing column misaligned");
        raw.push_back({node.xedge, w, cursor, below});
        cursor += w;
      }
      // diagonal crossings carry no flux
    }
    // Close the final stretch back at the entry pinch.
    {
      double pinch_child = cursor + after_entry;
      const Junction& jex = junctions[exit_j.at(entry_vertex)];
      if (!circ_close(pinch_child + stretch_offset, jex.pinch, parent_C, tol))
        throw ConsistencyError("gluing: closing pinch misaligned");
      glue.push_back(
          {glue_child_start, glue_parent_start, pinch_child - glue_child_start});
    }

    double C_child = cursor + after_entry;  // total width emitted
    if (C_child <= 0) throw ConsistencyError("child cylinder with no width");
    child.circumference = C_child;
    for (auto& rc : raw) {
      double s = std::fmod(rc.s, C_child);
      if (s < 0) s += C_child;
      child.init.push_back({rc.edge, rc.width, s, rc.lower});
    }
    // Normalize glue coordinates onto their circles.
    for (auto& g : glue) {
      double s = std::fmod(g.child_start, C_child);
      if (s < 0) s += C_child;
      g.child_start = s;
      double p = std::fmod(g.parent_start, parent_C);
      if (p < 0) p += parent_C;
      g.parent_start = p;
    }
    child.glue = std::move(glue);
  }

  void finalize_surface() {
    double area = 0;
    for (auto& cyl : surface_.cylinders) area += cyl.area();
    surface_.area = area;
    surface_.inner_lengths = inner_lengths_;
    for (auto& [v, sp] : cone_points_) surface_.singular_points.push_back(sp);
    assign_zero_area_edges();
  }

  void assign_zero_area_edges() {
    for (int e : flat_edges_list_) {
      int target = 0;
      auto [u, v] = c_.edges()[e];
      int bc = -1;
      if (c_.is_boundary_vertex(u) &&
          c_.boundary_cycle_of(u) == c_.boundary_cycle_of(v))
        bc = c_.boundary_cycle_of(u);
      if (bc > 0)
        for (const auto& cyl : surface_.cylinders)
          if (cyl.bottom_boundary == bc - 1) target = cyl.id;
      surface_.cylinders[target].zero_area_edges.push_back(e);
    }
    for (auto& cyl : surface_.cylinders)
      std::sort(cyl.zero_area_edges.begin(), cyl.zero_area_edges.end());
  }
};

}  // namespace

FlatSurface tile(const PlanarComplex& c, const HarmonicField& f,
                 const std::string& mode, bool allow_flat_edges) {
  TilerEngine engine(c, f, allow_flat_edges);
  return engine.run(mode);
}

FlatSurface tile_annulus(const PlanarComplex& c, const HarmonicField& f,
                         bool allow_flat_edges) {
  return tile(c, f, "annulus", allow_flat_edges);
}

FlatSurface tile_pair_of_pants(const PlanarComplex& c, const HarmonicField& f,
                               bool allow_flat_edges) {
  return tile(c, f, "pants", allow_flat_edges);
}

FlatSurface tile_ladder(const PlanarComplex& c, const HarmonicField& f,
                        bool allow_flat_edges) {
  return tile(c, f, "ladder", allow_flat_edges);
}

DoubledSurfaceDescriptor double_surface(const FlatSurface& s) {
  DoubledSurfaceDescriptor d;
  d.genus = s.m - 1;
  d.area = 2 * s.area;
  d.singular_points = 2 * static_cast<int>(s.singular_points.size());
  for (const auto& sp : s.singular_points) {
    d.cone_angles.push_back(sp.cone_angle);
    d.cone_angles.push_back(sp.cone_angle);
  }
  return d;
}

TilingReport verify_tiling(const Cylinder& cyl) {
  TilingReport rep;
  const double C = cyl.circumference;
  const double H = cyl.height();
  double area = 0;
  for (const auto& r : cyl.rects) area += r.area();
  rep.area_residual = std::abs(area - C * H);
  if (C <= 0 || H <= 0 || cyl.rects.empty()) return rep;

  // Event sweep from the top: between two consecutive distinct rect edges the
  // active interval set is constant, so one probe per band covers every
  // nudged top/bottom sample height.
  struct Ev {
    double y;
    int rect;
    bool add;
  };
  std::vector<Ev> events;
  events.reserve(2 * cyl.rects.size());
  for (size_t i = 0; i < cyl.rects.size(); ++i) {
    if (cyl.rects[i].width <= 0 || cyl.rects[i].height() <= 0) continue;
    events.push_back({cyl.rects[i].top, (int)i, true});
    events.push_back({cyl.rects[i].bottom, (int)i, false});
  }
  std::sort(events.begin(), events.end(), [](const Ev& a, const Ev& b) {
    if (a.y != b.y) return a.y > b.y;
    return a.add < b.add;  // removals first at equal heights
  });

  std::set<std::pair<double, int>> active;  // (normalized s, rect id)
  auto norm = [&](double s) {
    s = std::fmod(s, C);
    return s < 0 ? s + C : s;
  };
  size_t i = 0;
  while (i < events.size()) {
    double y = events[i].y;
    for (; i < events.size() && events[i].y == y; ++i) {
      const Rect& r = cyl.rects[events[i].rect];
      auto key = std::make_pair(norm(r.s), events[i].rect);
      if (events[i].add)
        active.insert(key);
      else
        active.erase(key);
    }
    if (active.empty()) continue;
    double band_bottom = i < events.size() ? events[i].y : cyl.bottom_value;
    if (!(band_bottom < y)) continue;
    // Probe this band once; overlap accumulates as area.
    double covered = 0, cursor = 0, overlap_w = 0, wrap_extra = 0;
    for (const auto& [s, id] : active) {
      double b = s + cyl.rects[id].width;
      double hi = std::min(b, C);
      if (b > C) wrap_extra += b - C;  // tail wraps past the seam
      if (cursor > s && hi > s) overlap_w += std::min(cursor, hi) - s;
      if (hi > cursor) {
        covered += hi - std::max(s, cursor);
        cursor = hi;
      }
    }
    // Fold the wrapped tail back onto the head of the circle.
    if (wrap_extra > 0) {
      double head_gap = active.begin()->first;
      covered += std::min(wrap_extra, head_gap);
      if (wrap_extra > head_gap) overlap_w += wrap_extra - head_gap;
    }
    rep.max_gap = std::max(rep.max_gap, C - covered);
    rep.max_overlap += overlap_w * (y - band_bottom);
    ++rep.heights_checked;
  }
  return rep;
}

}  // namespace flattile
