#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "geom.hpp"

namespace flattile::fixtures {

namespace {

// Flip a cycle to the requested orientation (by signed area of its polygon).
std::vector<int> oriented(const std::vector<Vec2>& pos, std::vector<int> cyc,
                          bool ccw) {
  std::vector<Vec2> pts;
  for (int v : cyc) pts.push_back(pos[v]);
  double area = polygon_signed_area(pts);
  if ((area > 0) != ccw) std::reverse(cyc.begin() + 1, cyc.end());
  return cyc;
}

}  // namespace

std::unique_ptr<PlanarComplex> annulus(int n, int rings, double k,
                                       std::function<double(int, int)> conductance) {
  std::vector<Vec2> verts;
  for (int r = 0; r < rings; ++r) {
    double radius = rings - r;
    for (int j = 0; j < n; ++j) {
      double th = 2 * M_PI * j / n;
      verts.push_back({radius * std::cos(th), radius * std::sin(th)});
    }
  }
  auto id = [n](int r, int j) { return r * n + ((j % n) + n) % n; };
  std::vector<std::pair<int, int>> edges;
  std::vector<double> cond;
  auto add_edge = [&](int u, int v) {
    edges.push_back({u, v});
    cond.push_back(conductance ? conductance(u, v) : 1.0);
  };
  for (int r = 0; r < rings; ++r)
    for (int j = 0; j < n; ++j) add_edge(id(r, j), id(r, j + 1));
  for (int r = 0; r + 1 < rings; ++r)
    for (int j = 0; j < n; ++j) add_edge(id(r, j), id(r + 1, j));
  std::vector<std::vector<int>> faces;
  for (int r = 0; r + 1 < rings; ++r)
    for (int j = 0; j < n; ++j)
      faces.push_back({id(r, j), id(r, j + 1), id(r + 1, j + 1), id(r + 1, j)});
  std::vector<int> outer;
  for (int j = 0; j < n; ++j) outer.push_back(id(0, j));
  std::vector<int> inner;
  inner.push_back(id(rings - 1, 0));
  for (int j = n - 1; j >= 1; --j) inner.push_back(id(rings - 1, j));
  return std::make_unique<PlanarComplex>(verts, edges, faces, outer,
                                         std::vector<std::vector<int>>{inner},
                                         cond, k);
}

std::unique_ptr<PlanarComplex> random_annulus(int n, int rings, double k,
                                              unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uc(0.1, 10.0);
  std::vector<Vec2> verts;
  for (int r = 0; r < rings; ++r) {
    double radius = rings - r;
    for (int j = 0; j < n; ++j) {
      double th = 2 * M_PI * j / n;
      verts.push_back({radius * std::cos(th), radius * std::sin(th)});
    }
  }
  auto id = [n](int r, int j) { return r * n + ((j % n) + n) % n; };
  std::vector<std::pair<int, int>> edges;
  std::vector<double> cond;
  auto add_edge = [&](int u, int v) {
    edges.push_back({u, v});
    cond.push_back(uc(rng));
  };
  for (int r = 0; r < rings; ++r)
    for (int j = 0; j < n; ++j) add_edge(id(r, j), id(r, j + 1));
  for (int r = 0; r + 1 < rings; ++r)
    for (int j = 0; j < n; ++j) {
      add_edge(id(r, j), id(r + 1, j));
      add_edge(id(r, j), id(r + 1, j + 1));  // diagonal of the split quad
    }
  std::vector<std::vector<int>> faces;
  for (int r = 0; r + 1 < rings; ++r)
    for (int j = 0; j < n; ++j) {
      faces.push_back({id(r, j), id(r, j + 1), id(r + 1, j + 1)});
      faces.push_back({id(r, j), id(r + 1, j + 1), id(r + 1, j)});
    }
  std::vector<int> outer;
  for (int j = 0; j < n; ++j) outer.push_back(id(0, j));
  std::vector<int> inner;
  inner.push_back(id(rings - 1, 0));
  for (int j = n - 1; j >= 1; --j) inner.push_back(id(rings - 1, j));
  return std::make_unique<PlanarComplex>(verts, edges, faces, outer,
                                         std::vector<std::vector<int>>{inner},
                                         cond, k);
}

std::unique_ptr<PlanarComplex> grid_with_holes(int nx, int ny,
                                               const std::vector<Hole>& holes,
                                               double k, unsigned seed,
                                               bool random_conductance) {
  auto hole_cell = [&](int i, int j) {
    for (const auto& h : holes)
      if (i >= h.x && i < h.x + h.w && j >= h.y && j < h.y + h.h) return true;
    return false;
  };
  // Points used by at least one kept cell.
  std::map<std::pair<int, int>, int> pid;
  std::vector<Vec2> verts;
  auto touch = [&](int i, int j) {
    auto key = std::make_pair(i, j);
    if (!pid.count(key)) {
      pid[key] = static_cast<int>(verts.size());
      verts.push_back({static_cast<double>(i), static_cast<double>(j)});
    }
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (!hole_cell(i, j)) {
        touch(i, j);
        touch(i + 1, j);
        touch(i + 1, j + 1);
        touch(i, j + 1);
      }

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uc(0.1, 10.0);
  std::map<std::pair<int, int>, int> eid;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> cond;
  auto add_edge = [&](int u, int v) {
    auto key = std::minmax(u, v);
    if (eid.count(key)) return;
    eid[key] = static_cast<int>(edges.size());
    edges.push_back({key.first, key.second});
    cond.push_back(random_conductance ? uc(rng) : 1.0);
  };
  std::vector<std::vector<int>> faces;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (hole_cell(i, j)) continue;
      int a = pid.at({i, j}), b = pid.at({i + 1, j});
      int c = pid.at({i + 1, j + 1}), d = pid.at({i, j + 1});
      add_edge(a, b);
      add_edge(b, c);
      add_edge(c, d);
      add_edge(d, a);
      add_edge(a, c);
      faces.push_back({a, b, c});
      faces.push_back({a, c, d});
    }

  std::vector<int> outer;
  for (int i = 0; i < nx; ++i) outer.push_back(pid.at({i, 0}));
  for (int j = 0; j < ny; ++j) outer.push_back(pid.at({nx, j}));
  for (int i = nx; i > 0; --i) outer.push_back(pid.at({i, ny}));
  for (int j = ny; j > 0; --j) outer.push_back(pid.at({0, j}));

  std::vector<std::vector<int>> inners;
  for (const auto& h : holes) {
    std::vector<int> cyc;
    for (int j = h.y; j < h.y + h.h; ++j) cyc.push_back(pid.at({h.x, j}));
    for (int i = h.x; i < h.x + h.w; ++i) cyc.push_back(pid.at({i, h.y + h.h}));
    for (int j = h.y + h.h; j > h.y; --j) cyc.push_back(pid.at({h.x + h.w, j}));
    for (int i = h.x + h.w; i > h.x; --i) cyc.push_back(pid.at({i, h.y}));
    inners.push_back(oriented(verts, cyc, /*ccw=*/false));
  }
  return std::make_unique<PlanarComplex>(verts, edges, faces,
                                         oriented(verts, outer, true), inners,
                                         cond, k);
}

std::unique_ptr<PlanarComplex> pants(double k, unsigned seed) {
  return grid_with_holes(14, 8, {{3, 3, 2, 2}, {9, 3, 2, 2}}, k, seed);
}

std::unique_ptr<PlanarComplex> multi_holed(int m, double k, unsigned seed) {
  std::vector<Hole> holes;
  for (int i = 0; i < m - 1; ++i) holes.push_back({3 + 6 * i, 3, 2, 2});
  int nx = 6 * (m - 1) + 2;
  return grid_with_holes(nx, 8, holes, k, seed);
}

std::unique_ptr<PlanarComplex> threefold(double k, unsigned seed) {
  // Rings: center, 6, 12, 12, 12, 12 (outer). Three vertices of the middle
  // 12-ring are removed to cut holes 120 degrees apart; their links avoid the
  // center's neighborhood, and the center picks up index -2 by symmetry.
  std::vector<Vec2> verts;
  std::vector<int> ring_base;
  auto add_ring = [&](int count, double radius, double phase) {
    ring_base.push_back(static_cast<int>(verts.size()));
    for (int j = 0; j < count; ++j) {
      double th = 2 * M_PI * j / count + phase;
      verts.push_back({radius * std::cos(th), radius * std::sin(th)});
    }
  };
  verts.push_back({0, 0});  // center, id 0
  add_ring(6, 1.0, 0);
  add_ring(12, 2.0, 0);
  add_ring(12, 3.0, 0);
  add_ring(12, 4.0, 0);
  add_ring(12, 5.0, 0);
  add_ring(12, 6.0, 0);
  auto r1 = [&](int j) { return ring_base[0] + ((j % 6) + 6) % 6; };
  auto rr = [&](int ring, int j) {
    return ring_base[ring] + ((j % 12) + 12) % 12;
  };

  std::vector<std::vector<int>> tris;
  for (int j = 0; j < 6; ++j) tris.push_back({0, r1(j), r1(j + 1)});
  for (int j = 0; j < 6; ++j) {
    tris.push_back({r1(j), rr(1, 2 * j), rr(1, 2 * j + 1)});
    tris.push_back({r1(j), rr(1, 2 * j + 1), rr(1, 2 * j + 2)});
    tris.push_back({r1(j), rr(1, 2 * j + 2), r1(j + 1)});
  }
  for (int band = 1; band <= 4; ++band)
    for (int j = 0; j < 12; ++j) {
      tris.push_back({rr(band, j), rr(band + 1, j + 1), rr(band + 1, j)});
      tris.push_back({rr(band, j), rr(band, j + 1), rr(band + 1, j + 1)});
    }

  // Orient every triangle counterclockwise so the link arcs chain coherently.
  for (auto& t : tris) t = oriented(verts, t, true);

  // Remove three vertices of the middle 12-ring; links become hole boundaries.
  std::set<int> removed{rr(2, 0), rr(2, 4), rr(2, 8)};
  std::map<std::pair<int, int>, int> eid;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> faces;
  auto add_edge = [&](int u, int v) {
    auto key = std::minmax(u, v);
    if (!eid.count(key)) {
      eid[key] = static_cast<int>(edges.size());
      edges.push_back({key.first, key.second});
    }
  };
  std::map<int, std::map<int, int>> link_next;  // removed vertex -> arc map
  for (const auto& t : tris) {
    bool drop = false;
    int rem = -1;
    for (int v : t)
      if (removed.count(v)) {
        drop = true;
        rem = v;
      }
    if (!drop) {
      faces.push_back(t);
      add_edge(t[0], t[1]);
      add_edge(t[1], t[2]);
      add_edge(t[2], t[0]);
    } else {
      // Opposite side of the dropped triangle contributes one link arc,
      // oriented counterclockwise around the removed vertex.
      int i = t[0] == rem ? 0 : (t[1] == rem ? 1 : 2);
      link_next[rem][t[(i + 1) % 3]] = t[(i + 2) % 3];
    }
  }
  std::vector<std::vector<int>> inners;
  for (int rv : removed) {
    auto& nxt = link_next[rv];
    std::vector<int> cyc;
    int start = nxt.begin()->first;
    int cur = start;
    do {
      cyc.push_back(cur);
      cur = nxt.at(cur);
    } while (cur != start && cyc.size() <= nxt.size() + 1);
    inners.push_back(cyc);
  }

  // Dense re-index (three ids were removed).
  std::vector<int> remap(verts.size(), -1);
  std::vector<Vec2> verts2;
  for (size_t v = 0; v < verts.size(); ++v) {
    if (removed.count(static_cast<int>(v))) continue;
    remap[v] = static_cast<int>(verts2.size());
    verts2.push_back(verts[v]);
  }
  for (auto& e : edges) e = {remap[e.first], remap[e.second]};
  for (auto& fc : faces)
    for (auto& v : fc) v = remap[v];
  for (auto& cyc : inners)
    for (auto& v : cyc) v = remap[v];
  std::vector<int> outer;
  for (int j = 0; j < 12; ++j) outer.push_back(remap[rr(5, j)]);

  // Threefold-symmetric conductances: the same random pattern in each sector.
  // Rotation: center fixed, ring1 j -> j+2, other rings j -> j+4.
  auto rotate_old = [&](int v) {
    if (v == 0) return 0;
    if (v >= ring_base[0] && v < ring_base[1]) return r1(v - ring_base[0] + 2);
    for (int ring = 1; ring <= 5; ++ring)
      if (v >= ring_base[ring] &&
          (ring == 5 || v < ring_base[ring + 1]))
        return rr(ring, v - ring_base[ring] + 4);
    return v;
  };
  std::vector<int> unmap(verts2.size());
  for (size_t v = 0; v < verts.size(); ++v)
    if (remap[v] >= 0) unmap[remap[v]] = static_cast<int>(v);

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uc(0.5, 2.0);
  std::map<std::pair<int, int>, double> class_value;
  std::vector<double> cond(edges.size(), 1.0);
  for (size_t e = 0; e < edges.size(); ++e) {
    int u = unmap[edges[e].first], v = unmap[edges[e].second];
    std::pair<int, int> rep{std::min(u, v), std::max(u, v)};
    for (int r = 0; r < 2; ++r) {
      u = rotate_old(u);
      v = rotate_old(v);
      rep = std::min(rep, std::pair<int, int>{std::min(u, v), std::max(u, v)});
    }
    auto it = class_value.find(rep);
    if (it == class_value.end()) it = class_value.insert({rep, uc(rng)}).first;
    cond[e] = it->second;
  }

  // Orient everything consistently.
  for (auto& fc : faces) fc = oriented(verts2, fc, true);
  for (auto& cyc : inners) cyc = oriented(verts2, cyc, false);
  return std::make_unique<PlanarComplex>(verts2, edges, faces,
                                         oriented(verts2, outer, true), inners,
                                         cond, k);
}

std::unique_ptr<PlanarComplex> wheel(int spokes, double k) {
  std::vector<Vec2> verts{{0, 0}};
  for (int j = 0; j < spokes; ++j) {
    double th = 2 * M_PI * j / spokes;
    verts.push_back({std::cos(th), std::sin(th)});
  }
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> faces;
  for (int j = 1; j <= spokes; ++j) {
    int nj = j % spokes + 1;
    edges.push_back({0, j});
    edges.push_back({j, nj});
    faces.push_back({0, j, nj});
  }
  std::vector<int> outer;
  for (int j = 1; j <= spokes; ++j) outer.push_back(j);
  return std::make_unique<PlanarComplex>(
      verts, edges, faces, outer, std::vector<std::vector<int>>{},
      std::vector<double>(edges.size(), 1.0), k);
}

}  // namespace flattile::fixtures
