#pragma once

#include <map>
#include <vector>

#include "complex.hpp"
#include "solver.hpp"

namespace flattile {

// Geometric triangulation used for level tracing. Quadrilaterals are split
// along the diagonal from their smallest vertex id; the split is geometric
// only and never touches the network, its conductances, or harmonicity.
struct TracingMesh {
  struct XEdge {
    int u = -1, v = -1;       // endpoints, u < v
    int parent_edge = -1;     // -1 for a quad diagonal
    int face = -1;            // owning face for diagonals
    int tri[2] = {-1, -1};
    int tri_count = 0;
  };
  struct Tri {
    int v[3];
    int xe[3];  // xe[i] joins v[i] and v[(i+1)%3]
    int face;
  };
  std::vector<XEdge> xedges;  // network edges first, then diagonals
  std::vector<Tri> tris;

  explicit TracingMesh(const PlanarComplex& c);
};

struct LevelNode {
  enum Kind { kCrossing, kAtVertex } kind;
  int xedge = -1;   // crossing: extended edge id
  double t = 0;     // crossing: parameter from the smaller-id endpoint
  int vertex = -1;  // at-vertex
  Vec2 pos;
};

// One passage of a traced cycle through an on-level vertex.
struct LevelVisit {
  int vertex;
  int node;
  double ray_in;   // direction from the vertex toward the arriving segment
  double ray_out;  // direction toward the departing segment
};

struct LevelCycle {
  std::vector<int> nodes;  // traversal order, interior region on the left
  std::vector<LevelVisit> visits;
};

// Generalized bouquet: simple cycles sharing at most single vertices.
struct LevelComponent {
  std::vector<LevelCycle> cycles;
  std::vector<int> tangencies;  // vertices shared by >= 2 cycles
};

struct LevelCurve {
  double value = 0;
  std::vector<LevelNode> nodes;
  std::vector<LevelComponent> components;
  std::vector<std::pair<int, int>> singular_vertices;  // (vertex, index)
};

struct IndexEntry {
  int vertex;
  int sign_changes;
  int index;
};

struct IndexReport {
  std::vector<IndexEntry> entries;  // interior vertices only
  int index_sum = 0;
  int euler_characteristic = 0;
  bool matches() const { return index_sum == euler_characteristic; }
  std::vector<IndexEntry> singular() const {
    std::vector<IndexEntry> out;
    for (const auto& e : entries)
      if (e.index != 0) out.push_back(e);
    return out;
  }
};

// Sign changes in the cyclic sequence g(w_i) - g(v) over the rotational
// neighbor order; throws DegenerateValues when a neighbor ties g(v).
int sign_changes(const HarmonicField& f, const PlanarComplex& c, int v);

// 1 - Sgc/2; nonzero marks a singular vertex.
int vertex_index(const HarmonicField& f, const PlanarComplex& c, int v);

// Scans all interior vertices and checks the index sum against 2 - m.
IndexReport index_formula_check(const HarmonicField& f, const PlanarComplex& c);

// Full preimage of h under the piecewise-affine extension, assembled into
// bouquet components. 0 < h < k.
LevelCurve extract_level(const HarmonicField& f, const PlanarComplex& c,
                         const TracingMesh& mesh, double h);
LevelCurve extract_level(const HarmonicField& f, const PlanarComplex& c, double h);

struct CriticalValues {
  std::vector<double> values;                  // descending, k first, 0 last
  std::map<int, std::vector<int>> vertices_at;  // index into values -> vertices
};

// {0, k} plus the g-values of interior singular vertices.
CriticalValues critical_values(const HarmonicField& f, const PlanarComplex& c);

struct EnclosingCurve {
  LevelCurve curve;
  int component = -1;
};

// The unique singular level curve whose bounded interior contains every inner
// boundary component. Requires m >= 3.
EnclosingCurve enclosing_singular_curve(const HarmonicField& f,
                                        const PlanarComplex& c,
                                        const TracingMesh& mesh);

// --- helpers used by surgery, tiling and tests ---

// Flux carried by a parent edge: c(u,v) |g(u) - g(v)|.
double edge_flux(const HarmonicField& f, const PlanarComplex& c, int edge);

// Sum of network-edge crossing fluxes along one cycle.
double cycle_crossing_flux(const HarmonicField& f, const PlanarComplex& c,
                           const LevelCurve& curve, const LevelCycle& cycle);

// Flux of v's neighbors inside the angular sector swept clockwise from
// ray_in to ray_out, restricted to neighbors below (or above) the level.
double visit_sector_flux(const HarmonicField& f, const PlanarComplex& c,
                         const LevelVisit& visit, double h, bool below);

// Length of a cycle measured from its inside: crossings plus the below-sector
// flux of every visit.
double cycle_inside_length(const HarmonicField& f, const PlanarComplex& c,
                           const LevelCurve& curve, const LevelCycle& cycle);

// Polygon of a cycle's node positions (for containment tests and rendering).
std::vector<Vec2> cycle_polygon(const LevelCurve& curve, const LevelCycle& cycle);

bool cycle_encloses_point(const LevelCurve& curve, const LevelCycle& cycle, Vec2 p);

}  // namespace flattile
