#pragma once

#include <map>
#include <vector>

#include "complex.hpp"
#include "level.hpp"
#include "solver.hpp"

namespace flattile {

// A sub-domain produced by cutting along a level curve. Stored at graph level:
// the cut boundary is a polyline of level points, so faces of the parent do
// not survive as triangles/quads; everything downstream (induced solves, flux
// sums, tilings) only needs the weighted graph plus coordinates.
struct CutPiece {
  struct PieceEdge {
    int u, v;
    double c;
    int parent_edge;  // -1 for arcs of the cut curve
    enum Kind { kFull, kSub, kArc } kind;
  };
  bool is_interior = false;
  int component = -1;  // component index of the cut curve
  int cycle = -1;      // cycle index within the component (interior pieces)
  std::vector<int> vertices;           // shared id space with the parent
  std::vector<PieceEdge> edges;
  std::map<int, double> values;        // induced solution = restriction of g
  std::map<int, Vec2> coords;
  std::vector<int> pinned;             // boundary vertices (curve + original)
  std::vector<int> inner_boundaries;   // parent inner-boundary cycles inside
};

struct CutResult {
  double value = 0;
  // New vertex ids are allocated above the parent's maximum id, ordered by
  // (parent edge id, t).
  std::map<int, std::pair<int, double>> vertex_provenance;  // vid -> (edge, t)
  std::vector<CutPiece> interior;  // one per simple cycle of the cut curve
  CutPiece exterior;
};

// Cut the complex along a level curve (one component, or all when
// component < 0). Interior pieces hold the vertices strictly below the level.
CutResult cut_along(const PlanarComplex& c, const HarmonicField& f,
                    const LevelCurve& curve, int component = -1);

// Vertices strictly below the level enclosed by one cycle (combinatorial
// flood that never steps across the curve).
std::vector<int> below_region_vertices(const PlanarComplex& c,
                                       const HarmonicField& f,
                                       const LevelCurve& curve,
                                       const LevelComponent& comp,
                                       const LevelCycle& cycle);

// Re-solve the induced Dirichlet problem on a piece with inherited boundary
// values; returns per-vertex values in the shared id space.
std::map<int, double> resolve_piece(const CutPiece& piece);

// Flux-gradient length of the cut curve measured from each side.
struct TwoSidedLength {
  double interior = 0;
  double exterior = 0;
};
TwoSidedLength two_sided_length(const PlanarComplex& c, const HarmonicField& f,
                                const LevelCurve& curve, int component = -1);

// Network refinement: type I vertices at the crossings of the given level
// values, then a type II vertex on every refined edge that joins two
// consecutive level curves directly, keeping curves two combinatorial steps
// apart. Conductances of split edges preserve the parent edge flux.
struct RefinedNetwork {
  ConductanceGraph graph;
  std::vector<Vec2> coords;
  std::vector<double> values;
  std::vector<int> edge_parent;  // per graph edge, -1 if untouched parent id
  std::map<int, std::pair<int, double>> vertex_provenance;
  std::vector<int> type1;
  std::vector<int> type2;
  bool changed = false;
};
RefinedNetwork ensure_separation(const PlanarComplex& c, const HarmonicField& f,
                                 const std::vector<double>& levels);

}  // namespace flattile
