#pragma once

#include <string>
#include <vector>

#include "complex.hpp"
#include "level.hpp"
#include "solver.hpp"

namespace flattile {

// Axis-aligned rectangle on the unrolled band of one cylinder. Heights are
// g-values; width equals the parent edge flux c(u,v)(g(u)-g(v)).
struct Rect {
  int edge = -1;
  double s = 0;
  double top = 0;
  double bottom = 0;
  double width = 0;
  double height() const { return top - bottom; }
  double area() const { return width * height(); }
};

// Vertical segment anchoring a rectangle's left edge; interval in
// cylinder-local heights [0, H].
struct Marker {
  double s = 0;
  double a = 0;
  double b = 0;
};

// Positions on the bottom circle identified into one cone point.
struct PinchGroup {
  int vertex = -1;
  std::vector<double> positions;
};

// Piecewise-isometric gluing of a child top circle onto its parent's bottom.
struct GlueInterval {
  double child_start = 0;
  double parent_start = 0;
  double length = 0;
};

struct Cylinder {
  int id = -1;
  int parent = -1;
  double top_value = 0;
  double bottom_value = 0;
  double circumference = 0;
  std::string top_label;
  std::string bottom_label;
  int bottom_boundary = -1;  // inner boundary index for leaves
  std::vector<Rect> rects;
  std::vector<Marker> markers;
  std::vector<int> zero_area_edges;
  std::vector<PinchGroup> bottom_quotient;
  std::vector<GlueInterval> glue;  // this cylinder's top onto parent's bottom
  double height() const { return top_value - bottom_value; }
  double area() const { return circumference * height(); }
};

struct SingularPoint {
  int vertex = -1;
  int index = 0;
  double cone_angle = 0;
  std::vector<int> cylinders;  // parent first, then the children meeting it
};

struct FlatSurface {
  std::string mode;
  int m = 0;
  double k = 0;
  double energy = 0;
  double area = 0;
  double outer_length = 0;
  std::vector<double> inner_lengths;  // by inner boundary index
  std::vector<Cylinder> cylinders;
  std::vector<SingularPoint> singular_points;
};

struct DoubledSurfaceDescriptor {
  int genus = 0;
  double area = 0;
  int singular_points = 0;  // after doubling
  std::vector<double> cone_angles;
};

// Geometry-only view used both by the builder and by document verification.
struct TilingReport {
  double area_residual = 0;
  double max_overlap = 0;   // accumulated overlap area (bounds any pair)
  double max_gap = 0;       // worst uncovered width over the sweep heights
  int heights_checked = 0;
  bool pass(double area_tol, double overlap_tol, double gap_tol) const {
    return area_residual <= area_tol && max_overlap <= overlap_tol &&
           max_gap <= gap_tol;
  }
};

TilingReport verify_tiling(const Cylinder& cyl);

// Tiling drivers. `allow_flat_edges` admits zero-area rectangles for edges
// whose endpoints share a g-value (recorded, never drawn); the index stages
// still reject flat fans.
FlatSurface tile_annulus(const PlanarComplex& c, const HarmonicField& f,
                         bool allow_flat_edges = false);
FlatSurface tile_pair_of_pants(const PlanarComplex& c, const HarmonicField& f,
                               bool allow_flat_edges = false);
FlatSurface tile_ladder(const PlanarComplex& c, const HarmonicField& f,
                        bool allow_flat_edges = false);
// mode: annulus | pants | ladder | auto
FlatSurface tile(const PlanarComplex& c, const HarmonicField& f,
                 const std::string& mode, bool allow_flat_edges = false);

DoubledSurfaceDescriptor double_surface(const FlatSurface& s);

}  // namespace flattile
