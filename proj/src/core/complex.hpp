#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geom.hpp"

namespace flattile {

struct ValidationIssue {
  std::string code;
  std::string message;
  std::vector<int> vertices;
  std::vector<int> edges;
  std::vector<int> faces;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Planar cellular decomposition of an m-connected region with per-edge
// conductances. Faces are triangles or quadrilaterals stored counterclockwise;
// the outer boundary cycle is counterclockwise, inner cycles clockwise.
// Immutable after construction.
class PlanarComplex {
 public:
  PlanarComplex(std::vector<Vec2> vertices, std::vector<std::pair<int, int>> edges,
                std::vector<std::vector<int>> faces, std::vector<int> outer_boundary,
                std::vector<std::vector<int>> inner_boundaries,
                std::vector<double> conductance, double k);

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }
  int boundary_cycle_count() const {
    return 1 + static_cast<int>(inner_boundaries_.size());
  }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  Vec2 position(int v) const { return vertices_[v]; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& faces() const { return faces_; }
  const std::vector<int>& outer_boundary() const { return outer_boundary_; }
  const std::vector<std::vector<int>>& inner_boundaries() const {
    return inner_boundaries_;
  }
  const std::vector<double>& conductances() const { return conductance_; }
  double conductance(int edge) const { return conductance_[edge]; }
  double k() const { return k_; }

  // -1 if the pair is not an edge.
  int edge_index(int u, int v) const;
  // Neighbors of v sorted counterclockwise by angle; parallel edge ids.
  const std::vector<int>& neighbors_ccw(int v) const { return adj_ccw_[v]; }
  const std::vector<int>& neighbor_edges_ccw(int v) const { return adj_edges_ccw_[v]; }
  const std::vector<int>& edge_faces(int edge) const { return edge_faces_[edge]; }

  // Boundary cycle index: 0 = outer, 1.. = inner, -1 = interior vertex.
  int boundary_cycle_of(int v) const { return boundary_of_vertex_[v]; }
  bool is_boundary_vertex(int v) const { return boundary_of_vertex_[v] >= 0; }
  bool is_boundary_edge(int e) const { return edge_boundary_cycle_[e] >= 0; }
  int edge_boundary_cycle(int e) const { return edge_boundary_cycle_[e]; }
  std::vector<int> interior_vertices() const;

  int euler_characteristic() const {
    return vertex_count() - edge_count() + face_count();
  }

  // Reports every violated structural invariant; empty report iff valid.
  ValidationReport validate() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> faces_;
  std::vector<int> outer_boundary_;
  std::vector<std::vector<int>> inner_boundaries_;
  std::vector<double> conductance_;
  double k_;

  std::map<std::pair<int, int>, int> edge_index_;
  std::vector<std::vector<int>> adj_ccw_;
  std::vector<std::vector<int>> adj_edges_ccw_;
  std::vector<std::vector<int>> edge_faces_;
  std::vector<int> boundary_of_vertex_;
  std::vector<int> edge_boundary_cycle_;
};

}  // namespace flattile
