#pragma once

#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "complex.hpp"

namespace flattile::fixtures {

// Concentric annulus: `rings` vertex rings of `n` vertices, quadrilateral
// cells, ring 0 outer (E1), last ring inner (E2). Vertex id = ring * n + j.
std::unique_ptr<PlanarComplex> annulus(int n, int rings = 3, double k = 1.0,
                                       std::function<double(int, int)> conductance = {});

// Triangulated annulus with randomized conductances in [0.1, 10]; generic
// values with overwhelming probability.
std::unique_ptr<PlanarComplex> random_annulus(int n, int rings, double k,
                                              unsigned seed);

// Triangulated rectangular grid with square holes cut out. Boundary cycles:
// outer rectangle plus one cycle per hole. Conductances from `rng` when given.
struct Hole {
  int x, y, w, h;  // in cells
};
std::unique_ptr<PlanarComplex> grid_with_holes(int nx, int ny,
                                               const std::vector<Hole>& holes,
                                               double k, unsigned seed = 0,
                                               bool random_conductance = true);

// Pair of pants: grid with two holes.
std::unique_ptr<PlanarComplex> pants(double k = 1.0, unsigned seed = 7);

// m-connected fixtures (m = boundary cycles): grid with m - 1 holes.
std::unique_ptr<PlanarComplex> multi_holed(int m, double k, unsigned seed);

// Threefold-symmetric triangulated disk with three holes and a central vertex
// whose index is -2. Conductances repeat the same random pattern in each
// 120-degree sector so the symmetry is exact up to rounding.
std::unique_ptr<PlanarComplex> threefold(double k = 1.0, unsigned seed = 11);

// Tiny wheel: an interior hub (id 0) surrounded by `spokes` rim vertices
// forming the outer boundary. Handy for prescribing fan values at the hub.
std::unique_ptr<PlanarComplex> wheel(int spokes, double k = 1.0);

}  // namespace flattile::fixtures
