#pragma once

#include <string>

#include "complex.hpp"
#include "solver.hpp"
#include "tiler.hpp"

namespace flattile {

// Planar input with level curves overlaid at the critical values plus a
// sample of regular values. Singular vertices are highlighted.
std::string render_levels_svg(const PlanarComplex& c, const HarmonicField& f,
                              int regular_samples);

// One cylinder unrolled onto [0, C) x [0, H]: rectangles, markers, a dashed
// seam at s = 0, wraparound rectangles drawn twice, pinch points highlighted.
std::string render_cylinder_svg(const Cylinder& cyl);

}  // namespace flattile
