#pragma once

#include <cstdlib>

namespace flattile {

struct Tol {
  // Structural snapping: a vertex counts as lying on a level, and an edge as
  // flat, within this fraction of k.
  static constexpr double level_snap_rel = 1e-12;
  static constexpr double flat_edge_rel = 1e-12;

  // Column alignment across a gluing, relative to the circumference.
  static constexpr double glue_rel = 1e-9;

  // Absolute gates that do not scale with the input.
  static constexpr double cone_angle_abs = 1e-9;  // radians
  static constexpr double height_sum_abs = 1e-12;  // x k

  // Relative residual gate for the identity checks; FLAT_TILER_TOL overrides.
  // The tiling gap gate runs at 10x this value.
  static double global() {
    if (const char* s = std::getenv("FLAT_TILER_TOL")) {
      char* end = nullptr;
      double v = std::strtod(s, &end);
      if (end != s && v > 0) return v;
    }
    return 1e-9;
  }
};

}  // namespace flattile
