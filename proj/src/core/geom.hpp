#pragma once

#include <cmath>
#include <vector>

namespace flattile {

struct Vec2 {
  double x = 0, y = 0;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

inline Vec2 lerp(Vec2 a, Vec2 b, double t) {
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

// Counterclockwise angle in [0, 2pi).
inline double angle_of(Vec2 d) {
  double a = std::atan2(d.y, d.x);
  if (a < 0) a += 2 * M_PI;
  return a;
}

// Clockwise offset of angle b from angle a, in (0, 2pi].
inline double cw_offset(double a, double b) {
  double d = a - b;
  while (d <= 0) d += 2 * M_PI;
  while (d > 2 * M_PI) d -= 2 * M_PI;
  return d;
}

// Counterclockwise offset of angle b from angle a, in (0, 2pi].
inline double ccw_offset(double a, double b) {
  double d = b - a;
  while (d <= 0) d += 2 * M_PI;
  while (d > 2 * M_PI) d -= 2 * M_PI;
  return d;
}

inline double polygon_signed_area(const std::vector<Vec2>& pts) {
  double s = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % pts.size()];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * s;
}

// Even-odd point-in-polygon; good enough for the well-separated fixtures we
// test containment on.
inline bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
  bool inside = false;
  size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      double xi = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < xi) inside = !inside;
    }
  }
  return inside;
}

// Proper crossing of open segments (shared endpoints do not count).
inline bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  double d1 = cross(b - a, c - a);
  double d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c);
  double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 &&
         d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace flattile
