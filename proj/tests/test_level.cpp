#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "errors.hpp"
#include "fixtures.hpp"
#include "level.hpp"
#include "solver.hpp"
#include "test_util.hpp"

using namespace flattile;
using namespace flattile::testutil;

namespace {

HarmonicField wheel_field(const PlanarComplex& c, double hub,
                          const std::vector<double>& rim) {
  std::vector<double> vals(c.vertex_count());
  vals[0] = hub;
  for (size_t j = 0; j < rim.size(); ++j) vals[j + 1] = rim[j];
  return field_from_values(vals, 1.0);
}

int find_singular_vertex(const IndexReport& rep) {
  for (const auto& e : rep.entries)
    if (e.index != 0) return e.vertex;
  return -1;
}

}  // namespace

TEST_CASE("sign changes over prescribed fans") {
  auto w = fixtures::wheel(4);
  CHECK(sign_changes(wheel_field(*w, 0.5, {1.5, -0.5, 1.5, -0.5}), *w, 0) == 4);
  CHECK(sign_changes(wheel_field(*w, 0.5, {1.5, 1.5, -0.5, -0.5}), *w, 0) == 2);
  CHECK(sign_changes(wheel_field(*w, 0.5, {1.5, 1.5, 1.5, 1.5}), *w, 0) == 0);
}

TEST_CASE("sign change parity is always even") {
  auto w = fixtures::wheel(7);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> uv(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> rim(7);
    for (auto& x : rim) x = uv(rng);
    int sgc = sign_changes(wheel_field(*w, 0.0, rim), *w, 0);
    CHECK(sgc % 2 == 0);
  }
}

TEST_CASE("a tied neighbor raises DegenerateValues") {
  auto w = fixtures::wheel(4);
  CHECK_THROWS_AS(sign_changes(wheel_field(*w, 0.5, {0.5, 1.0, -1.0, 1.0}), *w, 0),
                  DegenerateValues);
}

TEST_CASE("vertex index from sign changes") {
  auto w = fixtures::wheel(4);
  CHECK(vertex_index(wheel_field(*w, 0.5, {1.5, 1.5, -0.5, -0.5}), *w, 0) == 0);
  CHECK(vertex_index(wheel_field(*w, 0.5, {1.5, -0.5, 1.5, -0.5}), *w, 0) == -1);
  CHECK(vertex_index(wheel_field(*w, 0.5, {1.5, 1.5, 1.5, 1.5}), *w, 0) == 1);
}

TEST_CASE("index formula: annulus has no singular vertices") {
  auto c = fixtures::random_annulus(10, 4, 1.0, 12);
  HarmonicField f = solve(*c, 1.0);
  IndexReport rep = index_formula_check(f, *c);
  CHECK(rep.index_sum == 0);
  CHECK(rep.euler_characteristic == 0);
  CHECK(rep.singular().empty());
}

TEST_CASE("index formula: pants has a single -1 vertex") {
  auto c = fixtures::pants(1.0, 7);
  HarmonicField f = solve(*c, 1.0);
  IndexReport rep = index_formula_check(f, *c);
  CHECK(rep.index_sum == -1);
  CHECK(rep.matches());
  auto sing = rep.singular();
  REQUIRE(sing.size() == 1);
  CHECK(sing[0].index == -1);
  CHECK(sing[0].sign_changes == 4);
}

TEST_CASE("index formula across m in 2..5") {
  for (int m = 2; m <= 5; ++m) {
    auto c = fixtures::multi_holed(m, 1.0, 200 + m);
    HarmonicField f = solve(*c, 1.0);
    IndexReport rep = index_formula_check(f, *c);
    CHECK(rep.index_sum == 2 - m);
    CHECK(rep.matches());
  }
}

TEST_CASE("threefold fixture has one index -2 vertex at the center") {
  auto c = fixtures::threefold();
  HarmonicField f = solve(*c, 1.0);
  IndexReport rep = index_formula_check(f, *c);
  CHECK(rep.index_sum == -2);
  auto sing = rep.singular();
  REQUIRE(sing.size() == 1);
  CHECK(sing[0].vertex == 0);
  CHECK(sing[0].index == -2);
  CHECK(sing[0].sign_changes == 6);
}

TEST_CASE("extract_level on the symmetric annulus at h = 0.75") {
  auto a8 = fixtures::annulus(8);
  HarmonicField f = solve(*a8, 1.0);
  LevelCurve curve = extract_level(f, *a8, 0.75);
  REQUIRE(curve.components.size() == 1);
  REQUIRE(curve.components[0].cycles.size() == 1);
  CHECK(curve.components[0].tangencies.empty());
  CHECK(curve.singular_vertices.empty());
  int radial_crossings = 0;
  for (const auto& n : curve.nodes) {
    if (n.kind != LevelNode::kCrossing) continue;
    if (n.xedge < a8->edge_count()) {
      ++radial_crossings;
      CHECK(n.t == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  CHECK(radial_crossings == 8);
}

TEST_CASE("extract_level at the middle value returns the middle ring") {
  auto a8 = fixtures::annulus(8);
  HarmonicField f = solve(*a8, 1.0);
  LevelCurve curve = extract_level(f, *a8, 0.5);
  REQUIRE(curve.components.size() == 1);
  REQUIRE(curve.components[0].cycles.size() == 1);
  const auto& cyc = curve.components[0].cycles[0];
  std::set<int> verts;
  for (int n : cyc.nodes) {
    REQUIRE(curve.nodes[n].kind == LevelNode::kAtVertex);
    verts.insert(curve.nodes[n].vertex);
  }
  std::set<int> middle{8, 9, 10, 11, 12, 13, 14, 15};
  CHECK(verts == middle);
}

TEST_CASE("a flat region at the level value is degenerate") {
  // one square whose four corners all sit at the queried level
  std::vector<Vec2> verts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<std::pair<int, int>> edges{{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}};
  std::vector<std::vector<int>> faces{{0, 1, 2}, {0, 2, 3}};
  PlanarComplex c(verts, edges, faces, {0, 1, 2, 3}, {},
                  std::vector<double>(5, 1.0), 1.0);
  HarmonicField f = field_from_values({0.5, 0.5, 0.5, 0.5}, 1.0);
  CHECK_THROWS_AS(extract_level(f, c, 0.5), DegenerateValues);
}

TEST_CASE("extract_level range checking") {
  auto a8 = fixtures::annulus(8);
  HarmonicField f = solve(*a8, 1.0);
  CHECK_THROWS_AS(extract_level(f, *a8, 0.0), InvalidInput);
  CHECK_THROWS_AS(extract_level(f, *a8, 1.0), InvalidInput);
}

TEST_CASE("pants: the critical level is a figure eight") {
  auto c = fixtures::pants(1.0, 7);
  HarmonicField f = solve(*c, 1.0);
  IndexReport rep = index_formula_check(f, *c);
  int u = find_singular_vertex(rep);
  REQUIRE(u >= 0);
  LevelCurve curve = extract_level(f, *c, f.values[u]);
  int with_tangency = -1;
  for (size_t i = 0; i < curve.components.size(); ++i)
    if (!curve.components[i].tangencies.empty()) with_tangency = (int)i;
  REQUIRE(with_tangency >= 0);
  const auto& comp = curve.components[with_tangency];
  CHECK(comp.cycles.size() == 2);
  REQUIRE(comp.tangencies.size() == 1);
  CHECK(comp.tangencies[0] == u);
  // each loop encloses exactly one inner boundary
  for (const auto& cyc : comp.cycles) {
    int enclosed = 0;
    for (const auto& hole : c->inner_boundaries())
      if (cycle_encloses_point(curve, cyc, c->position(hole[0]))) ++enclosed;
    CHECK(enclosed == 1);
  }
}

TEST_CASE("bouquet tangencies are exterior: cycles never nest") {
  for (int m : {3, 4, 5}) {
    auto c = fixtures::multi_holed(m, 1.0, 204 + m);
    HarmonicField f = solve(*c, 1.0);
    CriticalValues K = critical_values(f, *c);
    for (size_t vi = 1; vi + 1 < K.values.size(); ++vi) {
      LevelCurve curve = extract_level(f, *c, K.values[vi]);
      for (const auto& comp : curve.components) {
        for (size_t a = 0; a < comp.cycles.size(); ++a)
          for (size_t b = 0; b < comp.cycles.size(); ++b) {
            if (a == b) continue;
            // sample a point of cycle b away from the shared tangency
            const auto& cb = comp.cycles[b];
            for (int n : cb.nodes) {
              if (curve.nodes[n].kind != LevelNode::kCrossing) continue;
              CHECK_FALSE(
                  cycle_encloses_point(curve, comp.cycles[a], curve.nodes[n].pos));
              break;
            }
          }
      }
    }
  }
}

TEST_CASE("critical values: annulus is {k, 0}") {
  auto c = fixtures::random_annulus(10, 4, 2.0, 5);
  HarmonicField f = solve(*c, 2.0);
  CriticalValues K = critical_values(f, *c);
  REQUIRE(K.values.size() == 2);
  CHECK(K.values[0] == 2.0);
  CHECK(K.values[1] == 0.0);
}

TEST_CASE("critical values: pants has one interior value") {
  auto c = fixtures::pants(1.0, 7);
  HarmonicField f = solve(*c, 1.0);
  CriticalValues K = critical_values(f, *c);
  REQUIRE(K.values.size() == 3);
  CHECK(K.values[0] == 1.0);
  CHECK(K.values[2] == 0.0);
  CHECK(K.values[1] > 0.0);
  CHECK(K.values[1] < 1.0);
  // strictly decreasing
  for (size_t i = 0; i + 1 < K.values.size(); ++i)
    CHECK(K.values[i] > K.values[i + 1]);
}

TEST_CASE("critical values: m = 4 has two or three interior entries") {
  auto c = fixtures::multi_holed(4, 1.0, 204);
  HarmonicField f = solve(*c, 1.0);
  CriticalValues K = critical_values(f, *c);
  CHECK(K.values.size() >= 3);
  CHECK(K.values.size() <= 4);
}

TEST_CASE("levels away from critical values are simple") {
  auto c = fixtures::pants(1.0, 7);
  HarmonicField f = solve(*c, 1.0);
  CriticalValues K = critical_values(f, *c);
  double h_crit = K.values[1];
  for (double h : {h_crit / 2, h_crit + (1.0 - h_crit) / 2}) {
    LevelCurve curve = extract_level(f, *c, h);
    for (const auto& comp : curve.components) {
      CHECK(comp.cycles.size() == 1);
      CHECK(comp.tangencies.empty());
    }
    CHECK(curve.singular_vertices.empty());
  }
}

TEST_CASE("two levels at distinct values are disjoint point sets") {
  auto c = fixtures::pants(1.0, 7);
  HarmonicField f = solve(*c, 1.0);
  LevelCurve l1 = extract_level(f, *c, 0.43);
  LevelCurve l2 = extract_level(f, *c, 0.61);
  std::set<std::pair<int, double>> pts;
  for (const auto& n : l1.nodes)
    if (n.kind == LevelNode::kCrossing) pts.insert({n.xedge, n.t});
  for (const auto& n : l2.nodes)
    if (n.kind == LevelNode::kCrossing) CHECK_FALSE(pts.count({n.xedge, n.t}));
}

TEST_CASE("every level cycle encloses at least one inner boundary") {
  for (int m : {3, 4, 5}) {
    auto c = fixtures::multi_holed(m, 1.0, 210 + m);
    HarmonicField f = solve(*c, 1.0);
    for (double h : {0.2, 0.45, 0.7, 0.9}) {
      LevelCurve curve = extract_level(f, *c, h);
      for (const auto& comp : curve.components)
        for (const auto& cyc : comp.cycles) {
          int enclosed = 0;
          for (const auto& hole : c->inner_boundaries())
            if (cycle_encloses_point(curve, cyc, c->position(hole[0]))) ++enclosed;
          CHECK(enclosed >= 1);
        }
    }
  }
}

TEST_CASE("monotone nesting: lower levels sit inside higher ones") {
  auto c = fixtures::random_annulus(12, 5, 1.0, 31);
  HarmonicField f = solve(*c, 1.0);
  LevelCurve hi = extract_level(f, *c, 0.7);
  LevelCurve lo = extract_level(f, *c, 0.3);
  REQUIRE(hi.components.size() == 1);
  REQUIRE(lo.components.size() == 1);
  const auto& hic = hi.components[0].cycles[0];
  for (int n : lo.components[0].cycles[0].nodes)
    CHECK(cycle_encloses_point(hi, hic, lo.nodes[n].pos));
}

TEST_CASE("enclosing singular curve on the pants is the figure eight") {
  auto c = fixtures::pants(1.0, 7);
  HarmonicField f = solve(*c, 1.0);
  TracingMesh mesh(*c);
  EnclosingCurve ec = enclosing_singular_curve(f, *c, mesh);
  const auto& comp = ec.curve.components[ec.component];
  CHECK(comp.cycles.size() == 2);
  CHECK(comp.tangencies.size() == 1);
}

TEST_CASE("enclosing singular curve exists for m = 4") {
  auto c = fixtures::multi_holed(4, 1.0, 204);
  HarmonicField f = solve(*c, 1.0);
  TracingMesh mesh(*c);
  EnclosingCurve ec = enclosing_singular_curve(f, *c, mesh);
  const auto& comp = ec.curve.components[ec.component];
  int enclosed = 0;
  for (const auto& hole : c->inner_boundaries()) {
    Vec2 p = c->position(hole[0]);
    for (const auto& cyc : comp.cycles)
      if (cycle_encloses_point(ec.curve, cyc, p)) {
        ++enclosed;
        break;
      }
  }
  CHECK(enclosed == 3);
}

TEST_CASE("enclosing singular curve is not applicable to an annulus") {
  auto c = fixtures::random_annulus(8, 3, 1.0, 3);
  HarmonicField f = solve(*c, 1.0);
  TracingMesh mesh(*c);
  CHECK_THROWS_AS(enclosing_singular_curve(f, *c, mesh), NotApplicable);
}

TEST_CASE("length constancy inside a band") {
  auto c = fixtures::pants(1.0, 7);
  HarmonicField f = solve(*c, 1.0);
  CriticalValues K = critical_values(f, *c);
  double hc = K.values[1];
  double C = outer_flux_length(f, *c);
  // regular levels above the critical value all measure C
  for (double t : {0.25, 0.5, 0.75}) {
    double h = hc + t * (1.0 - hc);
    LevelCurve curve = extract_level(f, *c, h);
    double len = 0;
    for (const auto& comp : curve.components)
      for (const auto& cyc : comp.cycles)
        len += cycle_crossing_flux(f, *c, curve, cyc);
    CHECK(len == doctest::Approx(C).epsilon(1e-9));
  }
  // the two loops of the figure eight measure the two lobes
  LevelCurve fig = extract_level(f, *c, hc);
  double lobes = 0;
  for (const auto& comp : fig.components)
    for (const auto& cyc : comp.cycles)
      lobes += cycle_inside_length(f, *c, fig, cyc);
  CHECK(lobes == doctest::Approx(C).epsilon(1e-9));
}
