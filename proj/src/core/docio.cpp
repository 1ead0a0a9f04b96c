#include "docio.hpp"

#include "errors.hpp"

namespace flattile {

namespace {

constexpr int kSchemaVersion = 1;

void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidInput(msg);
}

}  // namespace

std::unique_ptr<PlanarComplex> parse_input(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
  return parse_input_json(j);
}

std::unique_ptr<PlanarComplex> parse_input_json(const Json& j) {
  require(j.is_object(), "input document must be a JSON object");
  require(j.contains("vertices") && j["vertices"].is_array(), "missing vertices");
  require(j.contains("edges") && j["edges"].is_array(), "missing edges");
  require(j.contains("faces") && j["faces"].is_array(), "missing faces");
  require(j.contains("outer_boundary") && j["outer_boundary"].is_array(),
          "missing outer_boundary");
  require(j.contains("inner_boundaries") && j["inner_boundaries"].is_array(),
          "missing inner_boundaries");
  require(j.contains("k") && j["k"].is_number(), "missing k");

  std::vector<Vec2> vertices;
  for (const auto& v : j["vertices"]) {
    require(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(),
            "vertex must be [x, y]");
    vertices.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j["edges"]) {
    require(e.is_array() && e.size() == 2, "edge must be [i, j]");
    edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  std::vector<std::vector<int>> faces;
  for (const auto& f : j["faces"]) {
    require(f.is_array() && (f.size() == 3 || f.size() == 4),
            "face must have 3 or 4 vertices");
    faces.push_back(f.get<std::vector<int>>());
  }
  std::vector<int> outer = j["outer_boundary"].get<std::vector<int>>();
  std::vector<std::vector<int>> inner;
  for (const auto& cyc : j["inner_boundaries"]) {
    require(cyc.is_array(), "inner boundary must be an array of vertex ids");
    inner.push_back(cyc.get<std::vector<int>>());
  }

  std::vector<double> conductance;
  if (!j.contains("conductance")) {
    conductance.assign(edges.size(), 1.0);
  } else if (j["conductance"].is_number()) {
    conductance.assign(edges.size(), j["conductance"].get<double>());
  } else if (j["conductance"].is_array()) {
    conductance = j["conductance"].get<std::vector<double>>();
    require(conductance.size() == edges.size(),
            "conductance array length differs from edge count");
  } else {
    throw InvalidInput("conductance must be a number or an array");
  }
  double k = j["k"].get<double>();
  return std::make_unique<PlanarComplex>(std::move(vertices), std::move(edges),
                                         std::move(faces), std::move(outer),
                                         std::move(inner), std::move(conductance), k);
}

Json input_to_json(const PlanarComplex& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "network";
  Json verts = Json::array();
  for (const auto& p : c.vertices()) verts.push_back({p.x, p.y});
  j["vertices"] = std::move(verts);
  Json edges = Json::array();
  for (auto [u, v] : c.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  j["faces"] = c.faces();
  j["outer_boundary"] = c.outer_boundary();
  j["inner_boundaries"] = c.inner_boundaries();
  j["conductance"] = c.conductances();
  j["k"] = c.k();
  return j;
}

Json validation_report_to_json(const PlanarComplex& c, const ValidationReport& rep) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "validation";
  j["valid"] = rep.ok();
  j["m"] = c.boundary_cycle_count();
  j["euler_characteristic"] = c.euler_characteristic();
  j["counts"] = {{"vertices", c.vertex_count()},
                 {"edges", c.edge_count()},
                 {"faces", c.face_count()}};
  Json issues = Json::array();
  for (const auto& issue : rep.issues) {
    Json ji;
    ji["code"] = issue.code;
    ji["message"] = issue.message;
    if (!issue.vertices.empty()) ji["vertices"] = issue.vertices;
    if (!issue.edges.empty()) ji["edges"] = issue.edges;
    if (!issue.faces.empty()) ji["faces"] = issue.faces;
    issues.push_back(std::move(ji));
  }
  j["issues"] = std::move(issues);
  return j;
}

Json field_to_json(const HarmonicField& f) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "field";
  j["k"] = f.k;
  j["values"] = f.values;
  j["residual"] = f.residual;
  j["stats"] = {{"method", f.stats.method}, {"iterations", f.stats.iterations}};
  return j;
}

HarmonicField field_from_json(const Json& j) {
  HarmonicField f;
  f.k = j.at("k").get<double>();
  f.values = j.at("values").get<std::vector<double>>();
  if (j.contains("residual")) f.residual = j["residual"].get<double>();
  return f;
}

Json surface_to_json(const FlatSurface& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "surface";
  j["mode"] = s.mode;
  j["m"] = s.m;
  j["k"] = s.k;
  j["energy"] = s.energy;
  j["area"] = s.area;
  j["boundary_lengths"] = {{"outer", s.outer_length}, {"inner", s.inner_lengths}};
  Json cyls = Json::array();
  for (const auto& cyl : s.cylinders) {
    Json jc;
    jc["id"] = cyl.id;
    jc["parent"] = cyl.parent;
    jc["top_label"] = cyl.top_label;
    jc["bottom_label"] = cyl.bottom_label;
    jc["top_value"] = cyl.top_value;
    jc["bottom_value"] = cyl.bottom_value;
    jc["circumference"] = cyl.circumference;
    jc["height"] = cyl.height();
    jc["bottom_boundary"] = cyl.bottom_boundary;
    Json rects = Json::array();
    for (const auto& r : cyl.rects)
      rects.push_back({{"edge", r.edge},
                       {"s", r.s},
                       {"top", r.top},
                       {"bottom", r.bottom},
                       {"width", r.width}});
    jc["rects"] = std::move(rects);
    Json markers = Json::array();
    for (const auto& m : cyl.markers)
      markers.push_back({{"s", m.s}, {"a", m.a}, {"b", m.b}});
    jc["markers"] = std::move(markers);
    jc["zero_area_edges"] = cyl.zero_area_edges;
    Json quo = Json::array();
    for (const auto& g : cyl.bottom_quotient)
      quo.push_back({{"vertex", g.vertex}, {"positions", g.positions}});
    jc["bottom_quotient"] = std::move(quo);
    Json glue = Json::array();
    for (const auto& g : cyl.glue)
      glue.push_back({{"child_start", g.child_start},
                      {"parent_start", g.parent_start},
                      {"length", g.length}});
    jc["glue"] = std::move(glue);
    cyls.push_back(std::move(jc));
  }
  j["cylinders"] = std::move(cyls);
  Json sing = Json::array();
  for (const auto& sp : s.singular_points)
    sing.push_back({{"vertex", sp.vertex},
                    {"index", sp.index},
                    {"cone_angle", sp.cone_angle},
                    {"cylinders", sp.cylinders}});
  j["singular_points"] = std::move(sing);
  j["doubling"] = doubling_to_json(double_surface(s));
  return j;
}

FlatSurface surface_from_json(const Json& j) {
  FlatSurface s;
  s.mode = j.at("mode").get<std::string>();
  s.m = j.at("m").get<int>();
  s.k = j.at("k").get<double>();
  s.energy = j.at("energy").get<double>();
  s.area = j.at("area").get<double>();
  s.outer_length = j.at("boundary_lengths").at("outer").get<double>();
  s.inner_lengths = j.at("boundary_lengths").at("inner").get<std::vector<double>>();
  for (const auto& jc : j.at("cylinders")) {
    Cylinder cyl;
    cyl.id = jc.at("id").get<int>();
    cyl.parent = jc.at("parent").get<int>();
    cyl.top_label = jc.at("top_label").get<std::string>();
    cyl.bottom_label = jc.at("bottom_label").get<std::string>();
    cyl.top_value = jc.at("top_value").get<double>();
    cyl.bottom_value = jc.at("bottom_value").get<double>();
    cyl.circumference = jc.at("circumference").get<double>();
    cyl.bottom_boundary = jc.at("bottom_boundary").get<int>();
    for (const auto& jr : jc.at("rects")) {
      Rect r;
      r.edge = jr.at("edge").get<int>();
      r.s = jr.at("s").get<double>();
      r.top = jr.at("top").get<double>();
      r.bottom = jr.at("bottom").get<double>();
      r.width = jr.at("width").get<double>();
      cyl.rects.push_back(r);
    }
    if (jc.contains("markers"))
      for (const auto& jm : jc["markers"])
        cyl.markers.push_back({jm.at("s").get<double>(), jm.at("a").get<double>(),
                               jm.at("b").get<double>()});
    if (jc.contains("zero_area_edges"))
      cyl.zero_area_edges = jc["zero_area_edges"].get<std::vector<int>>();
    if (jc.contains("bottom_quotient"))
      for (const auto& jg : jc["bottom_quotient"]) {
        PinchGroup g;
        g.vertex = jg.at("vertex").get<int>();
        g.positions = jg.at("positions").get<std::vector<double>>();
        cyl.bottom_quotient.push_back(std::move(g));
      }
    if (jc.contains("glue"))
      for (const auto& jg : jc["glue"])
        cyl.glue.push_back({jg.at("child_start").get<double>(),
                            jg.at("parent_start").get<double>(),
                            jg.at("length").get<double>()});
    s.cylinders.push_back(std::move(cyl));
  }
  for (const auto& js : j.at("singular_points")) {
    SingularPoint sp;
    sp.vertex = js.at("vertex").get<int>();
    sp.index = js.at("index").get<int>();
    sp.cone_angle = js.at("cone_angle").get<double>();
    sp.cylinders = js.at("cylinders").get<std::vector<int>>();
    s.singular_points.push_back(std::move(sp));
  }
  return s;
}

Json doubling_to_json(const DoubledSurfaceDescriptor& d) {
  Json j;
  j["genus"] = d.genus;
  j["area"] = d.area;
  j["singular_points"] = d.singular_points;
  j["cone_angles"] = d.cone_angles;
  return j;
}

std::string dump_document(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace flattile
