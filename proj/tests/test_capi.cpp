#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <string>

#include "docio.hpp"
#include "fixtures.hpp"
#include "flattile/flattile.h"

using json = nlohmann::json;

namespace {

std::string fixture_json(const flattile::PlanarComplex& c) {
  return flattile::dump_document(flattile::input_to_json(c));
}

std::string take(char* s) {
  std::string out = s ? s : "";
  flattile_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("parse, validate, inspect, round-trip") {
  auto a8 = flattile::fixtures::annulus(8);
  std::string text = fixture_json(*a8);

  flattile_network* net = nullptr;
  REQUIRE(flattile_network_parse(text.c_str(), &net) == FLATTILE_OK);
  CHECK(flattile_network_vertex_count(net) == 24);
  CHECK(flattile_network_edge_count(net) == 40);
  CHECK(flattile_network_boundary_count(net) == 2);
  CHECK(flattile_network_euler_characteristic(net) == 0);
  CHECK(flattile_network_k(net) == 1.0);

  char* report = nullptr;
  CHECK(flattile_network_validate(net, &report) == FLATTILE_OK);
  json rep = json::parse(take(report));
  CHECK(rep["valid"] == true);

  char* round = nullptr;
  REQUIRE(flattile_network_to_json(net, &round) == FLATTILE_OK);
  CHECK(take(round) == text);
  flattile_network_free(net);
}

TEST_CASE("malformed and invalid inputs report EINVAL") {
  flattile_network* net = nullptr;
  CHECK(flattile_network_parse("{not json", &net) == FLATTILE_EINVAL);
  CHECK(std::string(flattile_last_error()).size() > 0);

  std::string text = R"({
    "vertices": [[0,0],[1,0],[0,1],[2,2]],
    "edges": [[0,1],[1,2],[2,0]],
    "faces": [[0,1,3]],
    "outer_boundary": [0,1,2],
    "inner_boundaries": [],
    "conductance": 1.0,
    "k": 1.0
  })";
  REQUIRE(flattile_network_parse(text.c_str(), &net) == FLATTILE_OK);
  char* report = nullptr;
  CHECK(flattile_network_validate(net, &report) == FLATTILE_EINVAL);
  json rep = json::parse(take(report));
  CHECK(rep["valid"] == false);
  CHECK(rep["issues"].size() > 0);
  flattile_network_free(net);
}

TEST_CASE("solve and tile an annulus through the C surface") {
  auto c = flattile::fixtures::random_annulus(10, 4, 1.0, 9);
  std::string text = fixture_json(*c);
  flattile_network* net = nullptr;
  REQUIRE(flattile_network_parse(text.c_str(), &net) == FLATTILE_OK);

  flattile_solution* sol = nullptr;
  REQUIRE(flattile_solve(net, &sol) == FLATTILE_OK);
  CHECK(flattile_solution_energy(sol) > 0);
  CHECK(flattile_solution_outer_flux(sol) > 0);

  char* field = nullptr;
  REQUIRE(flattile_solution_field_json(sol, &field) == FLATTILE_OK);
  json fj = json::parse(take(field));
  CHECK(fj["values"].size() == 40);

  char* srep = nullptr;
  CHECK(flattile_solution_report_json(sol, &srep) == FLATTILE_OK);
  json rj = json::parse(take(srep));
  CHECK(rj["ok"] == true);

  flattile_surface* sur = nullptr;
  REQUIRE(flattile_tile(sol, "auto", 0, &sur) == FLATTILE_OK);
  CHECK(flattile_surface_cylinder_count(sur) == 1);

  char* doc = nullptr;
  REQUIRE(flattile_surface_to_json(sur, &doc) == FLATTILE_OK);
  std::string surface_doc = take(doc);
  json sj = json::parse(surface_doc);
  CHECK(sj["mode"] == "annulus");
  CHECK(sj["doubling"]["genus"] == 1);

  char* svg = nullptr;
  REQUIRE(flattile_surface_cylinder_svg(sur, 0, &svg) == FLATTILE_OK);
  CHECK(take(svg).find("<svg") == 0);
  CHECK(flattile_surface_cylinder_svg(sur, 5, &svg) == FLATTILE_EINVAL);
  REQUIRE(flattile_levels_svg(sol, 6, &svg) == FLATTILE_OK);
  CHECK(take(svg).find("<svg") == 0);

  char* vrep = nullptr;
  CHECK(flattile_verify_documents(text.c_str(), surface_doc.c_str(), &vrep) ==
        FLATTILE_OK);
  json vj = json::parse(take(vrep));
  CHECK(vj["ok"] == true);

  flattile_surface_free(sur);
  flattile_solution_free(sol);
  flattile_network_free(net);
}

TEST_CASE("degenerate inputs surface as EDEGENERATE") {
  auto a8 = flattile::fixtures::annulus(8);  // symmetric: flat interior ring
  std::string text = fixture_json(*a8);
  flattile_network* net = nullptr;
  REQUIRE(flattile_network_parse(text.c_str(), &net) == FLATTILE_OK);
  flattile_solution* sol = nullptr;
  REQUIRE(flattile_solve(net, &sol) == FLATTILE_OK);
  flattile_surface* sur = nullptr;
  CHECK(flattile_tile(sol, "annulus", 0, &sur) == FLATTILE_EDEGENERATE);
  std::string msg = flattile_last_error();
  CHECK(msg.find("edges") != std::string::npos);
  REQUIRE(flattile_tile(sol, "annulus", 1, &sur) == FLATTILE_OK);
  flattile_surface_free(sur);
  flattile_solution_free(sol);
  flattile_network_free(net);
}

TEST_CASE("pants through the C surface with doubling descriptor") {
  auto c = flattile::fixtures::pants(1.0, 7);
  std::string text = fixture_json(*c);
  flattile_network* net = nullptr;
  REQUIRE(flattile_network_parse(text.c_str(), &net) == FLATTILE_OK);
  flattile_solution* sol = nullptr;
  REQUIRE(flattile_solve(net, &sol) == FLATTILE_OK);
  flattile_surface* sur = nullptr;
  REQUIRE(flattile_tile(sol, "pants", 0, &sur) == FLATTILE_OK);
  CHECK(flattile_surface_cylinder_count(sur) == 3);
  char* dj = nullptr;
  REQUIRE(flattile_double_json(sur, &dj) == FLATTILE_OK);
  json d = json::parse(take(dj));
  CHECK(d["genus"] == 2);
  flattile_surface* bad = nullptr;
  CHECK(flattile_tile(sol, "annulus", 0, &bad) == FLATTILE_EINVAL);
  flattile_surface_free(sur);
  flattile_solution_free(sol);
  flattile_network_free(net);
}

TEST_CASE("edited surface documents are rejected with EVERIFY") {
  auto c = flattile::fixtures::pants(1.0, 7);
  std::string text = fixture_json(*c);
  flattile_network* net = nullptr;
  REQUIRE(flattile_network_parse(text.c_str(), &net) == FLATTILE_OK);
  flattile_solution* sol = nullptr;
  REQUIRE(flattile_solve(net, &sol) == FLATTILE_OK);
  flattile_surface* sur = nullptr;
  REQUIRE(flattile_tile(sol, "pants", 0, &sur) == FLATTILE_OK);
  char* doc = nullptr;
  REQUIRE(flattile_surface_to_json(sur, &doc) == FLATTILE_OK);
  json sj = json::parse(take(doc));

  json tampered = sj;
  tampered["cylinders"][0]["rects"][0]["width"] =
      tampered["cylinders"][0]["rects"][0]["width"].get<double>() + 0.1;
  char* vrep = nullptr;
  CHECK(flattile_verify_documents(text.c_str(), tampered.dump().c_str(), &vrep) ==
        FLATTILE_EVERIFY);
  json vj = json::parse(take(vrep));
  bool energy_area_flagged = false;
  for (const auto& chk : vj["checks"])
    if (chk["name"] == "energy = area" && chk["pass"] == false)
      energy_area_flagged = true;
  CHECK(energy_area_flagged);

  flattile_surface_free(sur);
  flattile_solution_free(sol);
  flattile_network_free(net);
}

TEST_CASE("mismatched surface documents are rejected with EINVAL") {
  auto pants_net = flattile::fixtures::pants(1.0, 7);
  auto other = flattile::fixtures::random_annulus(8, 3, 1.0, 4);
  std::string pants_text = fixture_json(*pants_net);
  std::string other_text = fixture_json(*other);

  flattile_network* net = nullptr;
  REQUIRE(flattile_network_parse(pants_text.c_str(), &net) == FLATTILE_OK);
  flattile_solution* sol = nullptr;
  REQUIRE(flattile_solve(net, &sol) == FLATTILE_OK);
  flattile_surface* sur = nullptr;
  REQUIRE(flattile_tile(sol, "pants", 0, &sur) == FLATTILE_OK);
  char* doc = nullptr;
  REQUIRE(flattile_surface_to_json(sur, &doc) == FLATTILE_OK);
  std::string surface_doc = take(doc);

  // verifying the pants surface against the annulus network must not crash
  char* rep = nullptr;
  CHECK(flattile_verify_documents(other_text.c_str(), surface_doc.c_str(), &rep) ==
        FLATTILE_EINVAL);
  // truncated / non-JSON surface documents
  CHECK(flattile_verify_documents(pants_text.c_str(), "{\"kind\":1}", &rep) ==
        FLATTILE_EINVAL);
  CHECK(flattile_verify_documents(pants_text.c_str(), "### nope", &rep) ==
        FLATTILE_EINVAL);

  flattile_surface_free(sur);
  flattile_solution_free(sol);
  flattile_network_free(net);
}

TEST_CASE("tiling twice produces byte-identical documents") {
  auto c = flattile::fixtures::multi_holed(4, 1.0, 204);
  std::string text = fixture_json(*c);
  flattile_network* net = nullptr;
  REQUIRE(flattile_network_parse(text.c_str(), &net) == FLATTILE_OK);
  std::string docs[2];
  for (int i = 0; i < 2; ++i) {
    flattile_solution* sol = nullptr;
    REQUIRE(flattile_solve(net, &sol) == FLATTILE_OK);
    flattile_surface* sur = nullptr;
    REQUIRE(flattile_tile(sol, "ladder", 0, &sur) == FLATTILE_OK);
    char* doc = nullptr;
    REQUIRE(flattile_surface_to_json(sur, &doc) == FLATTILE_OK);
    docs[i] = take(doc);
    flattile_surface_free(sur);
    flattile_solution_free(sol);
  }
  CHECK(docs[0] == docs[1]);
  flattile_network_free(net);
}

TEST_CASE("null arguments are rejected without crashing") {
  CHECK(flattile_network_parse(nullptr, nullptr) == FLATTILE_ERROR);
  CHECK(flattile_solve(nullptr, nullptr) == FLATTILE_ERROR);
  CHECK(flattile_network_vertex_count(nullptr) == -1);
  flattile_string_free(nullptr);
  flattile_network_free(nullptr);
}
