// flat-tiler: solve discrete Dirichlet problems on planar conductance
// networks and build the rectangle tilings of the induced flat surfaces.
// Thin front end over the flattile shared library.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "flattile/flattile.h"

namespace {

using json = nlohmann::json;

int fail(flattile_status st, const std::string& what) {
  std::cerr << "error: " << what;
  const char* msg = flattile_last_error();
  if (msg && *msg) std::cerr << ": " << msg;
  std::cerr << "\n";
  int code = static_cast<int>(st);
  return code == 0 ? 1 : code;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << data;
  return out.good();
}

std::string take(char* s) {
  std::string out = s ? s : "";
  flattile_string_free(s);
  return out;
}

void print_checks(const json& rep) {
  if (!rep.contains("checks")) return;
  std::printf("%-34s %-12s %-12s %s\n", "identity", "residual", "tolerance", "status");
  for (const auto& c : rep["checks"]) {
    std::printf("%-34s %-12.3e %-12.3e %s\n",
                c["name"].get<std::string>().c_str(), c["residual"].get<double>(),
                c["tolerance"].get<double>(), c["pass"].get<bool>() ? "ok" : "FAIL");
  }
}

struct NetworkGuard {
  flattile_network* n = nullptr;
  ~NetworkGuard() { flattile_network_free(n); }
};
struct SolutionGuard {
  flattile_solution* s = nullptr;
  ~SolutionGuard() { flattile_solution_free(s); }
};
struct SurfaceGuard {
  flattile_surface* s = nullptr;
  ~SurfaceGuard() { flattile_surface_free(s); }
};

int load_and_validate(const std::string& path, NetworkGuard& net) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read " << path << "\n";
    return 2;
  }
  flattile_status st = flattile_network_parse(text.c_str(), &net.n);
  if (st != FLATTILE_OK) return fail(st, "parse failed");
  char* report = nullptr;
  st = flattile_network_validate(net.n, &report);
  std::string rep = take(report);
  if (st != FLATTILE_OK) {
    std::cerr << rep;
    return fail(st, "input validation failed");
  }
  return 0;
}

int cmd_solve(const std::string& input, const std::string& out_path) {
  NetworkGuard net;
  if (int rc = load_and_validate(input, net)) return rc;
  SolutionGuard sol;
  flattile_status st = flattile_solve(net.n, &sol.s);
  if (st != FLATTILE_OK) return fail(st, "solve failed");

  char* report_c = nullptr;
  st = flattile_solution_report_json(sol.s, &report_c);
  std::string report = take(report_c);
  json rep = json::parse(report);
  std::printf("vertices: %d  edges: %d  m: %d  k: %g\n",
              flattile_network_vertex_count(net.n), flattile_network_edge_count(net.n),
              flattile_network_boundary_count(net.n), flattile_network_k(net.n));
  std::printf("energy:            %.12g\n", rep["energy"].get<double>());
  std::printf("outer flux length: %.12g\n", rep["outer_flux_length"].get<double>());
  std::printf("boundary fluxes:  ");
  for (const auto& f : rep["boundary_fluxes"]) std::printf(" %.12g", f.get<double>());
  std::printf("\nsolver: %s (%d iterations)\n",
              rep["stats"]["method"].get<std::string>().c_str(),
              rep["stats"]["iterations"].get<int>());
  print_checks(rep);
  if (st != FLATTILE_OK) return fail(st, "solution verification failed");

  if (!out_path.empty()) {
    char* field_c = nullptr;
    st = flattile_solution_field_json(sol.s, &field_c);
    if (st != FLATTILE_OK) return fail(st, "field serialization failed");
    if (!write_file(out_path, take(field_c))) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 1;
    }
    std::printf("field written to %s\n", out_path.c_str());
  }
  return 0;
}

int cmd_tile(const std::string& input, const std::string& mode, bool allow_flat,
             const std::string& out_path, const std::string& svg_dir,
             int level_samples) {
  NetworkGuard net;
  if (int rc = load_and_validate(input, net)) return rc;
  SolutionGuard sol;
  flattile_status st = flattile_solve(net.n, &sol.s);
  if (st != FLATTILE_OK) return fail(st, "solve failed");

  SurfaceGuard sur;
  st = flattile_tile(sol.s, mode.c_str(), allow_flat ? 1 : 0, &sur.s);
  if (st != FLATTILE_OK && st != FLATTILE_EVERIFY) return fail(st, "tiling failed");
  flattile_status tile_status = st;

  char* report_c = nullptr;
  if (flattile_surface_report_json(sur.s, &report_c) == FLATTILE_OK) {
    json rep = json::parse(take(report_c));
    print_checks(rep);
  }
  char* doc_c = nullptr;
  st = flattile_surface_to_json(sur.s, &doc_c);
  if (st != FLATTILE_OK) return fail(st, "surface serialization failed");
  std::string doc = take(doc_c);
  {
    json j = json::parse(doc);
    std::printf("mode: %s  cylinders: %zu  area: %.12g  energy: %.12g\n",
                j["mode"].get<std::string>().c_str(), j["cylinders"].size(),
                j["area"].get<double>(), j["energy"].get<double>());
    std::printf("doubling: genus %d, area %.12g\n",
                j["doubling"]["genus"].get<int>(),
                j["doubling"]["area"].get<double>());
  }

  if (tile_status != FLATTILE_OK)
    return fail(tile_status, "identity verification failed");

  if (!out_path.empty()) {
    if (!write_file(out_path, doc)) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 1;
    }
    std::printf("surface written to %s\n", out_path.c_str());
  }
  if (!svg_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(svg_dir, ec);
    char* svg_c = nullptr;
    if (flattile_levels_svg(sol.s, level_samples, &svg_c) == FLATTILE_OK)
      write_file(svg_dir + "/levels.svg", take(svg_c));
    int nc = flattile_surface_cylinder_count(sur.s);
    for (int i = 0; i < nc; ++i) {
      if (flattile_surface_cylinder_svg(sur.s, i, &svg_c) == FLATTILE_OK)
        write_file(svg_dir + "/cylinder_" + std::to_string(i) + ".svg", take(svg_c));
    }
    std::printf("svg written to %s (%d cylinders + levels)\n", svg_dir.c_str(), nc);
  }
  return 0;
}

int cmd_verify(const std::string& surface_path, const std::string& input_path) {
  std::string surface, input;
  if (!read_file(surface_path, surface)) {
    std::cerr << "error: cannot read " << surface_path << "\n";
    return 2;
  }
  if (!read_file(input_path, input)) {
    std::cerr << "error: cannot read " << input_path << "\n";
    return 2;
  }
  char* report_c = nullptr;
  flattile_status st =
      flattile_verify_documents(input.c_str(), surface.c_str(), &report_c);
  std::string report = take(report_c);
  if (!report.empty()) print_checks(json::parse(report));
  if (st != FLATTILE_OK) return fail(st, "verification failed");
  std::printf("all identities hold\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet problems on planar conductance networks and rectangle "
               "tilings of flat surfaces with integer cone points"};
  app.require_subcommand(1);

  std::string input, out_path, svg_dir, mode = "auto";
  std::string surface_path;
  bool allow_flat = false;
  int level_samples = 8;

  auto* solve_cmd = app.add_subcommand("solve", "solve the boundary value problem");
  solve_cmd->add_option("input", input, "network JSON document")->required();
  solve_cmd->add_option("--out", out_path, "write the field document here");

  auto* tile_cmd = app.add_subcommand("tile", "build the rectangle tiling");
  tile_cmd->add_option("input", input, "network JSON document")->required();
  tile_cmd->add_option("--mode", mode, "annulus | pants | ladder | auto")
      ->default_val("auto");
  tile_cmd->add_flag("--allow-flat-edges", allow_flat,
                     "admit zero-area rectangles for equal-value edges");
  tile_cmd->add_option("--out", out_path, "write the surface document here");
  tile_cmd->add_option("--svg", svg_dir, "write SVG renderings into this directory");
  tile_cmd->add_option("--levels", level_samples,
                       "regular level-curve samples in the overview SVG");

  auto* verify_cmd =
      app.add_subcommand("verify", "re-check a stored surface against its input");
  verify_cmd->add_option("surface", surface_path, "surface JSON document")->required();
  verify_cmd->add_option("input", input, "network JSON document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  if (solve_cmd->parsed()) return cmd_solve(input, out_path);
  if (tile_cmd->parsed())
    return cmd_tile(input, mode, allow_flat, out_path, svg_dir, level_samples);
  if (verify_cmd->parsed()) return cmd_verify(surface_path, input);
  return 2;
}
