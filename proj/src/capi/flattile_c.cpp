#include "flattile/flattile.h"

#include <cstring>
#include <memory>
#include <string>

#include "complex.hpp"
#include "docio.hpp"
#include "errors.hpp"
#include "level.hpp"
#include "solver.hpp"
#include "svgout.hpp"
#include "tiler.hpp"
#include "verify.hpp"

using namespace flattile;

struct flattile_network {
  std::unique_ptr<PlanarComplex> complex;
};

struct flattile_solution {
  const flattile_network* net = nullptr;
  HarmonicField field;
};

struct flattile_surface {
  const flattile_network* net = nullptr;
  HarmonicField field;
  FlatSurface surface;
  VerifyReport verification;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

flattile_status status_of(const Error& e) {
  switch (e.code) {
    case Error::kInvalidInput:
      return FLATTILE_EINVAL;
    case Error::kDegenerate:
      return FLATTILE_EDEGENERATE;
    case Error::kSolver:
      return FLATTILE_ESOLVER;
    case Error::kVerify:
      return FLATTILE_EVERIFY;
  }
  return FLATTILE_ERROR;
}

template <typename Fn>
flattile_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const DegenerateValues& e) {
    std::string msg = e.what();
    if (!e.vertices.empty()) {
      msg += "; vertices:";
      for (int v : e.vertices) msg += " " + std::to_string(v);
    }
    if (!e.edges.empty()) {
      msg += "; edges:";
      for (int v : e.edges) msg += " " + std::to_string(v);
    }
    g_last_error = msg;
    return FLATTILE_EDEGENERATE;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FLATTILE_ERROR;
  }
}

}  // namespace

extern "C" {

const char* flattile_version(void) { return "1.0.0"; }

const char* flattile_last_error(void) { return g_last_error.c_str(); }

void flattile_string_free(char* s) { std::free(s); }

flattile_status flattile_network_parse(const char* json, flattile_network** out) {
  if (!json || !out) {
    g_last_error = "null argument";
    return FLATTILE_ERROR;
  }
  return guarded([&] {
    auto n = std::make_unique<flattile_network>();
    n->complex = parse_input(json);
    *out = n.release();
    return FLATTILE_OK;
  });
}

void flattile_network_free(flattile_network* n) { delete n; }

flattile_status flattile_network_validate(const flattile_network* n,
                                          char** report_json) {
  if (!n) {
    g_last_error = "null network";
    return FLATTILE_ERROR;
  }
  return guarded([&] {
    ValidationReport rep = n->complex->validate();
    if (report_json)
      *report_json =
          dup_string(dump_document(validation_report_to_json(*n->complex, rep)));
    if (!rep.ok()) {
      g_last_error = rep.issues.front().message;
      return FLATTILE_EINVAL;
    }
    return FLATTILE_OK;
  });
}

flattile_status flattile_network_to_json(const flattile_network* n, char** json) {
  if (!n || !json) {
    g_last_error = "null argument";
    return FLATTILE_ERROR;
  }
  return guarded([&] {
    *json = dup_string(dump_document(input_to_json(*n->complex)));
    return FLATTILE_OK;
  });
}

int flattile_network_vertex_count(const flattile_network* n) {
  return n ? n->complex->vertex_count() : -1;
}
int flattile_network_edge_count(const flattile_network* n) {
  return n ? n->complex->edge_count() : -1;
}
int flattile_network_boundary_count(const flattile_network* n) {
  return n ? n->complex->boundary_cycle_count() : -1;
}
int flattile_network_euler_characteristic(const flattile_network* n) {
  return n ? n->complex->euler_characteristic() : 0;
}
double flattile_network_k(const flattile_network* n) {
  return n ? n->complex->k() : 0;
}

flattile_status flattile_solve(const flattile_network* n, flattile_solution** out) {
  if (!n || !out) {
    g_last_error = "null argument";
    return FLATTILE_ERROR;
  }
  return guarded([&] {
    auto s = std::make_unique<flattile_solution>();
    s->net = n;
    s->field = solve(*n->complex, n->complex->k());
    *out = s.release();
    return FLATTILE_OK;
  });
}

void flattile_solution_free(flattile_solution* s) { delete s; }

flattile_status flattile_solution_field_json(const flattile_solution* s,
                                             char** json) {
  if (!s || !json) {
    g_last_error = "null argument";
    return FLATTILE_ERROR;
  }
  return guarded([&] {
    *json = dup_string(dump_document(field_to_json(s->field)));
    return FLATTILE_OK;
  });
}

flattile_status flattile_solution_report_json(const flattile_solution* s,
                                              char** json) {
  if (!s) {
    g_last_error = "null solution";
    return FLATTILE_ERROR;
  }
  return guarded([&] {
    const PlanarComplex& c = *s->net->complex;
    VerifyReport rep = verify_field(c, s->field);
    Json j = verify_report_to_json(rep);
    j["energy"] = energy(s->field, c);
    j["outer_flux_length"] = outer_flux_length(s->field, c);
    Json fluxes = Json::array();
    for (int i = 0; i < c.boundary_cycle_count(); ++i)
      fluxes.push_back(boundary_flux(s->field, c, i));
    j["boundary_fluxes"] = std::move(fluxes);
    j["stats"] = {{"method", s->field.stats.method},
                  {"iterations", s->field.stats.iterations},
                  {"wall_ms", s->field.stats.wall_ms}};
    if (json) *json = dup_string(dump_document(j));
    if (!rep.ok()) {
      g_last_error = "solution verification failed: " + rep.failures().front();
      return FLATTILE_EVERIFY;
    }
    return FLATTILE_OK;
  });
}

double flattile_solution_energy(const flattile_solution* s) {
  return s ? energy(s->field, *s->net->complex) : 0;
}
double flattile_solution_outer_flux(const flattile_solution* s) {
  return s ? outer_flux_length(s->field, *s->net->complex) : 0;
}

flattile_status flattile_tile(const flattile_solution* s, const char* mode,
                              int allow_flat_edges, flattile_surface** out) {
  if (!s || !mode || !out) {
    g_last_error = "null argument";
    return FLATTILE_ERROR;
  }
  return guarded([&] {
    auto sur = std::make_unique<flattile_surface>();
    sur->net = s->net;
    sur->field = s->field;
    sur->surface = tile(*s->net->complex, s->field, mode, allow_flat_edges != 0);
    sur->verification = verify_surface(*s->net->complex, s->field, sur->surface);
    bool ok = sur->verification.ok();
    if (!ok) g_last_error = "identity failed: " + sur->verification.failures().front();
    *out = sur.release();
    return ok ? FLATTILE_OK : FLATTILE_EVERIFY;
  });
}

void flattile_surface_free(flattile_surface* s) { delete s; }

flattile_status flattile_surface_to_json(const flattile_surface* s, char** json) {
  if (!s || !json) {
    g_last_error = "null argument";
    return FLATTILE_ERROR;
  }
  return guarded([&] {
    *json = dup_string(dump_document(surface_to_json(s->surface)));
    return FLATTILE_OK;
  });
}

flattile_status flattile_surface_report_json(const flattile_surface* s,
                                             char** json) {
  if (!s || !json) {
    g_last_error = "null argument";
    return FLATTILE_ERROR;
  }
  return guarded([&] {
    *json = dup_string(dump_document(verify_report_to_json(s->verification)));
    return FLATTILE_OK;
  });
}

int flattile_surface_cylinder_count(const flattile_surface* s) {
  return s ? static_cast<int>(s->surface.cylinders.size()) : -1;
}

flattile_status flattile_surface_cylinder_svg(const flattile_surface* s,
                                              int cylinder, char** svg) {
  if (!s || !svg) {
    g_last_error = "null argument";
    return FLATTILE_ERROR;
  }
  if (cylinder < 0 || cylinder >= static_cast<int>(s->surface.cylinders.size())) {
    g_last_error = "cylinder index out of range";
    return FLATTILE_EINVAL;
  }
  return guarded([&] {
    *svg = dup_string(render_cylinder_svg(s->surface.cylinders[cylinder]));
    return FLATTILE_OK;
  });
}

flattile_status flattile_levels_svg(const flattile_solution* s, int regular_samples,
                                    char** svg) {
  if (!s || !svg) {
    g_last_error = "null argument";
    return FLATTILE_ERROR;
  }
  return guarded([&] {
    *svg = dup_string(render_levels_svg(*s->net->complex, s->field,
                                        regular_samples < 0 ? 0 : regular_samples));
    return FLATTILE_OK;
  });
}

flattile_status flattile_double_json(const flattile_surface* s, char** json) {
  if (!s || !json) {
    g_last_error = "null argument";
    return FLATTILE_ERROR;
  }
  return guarded([&] {
    *json = dup_string(dump_document(doubling_to_json(double_surface(s->surface))));
    return FLATTILE_OK;
  });
}

flattile_status flattile_verify_documents(const char* input_json,
                                          const char* surface_json,
                                          char** report_json) {
  if (!input_json || !surface_json) {
    g_last_error = "null argument";
    return FLATTILE_ERROR;
  }
  return guarded([&] {
    auto complex = parse_input(input_json);
    ValidationReport vrep = complex->validate();
    if (!vrep.ok()) {
      g_last_error = "invalid input: " + vrep.issues.front().message;
      return FLATTILE_EINVAL;
    }
    Json sj;
    try {
      sj = Json::parse(surface_json);
    } catch (const std::exception& e) {
      throw InvalidInput(std::string("malformed surface document: ") + e.what());
    }
    VerifyReport rep = verify_surface_document(*complex, sj);
    if (report_json) *report_json = dup_string(dump_document(verify_report_to_json(rep)));
    if (!rep.ok()) {
      g_last_error = "identity failed: " + rep.failures().front();
      return FLATTILE_EVERIFY;
    }
    return FLATTILE_OK;
  });
}

}  // extern "C"
