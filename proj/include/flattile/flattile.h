/* flattile: Dirichlet boundary-value problems on planar conductance networks
 * and rectangle tilings of the induced singular flat surfaces.
 *
 * C interface over the C++ core: opaque handles, status codes, JSON strings.
 * Every char* returned through an out-parameter is heap-allocated and must be
 * released with flattile_string_free. Handles are freed with their matching
 * _free function. All functions are safe to call from multiple threads as
 * long as each handle is used from one thread at a time.
 */
#ifndef FLATTILE_H
#define FLATTILE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define FLATTILE_API __declspec(dllexport)
#else
#define FLATTILE_API __attribute__((visibility("default")))
#endif

typedef enum flattile_status {
  FLATTILE_OK = 0,
  FLATTILE_ERROR = 1,       /* internal error / bad argument */
  FLATTILE_EINVAL = 2,      /* malformed input or invariant violation */
  FLATTILE_EDEGENERATE = 3, /* adjacent vertices share a g-value */
  FLATTILE_ESOLVER = 4,     /* linear solver failure */
  FLATTILE_EVERIFY = 5      /* an identity residual exceeds its tolerance */
} flattile_status;

typedef struct flattile_network flattile_network;
typedef struct flattile_solution flattile_solution;
typedef struct flattile_surface flattile_surface;

FLATTILE_API const char* flattile_version(void);

/* Message describing the most recent failure on this thread. The pointer is
 * owned by the library and valid until the next failing call. */
FLATTILE_API const char* flattile_last_error(void);

FLATTILE_API void flattile_string_free(char* s);

/* --- network ------------------------------------------------------------ */

FLATTILE_API flattile_status flattile_network_parse(const char* json,
                                                    flattile_network** out);
FLATTILE_API void flattile_network_free(flattile_network* n);

/* Structural validation; returns FLATTILE_EINVAL when violations exist.
 * report_json (optional) receives the full list either way. */
FLATTILE_API flattile_status flattile_network_validate(const flattile_network* n,
                                                       char** report_json);
FLATTILE_API flattile_status flattile_network_to_json(const flattile_network* n,
                                                      char** json);
FLATTILE_API int flattile_network_vertex_count(const flattile_network* n);
FLATTILE_API int flattile_network_edge_count(const flattile_network* n);
FLATTILE_API int flattile_network_boundary_count(const flattile_network* n);
FLATTILE_API int flattile_network_euler_characteristic(const flattile_network* n);
FLATTILE_API double flattile_network_k(const flattile_network* n);

/* --- Dirichlet solution -------------------------------------------------- */

FLATTILE_API flattile_status flattile_solve(const flattile_network* n,
                                            flattile_solution** out);
FLATTILE_API void flattile_solution_free(flattile_solution* s);
FLATTILE_API flattile_status flattile_solution_field_json(const flattile_solution* s,
                                                          char** json);
/* Energy, boundary fluxes, residual table; FLATTILE_EVERIFY when a residual
 * exceeds its gate. */
FLATTILE_API flattile_status flattile_solution_report_json(const flattile_solution* s,
                                                           char** json);
FLATTILE_API double flattile_solution_energy(const flattile_solution* s);
FLATTILE_API double flattile_solution_outer_flux(const flattile_solution* s);

/* --- tiling --------------------------------------------------------------*/

/* mode: "annulus" | "pants" | "ladder" | "auto". The identity suite always
 * runs; FLATTILE_EVERIFY still hands back the surface for inspection. */
FLATTILE_API flattile_status flattile_tile(const flattile_solution* s,
                                           const char* mode, int allow_flat_edges,
                                           flattile_surface** out);
FLATTILE_API void flattile_surface_free(flattile_surface* s);
FLATTILE_API flattile_status flattile_surface_to_json(const flattile_surface* s,
                                                      char** json);
FLATTILE_API flattile_status flattile_surface_report_json(const flattile_surface* s,
                                                          char** json);
FLATTILE_API int flattile_surface_cylinder_count(const flattile_surface* s);
FLATTILE_API flattile_status flattile_surface_cylinder_svg(const flattile_surface* s,
                                                           int cylinder, char** svg);
FLATTILE_API flattile_status flattile_levels_svg(const flattile_solution* s,
                                                 int regular_samples, char** svg);
/* Descriptor of the closed surface obtained by doubling along the boundary. */
FLATTILE_API flattile_status flattile_double_json(const flattile_surface* s,
                                                  char** json);

/* --- document verification ----------------------------------------------- */

/* Re-solves the network and checks every identity against a stored surface
 * document. FLATTILE_EVERIFY on any failure; report lists each check. */
FLATTILE_API flattile_status flattile_verify_documents(const char* input_json,
                                                       const char* surface_json,
                                                       char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* FLATTILE_H */
