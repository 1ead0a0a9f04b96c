#pragma once

#include <string>
#include <vector>

#include "complex.hpp"

namespace flattile {

struct SolveStats {
  std::string method;  // "cholesky" or "cg"
  int iterations = 0;
  double wall_ms = 0;
};

// Solution of the Dirichlet problem: g = k on the outer boundary, 0 on the
// inner boundaries, combinatorially harmonic at interior vertices.
struct HarmonicField {
  std::vector<double> values;
  double k = 0;
  double residual = 0;  // max |laplacian| over interior vertices
  SolveStats stats;
};

// Generic weighted graph used for induced sub-problems after surgery.
struct ConductanceGraph {
  struct GEdge {
    int u, v;
    double c;
  };
  int vertex_count = 0;
  std::vector<GEdge> edges;
};

// sum_{y ~ x} c(x,y) (g(x) - g(y)) over all neighbors of x.
double laplacian(const HarmonicField& f, const PlanarComplex& c, int x);

HarmonicField solve(const PlanarComplex& c, double k);

// Pinned-value solve on an arbitrary conductance graph: pinned[i] >= 0 marks
// a fixed value; everything else is solved harmonically. Deterministic.
std::vector<double> solve_pinned(const ConductanceGraph& g,
                                 const std::vector<char>& pinned,
                                 const std::vector<double>& pinned_values,
                                 SolveStats* stats = nullptr);

// sum over edges of c (g(x) - g(y))^2.
double energy(const HarmonicField& f, const PlanarComplex& c);

// Normal derivative of f at x with respect to F: neighbors restricted to F.
// Requires x in the vertex boundary of F.
double normal_derivative(const HarmonicField& f, const PlanarComplex& c,
                         const std::vector<int>& F, int x);

// LHS - RHS of the first Green identity on F; zero up to rounding for any
// pair of fields.
double green_identity_residual(const HarmonicField& u, const HarmonicField& v,
                               const PlanarComplex& c, const std::vector<int>& F);

// |sum_{x in S} dg/dn(F)(x)| — flux-gradient length of S, S a subset of the
// vertex boundary of F.
double flux_length(const HarmonicField& f, const PlanarComplex& c,
                   const std::vector<int>& F, const std::vector<int>& S);

// Signed flux sum over one boundary cycle with respect to the interior.
double boundary_flux(const HarmonicField& f, const PlanarComplex& c, int cycle);

// Circumference of the flat image: flux length of the outer boundary.
double outer_flux_length(const HarmonicField& f, const PlanarComplex& c);

}  // namespace flattile
