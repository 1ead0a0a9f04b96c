#include "solver.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "errors.hpp"

namespace flattile {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

}  // namespace

namespace {

void require_full_field(const HarmonicField& f, const PlanarComplex& c,
                        const char* who) {
  if (f.values.size() < static_cast<size_t>(c.vertex_count()))
    throw InvalidInput(std::string(who) + ": field missing vertices");
}

}  // namespace

double laplacian(const HarmonicField& f, const PlanarComplex& c, int x) {
  if (x < 0 || x >= c.vertex_count()) throw InvalidInput("laplacian: unknown vertex id");
  require_full_field(f, c, "laplacian");
  double s = 0;
  const auto& nbrs = c.neighbors_ccw(x);
  const auto& eids = c.neighbor_edges_ccw(x);
  for (size_t i = 0; i < nbrs.size(); ++i)
    s += c.conductance(eids[i]) * (f.values[x] - f.values[nbrs[i]]);
  return s;
}

std::vector<double> solve_pinned(const ConductanceGraph& g,
                                 const std::vector<char>& pinned,
                                 const std::vector<double>& pinned_values,
                                 SolveStats* stats) {
  const int n = g.vertex_count;
  std::vector<int> reduced(n, -1);
  std::vector<int> free_ids;
  for (int v = 0; v < n; ++v)
    if (!pinned[v]) {
      reduced[v] = static_cast<int>(free_ids.size());
      free_ids.push_back(v);
    }
  std::vector<double> x(n, 0.0);
  for (int v = 0; v < n; ++v)
    if (pinned[v]) x[v] = pinned_values[v];
  const int nf = static_cast<int>(free_ids.size());
  if (nf == 0) return x;

  std::vector<double> diag(nf, 0.0), rhs(nf, 0.0);
  std::vector<Triplet> trips;
  trips.reserve(2 * g.edges.size() + nf);
  for (const auto& e : g.edges) {
    if (e.c == 0) continue;  // zero-conductance arcs never enter the system
    int ru = reduced[e.u], rv = reduced[e.v];
    if (ru < 0 && rv < 0) continue;
    if (ru >= 0) diag[ru] += e.c;
    if (rv >= 0) diag[rv] += e.c;
    if (ru >= 0 && rv >= 0) {
      trips.emplace_back(ru, rv, -e.c);
      trips.emplace_back(rv, ru, -e.c);
    } else if (ru >= 0) {
      rhs[ru] += e.c * x[e.v];
    } else {
      rhs[rv] += e.c * x[e.u];
    }
  }
  for (int i = 0; i < nf; ++i) {
    if (diag[i] == 0)
      throw SolverError("isolated free vertex: singular reduced system");
    trips.emplace_back(i, i, diag[i]);
  }

  SpMat A(nf, nf);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::VectorXd b(nf);
  for (int i = 0; i < nf; ++i) b[i] = rhs[i];

  auto t0 = std::chrono::steady_clock::now();
  Eigen::VectorXd sol;
  std::string method;
  int iterations = 0;
  // Direct SPD factorization at desk scale; conjugate gradient beyond it.
  constexpr int kDirectLimit = 300000;
  if (nf <= kDirectLimit) {
    Eigen::SimplicialLLT<SpMat> llt(A);
    if (llt.info() != Eigen::Success)
      throw SolverError("sparse Cholesky factorization failed");
    sol = llt.solve(b);
    // One refinement pass to polish the residual.
    Eigen::VectorXd r = b - A * sol;
    sol += llt.solve(r);
    method = "cholesky";
    iterations = 1;
  } else {
    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-12);
    cg.setMaxIterations(100LL * n);
    cg.compute(A);
    sol = cg.solve(b);
    if (cg.info() != Eigen::Success)
      throw SolverError("conjugate gradient did not converge");
    method = "cg";
    iterations = static_cast<int>(cg.iterations());
  }
  auto t1 = std::chrono::steady_clock::now();
  if (stats) {
    stats->method = method;
    stats->iterations = iterations;
    stats->wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }

  for (int i = 0; i < nf; ++i) x[free_ids[i]] = sol[i];
  return x;
}

HarmonicField solve(const PlanarComplex& c, double k) {
  if (!(k > 0)) throw InvalidInput("solve: k must be positive");
  const int n = c.vertex_count();
  ConductanceGraph g;
  g.vertex_count = n;
  g.edges.reserve(c.edge_count());
  for (int e = 0; e < c.edge_count(); ++e)
    g.edges.push_back({c.edges()[e].first, c.edges()[e].second, c.conductance(e)});
  std::vector<char> pinned(n, 0);
  std::vector<double> pv(n, 0.0);
  for (int v : c.outer_boundary()) {
    pinned[v] = 1;
    pv[v] = k;
  }
  for (const auto& cyc : c.inner_boundaries())
    for (int v : cyc) {
      pinned[v] = 1;
      pv[v] = 0.0;
    }

  HarmonicField f;
  f.k = k;
  f.values = solve_pinned(g, pinned, pv, &f.stats);
  // Re-pin exactly (the solver never touches pinned entries, but be explicit).
  for (int v = 0; v < n; ++v)
    if (pinned[v]) f.values[v] = pv[v];

  double res = 0;
  for (int v = 0; v < n; ++v)
    if (!pinned[v]) res = std::max(res, std::abs(laplacian(f, c, v)));
  f.residual = res;
  return f;
}

double energy(const HarmonicField& f, const PlanarComplex& c) {
  require_full_field(f, c, "energy");
  double s = 0;
  for (int e = 0; e < c.edge_count(); ++e) {
    auto [u, v] = c.edges()[e];
    double d = f.values[u] - f.values[v];
    s += c.conductance(e) * d * d;
  }
  return s;
}

namespace {

std::set<int> as_set(const std::vector<int>& F) { return {F.begin(), F.end()}; }

}  // namespace

double normal_derivative(const HarmonicField& f, const PlanarComplex& c,
                         const std::vector<int>& F, int x) {
  require_full_field(f, c, "normal_derivative");
  auto fs = as_set(F);
  if (fs.count(x)) throw InvalidInput("normal_derivative: x lies inside F");
  const auto& nbrs = c.neighbors_ccw(x);
  const auto& eids = c.neighbor_edges_ccw(x);
  bool adjacent = false;
  double s = 0;
  for (size_t i = 0; i < nbrs.size(); ++i) {
    if (fs.count(nbrs[i])) {
      adjacent = true;
      s += c.conductance(eids[i]) * (f.values[x] - f.values[nbrs[i]]);
    }
  }
  if (!adjacent) throw InvalidInput("normal_derivative: x not in the vertex boundary of F");
  return s;
}

double green_identity_residual(const HarmonicField& u, const HarmonicField& v,
                               const PlanarComplex& c, const std::vector<int>& F) {
  require_full_field(u, c, "green_identity_residual");
  require_full_field(v, c, "green_identity_residual");
  auto fs = as_set(F);
  // delta F: vertices outside F adjacent to F.
  std::set<int> dF;
  for (int x : F)
    for (int w : c.neighbors_ccw(x))
      if (!fs.count(w)) dF.insert(w);
  for (int x : F)
    if (x < 0 || x >= c.vertex_count()) throw InvalidInput("green: bad vertex in F");

  double lhs = 0;
  for (int e = 0; e < c.edge_count(); ++e) {
    auto [a, b] = c.edges()[e];
    if (!fs.count(a) && !fs.count(b)) continue;  // edge set: one endpoint in F
    lhs += c.conductance(e) * (u.values[a] - u.values[b]) * (v.values[a] - v.values[b]);
  }

  double rhs = 0;
  for (int x : F) {
    double lap = 0;
    const auto& nbrs = c.neighbors_ccw(x);
    const auto& eids = c.neighbor_edges_ccw(x);
    for (size_t i = 0; i < nbrs.size(); ++i)
      lap += c.conductance(eids[i]) * (u.values[x] - u.values[nbrs[i]]);
    rhs += lap * v.values[x];
  }
  for (int x : dF) {
    double nd = 0;
    const auto& nbrs = c.neighbors_ccw(x);
    const auto& eids = c.neighbor_edges_ccw(x);
    for (size_t i = 0; i < nbrs.size(); ++i)
      if (fs.count(nbrs[i]))
        nd += c.conductance(eids[i]) * (u.values[x] - u.values[nbrs[i]]);
    rhs += nd * v.values[x];
  }
  return lhs - rhs;
}

double flux_length(const HarmonicField& f, const PlanarComplex& c,
                   const std::vector<int>& F, const std::vector<int>& S) {
  auto fs = as_set(F);
  double s = 0;
  for (int x : S) {
    if (fs.count(x)) throw InvalidInput("flux_length: S must avoid F");
    s += normal_derivative(f, c, F, x);
  }
  return std::abs(s);
}

double boundary_flux(const HarmonicField& f, const PlanarComplex& c, int cycle) {
  auto F = c.interior_vertices();
  auto fs = as_set(F);
  const std::vector<int>& cyc =
      cycle == 0 ? c.outer_boundary() : c.inner_boundaries()[cycle - 1];
  double s = 0;
  for (int x : cyc) {
    const auto& nbrs = c.neighbors_ccw(x);
    const auto& eids = c.neighbor_edges_ccw(x);
    for (size_t i = 0; i < nbrs.size(); ++i)
      if (fs.count(nbrs[i]))
        s += c.conductance(eids[i]) * (f.values[x] - f.values[nbrs[i]]);
  }
  return s;
}

double outer_flux_length(const HarmonicField& f, const PlanarComplex& c) {
  return std::abs(boundary_flux(f, c, 0));
}

}  // namespace flattile
