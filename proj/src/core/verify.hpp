#pragma once

#include <string>
#include <vector>

#include "complex.hpp"
#include "docio.hpp"
#include "solver.hpp"
#include "tiler.hpp"

namespace flattile {

struct IdentityCheck {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<IdentityCheck> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.pass) out.push_back(c.name);
    return out;
  }
};

// Solver-level identities (run by cmd_solve).
VerifyReport verify_field(const PlanarComplex& c, const HarmonicField& f);

// Full identity suite against a freshly built surface (run inside tile).
VerifyReport verify_surface(const PlanarComplex& c, const HarmonicField& f,
                            const FlatSurface& s);

// Document-level verification: trusts only the input network, re-solves, and
// checks every identity against the stored surface numbers.
VerifyReport verify_surface_document(const PlanarComplex& c, const Json& surface);

Json verify_report_to_json(const VerifyReport& rep);

}  // namespace flattile
