#pragma once

#include <json.hpp>
#include <memory>
#include <string>

#include "complex.hpp"
#include "solver.hpp"
#include "tiler.hpp"

namespace flattile {

using Json = nlohmann::ordered_json;

// Input document: vertices, edges, faces, outer_boundary, inner_boundaries,
// conductance (array or scalar), k. Values round-trip bit-exactly.
std::unique_ptr<PlanarComplex> parse_input(const std::string& text);
std::unique_ptr<PlanarComplex> parse_input_json(const Json& j);
Json input_to_json(const PlanarComplex& c);

Json validation_report_to_json(const PlanarComplex& c, const ValidationReport& rep);

Json field_to_json(const HarmonicField& f);
HarmonicField field_from_json(const Json& j);

Json surface_to_json(const FlatSurface& s);
FlatSurface surface_from_json(const Json& j);

Json doubling_to_json(const DoubledSurfaceDescriptor& d);

std::string dump_document(const Json& j);

}  // namespace flattile
