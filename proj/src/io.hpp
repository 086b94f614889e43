#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "poly.hpp"
#include "states.hpp"

namespace wehrl {

// Polynomial file schema:
//   {"d": int, "N": int, "terms": [{"alpha": [ints], "re": f, "im": f}, ...]}
// Unknown fields and terms with |alpha| != N are rejected; errors name the
// offending field.
HomPoly parse_poly_json(const nlohmann::json& j);
HomPoly load_poly(const std::string& path);
nlohmann::json poly_to_json(const HomPoly& Q);

// State file schema:
//   {"d": int, "N": int, "matrix": [[{"re": f, "im": f}, ...], ...]}
// in the orthonormal monomial basis with the polyspace ordering.
DensityState parse_state_json(const nlohmann::json& j);
DensityState load_state(const std::string& path);
nlohmann::json state_to_json(const DensityState& st);

// Result record for single evaluations:
//   {"functional": name, "value": v, "stderr": s|null, "argmax": [..]|null,
//    "config": {...}}
nlohmann::json result_record(const std::string& functional, double value,
                             std::optional<double> stderr_, const std::vector<cplx>* argmax,
                             nlohmann::json config);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace wehrl
