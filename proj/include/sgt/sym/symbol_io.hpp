#pragma once

// JSON reading/writing of structured symbols.
//
// File schema (strict: unknown keys are rejected everywhere):
//
// {
//   "n": 1,
//   "terms": [
//     {
//       "coeff_re": 1.0,            // optional, default 1
//       "coeff_im": 0.0,            // optional, default 0
//       "x_monomials": [[2, 1.0, 0.0], ...],   // n exponents, then re, im
//       "x_weight_power": -2.0,     // number or {"re":..., "im":...}
//       "xi_monomials": [...],
//       "xi_weight_power": 2.0,
//       "weight_kind": "bracket"    // or "smoothed"; optional
//     }, ...
//   ]
// }
//
// A missing monomial list means the constant polynomial 1; a missing weight
// power means no weight factor in that variable.

#include <string>

#include "json.hpp"
#include "sgt/sym/structured.hpp"

namespace sgt {

StructuredSymbol symbol_from_json(const nlohmann::json& j);
StructuredSymbol symbol_from_file(const std::string& path);
nlohmann::json symbol_to_json(const StructuredSymbol& a);

}  // namespace sgt
