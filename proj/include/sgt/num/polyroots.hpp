#pragma once

// All complex roots of a low-degree polynomial (matrix symbols have size at
// most 4, so characteristic polynomials stop at degree 4).

#include <vector>

#include "sgt/core.hpp"

namespace sgt {

// Coefficients low to high, leading coefficient nonzero.  Durand-Kerner with
// a fixed deterministic start; degrees <= 8 supported.
std::vector<cplx> poly_roots(std::vector<cplx> coeff);

}  // namespace sgt
