#pragma once

// Fixed product quadrature rules on the unit sphere S^{n-1}, n = 1, 2, 3.
// The integrands met here are smooth restrictions of symbols, so a single
// high-order rule per dimension is enough (trapezoid is spectrally accurate
// on the circle; Gauss-Legendre x trapezoid on S^2).

#include <functional>
#include <vector>

#include "sgt/core.hpp"

namespace sgt {

struct SphereRule {
  int n = 1;
  std::vector<Vec3> points;
  std::vector<double> weights;  // sum to |S^{n-1}|
};

const SphereRule& sphere_rule(int n);

cplx sphere_integrate(int n, const std::function<cplx(const Vec3&)>& f);

}  // namespace sgt
