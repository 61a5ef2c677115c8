#pragma once

// Adaptive complex-valued quadrature built on a Gauss-7 / Kronrod-15 pair.
// Everything downstream (finite-part integrals, regularized traces, contour
// integrals) reduces to 1-D integrals over finite segments plus algebraic
// tail maps, so this is the single quadrature engine of the library.

#include <functional>
#include <vector>

#include "sgt/core.hpp"

namespace sgt {

using Fun1D = std::function<cplx(double)>;

struct QuadResult {
  cplx value{0.0, 0.0};
  double err = 0.0;     // estimated absolute error
  long evals = 0;
  bool converged = true;

  QuadResult& operator+=(const QuadResult& o) {
    value += o.value;
    err += o.err;
    evals += o.evals;
    converged = converged && o.converged;
    return *this;
  }
};

// Adaptive bisection on [a, b]; stops when the summed error estimate drops
// below tol * max(1, |integral|) or the subdivision budget runs out.
QuadResult integrate(const Fun1D& f, double a, double b, double tol = 1e-11,
                     int max_segments = 4000);

// Integral over [a, +inf).  The tail beyond a + span is folded to (0, 1] by
// r = s/u (integrand must decay better than 1/r there).
QuadResult integrate_halfline(const Fun1D& f, double a, double tol = 1e-11,
                              double span = 8.0);

// Integral over the whole line with optional interior breakpoints (placed at
// kinks of the integrand so the adaptive pass does not chase them).
QuadResult integrate_line(const Fun1D& f, double tol = 1e-11,
                          std::vector<double> breaks = {}, double span = 8.0);

}  // namespace sgt
