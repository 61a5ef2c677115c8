#pragma once

// Sequence acceleration and fitting helpers.  Component extraction, the
// N-independence checks, and the asymptotic-exponent fits all funnel through
// these routines.

#include <vector>

#include "sgt/core.hpp"

namespace sgt {

struct LimitResult {
  cplx value{0.0, 0.0};
  double err = 0.0;  // spread of the last accelerated entries
};

// Richardson elimination for s_i = L + sum_k c_k rho^{-e_k * i} (geometric
// grid of ratio rho, known error exponents e_k, applied in order).
LimitResult richardson(const std::vector<cplx>& s, double rho,
                       const std::vector<double>& exponents);

// Iterated Aitken delta-squared; eliminates geometric error modes with
// unknown ratios.  sweeps <= (len-1)/2.
LimitResult aitken(const std::vector<cplx>& s, int sweeps);

// Least-squares slope of log|v| against log t (drops entries with |v| = 0).
// Returns {slope, intercept}; ok=false when fewer than two usable points.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  bool ok = false;
};
SlopeFit fit_loglog(const std::vector<double>& t, const std::vector<double>& v);

// Dense linear solve by Gauss elimination with partial pivoting (tiny
// systems only).  Returns empty vector when singular.
std::vector<double> solve_dense(std::vector<std::vector<double>> A,
                                std::vector<double> b);

// Least squares by Householder QR (the exponent-fit design matrices are too
// ill-conditioned for normal equations).  Returns empty on rank deficiency.
std::vector<double> solve_least_squares(std::vector<std::vector<double>> A,
                                        std::vector<double> b);

}  // namespace sgt
