#pragma once

// The smooth cutoff profiles shared across the library: a C^inf step, the
// radial excision profile (0 near the origin, 1 outside the unit ball), and
// the smoothed-norm weight used as the alternative to the Japanese bracket.
// All profiles expose exact derivatives through the jet engine so that symbol
// classes containing cutoff factors stay closed under differentiation.

#include "sgt/num/jets.hpp"

namespace sgt {

// C^inf step: 0 for t <= 0, 1 for t >= 1, strictly increasing between.
double smooth_step(double t);
Jet smooth_step_jet(double t, int order);

// chi(r) = step((r - r0)/(1 - r0)): vanishes for r <= r0, equals 1 for
// r >= 1.  r0 in (0, 1).
struct ExcisionProfile {
  double r0 = 0.5;

  double operator()(double r) const;
  double deriv(int d, double r) const;   // d-th derivative in r
  double support_lo() const { return r0; }
};

// Smoothed norm [y] = F(|y|^2): equals |y| for |y| >= 1, is smooth and
// bounded below by 3/8 everywhere (F interpolates to an even polynomial that
// matches sqrt to second order at u = 1).
double smoothed_norm_from_sq(double u);

}  // namespace sgt
