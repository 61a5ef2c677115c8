#include "sgt/num/profiles.hpp"

#include <cmath>

namespace sgt {
namespace {

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double b = bump(t);
  return b / (b + bump(1.0 - t));
}

Jet smooth_step_jet(double t, int order) {
  Jet g(order);
  if (t <= 0.0) return g;  // identically 0 on a neighbourhood
  if (t >= 1.0) {
    g.c[0] = 1.0;
    return g;
  }
  const Jet b = jet_exp(jet_neg_inv(t, order));
  // exp(-1/(1-t)) as a jet in t: reflect the expansion of exp(-1/u) at 1-t.
  Jet br = jet_exp(jet_neg_inv(1.0 - t, order));
  for (int k = 1; k <= order; k += 2) br.c[k] = -br.c[k];
  return b * jet_recip(b + br);
}

double ExcisionProfile::operator()(double r) const {
  return smooth_step((r - r0) / (1.0 - r0));
}

double ExcisionProfile::deriv(int d, double r) const {
  if (d == 0) return (*this)(r);
  const double s = 1.0 / (1.0 - r0);
  const Jet j = smooth_step_jet((r - r0) * s, d);
  return j.deriv(d) * std::pow(s, d);
}

double smoothed_norm_from_sq(double u) {
  const double psi = smooth_step((u - 0.25) / 0.75);
  const double p = (3.0 + 6.0 * u - u * u) / 8.0;
  return (1.0 - psi) * p + psi * std::sqrt(u);
}

}  // namespace sgt
