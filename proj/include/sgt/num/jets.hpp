#pragma once

// Truncated Taylor expansions ("jets") with arithmetic.  Used wherever exact
// derivatives of the smooth cutoff profiles are required: coefficients are
// stored in Taylor normalization c[k] = f^{(k)}/k!.

#include <cmath>
#include <vector>

namespace sgt {

struct Jet {
  std::vector<double> c;

  explicit Jet(int order = 0, double v = 0.0) : c(order + 1, 0.0) { c[0] = v; }
  int order() const { return static_cast<int>(c.size()) - 1; }
  double deriv(int d) const {
    if (d > order()) return 0.0;
    double f = 1.0;
    for (int k = 2; k <= d; ++k) f *= k;
    return c[d] * f;
  }

  Jet operator+(const Jet& o) const {
    Jet r(order());
    for (int k = 0; k <= order(); ++k) r.c[k] = c[k] + o.c[k];
    return r;
  }
  Jet operator-(const Jet& o) const {
    Jet r(order());
    for (int k = 0; k <= order(); ++k) r.c[k] = c[k] - o.c[k];
    return r;
  }
  Jet operator*(const Jet& o) const {
    Jet r(order());
    for (int i = 0; i <= order(); ++i)
      for (int j = 0; i + j <= order(); ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
  }
};

// g = exp(f) via the first-order recurrence g' = f' g.
inline Jet jet_exp(const Jet& f) {
  Jet g(f.order());
  g.c[0] = std::exp(f.c[0]);
  for (int k = 1; k <= f.order(); ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * f.c[j] * g.c[k - j];
    g.c[k] = s / k;
  }
  return g;
}

// g = 1/f, f(0) != 0.
inline Jet jet_recip(const Jet& f) {
  Jet g(f.order());
  g.c[0] = 1.0 / f.c[0];
  for (int k = 1; k <= f.order(); ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += f.c[j] * g.c[k - j];
    g.c[k] = -s * g.c[0];
  }
  return g;
}

// Jet of t -> -1/t at t0 > 0.
inline Jet jet_neg_inv(double t0, int order) {
  Jet f(order);
  double p = 1.0 / t0;  // t0^{-(k+1)} running power
  for (int k = 0; k <= order; ++k) {
    f.c[k] = (k % 2 == 0 ? -1.0 : 1.0) * p;
    p /= t0;
  }
  return f;
}

}  // namespace sgt
