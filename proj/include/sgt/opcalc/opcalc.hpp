#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sgt/sym/structured.hpp"

namespace sgt {

// ---------------------------------------------------------------------------
// Spectral sector and ellipticity relative to it.

// Closed sector around the negative real axis: all r e^{i phi} with r >= 0
// and theta <= phi <= 2 pi - theta, optionally fattened by a margin eps.
// Membership is exact on the boundary rays (and at the origin, which always
// belongs to the sector).
struct Sector {
  double theta = 2.356194490192345;  // 3 pi / 4
  double eps = 0.0;

  // Distance from z to the (fattened) sector; 0 exactly when z belongs.
  double distance(cplx z) const;
  bool contains(cplx z) const { return distance(z) == 0.0; }
  // Boundary ray point r e^{+i theta} (sign >= 0) or r e^{-i theta}.
  cplx ray(double r, int sign) const;
};

// Outcome of probing the three classical conditions: spectrum of the
// xi-principal part on R^n_x x sphere, of the x-principal part on
// sphere x R^n_xi, and of the corner part on sphere x sphere, each required
// to stay off the sector.  `resolution` is the spectral movement between
// the probes adjacent to the one attaining `min_distance` (how coarsely the
// scan sampled the spectrum right where the margin is decided); a positive
// verdict whose margin falls below it is flagged inconclusive rather than
// trusted.
struct EllipticityCertificate {
  bool elliptic = false;
  std::array<bool, 3> conditions{false, false, false};
  double min_distance = 0.0;
  double resolution = 0.0;
  bool conclusive = true;
};

EllipticityCertificate lambda_elliptic_check(const StructuredSymbol& a,
                                             const Sector& sector);
// Matrix version (k <= 4): pointwise eigenvalues, computed as roots of the
// characteristic polynomial.
EllipticityCertificate lambda_elliptic_check(const MatrixSymbol& a,
                                             const Sector& sector);

// ---------------------------------------------------------------------------
// Composition.

// Exact Leibniz composition a0 # a1 = sum_alpha (1/alpha!) d_xi^alpha a0 *
// D_x^alpha a1 for a0 polynomial in xi (the sum is finite).  Throws
// std::invalid_argument otherwise.
StructuredSymbol compose_exact(const StructuredSymbol& a0,
                               const StructuredSymbol& a1);

// Truncation of the composition series after the terms with |alpha| < N,
// together with the declared bi-order of the dropped remainder.  Empty
// remainder orders mean rapid decay in that variable.
struct AsymptoticComposition {
  StructuredSymbol truncated;
  std::optional<cplx> rem_order_xi;  // mu0 + mu1 - N
  std::optional<cplx> rem_order_x;   // m0 + m1 - N
};

AsymptoticComposition compose_asymptotic(const StructuredSymbol& a0,
                                         const StructuredSymbol& a1, int N);

// ---------------------------------------------------------------------------
// Spectral shift ("tilde" correction).

// Result of pushing the spectrum of an elliptic symbol out of the sector
// everywhere, not just near infinity.  When the probe scan finds no value
// inside the sector the symbol is returned unchanged.
struct TildeResult {
  StructuredSymbol symbol;
  bool modified = false;
  double radius = 0.0;  // padded bound on the region that needed fixing
  double bound = 0.0;   // inflated sup of |a| over that region
  double shift = 0.0;   // constant added on the core
  EllipticityCertificate certificate;  // re-check of the result
};

// a + shift * (1 - chi(|x|/s)) (1 - chi(|xi|/s)): the correction is a
// Schwartz bump equal to `shift` on the region where a meets the sector,
// with the shift sized so the displaced values clear the sector as well.
// Throws std::domain_error when a is not elliptic for the sector (no
// constant shift can repair the behaviour at infinity).
TildeResult tilde_modify(const StructuredSymbol& a, const Sector& sector);

// Probed constant C in the resolvent estimate |(lambda - a)^{-1}| <=
// C <x>^{-m} <xi>^{-mu}, sup over boundary-ray lambda and a compactified
// (x, xi) grid.  Diagnostic only; unbounded growth signals a bad sector.
double resolvent_bound_constant(const StructuredSymbol& a, cplx mu, cplx m,
                                const Sector& sector);

// ---------------------------------------------------------------------------
// Divergence generators.

// The commutator-type symbols that certify uniqueness of the regularized
// trace: each generator is a pure xi- or x-divergence built from one
// homogeneous component of a, so every trace functional vanishing on
// commutators kills it.  Degenerate components (denominator n + order = 0)
// are skipped and reported by name.
struct NamedSymbol {
  std::string name;
  StructuredSymbol symbol;
};

struct DivergenceFamily {
  std::vector<NamedSymbol> generators;
  std::vector<std::string> skipped;
};

// Components are taken at xi-degrees mu - j and x-degrees m - k for
// 0 <= j, k <= N.  Names follow the construction: "b^j" (xi-divergence of
// the j-th xi-component), "b_k" (x-divergence), "b^j_k" and "c^j_k" (the
// mixed corner, split into a xi- and an x-divergence).
DivergenceFamily divergence_generators(const StructuredSymbol& a, cplx mu,
                                       cplx m, int N);

}  // namespace sgt
