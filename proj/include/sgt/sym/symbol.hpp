#pragma once

// Interface types between concrete symbol representations and the integral
// machinery.  The finite-part integral consumes a RadialSymbol1V: pointwise
// values plus the (finite prefix of the) homogeneous degree ladder with
// component values on the unit sphere.  Structured symbols provide these
// exactly; black-box symbols provide them through numeric extraction.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "sgt/core.hpp"
#include "sgt/num/extrapolate.hpp"
#include "sgt/num/series.hpp"
#include "sgt/num/sphere.hpp"
#include "sgt/sym/structured.hpp"

namespace sgt {

// A classical symbol of one variable on R^n as the integral machinery sees
// it: smooth values everywhere, homogeneous components of the listed degrees
// (descending real part) with values given on |omega| = 1.
struct RadialSymbol1V {
  int n = 1;
  std::function<cplx(const Vec3&)> eval;
  std::vector<cplx> degrees;
  std::function<cplx(int k, const Vec3& omega)> comp;
  // Optional stable evaluation of b minus its first k ladder components.
  // Without it the caller must subtract numerically, which loses all
  // precision once the difference falls below the cancellation noise of b
  // itself.
  std::function<cplx(int k, const Vec3& y)> eval_tail;
  // Radius from which eval_tail is trustworthy (widened excision shells push
  // the expansion's validity outward past the default).
  double tail_from = 3.0;
};

// Sum of the expansion slots whose degrees are NOT among the first k ladder
// degrees, evaluated at radius r (the stable remainder).
cplx expansion_tail_value(const ScalarExpansion& e,
                          const std::vector<cplx>& degrees, int k, double r);

// SG symbol view: evaluation plus both restriction families needed by the
// iterated finite-part integral (inner integral in one variable, outer
// ladder in the other).
struct SgSymbolView {
  int n = 1;
  std::optional<cplx> mu, m;  // declared orders, absent for rapid decay
  std::function<cplx(const Vec3& x, const Vec3& xi)> eval;

  // xi-symbol at frozen x, and the x-ladder with xi-symbol coefficients:
  // x_comp_restrict(j, omega) is the xi-symbol  xi -> a_{(d_j)}(omega, xi)
  // with the x-homogeneity factored out (value at |x| = 1).
  std::function<RadialSymbol1V(const Vec3& x)> xi_restrict;
  std::vector<cplx> x_ladder;
  std::function<RadialSymbol1V(int j, const Vec3& omega)> x_comp_restrict;

  // same with the roles of x and xi swapped
  std::function<RadialSymbol1V(const Vec3& xi)> x_restrict;
  std::vector<cplx> xi_ladder;
  std::function<RadialSymbol1V(int k, const Vec3& omega)> xi_comp_restrict;
};

// Exact views of structured symbols.
RadialSymbol1V radial_from_structured_xi(const StructuredSymbol& a,
                                         const Vec3& x, int depth = 24);
RadialSymbol1V radial_from_structured_x(const StructuredSymbol& a,
                                        const Vec3& xi, int depth = 24);
SgSymbolView sg_view(const StructuredSymbol& a, int depth = 24);

// View backed by ray expansions (rational symbols in the resolvent caches).
// `expand` must return the restriction expansion along omega; degrees are
// read off a probe direction and assumed direction-independent.
RadialSymbol1V radial_from_expansion(
    int n, std::function<cplx(const Vec3&)> eval,
    std::function<ScalarExpansion(const Vec3& omega)> expand, int depth = 24);

// ---------------------------------------------------------------------------
// Numeric component extraction for black-box symbols.

// Estimate the leading degree of F(t) ~ c t^d by a log-log slope fit over a
// dyadic grid, snapped to the nearest multiple of 1/2 when within `snap_tol`.
double detect_leading_degree(const std::function<cplx(double)>& F,
                             double snap_tol = 0.15);

// Value of lim t^{-d} F(t) assuming half-integer error ladders.
LimitResult extract_coefficient(const std::function<cplx(double)>& F, cplx d);

struct ExtractedLadder {
  std::vector<cplx> degrees;
  std::vector<cplx> values;  // at the probed direction
};

// Peel components of F along one direction: detect, extract, subtract.
ExtractedLadder extract_components(const std::function<cplx(double)>& F,
                                   int count);

// A black-box symbol of one variable: only evaluation plus a declared order
// is given; the ladder is recovered numerically, per direction.
RadialSymbol1V radial_from_blackbox(int n,
                                    std::function<cplx(const Vec3&)> eval,
                                    int depth = 8);

}  // namespace sgt
