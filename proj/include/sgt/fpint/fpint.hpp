#pragma once

// Finite-part (regularized) integral of a classical symbol over R^n.
//
// For b with homogeneous components b_{(d)} of degrees d descending, the
// integral int b(y) dy diverges whenever some Re(d) >= -n.  The finite part
// subtracts those components outside an excised ball and compensates in
// closed form:
//
//   fp int b = int (b - chi * sum_d b_{(d)}) dy
//            + sum_d [ int_{|y|<=1} chi b_{(d)} dy - beta_d / (n + d) ],
//
// where beta_d = int_S b_{(d)} dsigma and the 1/(n+d) compensation is
// dropped for the critical degree d = -n (whose beta becomes the coefficient
// of the logarithmic divergence).  The subtraction may include further,
// already convergent components; the result does not change, which is an
// invariance the tests exercise.  The alternative characterization as
// lim_{R->inf} of the ball integral minus its divergence ladder is also
// implemented as an independent cross-check.

#include <functional>
#include <limits>
#include <vector>

#include "sgt/core.hpp"
#include "sgt/num/profiles.hpp"
#include "sgt/num/quadrature.hpp"
#include "sgt/num/sphere.hpp"
#include "sgt/sym/symbol.hpp"

namespace sgt {

struct FpOptions {
  enum class Mode { Splitting, Limit };
  Mode mode = Mode::Splitting;
  ExcisionProfile excision{0.5};
  int extra = 0;        // subtract this many degrees beyond the divergent ones
  double tol = 1e-11;
  int depth = 24;       // how far down the ladder divergent degrees are sought
  // When finite, subtract exactly the ladder entries with Re(degree) >= this
  // (the expanded trace formula fixes its truncation orders N, M up front);
  // `extra` is then ignored.  Critical-degree handling is unchanged.
  double subtract_floor = std::numeric_limits<double>::quiet_NaN();
};

struct FpBreakdown {
  cplx value{0.0, 0.0};
  double err = 0.0;
  bool log_branch = false;   // a critical degree -n with nonzero beta occurred
  cplx log_coeff{0.0, 0.0};  // its sphere coefficient
  std::vector<cplx> degrees;     // degrees actually subtracted
  std::vector<cplx> betas;       // their sphere integrals
  long evals = 0;                // symbol evaluations spent
  // Splitting-mode pieces, exposed for the expanded trace formula:
  // value = bulk + sum_i betas[i]*ball_pieces[i] - betas[i]/(n+degrees[i]),
  // the compensation dropped on the critical degree.
  cplx bulk{0.0, 0.0};
  std::vector<cplx> ball_pieces;  // int_0^1 chi(r) r^{n-1+d} dr per degree

  FpBreakdown scaled(cplx c) const {
    FpBreakdown s = *this;
    s.value *= c;
    s.log_coeff *= c;
    s.bulk *= c;
    for (auto& b : s.betas) b *= c;
    s.err *= std::abs(c);
    return s;
  }
};

FpBreakdown fp_integral(const RadialSymbol1V& b, const FpOptions& opt = {});

// Sphere integral of the k-th ladder component.
cplx beta_coefficient(const RadialSymbol1V& b, int k);

// The map x -> fp int a(x, xi) dxi of an SG symbol, with the (2 pi)^{-n}
// phase-space normalization folded in.
struct PartialFp {
  std::function<FpBreakdown(const Vec3& x)> at;
};
PartialFp fp_partial_xi(const SgSymbolView& a, const FpOptions& opt = {});

}  // namespace sgt
