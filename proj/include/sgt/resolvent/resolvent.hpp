#pragma once

// Rational calculus around the resolvent of a sector-elliptic symbol.
//
// Everything here is a finite sum
//
//   sum_i f_i(x, xi) * (lambda - w(x, xi))^{-p_i}
//
// with structured numerators f_i over a common base w.  The class is closed
// under derivatives in x, xi, lambda, under products, and under
// multiplication by symbols and by lambda, so the parametrix recursion for
// lambda - w(x, D) and its sigma-form homogeneous analogue stay exact
// symbolic objects; lambda (or sigma^mu) is only substituted at evaluation
// time.  On top of the calculus sit the asymptotics: remainder decay of the
// truncated parametrix, limit symbols along sigma-rays, and the large-lambda
// expansion of TR (lambda - a(x,D))^{-k}.

#include <vector>

#include "sgt/num/extrapolate.hpp"
#include "sgt/opcalc/opcalc.hpp"
#include "sgt/regtrace/regtrace.hpp"
#include "sgt/sym/structured.hpp"

namespace sgt {

struct RationalTerm {
  StructuredSymbol f;
  int p = 1;  // power of (lambda - w)^{-1}; p = 0 marks a plain symbol part
};

class ResolventRational {
 public:
  StructuredSymbol base;  // w
  std::vector<RationalTerm> terms;  // sorted by p, numerators merged

  ResolventRational() = default;
  explicit ResolventRational(StructuredSymbol w) : base(std::move(w)) {}

  // (lambda - w)^{-1}
  static ResolventRational inverse(StructuredSymbol w);

  bool is_zero() const { return terms.empty(); }
  int term_count() const { return static_cast<int>(terms.size()); }
  cplx eval(const Vec3& x, const Vec3& xi, cplx lambda) const;

  ResolventRational operator+(const ResolventRational& o) const;
  ResolventRational operator-(const ResolventRational& o) const;
  // Product of two rationals over the same base: powers add.
  ResolventRational operator*(const ResolventRational& o) const;
  ResolventRational mul_symbol(const StructuredSymbol& s) const;
  ResolventRational scaled(cplx c) const;

  ResolventRational derivative_x(int i) const;
  ResolventRational derivative_xi(int i) const;
  ResolventRational derivative_x_multi(const MIdx& alpha) const;
  ResolventRational derivative_xi_multi(const MIdx& alpha) const;
  // d/dlambda: (f, p) -> (-p f, p+1).
  ResolventRational derivative_lambda() const;

  // lambda * this, via lambda = (lambda - w) + w; requires every p >= 1.
  ResolventRational mul_lambda() const;

  // Merge terms of equal power and cancel their numerators symbolically.
  void compact();
};

// Exact parametrix term recursion for lambda - w(x, D):
//
//   b_0 = (lambda - w)^{-1},
//   b_{-k} = sum_{j+|alpha|=k, j<k}
//              (1/alpha!) (d_xi^alpha b_{-j}) (D_x^alpha w) b_0,
//
// returned as [b_0, b_{-1}, ..., b_{-(N-1)}].  The caller is responsible
// for w being sector-elliptic with nothing left to excise (R = 0), e.g. by
// passing the output of tilde_modify.
std::vector<ResolventRational> parametrix_terms(const StructuredSymbol& w,
                                                int N);

// Graded Leibniz product of two graded families (entry g collects every
// j + l + |alpha| = g with A_j, B_l): the composition of the associated
// operators truncated consistently at the common ladder depth.
std::vector<ResolventRational> compose_graded(
    const std::vector<ResolventRational>& A,
    const std::vector<ResolventRational>& B);

// r_N = 1 - b_{<N} # (lambda - w), composition truncated at depth N + 2, as
// an exact rational: the recursion pairs xi-derivatives with the parametrix
// terms, so this is the side on which the low grades telescope away and the
// remainder starts at joint decay order N.  Identically zero for
// x-independent w.
ResolventRational parametrix_remainder_symbol(const StructuredSymbol& w,
                                              int N);

// Ray-decay report for r_N: log-log slopes along a xi-ray, an x-ray, and
// along a lambda sequence (of the sup over xi probes weighted by <xi>^N, so
// the lambda slope measures the resolvent factor rather than the xi decay).
// The ok flags gate on the fit residuals; when false the slopes are
// report-only.
struct RemainderDecay {
  int N = 0;
  SlopeFit xi, x, lam;
  bool xi_ok = false, x_ok = false, lam_ok = false;
};
RemainderDecay parametrix_remainder(const StructuredSymbol& w, int N,
                                    const std::vector<cplx>& lambdas);

// Homogeneous-data parametrix in the sigma calculus.  comps[l] is the exact
// homogeneous component a^{(mu-l)} (|.|-power carriers, valid on rays), and
// lambda stands for sigma^mu at evaluation time:
//
//   p^{(-mu)} = (sigma^mu - a^{(mu)})^{-1},
//   p^{(-mu-i)} = sum_{j+l+|alpha|=i, j<i}
//                   (1/alpha!) (d_xi^alpha p^{(-mu-j)}) (D_x^alpha a^{(mu-l)})
//                   p^{(-mu)}.
//
// Rejects data whose top component takes values inside the sector
// (std::domain_error): those points make sigma^mu - a^{(mu)} singular.
std::vector<ResolventRational> sigma_parametrix_terms(
    const std::vector<StructuredSymbol>& comps, const Sector& sector, int I);

// Pointwise limit symbol  lim_{z->0} d_z^j ( z^d p(x, xi, sigma = 1/z) )
// with sigma^mu substituted for lambda and z shrinking along the ray
// arg z = -psi (so sigma stays on arg sigma = psi).  Central differences of
// order j on a stencil proportional to z, Richardson-extrapolated to 0.
struct LimitProbe {
  cplx value{0.0, 0.0};
  double err = 0.0;
  bool converged = false;
};
LimitProbe limit_symbol(const ResolventRational& p, double mu, cplx d, int j,
                        double psi, const Vec3& x, const Vec3& xi);

// Regularized trace of a rational at fixed lambda (n = 1): the inner xi
// integral is absolutely convergent (every p_i >= 1 and the numerators
// decay), the outer x finite part runs on the symbolic x-expansion ladder
// of the rational to the given depth.  `prescale` multiplies the symbol
// before quadrature (and is divided out of the result) so interior
// tolerances act relatively when the trace itself is tiny; `xi_scale`
// stretches the inner variable to the resolvent's transition radius
// (|lambda|^{1/mu}) so the quadrature cost stays flat in lambda.
TraceResult tr_rational(const ResolventRational& C, cplx lambda,
                        int depth = 7, cplx prescale = 1.0,
                        double xi_scale = 1.0);

// Log-spaced lambda grid on rays inside the sector.  Empty `args` means the
// default rays arg lambda in {pi, pi +- (pi - theta)/2}.
struct LambdaGrid {
  double lo = 1e2;
  double hi = 1e6;
  int count = 24;  // points per ray
  std::vector<double> args;
};

// Least-squares fit of a lambda-grid of values against the resolvent-trace
// ladder  { lambda^{(n-j)/mu - k} }  union  { lambda^{-j-k} (log lambda) }.
// Basis columns stay strictly above the truncation floor (n - N)/mu - k, so
// the fit never claims terms the parametrix depth cannot support.
struct AsymptoticFit {
  std::vector<double> exponents;  // descending, deduplicated
  std::vector<bool> with_log;     // parallel: column carries log lambda
  std::vector<cplx> coefficients;
  double residual = 0.0;  // relative l2 over the grid
  bool valid = false;     // residual < 1e-3
  double tail_slope = 0.0;  // free log-log slope on the largest lambdas
};

// Asymptotics of TR (lambda - a(x,D))^{-k} for a in S^{mu,0}_cl with
// k*mu > n: certifies ellipticity, excises (tilde), builds the graded k-th
// parametrix power at depth N, traces it on the lambda grid, and fits the
// ladder.  Throws std::domain_error when not elliptic, std::invalid_argument
// when the grid cannot separate the requested exponents (the message names
// the decades needed).
AsymptoticFit tr_resolvent_asympt(const StructuredSymbol& a, double mu, int k,
                                  const Sector& sector, int N,
                                  const LambdaGrid& grid = {});

// Kernel-diagonal version at a fixed point: fits the same ladder to
// K(x, x, lambda) = (2 pi)^{-n} int C(x, xi, lambda) dxi.
AsymptoticFit kernel_resolvent_asympt(const StructuredSymbol& a, double mu,
                                      int k, const Sector& sector, int N,
                                      const Vec3& x,
                                      const LambdaGrid& grid = {});

}  // namespace sgt
