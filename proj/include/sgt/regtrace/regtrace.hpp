#pragma once

// The regularized trace TR a = fpfp a(x, xi) dx dxi/(2 pi)^n of a classical
// SG symbol, by three independently organized routes:
//
//   * iterated finite parts, xi first or x first (the definition);
//   * the expanded closed formula: one jointly convergent bulk integral plus
//     ring, ball, and sphere-sphere correction blocks with the 1/(n+mu-k)
//     weights (zero on the critical index);
//   * for symbols of xi-order below -n, the ordinary integral of the kernel
//     diagonal followed by an x-finite-part.
//
// The trace refuses orders in Z_{>= -n}: on those the functional is not
// determined by its defining properties, and we surface the obstruction
// instead of picking a value.  The Kontsevich-Vishik density (the
// regularized kernel diagonal) is implemented through the closed form of
// its distributional pairing and checked against the partial finite part.

#include <functional>
#include <string>
#include <vector>

#include "sgt/fpint/fpint.hpp"
#include "sgt/sym/structured.hpp"
#include "sgt/sym/symbol.hpp"

namespace sgt {

struct TraceResult {
  cplx value{0.0, 0.0};
  double err = 0.0;
  std::string route;
};

// Throws std::domain_error naming the offending order when the orders leave
// the trace domain: xi-order in Z_{>= -n}, or x-order a positive integer
// (exact tests; structured orders are exact).  Nonpositive x-orders are
// covered by the basic definition on the x-order-zero class, non-integer
// ones by the general-order extension.
void check_trace_orders(const StructuredSymbol& a);

// Fast route for structured symbols: the inner finite part of each separable
// term is a constant, so TR is the sum of products of 1-variable finite
// parts.  Exact in the separable structure; only quadrature error remains.
// Like the other raw routes this evaluates the iterated finite part for any
// orders (a well-defined number); the trace-domain refusal lives in TR.
TraceResult tr_structured(const StructuredSymbol& a, const FpOptions& opt = {});

// Honest iterated route: the outer finite part integrates a symbol whose
// every evaluation is itself an inner finite part.  Slow; used as the
// independent cross-check and for the Fubini property.
TraceResult tr_nested(const SgSymbolView& v, bool xi_first,
                      const FpOptions& opt = {});

// Expanded closed formula with truncation orders N (xi) and M (x), both at
// least the divergence thresholds.  Equal to TR and independent of N, M.
cplx tr_expanded(const StructuredSymbol& a, int N, int M,
                 const FpOptions& opt = {});

// TR with the built-in cross-checks: structured route checked against the
// expanded formula (and, when Re mu < -n, against the kernel-diagonal
// route).  Throws std::runtime_error on route disagreement beyond
// max(1e-6, 10 * combined err).
TraceResult TR(const StructuredSymbol& a, const FpOptions& opt = {});
TraceResult TR(const MatrixSymbol& a, const FpOptions& opt = {});

// Kontsevich-Vishik density d(x) = int {a - sum_{k<=N} a^{(mu-k)}} dxi/(2pi)^n
// as a classical symbol in x (returned in radial form: evaluator, x-degree
// ladder, and component evaluators).  N is the subtraction depth; raising it
// does not change the result.  Throws std::domain_error when mu in Z_{>=-n}.
RadialSymbol1V kv_density(const StructuredSymbol& a, int N,
                          const FpOptions& opt = {});

// Kernel diagonal x -> K_a(x, x) = int a(x, xi) dxi/(2pi)^n for Re mu < -n
// (ordinary absolutely convergent integral; throws otherwise).  Accepts any
// bounded x-dependence.
std::function<cplx(const Vec3&)> kernel_diagonal(const StructuredSymbol& a,
                                                 const FpOptions& opt = {});

// Trace axiom checks: TR vanishes on divergence-form symbols (the
// commutator surrogates) and agrees with the operator trace on trace-class
// fixtures.
struct AxiomCase {
  std::string name;
  cplx value{0.0, 0.0};
  cplx expected{0.0, 0.0};
  double tol = 0.0;
  bool pass = false;
};
std::vector<AxiomCase> trace_axiom_suite(
    const std::vector<std::pair<std::string, StructuredSymbol>>& divergences,
    const std::vector<std::tuple<std::string, StructuredSymbol, cplx>>&
        trace_class,
    const FpOptions& opt = {});

}  // namespace sgt
