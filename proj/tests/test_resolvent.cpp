#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "sgt/resolvent/resolvent.hpp"

using namespace sgt;

namespace {

// <x>^px <xi>^pxi
StructuredSymbol sep(int n, cplx px, cplx pxi) {
  StructuredSymbol s(n);
  SymbolTerm t;
  t.fx = bracket_factor(px);
  t.fxi = bracket_factor(pxi);
  s.terms.push_back(t);
  return s;
}

StructuredSymbol xi_mono(int n, int k, cplx c = 1.0) {
  return StructuredSymbol::from_xi_factor(n, monomial_factor(MIdx{k, 0, 0}), c);
}

Sector sector(double theta, double eps = 0.0) {
  Sector s;
  s.theta = theta;
  s.eps = eps;
  return s;
}

const double kSector34 = 3.0 * M_PI / 4.0;

// the running fixture <xi>^2 (1 + <x>^{-1}) and its hand derivatives
double brk(double t) { return std::sqrt(1.0 + t * t); }

struct HandDerivs {
  double A, Ax, Axx, Axi, Axixi, Axix;
};

HandDerivs hand(double x, double xi) {
  const double bx = brk(x), bxi = brk(xi);
  const double c = 1.0 + 1.0 / bx;          // x-profile
  const double cp = -x / (bx * bx * bx);    // c'
  const double cpp = (-1.0 + 2.0 * x * x) / std::pow(bx, 5.0);  // c''
  HandDerivs d;
  d.A = bxi * bxi * c;
  d.Ax = bxi * bxi * cp;
  d.Axx = bxi * bxi * cpp;
  d.Axi = 2.0 * xi * c;
  d.Axixi = 2.0 * c;
  d.Axix = 2.0 * xi * cp;
  return d;
}

cplx rr(const HandDerivs& d, cplx lambda, int p) {
  cplx inv = 1.0 / (lambda - d.A), out = 1.0;
  for (int i = 0; i < p; ++i) out *= inv;
  return out;
}

}  // namespace

TEST_CASE("rational calculus evaluates and differentiates exactly") {
  const StructuredSymbol a = sep(1, 0, 2) + sep(1, -1, 2);
  const ResolventRational b0 = ResolventRational::inverse(a);

  const Vec3 x{0.7, 0, 0}, xi{1.3, 0, 0};
  const cplx lam(-40.0, 13.0);
  const cplx direct = 1.0 / (lam - a.eval(x, xi));
  CHECK(std::abs(b0.eval(x, xi, lam) - direct) <= 1e-14 * std::abs(direct));

  // products add powers
  const ResolventRational sq = b0 * b0;
  REQUIRE(sq.term_count() == 1);
  CHECK(sq.terms[0].p == 2);
  CHECK(std::abs(sq.eval(x, xi, lam) - direct * direct) <=
        1e-14 * std::abs(direct * direct));

  // lambda (lambda - a)^{-1} = 1 + a (lambda - a)^{-1}
  const ResolventRational lb = b0.mul_lambda();
  CHECK(std::abs(lb.eval(x, xi, lam) - lam * direct) <=
        1e-13 * std::abs(lam * direct));
  ResolventRational plain(a);
  plain.terms.push_back({StructuredSymbol::constant(1, 1.0), 0});
  CHECK_THROWS_AS((void)plain.mul_lambda(), std::invalid_argument);

  // symbolic lambda-derivative against central differences at random points
  const ResolventRational b2 = parametrix_terms(a, 3)[2];
  const ResolventRational db2 = b2.derivative_lambda();
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> box(-3.0, 3.0), mag(5.0, 500.0),
      arg(0.6 * M_PI, 1.4 * M_PI);
  for (int i = 0; i < 50; ++i) {
    const Vec3 px{box(rng), 0, 0}, pxi{box(rng), 0, 0};
    const cplx l = std::polar(mag(rng), arg(rng));
    const double h = 3e-5 * std::abs(l);
    const cplx fd =
        (b2.eval(px, pxi, l + h) - b2.eval(px, pxi, l - h)) / (2.0 * h);
    const cplx ex = db2.eval(px, pxi, l);
    CHECK(std::abs(fd - ex) <= 1e-7 * std::abs(ex));
  }

  // x/xi derivatives against central differences
  const ResolventRational dxb2 = b2.derivative_x(0);
  const ResolventRational dxib2 = b2.derivative_xi(0);
  for (double t : {-1.1, 0.4, 2.0}) {
    const Vec3 p{t, 0, 0};
    const double h = 1e-5;
    const cplx fdx = (b2.eval(Vec3{t + h, 0, 0}, xi, lam) -
                      b2.eval(Vec3{t - h, 0, 0}, xi, lam)) /
                     (2.0 * h);
    const cplx fdxi = (b2.eval(x, Vec3{t + h, 0, 0}, lam) -
                       b2.eval(x, Vec3{t - h, 0, 0}, lam)) /
                      (2.0 * h);
    CHECK(std::abs(fdx - dxb2.eval(p, xi, lam)) <=
          1e-6 * (1.0 + std::abs(fdx)));
    CHECK(std::abs(fdxi - dxib2.eval(x, p, lam)) <=
          1e-6 * (1.0 + std::abs(fdxi)));
  }
}

TEST_CASE("parametrix recursion matches the hand-computed terms") {
  const StructuredSymbol a = sep(1, 0, 2) + sep(1, -1, 2);
  const auto b = parametrix_terms(a, 3);
  REQUIRE(b.size() == 3);

  REQUIRE(b[0].term_count() == 1);
  CHECK(b[0].terms[0].p == 1);

  // b_{-1} = (d_xi a)(D_x a)(lambda - a)^{-3}: a single cubic term
  REQUIRE(b[1].term_count() == 1);
  CHECK(b[1].terms[0].p == 3);

  // b_{-2} collapses to powers 3, 4, 5 (at most 7 terms unmerged)
  CHECK(b[2].term_count() <= 7);
  std::map<int, bool> pows;
  for (const RationalTerm& t : b[2].terms) {
    CHECK(t.p >= 2);
    pows[t.p] = true;
  }
  CHECK(pows.count(3) == 1);
  CHECK(pows.count(4) == 1);
  CHECK(pows.count(5) == 1);
  for (const RationalTerm& t : b[1].terms) CHECK(t.p >= 2);

  // full evaluations against the recursion unrolled by hand
  const cplx lams[2] = {cplx(-40.0, 13.0), cplx(5.0, 37.0)};
  const double pts[2][2] = {{0.7, 1.3}, {-1.1, 0.4}};
  for (const auto& pt : pts)
    for (const cplx& lam : lams) {
      const Vec3 x{pt[0], 0, 0}, xi{pt[1], 0, 0};
      const HandDerivs d = hand(pt[0], pt[1]);
      const cplx i1(0.0, 1.0);

      const cplx b1h = -i1 * d.Axi * d.Ax * rr(d, lam, 3);
      CHECK(std::abs(b[1].eval(x, xi, lam) - b1h) <= 1e-12 * std::abs(b1h));

      const cplx b2h = -0.5 * d.Axixi * d.Axx * rr(d, lam, 3) -
                       (d.Axi * d.Axi * d.Axx + d.Axixi * d.Ax * d.Ax +
                        d.Axi * d.Axix * d.Ax) *
                           rr(d, lam, 4) -
                       3.0 * d.Axi * d.Axi * d.Ax * d.Ax * rr(d, lam, 5);
      CHECK(std::abs(b[2].eval(x, xi, lam) - b2h) <= 1e-12 * std::abs(b2h));
    }

  // x-independent symbols terminate at b_0
  const auto bf = parametrix_terms(sep(1, 0, 2), 4);
  for (size_t k = 1; k < bf.size(); ++k) CHECK(bf[k].is_zero());
}

TEST_CASE("graded composition squares the leading resolvent exactly") {
  const StructuredSymbol a = sep(1, 0, 2) + sep(1, -1, 2);
  const auto B1 = parametrix_terms(a, 1);
  const auto P = compose_graded(B1, B1);
  REQUIRE(P.size() == 1);
  REQUIRE(P[0].term_count() == 1);
  CHECK(P[0].terms[0].p == 2);

  const Vec3 x{0.7, 0, 0}, xi{1.3, 0, 0};
  const cplx lam(-40.0, 13.0);
  const cplx r2 = 1.0 / ((lam - a.eval(x, xi)) * (lam - a.eval(x, xi)));
  CHECK(std::abs(P[0].eval(x, xi, lam) - r2) <= 1e-13 * std::abs(r2));

  // graded composition is associative
  const auto B = parametrix_terms(a, 3);
  const auto L = compose_graded(compose_graded(B, B), B);
  const auto R = compose_graded(B, compose_graded(B, B));
  REQUIRE(L.size() == R.size());
  for (size_t g = 0; g < L.size(); ++g) {
    const cplx vl = L[g].eval(x, xi, lam);
    const cplx vr = R[g].eval(x, xi, lam);
    CHECK(std::abs(vl - vr) <= 1e-10 * (1.0 + std::abs(vl)));
  }
}

TEST_CASE("truncated remainder telescopes to the top grades") {
  const StructuredSymbol a = sep(1, 0, 2) + sep(1, -1, 2);

  // x-independent: the identity is exact
  CHECK(parametrix_remainder_symbol(sep(1, 0, 2), 3).is_zero());

  // the constant and first-power parts cancel symbolically
  const ResolventRational r3 = parametrix_remainder_symbol(a, 3);
  CHECK(!r3.is_zero());
  for (const RationalTerm& t : r3.terms) CHECK(t.p >= 2);

  // N = 1 unrolled by hand: r_1 = -(d_xi b_0)(D_x a) - (1/2)(d^2_xi b_0)(D^2_x a)
  const ResolventRational r1 = parametrix_remainder_symbol(a, 1);
  const cplx lams[2] = {cplx(-40.0, 13.0), cplx(5.0, 37.0)};
  const double pts[2][2] = {{0.7, 1.3}, {-1.1, 0.4}};
  for (const auto& pt : pts)
    for (const cplx& lam : lams) {
      const Vec3 x{pt[0], 0, 0}, xi{pt[1], 0, 0};
      const HandDerivs d = hand(pt[0], pt[1]);
      const cplx i1(0.0, 1.0);
      const cplx r1h =
          i1 * d.Axi * d.Ax * rr(d, lam, 2) +
          0.5 * d.Axx * (d.Axixi * rr(d, lam, 2) +
                         2.0 * d.Axi * d.Axi * rr(d, lam, 3));
      CHECK(std::abs(r1.eval(x, xi, lam) - r1h) <= 1e-12 * std::abs(r1h));
    }
}

TEST_CASE("remainder ray decay matches the truncation depth") {
  const StructuredSymbol a = sep(1, 0, 2) + sep(1, -1, 2);
  std::vector<cplx> lambdas;
  for (double m : {1e4, 3e4, 1e5, 3e5, 1e6})
    lambdas.push_back(std::polar(m, M_PI));

  double prev_xi = 0.0;
  for (int N = 1; N <= 3; ++N) {
    const RemainderDecay rd = parametrix_remainder(a, N, lambdas);
    INFO("N = " << N << " xi " << rd.xi.slope << " x " << rd.x.slope
                << " lam " << rd.lam.slope);
    CHECK(rd.xi_ok);
    CHECK(rd.x_ok);
    CHECK(rd.lam_ok);
    // xi-decay tracks the truncation depth; x-decay is at least as steep
    // (this symbol's zeroth x-component is constant, so every x-derivative
    // gains an extra order); the lambda slope stays at the resolvent's -1
    CHECK(rd.xi.slope <= -double(N) + 0.1);
    CHECK(rd.xi.slope >= -double(N) - 0.35);
    CHECK(rd.x.slope <= -double(N) + 0.1);
    CHECK(rd.lam.slope <= -0.9);
    if (N > 1) CHECK(rd.xi.slope <= prev_xi - 0.9);
    prev_xi = rd.xi.slope;
  }
}

TEST_CASE("sigma parametrix inverts homogeneous data") {
  const Sector sec = sector(kSector34);
  const StructuredSymbol a2 = xi_mono(1, 2);  // xi^2

  // x-independent single-component data: inverse is exact, corrections die
  const auto p = sigma_parametrix_terms({a2}, sec, 3);
  REQUIRE(p.size() == 3);
  CHECK(p[1].is_zero());
  CHECK(p[2].is_zero());

  // (sigma^mu - a)(sigma^mu - a)^{-1} = 1 in the rational calculus
  const ResolventRational unit = p[0].mul_lambda() - p[0].mul_symbol(a2);
  REQUIRE(unit.term_count() == 1);
  CHECK(unit.terms[0].p == 0);
  const Vec3 x{0.7, 0, 0}, xi{1.3, 0, 0};
  CHECK(std::abs(unit.eval(x, xi, cplx(-9.0, 4.0)) - 1.0) <= 1e-14);

  // data straying into the sector is rejected
  CHECK_THROWS_AS((void)sigma_parametrix_terms({xi_mono(1, 2, -1.0)}, sec, 2),
                  std::domain_error);

  // x-dependent data: corrections appear and stay jointly homogeneous,
  // p^{(-mu-i)}(x, t xi, t^mu lambda) = t^{-mu-i} p^{(-mu-i)}(x, xi, lambda)
  StructuredSymbol ax = a2;
  {
    SymbolTerm t;
    t.coeff = 0.3;
    t.fx = bracket_factor(-1.0);
    t.fxi = monomial_factor(MIdx{2, 0, 0});
    ax.terms.push_back(t);
    ax.normalize();
  }
  const auto q = sigma_parametrix_terms({ax}, sec, 3);
  CHECK(!q[1].is_zero());
  CHECK(!q[2].is_zero());
  const cplx lam(-30.0, 11.0);
  for (int i = 0; i < 3; ++i)
    for (double t : {2.0, 4.0}) {
      const cplx ref = q[i].eval(x, xi, lam);
      const cplx scaled = q[i].eval(x, Vec3{t * 1.3, 0, 0},
                                    std::pow(t, 2.0) * lam);
      const cplx want = std::pow(t, -2.0 - double(i)) * ref;
      CHECK(std::abs(scaled - want) <= 1e-10 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("limit symbols recover the homogeneous expansion") {
  const Sector sec = sector(kSector34);
  const StructuredSymbol a2 = xi_mono(1, 2);
  const Vec3 x{0.7, 0, 0};
  const Vec3 xi{1.2, 0, 0};
  const double mu = 2.0;
  const double psi = M_PI / 2.0;

  const auto p = sigma_parametrix_terms({a2}, sec, 2);

  // z^{-mu} p^{(-mu)}(1/z) = (1 - z^mu a)^{-1} is the geometric series
  // sum_k z^{mu k} a^k: order-j z-derivatives vanish off the mu-ladder and
  // pick up j! a^{j/mu} on it.
  const double aval = 1.2 * 1.2;
  const LimitProbe l0 = limit_symbol(p[0], mu, cplx(-2.0), 0, psi, x, xi);
  CHECK(l0.converged);
  CHECK(std::abs(l0.value - 1.0) <= 1e-6);

  const LimitProbe l1 = limit_symbol(p[0], mu, cplx(-2.0), 1, psi, x, xi);
  CHECK(std::abs(l1.value) <= 1e-6);

  const LimitProbe l2 = limit_symbol(p[0], mu, cplx(-2.0), 2, psi, x, xi);
  CHECK(l2.converged);
  CHECK(std::abs(l2.value / 2.0 - aval) <= 1e-6 * aval);

  const LimitProbe l3 = limit_symbol(p[0], mu, cplx(-2.0), 3, psi, x, xi);
  CHECK(std::abs(l3.value) <= 1e-5);

  const LimitProbe l4 = limit_symbol(p[0], mu, cplx(-2.0), 4, psi, x, xi);
  CHECK(std::abs(l4.value / 24.0 - aval * aval) <= 1e-4 * aval * aval);

  // first correction of x-dependent data: p^{(-mu-1)} = -i a_xi a_x
  // (sigma^mu - a)^{-3}, so z^{-3} p^{(-mu-1)}(1/z) = -i a_xi a_x z^3
  // (1 - z^2 a)^{-3}: the limit ladder starts at j = 3
  StructuredSymbol ax = a2;
  {
    SymbolTerm t;
    t.coeff = 0.3;
    t.fx = bracket_factor(-1.0);
    t.fxi = monomial_factor(MIdx{2, 0, 0});
    ax.terms.push_back(t);
    ax.normalize();
  }
  const auto q = sigma_parametrix_terms({ax}, sec, 2);
  for (int j = 0; j <= 2; ++j) {
    const LimitProbe lj = limit_symbol(q[1], mu, cplx(-3.0), j, psi, x, xi);
    CHECK(std::abs(lj.value) <= 1e-5);
  }
  const double bx = std::sqrt(1.0 + 0.7 * 0.7);
  const double cx = 1.0 + 0.3 / bx;
  const double cpx = -0.3 * 0.7 / (bx * bx * bx);
  const cplx corr3 = cplx(0.0, -1.0) * (2.0 * 1.2 * cx) * (1.2 * 1.2 * cpx);
  const LimitProbe lh = limit_symbol(q[1], mu, cplx(-3.0), 3, psi, x, xi);
  CHECK(lh.converged);
  CHECK(std::abs(lh.value / 6.0 - corr3) <= 1e-5 * std::abs(corr3));
}

TEST_CASE("rational traces factorize and stabilize in depth") {
  // separable check: <x>^{-2} against the x-independent resolvent of
  // <xi>^2 factorizes into pi times -1/(2 sqrt(1+M)) at lambda = -M
  ResolventRational C(sep(1, 0, 2));
  C.terms.push_back({sep(1, -2, 0), 1});
  const double M = 300.0;
  const TraceResult t1 = tr_rational(C, cplx(-M, 0.0), 7, 20.0, 4.0);
  const double expect = -M_PI / (2.0 * std::sqrt(1.0 + M));
  CHECK(std::abs(t1.value - expect) <= 1e-7 * std::abs(expect));

  // x-independent symbols trace to zero: the outer finite part of a
  // constant vanishes identically
  const ResolventRational flat =
      ResolventRational::inverse(sep(1, 0, 4));
  const TraceResult t0 = tr_rational(flat, std::polar(1e3, M_PI), 7, 1e3, 5.6);
  CHECK(std::abs(t0.value) <= 1e-11);

  // expansion-depth invariance on the leading parametrix square
  const StructuredSymbol a = sep(1, 0, 2) + sep(1, -1, 2);
  const ResolventRational sq =
      ResolventRational::inverse(a) * ResolventRational::inverse(a);
  const cplx lam = std::polar(2e4, M_PI);
  const double pre = std::pow(2e4, 1.5);
  const TraceResult d5 = tr_rational(sq, lam, 5, pre, std::sqrt(2e4));
  const TraceResult d7 = tr_rational(sq, lam, 7, pre, std::sqrt(2e4));
  CHECK(std::abs(d5.value - d7.value) <= 1e-8 * std::abs(d7.value));

  // plain symbol parts have no absolutely convergent xi-integral
  ResolventRational bad(a);
  bad.terms.push_back({StructuredSymbol::constant(1, 1.0), 0});
  CHECK_THROWS_AS((void)tr_rational(bad, lam), std::invalid_argument);
}

TEST_CASE("resolvent trace ladder fits the expansion exponents") {
  const StructuredSymbol a = sep(1, 0, 2) + sep(1, -1, 2);
  const Sector sec = sector(kSector34);

  LambdaGrid grid;
  grid.lo = 1e3;
  grid.hi = 1e6;
  grid.count = 8;
  grid.args = {M_PI};

  const AsymptoticFit fit = tr_resolvent_asympt(a, 2.0, 2, sec, 4, grid);
  INFO("residual " << fit.residual << " tail " << fit.tail_slope);
  CHECK(fit.valid);
  REQUIRE(!fit.exponents.empty());
  CHECK(fit.exponents[0] == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(std::abs(fit.tail_slope + 1.5) <= 0.03);

  // log-ladder columns stay at noise level for this symbol: the odd grades
  // whose x-expansion could feed them integrate to zero by parity
  const double lead = std::abs(fit.coefficients[0]);
  CHECK(lead > 0.0);
  for (size_t c = 0; c < fit.exponents.size(); ++c)
    if (fit.with_log[c])
      CHECK(std::abs(fit.coefficients[c]) <= 1e-3 * lead);

  // leading coefficient against the direct trace of the resolvent square
  // at the largest lambda
  const cplx lam_top = std::polar(grid.hi, M_PI);
  const ResolventRational sq =
      ResolventRational::inverse(a) * ResolventRational::inverse(a);
  const TraceResult direct =
      tr_rational(sq, lam_top, 7, std::pow(grid.hi, 1.5), std::sqrt(grid.hi));
  const cplx lam_pow =
      std::exp(-1.5 * cplx(std::log(grid.hi), M_PI));  // lambda^{-3/2}
  const cplx c0_direct = direct.value / lam_pow;
  CHECK(std::abs(c0_direct - fit.coefficients[0]) <=
        0.02 * std::abs(fit.coefficients[0]));

  // kernel-diagonal version at a fixed point obeys the same leading law
  LambdaGrid kgrid = grid;
  kgrid.count = 10;
  const AsymptoticFit kfit =
      kernel_resolvent_asympt(a, 2.0, 2, sec, 4, Vec3{0.7, 0, 0}, kgrid);
  INFO("kernel residual " << kfit.residual << " tail " << kfit.tail_slope);
  CHECK(kfit.valid);
  CHECK(std::abs(kfit.tail_slope + 1.5) <= 0.03);
  CHECK(std::abs(kfit.coefficients[0]) > 0.0);
}

TEST_CASE("asymptotic fits refuse unusable inputs") {
  const StructuredSymbol a = sep(1, 0, 2) + sep(1, -1, 2);
  const Sector sec = sector(kSector34);

  // not enough decades to separate the half-integer ladder
  LambdaGrid narrow;
  narrow.lo = 1e3;
  narrow.hi = 3e3;
  narrow.count = 8;
  narrow.args = {M_PI};
  CHECK_THROWS_AS((void)tr_resolvent_asympt(a, 2.0, 2, sec, 4, narrow),
                  std::invalid_argument);

  // trace-class threshold k mu > n
  CHECK_THROWS_AS((void)tr_resolvent_asympt(sep(1, 0, 0.5), 0.5, 1, sec, 3),
                  std::invalid_argument);

  // spectral failure: values cross the sector
  const StructuredSymbol bad = sep(1, 0, 2) + StructuredSymbol::constant(1, -2.0);
  CHECK_THROWS_AS((void)tr_resolvent_asympt(bad, 2.0, 2, sec, 3),
                  std::domain_error);
}
