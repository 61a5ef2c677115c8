#include <cmath>

#include "doctest.h"
#include "sgt/sym/structured.hpp"

using namespace sgt;

namespace {

// a(x, xi) = <x>^px <xi>^pxi
StructuredSymbol bracket_symbol(int n, cplx px, cplx pxi) {
  StructuredSymbol s(n);
  SymbolTerm t;
  t.fx = bracket_factor(px);
  t.fxi = bracket_factor(pxi);
  s.terms.push_back(t);
  return s;
}

}  // namespace

TEST_CASE("evaluation of bracket symbols") {
  auto a = bracket_symbol(1, 2.0, 2.0);
  const Vec3 x = vec1(3.0), xi = vec1(4.0);
  CHECK(std::abs(a.eval(x, xi) - 10.0 * 17.0) < 1e-12);

  auto b = bracket_symbol(2, -1.0, 0.0);
  CHECK(std::abs(b.eval(vec2(3.0, 4.0), vec2(0.0, 0.0)) -
                 1.0 / std::sqrt(26.0)) < 1e-14);
}

TEST_CASE("arithmetic and normalization merge duplicate terms") {
  auto a = bracket_symbol(1, 0.0, 1.0);
  auto s = a + a - a.scaled(2.0);
  CHECK(s.is_zero());

  auto p = a * a;  // <xi>^2
  REQUIRE(p.terms.size() == 1);
  CHECK(std::abs(p.eval(vec1(0.0), vec1(2.0)) - 5.0) < 1e-14);
}

TEST_CASE("derivatives: bracket, norm power, shells") {
  // d/dxi <xi>^2 = 2 xi
  auto a = bracket_symbol(1, 0.0, 2.0);
  auto da = a.derivative_xi(0);
  CHECK(std::abs(da.eval(vec1(0.0), vec1(1.5)) - 3.0) < 1e-13);

  // d/dx <x>^{-2} = -2 x <x>^{-4}
  auto b = bracket_symbol(1, -2.0, 0.0);
  auto db = b.derivative_x(0);
  const double xv = 0.7;
  const double want = -2.0 * xv * std::pow(1.0 + xv * xv, -2.0);
  CHECK(std::abs(db.eval(vec1(xv), vec1(0.0)) - want) < 1e-13);

  // chain rule through a cutoff: d/dxi chi(|xi|) = chi'(|xi|) xi/|xi|
  auto c = StructuredSymbol::from_xi_factor(1, shell_factor(0));
  auto dc = c.derivative_xi(0);
  ExcisionProfile chi{0.5};
  const double r = 0.8;
  CHECK(std::abs(dc.eval(vec1(0.0), vec1(r)) - chi.deriv(1, r)) < 1e-12);
  CHECK(std::abs(dc.eval(vec1(0.0), vec1(-r)) + chi.deriv(1, r)) < 1e-12);
  // and the derivative is compactly supported
  CHECK(dc.eval(vec1(0.0), vec1(3.0)) == cplx(0.0));
}

TEST_CASE("smoothed-norm weight evaluates but refuses differentiation") {
  auto s = StructuredSymbol::from_xi_factor(1, smoothed_norm_factor(1.0));
  CHECK(std::abs(s.eval(vec1(0.0), vec1(2.0)) - 2.0) < 1e-14);
  CHECK(std::abs(s.eval(vec1(0.0), vec1(0.0)) - 0.375) < 1e-14);
  CHECK_THROWS_AS((void)s.derivative_xi(0), std::domain_error);
}

TEST_CASE("homogeneous components of the bracket") {
  // <xi> = |xi| + (1/2)|xi|^{-1} + ...
  auto a = bracket_symbol(1, 0.0, 1.0);
  auto c0 = a.xi_component(1.0);
  auto c2 = a.xi_component(-1.0);
  auto codd = a.xi_component(0.0);
  CHECK(codd.is_zero());
  const Vec3 xi = vec1(2.0);
  CHECK(std::abs(c0.eval(vec1(0.0), xi) - 2.0) < 1e-14);
  CHECK(std::abs(c2.eval(vec1(0.0), xi) - 0.5 * 0.5) < 1e-14);
}

TEST_CASE("mixed components commute and match the product formula") {
  // <x>^{-2} <xi>^{-3}: x-component at degree -4 is -|x|^{-4},
  // xi-component at degree -5 is -(3/2)|xi|^{-5}; the mixed component is
  // their product with coefficient (+3/2).
  auto a = bracket_symbol(1, -2.0, -3.0);
  auto m1 = a.xi_component(-5.0).x_component(-4.0);
  auto m2 = a.x_component(-4.0).xi_component(-5.0);
  const Vec3 x = vec1(1.7), xi = vec1(2.3);
  const cplx want = 1.5 * std::pow(1.7, -4.0) * std::pow(2.3, -5.0);
  CHECK(std::abs(m1.eval(x, xi) - want) < 1e-14);
  CHECK(std::abs(m2.eval(x, xi) - want) < 1e-14);
}

TEST_CASE("degree ladders including a fractional class") {
  StructuredSymbol s(1);
  {
    SymbolTerm t;
    t.fxi = bracket_factor(1.0);
    s.terms.push_back(t);
  }
  {
    SymbolTerm t;
    t.fxi = bracket_factor(0.5);
    s.terms.push_back(t);
  }
  auto degs = s.xi_degrees(4);
  REQUIRE(degs.size() == 4);
  CHECK(std::abs(degs[0] - cplx(1.0)) < 1e-12);
  CHECK(std::abs(degs[1] - cplx(0.5)) < 1e-12);
  CHECK(std::abs(degs[2] - cplx(0.0)) < 1e-12);
  CHECK(std::abs(degs[3] - cplx(-0.5)) < 1e-12);
}

TEST_CASE("ray expansion slots equal component values") {
  auto a = bracket_symbol(1, -2.0, -3.0);
  const Vec3 x = vec1(0.9), omega = vec1(1.0);
  auto e = a.xi_ray_expansion(x, omega, 8);
  // top degree -3, coefficient <x>^{-2}
  const double cx = 1.0 / (1.0 + 0.81);
  CHECK(std::abs(e.top_degree() - cplx(-3.0)) < 1e-12);
  CHECK(std::abs(e.slot_at(-3.0) - cx) < 1e-14);
  CHECK(std::abs(e.slot_at(-5.0) - (-1.5) * cx) < 1e-14);
  CHECK(std::abs(e.slot_at(-4.0)) < 1e-14);

  // compare summed expansion against a direct evaluation at T = 40
  const double T = 40.0;
  cplx direct = a.eval(x, vec1(T));
  CHECK(std::abs(e.eval_scalar(T) - direct) < 1e-12);
}

TEST_CASE("expansion reciprocal matches pointwise reciprocal") {
  // 1/(lambda - <xi>^2) via expansion arithmetic, lambda = -1 by absorbing
  // it into the degree-0 slot.
  auto a = bracket_symbol(1, 0.0, 2.0);
  const Vec3 x = vec1(0.0), omega = vec1(1.0);
  auto e = a.xi_ray_expansion(x, omega, 10);
  auto lam = ScalarExpansion::monomial(0.0, cplx(-1.0));
  auto res = (lam - e).recip(10);
  const double T = 30.0;
  const cplx want = 1.0 / (-1.0 - (1.0 + T * T));
  CHECK(std::abs(res.eval_scalar(T) - want) < 1e-12);
  CHECK(std::abs(res.top_degree() - cplx(-2.0)) < 1e-12);
  // leading slot of the reciprocal is -1 (the sign of -<xi>^2)
  CHECK(std::abs(res.slot_at(-2.0) + 1.0) < 1e-13);
}

TEST_CASE("expansion complex power matches pointwise power") {
  auto a = bracket_symbol(1, 0.0, 2.0);
  auto e = a.xi_ray_expansion(vec1(0.0), vec1(1.0), 12);
  const cplx z(0.3, 0.2);
  auto pw = e.cpow(-z / 2.0, 12);
  const double T = 25.0;
  const cplx want = std::pow(cplx(1.0 + T * T), -z / 2.0);
  CHECK(std::abs(pw.eval_scalar(T) - want) < 1e-10);
  // slot check: coefficient of |xi|^{-z-2} is binom(-z/2, 1)
  CHECK(std::abs(pw.slot_at(-z - 2.0) - cbinom(-z / 2.0, 1)) < 1e-12);
}

TEST_CASE("nested joint expansion separates both ladders") {
  auto a = bracket_symbol(1, -1.0, 2.0);
  auto j = a.joint_ray_expansion(vec1(1.0), vec1(1.0), 8);
  // outer x: top degree -1; its coefficient: full xi-expansion of <xi>^2
  auto inner = j.slot_at(-1.0);
  CHECK(std::abs(inner.slot_at(2.0) - 1.0) < 1e-13);
  CHECK(std::abs(inner.slot_at(0.0) - 1.0) < 1e-13);
  auto inner3 = j.slot_at(-3.0);  // <x>^{-1} slot at -3: binom(-1/2,1) = -1/2
  CHECK(std::abs(inner3.slot_at(2.0) + 0.5) < 1e-13);
}

TEST_CASE("parity classification") {
  // <xi>^2: components |xi|^2, 1 at degrees 2, 0: even-even
  CHECK(parity_check_xi(bracket_symbol(1, 0.0, 2.0)) == ParityClass::EvenEven);
  // xi^2 + xi: both components carry the sign (-1)^degree
  StructuredSymbol s(1);
  {
    SymbolTerm t;
    t.fxi = monomial_factor(MIdx{2, 0, 0});
    s.terms.push_back(t);
    SymbolTerm u;
    u.fxi = monomial_factor(MIdx{1, 0, 0});
    s.terms.push_back(u);
  }
  CHECK(parity_check_xi(s) == ParityClass::EvenEven);
  // xi + |xi| mixes parities inside one degree
  StructuredSymbol m(1);
  {
    SymbolTerm t;
    t.fxi = monomial_factor(MIdx{1, 0, 0});
    m.terms.push_back(t);
    SymbolTerm u;
    u.fxi = norm_power_factor(1.0);
    m.terms.push_back(u);
  }
  CHECK(parity_check_xi(m) == ParityClass::None);
  // x <xi>: the x-component x has matching parity at degree 1, while the
  // components of <xi> are the even functions |xi|^{1-2j} at odd degrees.
  StructuredSymbol eo(1);
  {
    SymbolTerm t;
    t.fx = monomial_factor(MIdx{1, 0, 0});
    t.fxi = bracket_factor(1.0);
    eo.terms.push_back(t);
  }
  CHECK(parity_check_x(eo) == ParityClass::EvenEven);
  CHECK(parity_check_xi(eo) == ParityClass::EvenOdd);
}

TEST_CASE("matrix symbols multiply and trace") {
  MatrixSymbol A(2, 1);
  A.at(0, 0) = bracket_symbol(1, 0.0, 2.0);
  A.at(0, 1) = StructuredSymbol::constant(1, 1.0);
  A.at(1, 0) = StructuredSymbol::constant(1, 2.0);
  A.at(1, 1) = bracket_symbol(1, 0.0, 2.0);
  auto B = A * A;
  // (A^2)_{00} = <xi>^4 + 2
  const double T = 3.0;
  const double br2 = 1.0 + T * T;
  CHECK(std::abs(B.at(0, 0).eval(vec1(0.0), vec1(T)) - (br2 * br2 + 2.0)) <
        1e-11);
  auto tr = B.trace();
  CHECK(std::abs(tr.eval(vec1(0.0), vec1(T)) - 2.0 * (br2 * br2 + 2.0)) <
        1e-11);
}
