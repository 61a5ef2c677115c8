#include <cmath>

#include "doctest.h"
#include "sgt/sym/symbol.hpp"
#include "sgt/sym/symbol_io.hpp"

using namespace sgt;

TEST_CASE("numeric extraction peels a mixed half-integer ladder") {
  // F(t) = <t> + <t>^{1/2}: degrees 1, 1/2, -1, -3/2 with values
  // 1, 1, 1/2, 1/4 (binomial coefficients of the bracket expansions).
  auto F = [](double t) {
    const double b = std::sqrt(1.0 + t * t);
    return cplx(b + std::sqrt(b));
  };
  auto lad = extract_components(F, 4);
  // four detected entries plus guard entries continuing the ladder
  REQUIRE(lad.degrees.size() >= 4);
  CHECK(std::abs(lad.degrees[0] - cplx(1.0)) < 1e-9);
  CHECK(std::abs(lad.degrees[1] - cplx(0.5)) < 1e-9);
  CHECK(std::abs(lad.degrees[2] - cplx(-1.0)) < 1e-9);
  CHECK(std::abs(lad.degrees[3] - cplx(-1.5)) < 1e-9);
  CHECK(std::abs(lad.values[0] - 1.0) < 1e-9);
  CHECK(std::abs(lad.values[1] - 1.0) < 1e-9);
  CHECK(std::abs(lad.values[2] - 0.5) < 1e-8);
  CHECK(std::abs(lad.values[3] - 0.25) < 5e-8);
}

TEST_CASE("expansion-backed radial view matches the structured one") {
  StructuredSymbol s(1);
  SymbolTerm t;
  t.fxi = bracket_factor(-3.0);
  s.terms.push_back(t);
  const Vec3 x{0.4, 0, 0};
  auto direct = radial_from_structured_xi(s, x);
  auto viaexp = radial_from_expansion(
      1, [s, x](const Vec3& xi) { return s.eval(x, xi); },
      [s, x](const Vec3& om) { return s.xi_ray_expansion(x, om, 12); });
  REQUIRE(viaexp.degrees.size() >= 3);
  CHECK(std::abs(viaexp.degrees[0] - direct.degrees[0]) < 1e-12);
  const Vec3 om{1, 0, 0};
  for (int k = 0; k < 3; ++k)
    CHECK(std::abs(viaexp.comp(k, om) - direct.comp(k, om)) < 1e-12);
}

TEST_CASE("sg view exposes both restriction families") {
  StructuredSymbol s(1);
  SymbolTerm t;
  t.fx = bracket_factor(-2.0);
  t.fxi = bracket_factor(-3.0);
  s.terms.push_back(t);
  auto v = sg_view(s);
  REQUIRE(v.mu.has_value());
  REQUIRE(v.m.has_value());
  CHECK(std::abs(*v.mu - cplx(-3.0)) < 1e-12);
  CHECK(std::abs(*v.m - cplx(-2.0)) < 1e-12);

  // x-component at degree -2 is |x|^{-2} <xi>^{-3}; frozen at omega it is
  // the xi-symbol <xi>^{-3}
  auto r = v.x_comp_restrict(0, Vec3{1, 0, 0});
  CHECK(std::abs(r.eval(Vec3{2, 0, 0}) - std::pow(5.0, -1.5)) < 1e-13);
  CHECK(std::abs(r.comp(0, Vec3{1, 0, 0}) - 1.0) < 1e-13);
}

TEST_CASE("json round trip and strict parsing") {
  nlohmann::json j = {
      {"n", 1},
      {"terms",
       {{{"coeff_re", 2.0},
         {"x_monomials", {{1, 1.0, 0.0}}},
         {"x_weight_power", -4.0},
         {"xi_weight_power", 2.0}}}}};
  auto s = symbol_from_json(j);
  const double xv = 0.3, xiv = 1.2;
  const double want = 2.0 * xv * std::pow(1.0 + xv * xv, -2.0) * (1.0 + xiv * xiv);
  CHECK(std::abs(s.eval(vec1(xv), vec1(xiv)) - want) < 1e-13);

  auto round = symbol_from_json(symbol_to_json(s));
  CHECK(std::abs(round.eval(vec1(xv), vec1(xiv)) - want) < 1e-13);

  // unknown keys must be rejected, at top level and inside terms
  nlohmann::json bad1 = j;
  bad1["order"] = 2;
  CHECK_THROWS_AS((void)symbol_from_json(bad1), std::invalid_argument);
  nlohmann::json bad2 = j;
  bad2["terms"][0]["weight"] = "bracket";
  CHECK_THROWS_AS((void)symbol_from_json(bad2), std::invalid_argument);

  // malformed monomial rows
  nlohmann::json bad3 = j;
  bad3["terms"][0]["x_monomials"] = {{1.5, 1.0, 0.0}};
  CHECK_THROWS_AS((void)symbol_from_json(bad3), std::invalid_argument);

  // smoothed weight kind routes the power to the smoothed norm
  nlohmann::json sm = {
      {"n", 1},
      {"terms",
       {{{"xi_weight_power", 1.0}, {"weight_kind", "smoothed"}}}}};
  auto ssym = symbol_from_json(sm);
  CHECK(std::abs(ssym.eval(vec1(0.0), vec1(0.0)) - 0.375) < 1e-14);
  CHECK(std::abs(ssym.eval(vec1(0.0), vec1(3.0)) - 3.0) < 1e-13);
}
