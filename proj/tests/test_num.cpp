#include <cmath>

#include "doctest.h"
#include "sgt/num/extrapolate.hpp"
#include "sgt/num/jets.hpp"
#include "sgt/num/polyroots.hpp"
#include "sgt/num/profiles.hpp"
#include "sgt/num/quadrature.hpp"
#include "sgt/num/sphere.hpp"

using namespace sgt;

TEST_CASE("adaptive quadrature on finite segments") {
  auto q = integrate([](double x) { return cplx(x * x); }, 0.0, 1.0);
  CHECK(std::abs(q.value - 1.0 / 3.0) < 1e-12);

  // oscillatory complex integrand: int_0^pi e^{ix} dx = 2i
  auto qo = integrate([](double x) { return std::exp(cplx(0.0, x)); }, 0.0, M_PI);
  CHECK(std::abs(qo.value - cplx(0.0, 2.0)) < 1e-11);
}

TEST_CASE("half-line and full-line integrals") {
  auto qt = integrate_halfline([](double r) { return cplx(1.0 / (r * r)); }, 1.0);
  CHECK(std::abs(qt.value - 1.0) < 1e-10);

  auto qg = integrate_line([](double x) { return cplx(std::exp(-x * x)); });
  CHECK(std::abs(qg.value - std::sqrt(M_PI)) < 1e-10);

  // slowly decaying tail r^{-3/2}: int_1^inf = 2
  auto qs = integrate_halfline(
      [](double r) { return cplx(std::pow(r, -1.5)); }, 1.0, 1e-10);
  CHECK(std::abs(qs.value - 2.0) < 1e-8);
}

TEST_CASE("richardson and aitken acceleration") {
  // s_i = 1 + 2^{-i} + 3 * 4^{-i} on a ratio-2 grid
  std::vector<cplx> s;
  for (int i = 0; i < 8; ++i)
    s.push_back(1.0 + std::pow(2.0, -i) + 3.0 * std::pow(4.0, -i));
  auto r = richardson(s, 2.0, {1.0, 2.0});
  CHECK(std::abs(r.value - 1.0) < 1e-10);

  // a single unknown geometric mode is eliminated exactly by one sweep
  std::vector<cplx> u;
  for (int i = 0; i < 5; ++i) u.push_back(5.0 + 2.0 * std::pow(0.3, i));
  auto a1 = aitken(u, 1);
  CHECK(std::abs(a1.value - 5.0) < 1e-12);

  // two unknown modes: iterated sweeps must beat the raw tail by a wide margin
  std::vector<cplx> t;
  for (int i = 0; i < 12; ++i)
    t.push_back(5.0 + 2.0 * std::pow(0.3, i) - std::pow(0.7, i));
  auto a2 = aitken(t, 4);
  CHECK(std::abs(a2.value - 5.0) < 1e-6);
}

TEST_CASE("log-log slope fit") {
  std::vector<double> ts, vs;
  for (double t : {4.0, 8.0, 16.0, 32.0, 64.0}) {
    ts.push_back(t);
    vs.push_back(7.0 * std::pow(t, -2.5));
  }
  auto f = fit_loglog(ts, vs);
  REQUIRE(f.ok);
  CHECK(std::abs(f.slope + 2.5) < 1e-10);
  CHECK(std::abs(std::exp(f.intercept) - 7.0) < 1e-8);
}

TEST_CASE("small dense solves") {
  auto x = solve_dense({{2.0, 1.0}, {1.0, 3.0}}, {5.0, 10.0});
  REQUIRE(x.size() == 2);
  CHECK(std::abs(x[0] - 1.0) < 1e-12);
  CHECK(std::abs(x[1] - 3.0) < 1e-12);

  // overdetermined consistent system
  auto y = solve_least_squares({{1.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}},
                               {3.0, 5.0, 7.0});
  REQUIRE(y.size() == 2);
  CHECK(std::abs(y[0] - 1.0) < 1e-10);
  CHECK(std::abs(y[1] - 2.0) < 1e-10);
}

TEST_CASE("polynomial roots") {
  // (z-1)(z-2i)(z+3) = 0; build coefficients by multiplying out
  const cplx i(0.0, 1.0);
  std::vector<cplx> p = {1.0};
  for (cplx r : {cplx(1.0), 2.0 * i, cplx(-3.0)}) {
    std::vector<cplx> q(p.size() + 1, cplx(0.0));
    for (size_t k = 0; k < p.size(); ++k) {
      q[k] += p[k] * (-r);
      q[k + 1] += p[k];
    }
    p = q;
  }
  auto roots = poly_roots(p);
  REQUIRE(roots.size() == 3);
  for (cplx want : {cplx(1.0), 2.0 * i, cplx(-3.0)}) {
    double best = 1e9;
    for (cplx z : roots) best = std::min(best, std::abs(z - want));
    CHECK(best < 1e-10);
  }
}

TEST_CASE("jet arithmetic reproduces derivatives of the smooth step") {
  // compare jet derivatives against central differences at an interior point
  const double t = 0.37;
  const Jet j = smooth_step_jet(t, 4);
  const double h = 1e-4;
  auto fd1 = (smooth_step(t + h) - smooth_step(t - h)) / (2 * h);
  auto fd2 =
      (smooth_step(t + h) - 2 * smooth_step(t) + smooth_step(t - h)) / (h * h);
  CHECK(std::abs(j.deriv(0) - smooth_step(t)) < 1e-14);
  CHECK(std::abs(j.deriv(1) - fd1) < 1e-6);
  CHECK(std::abs(j.deriv(2) - fd2) < 1e-4);
}

TEST_CASE("excision profile: flat regions and smooth rise") {
  ExcisionProfile chi{0.5};
  CHECK(chi(0.2) == 0.0);
  CHECK(chi(0.5) == 0.0);
  CHECK(chi(1.0) == 1.0);
  CHECK(chi(7.0) == 1.0);
  CHECK(chi(0.75) > 0.0);
  CHECK(chi(0.75) < 1.0);
  // derivatives vanish identically outside the rise
  for (int d = 1; d <= 5; ++d) {
    CHECK(chi.deriv(d, 0.3) == 0.0);
    CHECK(chi.deriv(d, 1.2) == 0.0);
  }
  // first derivative against finite differences inside the rise
  const double r = 0.68, h = 1e-5;
  CHECK(std::abs(chi.deriv(1, r) - (chi(r + h) - chi(r - h)) / (2 * h)) < 1e-5);
}

TEST_CASE("smoothed norm: exact outside, smooth and positive inside") {
  CHECK(std::abs(smoothed_norm_from_sq(4.0) - 2.0) < 1e-15);
  CHECK(std::abs(smoothed_norm_from_sq(1.0) - 1.0) < 1e-15);
  CHECK(smoothed_norm_from_sq(0.0) == 3.0 / 8.0);
  for (double u = 0.0; u <= 2.0; u += 0.01)
    CHECK(smoothed_norm_from_sq(u) >= 3.0 / 8.0 - 1e-15);
}

TEST_CASE("sphere rules: areas and second moments") {
  for (int n = 1; n <= 3; ++n) {
    auto area = sphere_integrate(n, [](const Vec3&) { return cplx(1.0); });
    CHECK(std::abs(area - sphere_area(n)) < 1e-10);
    // int_S y_0^2 dsigma = |S^{n-1}| / n
    auto m2 = sphere_integrate(n, [](const Vec3& y) { return cplx(y[0] * y[0]); });
    CHECK(std::abs(m2 - sphere_area(n) / n) < 1e-10);
  }
}
