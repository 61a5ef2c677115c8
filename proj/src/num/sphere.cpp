#include "sgt/num/sphere.hpp"

#include <cmath>
#include <stdexcept>

namespace sgt {
namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_m.
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  x.assign(m, 0.0);
  w.assign(m, 0.0);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[m - 1 - i] = z;
    w[i] = w[m - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

SphereRule make_rule(int n) {
  SphereRule r;
  r.n = n;
  if (n == 1) {
    r.points = {vec1(1.0), vec1(-1.0)};
    r.weights = {1.0, 1.0};
  } else if (n == 2) {
    const int K = 256;
    for (int k = 0; k < K; ++k) {
      const double th = 2.0 * M_PI * k / K;
      r.points.push_back(vec2(std::cos(th), std::sin(th)));
      r.weights.push_back(2.0 * M_PI / K);
    }
  } else if (n == 3) {
    const int mz = 64, mp = 128;
    std::vector<double> cz, wz;
    gauss_legendre(mz, cz, wz);
    for (int i = 0; i < mz; ++i) {
      const double st = std::sqrt(std::max(0.0, 1.0 - cz[i] * cz[i]));
      for (int k = 0; k < mp; ++k) {
        const double ph = 2.0 * M_PI * k / mp;
        r.points.push_back({st * std::cos(ph), st * std::sin(ph), cz[i]});
        r.weights.push_back(wz[i] * 2.0 * M_PI / mp);
      }
    }
  } else {
    throw std::invalid_argument("sphere_rule: dimension must be 1, 2, or 3");
  }
  return r;
}

}  // namespace

const SphereRule& sphere_rule(int n) {
  static const SphereRule r1 = make_rule(1);
  static const SphereRule r2 = make_rule(2);
  static const SphereRule r3 = make_rule(3);
  switch (n) {
    case 1: return r1;
    case 2: return r2;
    case 3: return r3;
  }
  throw std::invalid_argument("sphere_rule: dimension must be 1, 2, or 3");
}

cplx sphere_integrate(int n, const std::function<cplx(const Vec3&)>& f) {
  const SphereRule& r = sphere_rule(n);
  cplx s(0.0);
  for (size_t i = 0; i < r.points.size(); ++i) s += r.weights[i] * f(r.points[i]);
  return s;
}

}  // namespace sgt
