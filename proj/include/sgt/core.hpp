#pragma once

// Shared scalar/vector typedefs for the whole library.  Points in R^n are
// carried as a fixed array of three doubles with the dimension passed
// alongside; only the first n entries are meaningful.  This keeps the hot
// evaluation paths allocation-free (n <= 3 throughout).

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace sgt {

using cplx = std::complex<double>;

constexpr int kMaxDim = 3;
using Vec3 = std::array<double, 3>;

inline Vec3 vec1(double x) { return {x, 0.0, 0.0}; }
inline Vec3 vec2(double x, double y) { return {x, y, 0.0}; }

inline double dot(const Vec3& a, const Vec3& b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec3& a, int n) { return dot(a, a, n); }
inline double norm(const Vec3& a, int n) { return std::sqrt(norm2(a, n)); }

inline Vec3 scale(const Vec3& a, double t, int n) {
  Vec3 r{0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) r[i] = t * a[i];
  return r;
}

// Japanese bracket <y> = sqrt(1 + |y|^2).
inline double bracket(const Vec3& y, int n) { return std::sqrt(1.0 + norm2(y, n)); }

// Complex power of a positive real base, single-valued.
inline cplx rpow(double base, cplx p) {
  if (p == cplx(0.0)) return cplx(1.0);
  return std::exp(p * std::log(base));
}

// |z| small enough to be treated as an exact zero of a coefficient.
inline bool near_zero(cplx z, double tol = 1e-13) { return std::abs(z) <= tol; }

// Surface measure of the unit sphere S^{n-1} in R^n, n = 1, 2, 3.
inline double sphere_area(int n) {
  switch (n) {
    case 1: return 2.0;                       // two points
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: return 0.0;
  }
}

}  // namespace sgt
