#include "sgt/num/extrapolate.hpp"

#include <algorithm>
#include <cmath>

namespace sgt {

LimitResult richardson(const std::vector<cplx>& s, double rho,
                       const std::vector<double>& exponents) {
  std::vector<cplx> cur = s;
  for (double e : exponents) {
    if (cur.size() < 2) break;
    const double w = std::pow(rho, e);
    std::vector<cplx> next(cur.size() - 1);
    for (size_t i = 0; i + 1 < cur.size(); ++i)
      next[i] = (w * cur[i + 1] - cur[i]) / (w - 1.0);
    cur.swap(next);
  }
  LimitResult out;
  out.value = cur.back();
  out.err = cur.size() >= 2 ? std::abs(cur.back() - cur[cur.size() - 2])
                            : std::abs(out.value);
  return out;
}

LimitResult aitken(const std::vector<cplx>& s, int sweeps) {
  std::vector<cplx> cur = s;
  for (int k = 0; k < sweeps && cur.size() >= 3; ++k) {
    std::vector<cplx> next(cur.size() - 2);
    for (size_t i = 0; i + 2 < cur.size(); ++i) {
      const cplx d1 = cur[i + 1] - cur[i];
      const cplx d2 = cur[i + 2] - 2.0 * cur[i + 1] + cur[i];
      next[i] = std::abs(d2) > 1e-300 ? cur[i] - d1 * d1 / d2 : cur[i + 2];
    }
    cur.swap(next);
  }
  LimitResult out;
  out.value = cur.back();
  out.err = cur.size() >= 2 ? std::abs(cur.back() - cur[cur.size() - 2])
                            : std::abs(out.value);
  return out;
}

SlopeFit fit_loglog(const std::vector<double>& t, const std::vector<double>& v) {
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (size_t i = 0; i < t.size() && i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !(t[i] > 0.0)) continue;
    A.push_back({std::log(t[i]), 1.0});
    b.push_back(std::log(v[i]));
  }
  SlopeFit fit;
  if (A.size() < 2) return fit;
  std::vector<double> c = solve_least_squares(A, b);
  if (c.size() != 2) return fit;
  fit.slope = c[0];
  fit.intercept = c[1];
  double res = 0.0;
  for (size_t i = 0; i < A.size(); ++i) {
    const double r = A[i][0] * c[0] + c[1] - b[i];
    res += r * r;
  }
  fit.residual = std::sqrt(res / A.size());
  fit.ok = true;
  return fit;
}

std::vector<double> solve_dense(std::vector<std::vector<double>> A,
                                std::vector<double> b) {
  const size_t n = A.size();
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    for (size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
    if (std::abs(A[p][c]) < 1e-300) return {};
    std::swap(A[c], A[p]);
    std::swap(b[c], b[p]);
    for (size_t r = c + 1; r < n; ++r) {
      const double f = A[r][c] / A[c][c];
      for (size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (size_t i = n; i-- > 0;) {
    double s = b[i];
    for (size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
    x[i] = s / A[i][i];
  }
  return x;
}

std::vector<double> solve_least_squares(std::vector<std::vector<double>> A,
                                        std::vector<double> b) {
  if (A.empty()) return {};
  const size_t m = A.size(), n = A[0].size();
  if (m < n) return {};
  // Householder QR; the exponent-fit matrices are far too ill-conditioned
  // for normal equations.
  for (size_t c = 0; c < n; ++c) {
    double nrm = 0.0;
    for (size_t r = c; r < m; ++r) nrm += A[r][c] * A[r][c];
    nrm = std::sqrt(nrm);
    if (nrm < 1e-300) return {};
    if (A[c][c] > 0.0) nrm = -nrm;
    for (size_t r = c; r < m; ++r) A[r][c] /= nrm;
    A[c][c] -= 1.0;
    for (size_t k = c + 1; k < n; ++k) {
      double s = 0.0;
      for (size_t r = c; r < m; ++r) s += A[r][c] * A[r][k];
      s /= A[c][c];
      for (size_t r = c; r < m; ++r) A[r][k] += s * A[r][c];
    }
    double s = 0.0;
    for (size_t r = c; r < m; ++r) s += A[r][c] * b[r];
    s /= A[c][c];
    for (size_t r = c; r < m; ++r) b[r] += s * A[r][c];
    A[c][c] = nrm;  // diagonal of R; the reflector tail below is discarded
  }
  std::vector<double> x(n);
  for (size_t i = n; i-- > 0;) {
    double s = b[i];
    for (size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
    if (std::abs(A[i][i]) < 1e-300) return {};
    x[i] = s / A[i][i];
  }
  return x;
}

}  // namespace sgt
