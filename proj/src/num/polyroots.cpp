#include "sgt/num/polyroots.hpp"

#include <cmath>
#include <stdexcept>

namespace sgt {

std::vector<cplx> poly_roots(std::vector<cplx> coeff) {
  while (coeff.size() > 1 && std::abs(coeff.back()) == 0.0) coeff.pop_back();
  const int deg = static_cast<int>(coeff.size()) - 1;
  if (deg < 1) return {};
  if (deg > 8) throw std::invalid_argument("poly_roots: degree too large");
  const cplx lead = coeff.back();
  for (auto& c : coeff) c /= lead;
  if (deg == 1) return {-coeff[0]};

  auto eval = [&](cplx z) {
    cplx p = coeff[deg];
    for (int k = deg - 1; k >= 0; --k) p = p * z + coeff[k];
    return p;
  };

  std::vector<cplx> z(deg);
  const cplx seed(0.4, 0.9);
  cplx p = seed;
  for (int i = 0; i < deg; ++i, p *= seed) z[i] = p;
  for (int it = 0; it < 500; ++it) {
    double move = 0.0;
    for (int i = 0; i < deg; ++i) {
      cplx denom(1.0);
      for (int j = 0; j < deg; ++j)
        if (j != i) denom *= z[i] - z[j];
      const cplx d = eval(z[i]) / denom;
      z[i] -= d;
      move = std::max(move, std::abs(d));
    }
    if (move < 1e-14) break;
  }
  return z;
}

}  // namespace sgt
