#include "sgt/sym/symbol.hpp"

#include <cmath>

#include "sgt/num/extrapolate.hpp"

namespace sgt {
namespace {

// Cache of component symbols per degree, shared by the returned closures.
struct ComponentCache {
  const StructuredSymbol a;
  const bool xi_side;
  std::map<int, StructuredSymbol> comps;

  ComponentCache(StructuredSymbol s, bool xi) : a(std::move(s)), xi_side(xi) {}

  const StructuredSymbol& get(const std::vector<cplx>& degrees, int k) {
    auto it = comps.find(k);
    if (it == comps.end()) {
      StructuredSymbol c =
          xi_side ? a.xi_component(degrees[k]) : a.x_component(degrees[k]);
      it = comps.emplace(k, std::move(c)).first;
    }
    return it->second;
  }
};

struct Vec3Less {
  bool operator()(const Vec3& a, const Vec3& b) const {
    for (int i = 0; i < 3; ++i) {
      if (a[i] < b[i]) return true;
      if (a[i] > b[i]) return false;
    }
    return false;
  }
};

using RayCache = std::map<Vec3, ScalarExpansion, Vec3Less>;

// Expansion length for stable tail evaluation: slots beyond the subtracted
// head carry the remainder; at |y| >= 1 the truncation error is ~2^-len
// relative once |y| >= 2 and the head integration region covers the rest.
constexpr int kTailLen = 48;

// Ray expansions drop excision shells (identically 1 at large radius), so
// they only describe the symbol past the widest shell's transition zone.
double tail_start(const StructuredSymbol& a, bool xi_side) {
  double from = 3.0;
  for (const SymbolTerm& t : a.terms)
    for (const Shell& s : (xi_side ? t.fxi : t.fx).shells)
      from = std::max(from, s.scale);
  return from;
}

}  // namespace

cplx expansion_tail_value(const ScalarExpansion& e,
                          const std::vector<cplx>& degrees, int k1, double r) {
  cplx out(0.0);
  for (const auto& lad : e.classes) {
    for (int j = 0; j < static_cast<int>(lad.c.size()); ++j) {
      const cplx d = lad.top - double(j);
      bool skip = false;
      for (int i = 0; i < k1 && i < static_cast<int>(degrees.size()); ++i)
        if (std::abs(d - degrees[i]) < 1e-9) { skip = true; break; }
      if (!skip && std::abs(lad.c[j]) != 0.0) out += lad.c[j] * rpow(r, d);
    }
  }
  return out;
}

RadialSymbol1V radial_from_structured_xi(const StructuredSymbol& a,
                                         const Vec3& x, int depth) {
  RadialSymbol1V r;
  r.n = a.n;
  r.degrees = a.xi_degrees(depth);
  auto cache = std::make_shared<ComponentCache>(a, true);
  auto degs = std::make_shared<std::vector<cplx>>(r.degrees);
  r.eval = [a, x](const Vec3& xi) { return a.eval(x, xi); };
  r.comp = [cache, degs, x](int k, const Vec3& omega) {
    return cache->get(*degs, k).eval(x, omega);
  };
  auto rays = std::make_shared<RayCache>();
  const int n = a.n;
  r.eval_tail = [a, x, degs, rays, n](int k, const Vec3& y) {
    const double rr = norm(y, n);
    const Vec3 omega = scale(y, 1.0 / rr, n);
    auto it = rays->find(omega);
    if (it == rays->end())
      it = rays->emplace(omega, a.xi_ray_expansion(x, omega, kTailLen)).first;
    return expansion_tail_value(it->second, *degs, k, rr);
  };
  r.tail_from = tail_start(a, true);
  return r;
}

RadialSymbol1V radial_from_structured_x(const StructuredSymbol& a,
                                        const Vec3& xi, int depth) {
  RadialSymbol1V r;
  r.n = a.n;
  r.degrees = a.x_degrees(depth);
  auto cache = std::make_shared<ComponentCache>(a, false);
  auto degs = std::make_shared<std::vector<cplx>>(r.degrees);
  r.eval = [a, xi](const Vec3& x) { return a.eval(x, xi); };
  r.comp = [cache, degs, xi](int k, const Vec3& omega) {
    return cache->get(*degs, k).eval(omega, xi);
  };
  auto rays = std::make_shared<RayCache>();
  const int n = a.n;
  r.eval_tail = [a, xi, degs, rays, n](int k, const Vec3& y) {
    const double rr = norm(y, n);
    const Vec3 omega = scale(y, 1.0 / rr, n);
    auto it = rays->find(omega);
    if (it == rays->end())
      it = rays->emplace(omega, a.x_ray_expansion(omega, xi, kTailLen)).first;
    return expansion_tail_value(it->second, *degs, k, rr);
  };
  r.tail_from = tail_start(a, false);
  return r;
}

SgSymbolView sg_view(const StructuredSymbol& a, int depth) {
  SgSymbolView v;
  v.n = a.n;
  v.mu = a.order_xi();
  v.m = a.order_x();
  v.eval = [a](const Vec3& x, const Vec3& xi) { return a.eval(x, xi); };
  v.xi_restrict = [a, depth](const Vec3& x) {
    return radial_from_structured_xi(a, x, depth);
  };
  v.x_restrict = [a, depth](const Vec3& xi) {
    return radial_from_structured_x(a, xi, depth);
  };
  v.x_ladder = a.x_degrees(depth);
  v.xi_ladder = a.xi_degrees(depth);
  auto xlad = std::make_shared<std::vector<cplx>>(v.x_ladder);
  auto xilad = std::make_shared<std::vector<cplx>>(v.xi_ladder);
  auto xcache = std::make_shared<ComponentCache>(a, false);
  auto xicache = std::make_shared<ComponentCache>(a, true);
  // x-component at frozen direction: a_{(d_j)}(omega, .) as a xi-symbol
  v.x_comp_restrict = [xcache, xlad, depth](int j, const Vec3& omega) {
    const StructuredSymbol& cj = xcache->get(*xlad, j);
    return radial_from_structured_xi(cj, omega, depth);
  };
  v.xi_comp_restrict = [xicache, xilad, depth](int k, const Vec3& omega) {
    const StructuredSymbol& ck = xicache->get(*xilad, k);
    return radial_from_structured_x(ck, omega, depth);
  };
  return v;
}

RadialSymbol1V radial_from_expansion(
    int n, std::function<cplx(const Vec3&)> eval,
    std::function<ScalarExpansion(const Vec3& omega)> expand, int depth) {
  RadialSymbol1V r;
  r.n = n;
  r.eval = std::move(eval);
  // degrees read at a probe direction (class structure is direction-free
  // for the rational symbols this backs)
  const Vec3 probe = sphere_rule(n).points.front();
  const ScalarExpansion pe = expand(probe);
  for (const auto& l : pe.classes)
    for (int k = 0; k < static_cast<int>(l.c.size()); ++k)
      r.degrees.push_back(l.top - double(k));
  std::sort(r.degrees.begin(), r.degrees.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  if (static_cast<int>(r.degrees.size()) > depth) r.degrees.resize(depth);

  auto cache = std::make_shared<RayCache>();
  auto degs = std::make_shared<std::vector<cplx>>(r.degrees);
  r.comp = [cache, degs, expand](int k, const Vec3& omega) {
    auto it = cache->find(omega);
    if (it == cache->end()) it = cache->emplace(omega, expand(omega)).first;
    return it->second.slot_at((*degs)[k]);
  };
  r.eval_tail = [cache, degs, expand, n](int k, const Vec3& y) {
    const double rr = norm(y, n);
    const Vec3 omega = scale(y, 1.0 / rr, n);
    auto it = cache->find(omega);
    if (it == cache->end()) it = cache->emplace(omega, expand(omega)).first;
    return expansion_tail_value(it->second, *degs, k, rr);
  };
  return r;
}

// ---------------------------------------------------------------------------
// Numeric extraction.

double detect_leading_degree(const std::function<cplx(double)>& F,
                             double snap_tol) {
  std::vector<double> ts, vs;
  for (int i = 5; i <= 12; ++i) {
    const double t = std::pow(2.0, i);
    ts.push_back(t);
    vs.push_back(std::abs(F(t)));
  }
  const SlopeFit fit = fit_loglog(ts, vs);
  if (!fit.ok) return 0.0;
  const double snapped = std::round(2.0 * fit.slope) / 2.0;
  return std::abs(snapped - fit.slope) <= snap_tol ? snapped : fit.slope;
}

LimitResult extract_coefficient(const std::function<cplx(double)>& F, cplx d) {
  std::vector<cplx> s;
  for (int i = 4; i <= 12; ++i) {
    const double t = std::pow(2.0, i);
    s.push_back(F(t) * rpow(t, -d));
  }
  return richardson(s, 2.0, {0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
}

ExtractedLadder extract_components(const std::function<cplx(double)>& F,
                                   int count) {
  ExtractedLadder out;
  // Pass 1: peel to detect the degree ladder.  Each stage's coefficient is
  // only approximate, and subtracting it re-enters the next stage as a
  // growing mode, so the values found here are provisional.
  std::function<cplx(double)> cur = F;
  for (int k = 0; k < count; ++k) {
    // bail out once the remainder is numerically nothing
    if (std::abs(cur(64.0)) < 1e-11 && std::abs(cur(256.0)) < 1e-11) break;
    const double d = detect_leading_degree(cur);
    // a stalled peel repeats a degree; stop rather than loop on it
    bool seen = false;
    for (cplx e : out.degrees) seen = seen || std::abs(e - cplx(d)) < 1e-9;
    if (seen) break;
    const LimitResult c = extract_coefficient(cur, d);
    out.degrees.push_back(d);
    out.values.push_back(c.value);
    auto prev = cur;
    const cplx cv = c.value;
    cur = [prev, cv, d](double t) { return prev(t) - cv * rpow(t, d); };
  }
  if (out.degrees.empty()) return out;

  // Pass 2: refit every coefficient in one least-squares solve.  Guard
  // degrees continuing the ladder at its smallest gap absorb the unmodeled
  // remainder so it cannot bleed into the reported coefficients.
  std::vector<double> degs;
  for (cplx d : out.degrees) degs.push_back(d.real());
  double gap = 1.0;
  for (size_t i = 1; i < degs.size(); ++i)
    gap = std::min(gap, degs[i - 1] - degs[i]);
  for (int g = 0; g < 8; ++g) degs.push_back(degs.back() - gap);

  const int npts = std::max<size_t>(24, degs.size() + 8);
  std::vector<double> ts;
  for (int i = 0; i < npts; ++i)
    ts.push_back(std::pow(2.0, 4.0 + 9.0 * i / (npts - 1.0)));
  const size_t rows = ts.size(), cols = degs.size();
  std::vector<cplx> fv(rows);
  std::vector<double> w(rows);
  for (size_t r = 0; r < rows; ++r) {
    fv[r] = F(ts[r]);
    // weight rows by 1/|F| so the dominant mode cannot drown the small
    // coefficients in its absolute rounding error
    w[r] = 1.0 / std::max(std::abs(fv[r]), 1e-30);
  }
  std::vector<std::vector<double>> A(rows, std::vector<double>(cols));
  std::vector<double> sc(cols, 0.0);
  for (size_t c = 0; c < cols; ++c) {
    for (size_t r = 0; r < rows; ++r) {
      A[r][c] = w[r] * std::pow(ts[r], degs[c]);
      sc[c] = std::max(sc[c], std::abs(A[r][c]));
    }
    for (size_t r = 0; r < rows; ++r) A[r][c] /= sc[c];
  }
  std::vector<double> bre(rows), bim(rows);
  for (size_t r = 0; r < rows; ++r) {
    bre[r] = w[r] * fv[r].real();
    bim[r] = w[r] * fv[r].imag();
  }
  const std::vector<double> xre = solve_least_squares(A, bre);
  const std::vector<double> xim = solve_least_squares(A, bim);
  if (xre.size() == cols && xim.size() == cols) {
    out.degrees.clear();
    out.values.clear();
    for (size_t c = 0; c < cols; ++c) {
      out.degrees.push_back(degs[c]);
      out.values.push_back(cplx(xre[c], xim[c]) / sc[c]);
    }
  }
  return out;
}

RadialSymbol1V radial_from_blackbox(int n,
                                    std::function<cplx(const Vec3&)> eval,
                                    int depth) {
  RadialSymbol1V r;
  r.n = n;
  r.eval = eval;
  const Vec3 probe = sphere_rule(n).points.front();
  auto along = [eval, probe](double t) { return eval(scale(probe, t, 3)); };
  const ExtractedLadder lad = extract_components(along, depth);
  r.degrees = lad.degrees;

  auto cache = std::make_shared<std::map<Vec3, ExtractedLadder, Vec3Less>>();
  auto degs = std::make_shared<std::vector<cplx>>(r.degrees);
  const int dcount = static_cast<int>(r.degrees.size());
  r.comp = [cache, degs, eval, dcount](int k, const Vec3& omega) -> cplx {
    auto it = cache->find(omega);
    if (it == cache->end()) {
      auto along = [eval, omega](double t) { return eval(scale(omega, t, 3)); };
      it = cache->emplace(omega, extract_components(along, dcount)).first;
    }
    // match by degree: the ladder is global, per-direction values may vanish
    const cplx want = (*degs)[k];
    for (size_t i = 0; i < it->second.degrees.size(); ++i)
      if (std::abs(it->second.degrees[i] - want) < 1e-6)
        return it->second.values[i];
    return cplx(0.0);
  };
  return r;
}

}  // namespace sgt
