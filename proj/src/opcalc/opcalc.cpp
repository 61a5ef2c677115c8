#include "sgt/opcalc/opcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgt/core.hpp"
#include "sgt/num/polyroots.hpp"
#include "sgt/num/sphere.hpp"

namespace sgt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 33 probe values per axis covering R through y -> y / sqrt(1 - y^2).
std::vector<double> compactified_axis(int half = 16) {
  std::vector<double> out;
  out.reserve(2 * half + 1);
  for (int i = -half; i <= half; ++i) {
    const double y = double(i) / (double(half) + 0.5);
    out.push_back(y / std::sqrt(1.0 - y * y));
  }
  return out;
}

// Monic characteristic polynomial (ascending coefficients) of a k x k value
// matrix via Newton's identities on the power sums tr(M^j).
std::vector<cplx> char_poly(const std::vector<cplx>& m, int k) {
  std::vector<cplx> s(k + 1, cplx(0.0));  // power sums, s[j] = tr(M^j)
  std::vector<cplx> p = m;                // M^j
  for (int j = 1; j <= k; ++j) {
    if (j > 1) {
      std::vector<cplx> q(k * k, cplx(0.0));
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
          for (int t = 0; t < k; ++t) q[r * k + c] += p[r * k + t] * m[t * k + c];
      p = std::move(q);
    }
    for (int r = 0; r < k; ++r) s[j] += p[r * k + r];
  }
  std::vector<cplx> e(k + 1, cplx(0.0));  // elementary symmetric functions
  e[0] = 1.0;
  for (int j = 1; j <= k; ++j) {
    cplx acc(0.0);
    double sign = 1.0;
    for (int i = 1; i <= j; ++i, sign = -sign) acc += sign * e[j - i] * s[i];
    e[j] = acc / double(j);
  }
  std::vector<cplx> c(k + 1);
  double sign = 1.0;
  for (int j = 0; j <= k; ++j, sign = -sign) c[k - j] = sign * e[j];
  return c;
}

// Hausdorff distance between two root sets, the spectral movement between
// neighbouring probes.
double root_movement(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double h = 0.0;
  for (const cplx& za : a) {
    double m = kInf;
    for (const cplx& zb : b) m = std::min(m, std::abs(za - zb));
    h = std::max(h, m);
  }
  for (const cplx& zb : b) {
    double m = kInf;
    for (const cplx& za : a) m = std::min(m, std::abs(zb - za));
    h = std::max(h, m);
  }
  return h;
}

// Scan state for one ellipticity condition: tracks the worst spectral
// distance, whether the sector was hit, and how fast the spectrum moved
// around the probe where the minimum was attained (the sampling density at
// the margin, which decides whether the verdict can be trusted).
struct FamilyScan {
  const Sector* sec = nullptr;
  double min_dist = kInf;
  bool hit = false;
  double res = 0.0;
  std::vector<cplx> prev;
  bool have_prev = false;
  bool at_min = false;  // previous probe set the running minimum

  void reset_run() {
    have_prev = false;
    at_min = false;
  }
  void probe(const std::vector<cplx>& roots) {
    double d = kInf;
    for (const cplx& r : roots) d = std::min(d, sec->distance(r));
    if (d == 0.0) hit = true;
    const double mv = have_prev ? root_movement(prev, roots) : 0.0;
    if (at_min) res = std::max(res, mv);
    at_min = false;
    if (d < min_dist) {
      min_dist = d;
      res = mv;
      at_min = true;
    }
    prev = roots;
    have_prev = true;
  }
};

// First ladder degree whose component does not vanish: declared orders can
// overshoot when a sum has cancelling leading terms.
std::optional<cplx> lead_degree(const StructuredSymbol& a, bool xi_side) {
  const auto degs = xi_side ? a.xi_degrees(8) : a.x_degrees(8);
  for (const cplx& d : degs) {
    const StructuredSymbol c = xi_side ? a.xi_component(d) : a.x_component(d);
    if (!c.is_zero()) return d;
  }
  return std::nullopt;
}

std::optional<cplx> matrix_lead(const MatrixSymbol& a, bool xi_side) {
  std::optional<cplx> best;
  for (const StructuredSymbol& s : a.e) {
    const auto d = lead_degree(s, xi_side);
    if (d && (!best || d->real() > best->real())) best = d;
  }
  return best;
}

// Entrywise component matrix at one degree; zero symbols when the degree is
// absent (so a vanishing principal part fails the check naturally).
std::vector<StructuredSymbol> component_matrix(const MatrixSymbol& a,
                                               std::optional<cplx> deg,
                                               bool xi_side) {
  std::vector<StructuredSymbol> out;
  out.reserve(a.e.size());
  for (const StructuredSymbol& s : a.e) {
    if (!deg)
      out.push_back(StructuredSymbol::zero(a.n));
    else
      out.push_back(xi_side ? s.xi_component(*deg) : s.x_component(*deg));
  }
  return out;
}

std::vector<StructuredSymbol> corner_matrix(const MatrixSymbol& a,
                                            std::optional<cplx> mu,
                                            std::optional<cplx> m) {
  std::vector<StructuredSymbol> out;
  out.reserve(a.e.size());
  for (const StructuredSymbol& s : a.e) {
    if (!mu || !m)
      out.push_back(StructuredSymbol::zero(a.n));
    else
      out.push_back(s.mixed_component(*mu, *m));
  }
  return out;
}

std::vector<cplx> roots_at(const std::vector<StructuredSymbol>& comp, int k,
                           const Vec3& x, const Vec3& xi) {
  std::vector<cplx> mv(comp.size());
  for (size_t i = 0; i < comp.size(); ++i) mv[i] = comp[i].eval(x, xi);
  return poly_roots(char_poly(mv, k));
}

double factorial_midx(const MIdx& a) {
  double f = 1.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 2; j <= a[i]; ++j) f *= j;
  return f;
}

cplx minus_i_pow(int k) {
  static const cplx table[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return table[k % 4];
}

std::vector<MIdx> midx_of_degree(int n, int total) {
  std::vector<MIdx> out;
  for (int a0 = total; a0 >= 0; --a0)
    for (int a1 = total - a0; a1 >= 0; --a1) {
      const int a2 = total - a0 - a1;
      if ((n < 2 && a1 > 0) || (n < 3 && a2 > 0)) continue;
      out.push_back(MIdx{a0, a1, a2});
    }
  return out;
}

// Shared loop of both composition routines: terms with 1 <= |alpha| <= top.
StructuredSymbol leibniz_terms(const StructuredSymbol& a0,
                               const StructuredSymbol& a1, int top) {
  StructuredSymbol out = StructuredSymbol::zero(a0.n);
  for (int t = 1; t <= top; ++t)
    for (const MIdx& alpha : midx_of_degree(a0.n, t)) {
      const StructuredSymbol da = a0.derivative_xi_multi(alpha);
      if (da.is_zero()) continue;
      const StructuredSymbol db = a1.derivative_x_multi(alpha);
      if (db.is_zero()) continue;
      out = out + (da * db).scaled(minus_i_pow(t) / factorial_midx(alpha));
    }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sector

double Sector::distance(cplx z) const {
  if (!(theta > 0.0) || !(theta < M_PI))
    throw std::invalid_argument("sector angle must lie in (0, pi)");
  const double r = std::abs(z);
  double base = 0.0;
  if (r > 0.0) {
    const double phi = std::abs(std::atan2(z.imag(), z.real()));
    // The angular slack absorbs the polar/atan2 roundtrip so points
    // constructed on a boundary ray test as members exactly.
    const double gap = theta - phi;
    if (gap > 1e-12)
      base = gap >= M_PI / 2.0 ? r : r * std::sin(gap);
  }
  return std::max(0.0, base - eps);
}

cplx Sector::ray(double r, int sign) const {
  return std::polar(r, sign >= 0 ? theta : -theta);
}

// ---------------------------------------------------------------------------
// Ellipticity check

EllipticityCertificate lambda_elliptic_check(const MatrixSymbol& a,
                                             const Sector& sector) {
  if (a.k > 4) throw std::invalid_argument("matrix symbols limited to k <= 4");
  const int n = a.n;
  const auto mu = matrix_lead(a, true);
  const auto m = matrix_lead(a, false);
  const auto comp_xi = component_matrix(a, mu, true);
  const auto comp_x = component_matrix(a, m, false);
  const auto corner = corner_matrix(a, mu, m);

  const SphereRule& sph = sphere_rule(n);
  const std::vector<double> ax = compactified_axis();
  const std::vector<double> zero{0.0};
  const auto& a1 = n >= 2 ? ax : zero;
  const auto& a2 = n >= 3 ? ax : zero;

  FamilyScan scan[3];
  for (FamilyScan& f : scan) f.sec = &sector;
  // (1) xi-principal part over R^n_x x sphere
  for (const Vec3& omega : sph.points)
    for (double c2 : a2)
      for (double c1 : a1) {
        scan[0].reset_run();
        for (double c0 : ax)
          scan[0].probe(roots_at(comp_xi, a.k, Vec3{c0, c1, c2}, omega));
      }
  // (2) x-principal part over sphere x R^n_xi
  for (const Vec3& thet : sph.points)
    for (double c2 : a2)
      for (double c1 : a1) {
        scan[1].reset_run();
        for (double c0 : ax)
          scan[1].probe(roots_at(comp_x, a.k, thet, Vec3{c0, c1, c2}));
      }
  // (3) corner part over sphere x sphere; with only two antipodal points the
  // restriction is exhaustive, so no resolution is charged there.
  for (const Vec3& thet : sph.points) {
    scan[2].reset_run();
    for (const Vec3& omega : sph.points) {
      if (sph.points.size() <= 2) scan[2].reset_run();
      scan[2].probe(roots_at(corner, a.k, thet, omega));
    }
  }

  EllipticityCertificate cert;
  cert.min_distance = kInf;
  for (int f = 0; f < 3; ++f) {
    cert.conditions[f] = !scan[f].hit;
    cert.min_distance = std::min(cert.min_distance, scan[f].min_dist);
    cert.resolution = std::max(cert.resolution, scan[f].res);
  }
  cert.elliptic =
      cert.conditions[0] && cert.conditions[1] && cert.conditions[2];
  cert.conclusive = !cert.elliptic || cert.min_distance > cert.resolution;
  return cert;
}

EllipticityCertificate lambda_elliptic_check(const StructuredSymbol& a,
                                             const Sector& sector) {
  return lambda_elliptic_check(MatrixSymbol::from_scalar(a), sector);
}

// ---------------------------------------------------------------------------
// Composition

StructuredSymbol compose_exact(const StructuredSymbol& a0,
                               const StructuredSymbol& a1) {
  if (!a0.is_poly_xi())
    throw std::invalid_argument(
        "compose_exact needs a left factor polynomial in xi");
  return a0 * a1 + leibniz_terms(a0, a1, a0.poly_deg_xi());
}

AsymptoticComposition compose_asymptotic(const StructuredSymbol& a0,
                                         const StructuredSymbol& a1, int N) {
  if (N < 1) throw std::invalid_argument("composition needs N >= 1");
  AsymptoticComposition out;
  out.truncated = a0 * a1 + leibniz_terms(a0, a1, N - 1);
  const auto add = [N](std::optional<cplx> p,
                       std::optional<cplx> q) -> std::optional<cplx> {
    if (!p || !q) return std::nullopt;
    return *p + *q - double(N);
  };
  out.rem_order_xi = add(a0.order_xi(), a1.order_xi());
  out.rem_order_x = add(a0.order_x(), a1.order_x());
  return out;
}

// ---------------------------------------------------------------------------
// Tilde correction

TildeResult tilde_modify(const StructuredSymbol& a, const Sector& sector) {
  const int n = a.n;
  TildeResult out;
  out.certificate = lambda_elliptic_check(a, sector);
  if (!out.certificate.elliptic)
    throw std::domain_error(
        "symbol is not elliptic for the sector; no bump correction can fix "
        "the behaviour at infinity");

  // Scan the full symbol for values inside the sector and record the
  // outermost offender along with the largest magnitude seen nearby.
  const std::vector<double> ax = compactified_axis();
  const std::vector<double> zero{0.0};
  const auto& a1 = n >= 2 ? ax : zero;
  const auto& a2 = n >= 3 ? ax : zero;
  std::vector<Vec3> pts;
  for (double c2 : a2)
    for (double c1 : a1)
      for (double c0 : ax) pts.push_back(Vec3{c0, c1, c2});

  double worst = -1.0;
  for (const Vec3& x : pts)
    for (const Vec3& xi : pts)
      if (sector.contains(a.eval(x, xi))) {
        const double r2 = norm2(x, n) + norm2(xi, n);
        worst = std::max(worst, std::sqrt(r2));
      }
  if (worst < 0.0) {
    out.symbol = a;
    return out;  // nothing to fix
  }

  // Pad the probed radius (the offending set extends at most a grid cell
  // past the last hit) and size the shift so the displaced disc of values
  // clears the sector: adding a positive constant only ever shrinks |arg|,
  // so points already outside stay outside, and on the core the whole disc
  // |z| <= L lands at distance >= 1 beyond the fattening.
  out.radius = 1.25 * worst + 0.5;
  double mag = 0.0;
  for (const Vec3& x : pts) {
    if (norm(x, n) > out.radius) continue;
    for (const Vec3& xi : pts) {
      if (norm2(x, n) + norm2(xi, n) > out.radius * out.radius) continue;
      mag = std::max(mag, std::abs(a.eval(x, xi)));
    }
  }
  out.bound = 1.1 * mag;
  const double clearance = out.bound + 1.0 + sector.eps;
  out.shift = sector.theta >= M_PI / 2.0 ? clearance
                                         : clearance / std::sin(sector.theta);

  // Bump = (1 - chi(|x|/s))(1 - chi(|xi|/s)), identically 1 wherever both
  // coordinates sit inside the padded ball.
  const double s = 2.0 * out.radius;
  const VarFactor chi = shell_factor(0, 0.5, s);
  SymbolTerm both;
  both.fx = chi;
  both.fxi = chi;
  StructuredSymbol cross(n);
  cross.terms.push_back(both);
  const StructuredSymbol bump = StructuredSymbol::constant(n, 1.0) -
                                StructuredSymbol::from_x_factor(n, chi) -
                                StructuredSymbol::from_xi_factor(n, chi) +
                                cross;
  out.symbol = a + bump.scaled(out.shift);
  out.modified = true;

  for (const Vec3& x : pts)
    for (const Vec3& xi : pts)
      if (sector.contains(out.symbol.eval(x, xi)))
        throw std::runtime_error(
            "bump correction left sector values behind; padding too small");
  out.certificate = lambda_elliptic_check(out.symbol, sector);
  return out;
}

double resolvent_bound_constant(const StructuredSymbol& a, cplx mu, cplx m,
                                const Sector& sector) {
  const int n = a.n;
  const std::vector<double> ax = compactified_axis(8);
  const std::vector<double> zero{0.0};
  const auto& a1 = n >= 2 ? ax : zero;
  const auto& a2 = n >= 3 ? ax : zero;
  std::vector<Vec3> pts;
  for (double c2 : a2)
    for (double c1 : a1)
      for (double c0 : ax) pts.push_back(Vec3{c0, c1, c2});

  // Cache symbol values and the weight <x>^m <xi>^mu per probe pair.
  std::vector<cplx> val;
  std::vector<double> wt;
  for (const Vec3& x : pts) {
    const double wx = std::pow(bracket(x, n), m.real());
    for (const Vec3& xi : pts) {
      val.push_back(a.eval(x, xi));
      wt.push_back(wx * std::pow(bracket(xi, n), mu.real()));
    }
  }

  double worst = 0.0;
  for (int dec = -1; dec <= 3; ++dec)
    for (int sign = -1; sign <= 1; sign += 2) {
      const cplx lam = sector.ray(std::pow(10.0, dec), sign);
      for (size_t i = 0; i < val.size(); ++i) {
        const double den = std::abs(lam - val[i]);
        if (den < 1e-300) return kInf;
        worst = std::max(worst, wt[i] / den);
      }
    }
  return worst;
}

// ---------------------------------------------------------------------------
// Divergence generators

DivergenceFamily divergence_generators(const StructuredSymbol& a, cplx mu,
                                       cplx m, int N) {
  if (N < 0) throw std::invalid_argument("component depth must be >= 0");
  const int n = a.n;
  const StructuredSymbol chi =
      StructuredSymbol::from_xi_factor(n, shell_factor(0));
  const StructuredSymbol kap =
      StructuredSymbol::from_x_factor(n, shell_factor(0));

  const auto degenerate = [](cplx den) { return std::abs(den) < 1e-12; };
  const auto xi_div = [n](const StructuredSymbol& g) {
    StructuredSymbol s = StructuredSymbol::zero(n);
    for (int i = 0; i < n; ++i) {
      MIdx e{0, 0, 0};
      e[i] = 1;
      s = s + (g * StructuredSymbol::from_xi_factor(n, monomial_factor(e)))
                  .derivative_xi(i);
    }
    return s;
  };
  const auto x_div = [n](const StructuredSymbol& g) {
    StructuredSymbol s = StructuredSymbol::zero(n);
    for (int i = 0; i < n; ++i) {
      MIdx e{0, 0, 0};
      e[i] = 1;
      s = s + (g * StructuredSymbol::from_x_factor(n, monomial_factor(e)))
                  .derivative_x(i);
    }
    return s;
  };

  std::vector<std::vector<StructuredSymbol>> mix(N + 1);
  for (int j = 0; j <= N; ++j)
    for (int k = 0; k <= N; ++k)
      mix[j].push_back(a.mixed_component(mu - double(j), m - double(k)));

  DivergenceFamily out;
  for (int j = 0; j <= N; ++j) {
    StructuredSymbol core = a.xi_component(mu - double(j));
    for (int k = 0; k <= N; ++k) core = core - kap * mix[j][k];
    const StructuredSymbol aj = chi * core;
    if (aj.is_zero()) continue;
    const cplx den = cplx(double(n)) + mu - double(j);
    if (degenerate(den)) {
      out.skipped.push_back("b^" + std::to_string(j) +
                            ": xi-degree hits -n, no Euler normalization");
      continue;
    }
    out.generators.push_back({"b^" + std::to_string(j),
                              xi_div(aj).scaled(cplx(1.0) / den)});
  }
  for (int k = 0; k <= N; ++k) {
    StructuredSymbol core = a.x_component(m - double(k));
    for (int j = 0; j <= N; ++j) core = core - chi * mix[j][k];
    const StructuredSymbol ak = kap * core;
    if (ak.is_zero()) continue;
    const cplx den = cplx(double(n)) + m - double(k);
    if (degenerate(den)) {
      out.skipped.push_back("b_" + std::to_string(k) +
                            ": x-degree hits -n, no Euler normalization");
      continue;
    }
    out.generators.push_back({"b_" + std::to_string(k),
                              x_div(ak).scaled(cplx(1.0) / den)});
  }
  for (int j = 0; j <= N; ++j)
    for (int k = 0; k <= N; ++k) {
      const StructuredSymbol ajk = kap * chi * mix[j][k];
      if (ajk.is_zero()) continue;
      const std::string tag = "^" + std::to_string(j) + "_" + std::to_string(k);
      const cplx den_xi = cplx(double(n)) + mu - double(j);
      const cplx den_x = cplx(double(n)) + m - double(k);
      if (degenerate(den_xi)) {
        out.skipped.push_back("b" + tag + " (and c" + tag +
                              "): xi-degree hits -n");
        continue;
      }
      const StructuredSymbol bjk = xi_div(ajk).scaled(cplx(1.0) / den_xi);
      out.generators.push_back({"b" + tag, bjk});
      if (degenerate(den_x)) {
        out.skipped.push_back("c" + tag + ": x-degree hits -n");
        continue;
      }
      const StructuredSymbol rjk = ajk - bjk;
      out.generators.push_back(
          {"c" + tag, x_div(rjk).scaled(cplx(1.0) / den_x)});
    }
  return out;
}

}  // namespace sgt
