#include "sgt/sym/structured.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace sgt {

// ---------------------------------------------------------------------------
// Polynomial helpers.

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ai, ac] : a)
    for (const auto& [bi, bc] : b) {
      MIdx k{ai[0] + bi[0], ai[1] + bi[1], ai[2] + bi[2]};
      r[k] += ac * bc;
    }
  for (auto it = r.begin(); it != r.end();)
    it = near_zero(it->second) ? r.erase(it) : std::next(it);
  return r;
}

Poly poly_derive(const Poly& a, int i) {
  Poly r;
  for (const auto& [ai, ac] : a) {
    if (ai[i] == 0) continue;
    MIdx k = ai;
    k[i] -= 1;
    r[k] += double(ai[i]) * ac;
  }
  return r;
}

Poly poly_shift(const Poly& a, const MIdx& by, cplx scale) {
  Poly r;
  for (const auto& [ai, ac] : a) {
    MIdx k{ai[0] + by[0], ai[1] + by[1], ai[2] + by[2]};
    r[k] += ac * scale;
  }
  return r;
}

cplx poly_eval(const Poly& a, const Vec3& y, int n) {
  cplx s(0.0);
  for (const auto& [ai, ac] : a) {
    double m = 1.0;
    for (int i = 0; i < n; ++i)
      for (int p = 0; p < ai[i]; ++p) m *= y[i];
    s += ac * m;
  }
  return s;
}

int poly_maxdeg(const Poly& a) {
  int d = 0;
  for (const auto& [ai, ac] : a) d = std::max(d, midx_abs(ai));
  return d;
}

// ---------------------------------------------------------------------------
// VarFactor.

VarFactor VarFactor::one() { return constant(1.0); }

VarFactor VarFactor::constant(cplx c) {
  VarFactor f;
  f.poly[MIdx{0, 0, 0}] = c;
  return f;
}

bool VarFactor::compactly_supported() const {
  for (const Shell& s : shells)
    if (s.d >= 1) return true;
  return false;
}

cplx VarFactor::eval(const Vec3& y, int n) const {
  if (poly.empty()) return cplx(0.0);
  const double r2 = norm2(y, n);
  const double r = std::sqrt(r2);
  cplx v(1.0);
  for (const Shell& s : shells) {
    const ExcisionProfile prof{s.r0};
    const double rr = r / s.scale;
    const double f = s.d == 0 ? prof(rr) : prof.deriv(s.d, rr);
    if (f == 0.0) return cplx(0.0);
    v *= f;
  }
  v *= poly_eval(poly, y, n);
  if (v == cplx(0.0)) return v;
  if (bpow != cplx(0.0)) v *= rpow(std::sqrt(1.0 + r2), bpow);
  if (spow != cplx(0.0)) v *= rpow(smoothed_norm_from_sq(r2), spow);
  if (npow != cplx(0.0)) v *= rpow(r, npow);
  return v;
}

std::optional<cplx> VarFactor::degree() const {
  if (poly.empty() || compactly_supported()) return std::nullopt;
  return cplx(double(poly_maxdeg(poly))) + bpow + spow + npow;
}

VarFactor VarFactor::operator*(const VarFactor& o) const {
  VarFactor r;
  r.poly = poly_mul(poly, o.poly);
  r.bpow = bpow + o.bpow;
  r.spow = spow + o.spow;
  r.npow = npow + o.npow;
  r.shells = shells;
  r.shells.insert(r.shells.end(), o.shells.begin(), o.shells.end());
  std::sort(r.shells.begin(), r.shells.end());
  return r;
}

std::vector<VarFactor> VarFactor::derivative(int i) const {
  if (spow != cplx(0.0))
    throw std::domain_error(
        "VarFactor: the smoothed-norm weight has no closed derivative family "
        "in this algebra; use the bracket weight for differentiable symbols");
  std::vector<VarFactor> out;
  // polynomial part
  {
    Poly dp = poly_derive(poly, i);
    if (!dp.empty()) {
      VarFactor f = *this;
      f.poly = std::move(dp);
      out.push_back(std::move(f));
    }
  }
  MIdx ei{0, 0, 0};
  ei[i] = 1;
  // bracket power: b <y>^{b-2} y_i
  if (bpow != cplx(0.0)) {
    VarFactor f = *this;
    f.poly = poly_shift(poly, ei, bpow);
    f.bpow = bpow - 2.0;
    out.push_back(std::move(f));
  }
  // norm power: h |y|^{h-2} y_i
  if (npow != cplx(0.0)) {
    VarFactor f = *this;
    f.poly = poly_shift(poly, ei, npow);
    f.npow = npow - 2.0;
    out.push_back(std::move(f));
  }
  // shells: chi^{(d)}(|y|/s) -> chi^{(d+1)}(|y|/s) y_i / (s |y|)
  for (size_t s = 0; s < shells.size(); ++s) {
    VarFactor f = *this;
    f.poly = poly_shift(poly, ei, cplx(1.0 / shells[s].scale));
    f.npow = npow - 1.0;
    f.shells[s].d += 1;
    std::sort(f.shells.begin(), f.shells.end());
    out.push_back(std::move(f));
  }
  return out;
}

ScalarExpansion VarFactor::ray_expansion(const Vec3& omega, int n,
                                         int len) const {
  if (poly.empty() || compactly_supported()) return ScalarExpansion::zero();
  // polynomial ladder (exact)
  ScalarExpansion e;
  {
    const int md = poly_maxdeg(poly);
    Ladder<cplx> l;
    l.top = double(md);
    l.exact = true;
    l.c.assign(md + 1, cplx(0.0));
    for (const auto& [ai, ac] : poly) {
      double m = 1.0;
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < ai[i]; ++p) m *= omega[i];
      l.c[md - midx_abs(ai)] += ac * m;
    }
    e.classes.push_back(std::move(l));
    e.normalize();
    if (e.is_zero()) return e;
  }
  if (bpow != cplx(0.0)) {
    Ladder<cplx> l;
    l.top = bpow;
    l.exact = false;
    l.c.assign(len, cplx(0.0));
    for (int j = 0; 2 * j < len; ++j) l.c[2 * j] = cbinom(bpow / 2.0, j);
    ScalarExpansion br;
    br.classes.push_back(std::move(l));
    e = e * br;
  }
  // [T omega] = T and chi(T/s) = 1 for T >= s: exact monomial shifts.
  const cplx extra = spow + npow;
  if (extra != cplx(0.0)) e = e.shifted(extra);
  e.truncate(len);
  e.normalize();
  return e;
}

std::vector<std::pair<cplx, VarFactor>> VarFactor::component_groups(
    cplx degree) const {
  std::vector<std::pair<cplx, VarFactor>> out;
  if (poly.empty() || compactly_supported()) return out;
  const cplx base = bpow + spow + npow;
  // group (alpha, j): |alpha| + base - 2j == degree
  std::map<int, Poly> groups;  // |alpha| -> scaled monomials
  for (const auto& [ai, ac] : poly) {
    const cplx need = (cplx(double(midx_abs(ai))) + base - degree) / 2.0;
    const double jr = std::round(need.real());
    if (std::abs(need.real() - jr) > 1e-9 || std::abs(need.imag()) > 1e-9 ||
        jr < -1e-9)
      continue;
    const int j = static_cast<int>(jr);
    const cplx w = bpow == cplx(0.0) ? (j == 0 ? cplx(1.0) : cplx(0.0))
                                     : cbinom(bpow / 2.0, j);
    if (near_zero(w)) continue;
    groups[midx_abs(ai)][ai] += ac * w;
  }
  for (auto& [deg, p] : groups) {
    for (auto it = p.begin(); it != p.end();)
      it = near_zero(it->second) ? p.erase(it) : std::next(it);
    if (p.empty()) continue;
    VarFactor f;
    f.poly = std::move(p);
    f.npow = degree - double(deg);
    out.emplace_back(degree, std::move(f));
  }
  return out;
}

std::vector<std::pair<cplx, VarFactor>> VarFactor::components(int count) const {
  std::vector<std::pair<cplx, VarFactor>> out;
  const auto dg = degree();
  if (!dg) return out;
  for (int k = 0; k < count; ++k) {
    auto part = component_groups(*dg - double(k));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string VarFactor::signature() const {
  std::ostringstream os;
  os.precision(17);
  os << "b" << bpow.real() << "," << bpow.imag() << ";s" << spow.real() << ","
     << spow.imag() << ";n" << npow.real() << "," << npow.imag() << ";";
  for (const Shell& s : shells)
    os << "S" << s.d << "@" << s.r0 << "x" << s.scale << ";";
  for (const auto& [ai, ac] : poly)
    os << ai[0] << "." << ai[1] << "." << ai[2] << ":" << ac.real() << ","
       << ac.imag() << ";";
  return os.str();
}

// ---------------------------------------------------------------------------
// StructuredSymbol.

StructuredSymbol StructuredSymbol::constant(int n, cplx c) {
  StructuredSymbol s(n);
  if (!near_zero(c)) {
    SymbolTerm t;
    t.coeff = c;
    s.terms.push_back(std::move(t));
  }
  return s;
}

StructuredSymbol StructuredSymbol::from_x_factor(int n, VarFactor f, cplx c) {
  StructuredSymbol s(n);
  SymbolTerm t;
  t.coeff = c;
  t.fx = std::move(f);
  s.terms.push_back(std::move(t));
  s.normalize();
  return s;
}

StructuredSymbol StructuredSymbol::from_xi_factor(int n, VarFactor f, cplx c) {
  StructuredSymbol s(n);
  SymbolTerm t;
  t.coeff = c;
  t.fxi = std::move(f);
  s.terms.push_back(std::move(t));
  s.normalize();
  return s;
}

cplx StructuredSymbol::eval(const Vec3& x, const Vec3& xi) const {
  cplx s(0.0);
  for (const SymbolTerm& t : terms) {
    if (near_zero(t.coeff)) continue;
    const cplx vx = t.fx.eval(x, n);
    if (vx == cplx(0.0)) continue;
    s += t.coeff * vx * t.fxi.eval(xi, n);
  }
  return s;
}

StructuredSymbol StructuredSymbol::operator+(const StructuredSymbol& o) const {
  if (n != o.n) throw std::invalid_argument("StructuredSymbol: dimension mismatch");
  StructuredSymbol r = *this;
  r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
  r.normalize();
  return r;
}

StructuredSymbol StructuredSymbol::operator-(const StructuredSymbol& o) const {
  return *this + o.scaled(-1.0);
}

StructuredSymbol StructuredSymbol::operator*(const StructuredSymbol& o) const {
  if (n != o.n) throw std::invalid_argument("StructuredSymbol: dimension mismatch");
  StructuredSymbol r(n);
  for (const SymbolTerm& a : terms)
    for (const SymbolTerm& b : o.terms) {
      SymbolTerm t;
      t.coeff = a.coeff * b.coeff;
      t.fx = a.fx * b.fx;
      t.fxi = a.fxi * b.fxi;
      r.terms.push_back(std::move(t));
    }
  r.normalize();
  return r;
}

StructuredSymbol StructuredSymbol::scaled(cplx s) const {
  StructuredSymbol r = *this;
  for (SymbolTerm& t : r.terms) t.coeff *= s;
  r.normalize();
  return r;
}

StructuredSymbol StructuredSymbol::derivative_x(int i) const {
  StructuredSymbol r(n);
  for (const SymbolTerm& t : terms)
    for (VarFactor& f : t.fx.derivative(i)) {
      SymbolTerm nt;
      nt.coeff = t.coeff;
      nt.fx = std::move(f);
      nt.fxi = t.fxi;
      r.terms.push_back(std::move(nt));
    }
  r.normalize();
  return r;
}

StructuredSymbol StructuredSymbol::derivative_xi(int i) const {
  StructuredSymbol r(n);
  for (const SymbolTerm& t : terms)
    for (VarFactor& f : t.fxi.derivative(i)) {
      SymbolTerm nt;
      nt.coeff = t.coeff;
      nt.fx = t.fx;
      nt.fxi = std::move(f);
      r.terms.push_back(std::move(nt));
    }
  r.normalize();
  return r;
}

StructuredSymbol StructuredSymbol::derivative_x_multi(const MIdx& a) const {
  StructuredSymbol r = *this;
  for (int i = 0; i < 3; ++i)
    for (int p = 0; p < a[i]; ++p) r = r.derivative_x(i);
  return r;
}

StructuredSymbol StructuredSymbol::derivative_xi_multi(const MIdx& a) const {
  StructuredSymbol r = *this;
  for (int i = 0; i < 3; ++i)
    for (int p = 0; p < a[i]; ++p) r = r.derivative_xi(i);
  return r;
}

bool StructuredSymbol::is_poly_x() const {
  for (const SymbolTerm& t : terms)
    if (!t.fx.is_poly()) return false;
  return true;
}

bool StructuredSymbol::is_poly_xi() const {
  for (const SymbolTerm& t : terms)
    if (!t.fxi.is_poly()) return false;
  return true;
}

int StructuredSymbol::poly_deg_x() const {
  int d = 0;
  for (const SymbolTerm& t : terms) d = std::max(d, poly_maxdeg(t.fx.poly));
  return d;
}

int StructuredSymbol::poly_deg_xi() const {
  int d = 0;
  for (const SymbolTerm& t : terms) d = std::max(d, poly_maxdeg(t.fxi.poly));
  return d;
}

std::optional<cplx> StructuredSymbol::order_xi() const {
  std::optional<cplx> mu;
  for (const SymbolTerm& t : terms) {
    const auto d = t.fxi.degree();
    if (!d) continue;
    if (!mu || d->real() > mu->real()) mu = d;
  }
  return mu;
}

std::optional<cplx> StructuredSymbol::order_x() const {
  std::optional<cplx> m;
  for (const SymbolTerm& t : terms) {
    const auto d = t.fx.degree();
    if (!d) continue;
    if (!m || d->real() > m->real()) m = d;
  }
  return m;
}

StructuredSymbol StructuredSymbol::xi_component(cplx degree) const {
  StructuredSymbol r(n);
  for (const SymbolTerm& t : terms)
    for (auto& [dg, f] : t.fxi.component_groups(degree)) {
      SymbolTerm nt;
      nt.coeff = t.coeff;
      nt.fx = t.fx;
      nt.fxi = std::move(f);
      r.terms.push_back(std::move(nt));
    }
  r.normalize();
  return r;
}

StructuredSymbol StructuredSymbol::x_component(cplx degree) const {
  StructuredSymbol r(n);
  for (const SymbolTerm& t : terms)
    for (auto& [dg, f] : t.fx.component_groups(degree)) {
      SymbolTerm nt;
      nt.coeff = t.coeff;
      nt.fx = std::move(f);
      nt.fxi = t.fxi;
      r.terms.push_back(std::move(nt));
    }
  r.normalize();
  return r;
}

StructuredSymbol StructuredSymbol::mixed_component(cplx xi_degree,
                                                   cplx x_degree) const {
  return xi_component(xi_degree).x_component(x_degree);
}

namespace {

std::vector<cplx> union_ladder(const std::vector<cplx>& tops, int count) {
  // Candidate degrees top_c - j, deduplicated, by descending real part.
  std::vector<cplx> cand;
  for (cplx t : tops)
    for (int j = 0; j < count; ++j) cand.push_back(t - double(j));
  std::sort(cand.begin(), cand.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  std::vector<cplx> out;
  for (cplx c : cand) {
    if (!out.empty() && std::abs(out.back() - c) < 1e-9) continue;
    out.push_back(c);
    if (static_cast<int>(out.size()) == count) break;
  }
  return out;
}

}  // namespace

std::vector<cplx> StructuredSymbol::xi_degrees(int count) const {
  std::vector<cplx> tops;
  for (const SymbolTerm& t : terms)
    if (auto d = t.fxi.degree()) tops.push_back(*d);
  return union_ladder(tops, count);
}

std::vector<cplx> StructuredSymbol::x_degrees(int count) const {
  std::vector<cplx> tops;
  for (const SymbolTerm& t : terms)
    if (auto d = t.fx.degree()) tops.push_back(*d);
  return union_ladder(tops, count);
}

ScalarExpansion StructuredSymbol::xi_ray_expansion(const Vec3& x,
                                                   const Vec3& omega,
                                                   int len) const {
  ScalarExpansion e;
  for (const SymbolTerm& t : terms) {
    const cplx c = t.coeff * t.fx.eval(x, n);
    if (near_zero(c, 1e-300)) continue;
    e += t.fxi.ray_expansion(omega, n, len).scaled(c);
  }
  e.truncate(len);
  e.normalize();
  return e;
}

ScalarExpansion StructuredSymbol::x_ray_expansion(const Vec3& omega,
                                                  const Vec3& xi,
                                                  int len) const {
  ScalarExpansion e;
  for (const SymbolTerm& t : terms) {
    const cplx c = t.coeff * t.fxi.eval(xi, n);
    if (near_zero(c, 1e-300)) continue;
    e += t.fx.ray_expansion(omega, n, len).scaled(c);
  }
  e.truncate(len);
  e.normalize();
  return e;
}

NestedExpansion StructuredSymbol::joint_ray_expansion(const Vec3& omega_x,
                                                      const Vec3& omega_xi,
                                                      int len) const {
  NestedExpansion e;
  for (const SymbolTerm& t : terms) {
    const ScalarExpansion ex = t.fx.ray_expansion(omega_x, n, len);
    const ScalarExpansion exi =
        t.fxi.ray_expansion(omega_xi, n, len).scaled(t.coeff);
    if (ex.is_zero() || exi.is_zero()) continue;
    NestedExpansion te;
    for (const auto& l : ex.classes) {
      Ladder<ScalarExpansion> nl;
      nl.top = l.top;
      nl.exact = l.exact;
      for (const cplx& c : l.c) nl.c.push_back(exi.scaled(c));
      te.classes.push_back(std::move(nl));
    }
    te.normalize();
    e += te;
  }
  e.truncate(len);
  e.normalize();
  return e;
}

void StructuredSymbol::normalize() {
  std::map<std::string, size_t> seen;
  std::vector<SymbolTerm> merged;
  for (SymbolTerm& t : terms) {
    if (t.fx.is_zero() || t.fxi.is_zero() || t.coeff == cplx(0.0)) continue;
    std::string key = t.fx.signature() + "|" + t.fxi.signature();
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(std::move(key), merged.size());
      merged.push_back(std::move(t));
    } else {
      merged[it->second].coeff += t.coeff;
    }
  }
  double mx = 0.0;
  for (const SymbolTerm& t : merged) mx = std::max(mx, std::abs(t.coeff));
  terms.clear();
  for (SymbolTerm& t : merged)
    if (std::abs(t.coeff) > 1e-14 * mx) terms.push_back(std::move(t));
}

// ---------------------------------------------------------------------------
// Parity classification.

namespace {

// Sign s with f(-y) = s f(y) for every monomial carrier of the component;
// 0 when mixed.
int component_parity_sign(const StructuredSymbol& comp, bool xi_side,
                          int degree) {
  int sign = 0;
  for (const SymbolTerm& t : comp.terms) {
    const Poly& p = xi_side ? t.fxi.poly : t.fx.poly;
    for (const auto& [ai, ac] : p) {
      if (near_zero(ac)) continue;
      const int s = midx_abs(ai) % 2 == 0 ? 1 : -1;
      if (sign == 0)
        sign = s;
      else if (sign != s)
        return 0;
    }
  }
  (void)degree;
  return sign;
}

ParityClass parity_core(const StructuredSymbol& a, bool xi_side, int depth) {
  const auto degs = xi_side ? a.xi_degrees(depth) : a.x_degrees(depth);
  bool any = false;
  bool all_match = true, all_anti = true;
  for (cplx d : degs) {
    if (std::abs(d.imag()) > 1e-9 ||
        std::abs(d.real() - std::round(d.real())) > 1e-9)
      return ParityClass::None;
    const int di = static_cast<int>(std::round(d.real()));
    const StructuredSymbol comp =
        xi_side ? a.xi_component(d) : a.x_component(d);
    if (comp.is_zero()) continue;
    const int s = component_parity_sign(comp, xi_side, di);
    if (s == 0) return ParityClass::None;
    const int want = (di % 2 == 0) ? 1 : -1;  // (-1)^{degree}
    any = true;
    if (s == want)
      all_anti = false;
    else
      all_match = false;
  }
  if (!any) return ParityClass::EvenEven;  // vacuous
  if (all_match) return ParityClass::EvenEven;
  if (all_anti) return ParityClass::EvenOdd;
  return ParityClass::None;
}

}  // namespace

ParityClass parity_check_xi(const StructuredSymbol& a, int depth) {
  return parity_core(a, true, depth);
}

ParityClass parity_check_x(const StructuredSymbol& a, int depth) {
  return parity_core(a, false, depth);
}

const char* parity_name(ParityClass p) {
  switch (p) {
    case ParityClass::EvenEven: return "even-even";
    case ParityClass::EvenOdd: return "even-odd";
    default: return "none";
  }
}

// ---------------------------------------------------------------------------
// MatrixSymbol.

MatrixSymbol::MatrixSymbol(int size, int dim) : k(size), n(dim) {
  if (size < 1 || size > 4)
    throw std::invalid_argument("MatrixSymbol: size must be 1..4");
  e.assign(k * k, StructuredSymbol(dim));
}

MatrixSymbol MatrixSymbol::identity(int size, int dim) {
  MatrixSymbol m(size, dim);
  for (int i = 0; i < size; ++i) m.at(i, i) = StructuredSymbol::constant(dim, 1.0);
  return m;
}

MatrixSymbol MatrixSymbol::from_scalar(const StructuredSymbol& a) {
  MatrixSymbol m(1, a.n);
  m.at(0, 0) = a;
  return m;
}

MatrixSymbol MatrixSymbol::operator+(const MatrixSymbol& o) const {
  MatrixSymbol r(k, n);
  for (int i = 0; i < k * k; ++i) r.e[i] = e[i] + o.e[i];
  return r;
}

MatrixSymbol MatrixSymbol::operator-(const MatrixSymbol& o) const {
  MatrixSymbol r(k, n);
  for (int i = 0; i < k * k; ++i) r.e[i] = e[i] - o.e[i];
  return r;
}

MatrixSymbol MatrixSymbol::operator*(const MatrixSymbol& o) const {
  MatrixSymbol r(k, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      StructuredSymbol s(n);
      for (int l = 0; l < k; ++l) s = s + at(i, l) * o.at(l, j);
      r.at(i, j) = std::move(s);
    }
  return r;
}

MatrixSymbol MatrixSymbol::scaled(cplx s) const {
  MatrixSymbol r = *this;
  for (auto& a : r.e) a = a.scaled(s);
  return r;
}

StructuredSymbol MatrixSymbol::trace() const {
  StructuredSymbol s(n);
  for (int i = 0; i < k; ++i) s = s + at(i, i);
  return s;
}

std::vector<cplx> MatrixSymbol::eval(const Vec3& x, const Vec3& xi) const {
  std::vector<cplx> v(k * k);
  for (int i = 0; i < k * k; ++i) v[i] = e[i].eval(x, xi);
  return v;
}

MatrixSymbol MatrixSymbol::derivative_x(int i) const {
  MatrixSymbol r(k, n);
  for (int j = 0; j < k * k; ++j) r.e[j] = e[j].derivative_x(i);
  return r;
}

MatrixSymbol MatrixSymbol::derivative_xi(int i) const {
  MatrixSymbol r(k, n);
  for (int j = 0; j < k * k; ++j) r.e[j] = e[j].derivative_xi(i);
  return r;
}

// ---------------------------------------------------------------------------
// Builders.

VarFactor bracket_factor(cplx power) {
  VarFactor f = VarFactor::one();
  f.bpow = power;
  return f;
}

VarFactor smoothed_norm_factor(cplx power) {
  VarFactor f = VarFactor::one();
  f.spow = power;
  return f;
}

VarFactor monomial_factor(const MIdx& alpha, cplx c) {
  VarFactor f;
  f.poly[alpha] = c;
  return f;
}

VarFactor norm_power_factor(cplx power) {
  VarFactor f = VarFactor::one();
  f.npow = power;
  return f;
}

VarFactor shell_factor(int d, double r0, double scale) {
  VarFactor f = VarFactor::one();
  f.shells.push_back(Shell{d, r0, scale});
  return f;
}

}  // namespace sgt
