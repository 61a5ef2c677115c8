#pragma once

// Formal truncated expansions  sum_k c_k T^{d - k}  in a large parameter T,
// with complex degrees.  An Expansion is a sum of such ladders with distinct
// degree classes mod 1, closed under +, *, reciprocal and complex powers
// (Neumann/binomial series in the subleading part).  Coefficients are either
// complex numbers or, when nested, Expansions in a second parameter; the
// trait functions below bottom out at cplx.
//
// The point of the engine: restricted to a ray y = T*omega, every symbol
// assembled from weights, monomials and cutoffs has an expansion of this
// shape whose slot of degree nu *is* the value of the degree-nu homogeneous
// component at omega.  Arithmetic on expansions therefore yields exact
// component values for reciprocals and complex powers of symbols, where
// direct numerical extraction would be noisy and slow.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "sgt/core.hpp"

namespace sgt {

inline cplx cbinom(cplx s, int j) {
  cplx r(1.0);
  for (int i = 0; i < j; ++i) r *= (s - double(i)) / double(i + 1);
  return r;
}

// ---------------------------------------------------------------------------
// Coefficient traits, cplx base case.  All of these must be visible before
// the Expansion template is defined (ADL will not look into std for them).

inline cplx coeff_zero(const cplx*) { return cplx(0.0); }
inline cplx coeff_one(const cplx*) { return cplx(1.0); }
inline double coeff_mag(const cplx& c) { return std::abs(c); }
inline bool coeff_is_zero(const cplx& c, double scale) {
  return std::abs(c) <= 1e-12 * std::max(1.0, scale);
}
inline cplx coeff_add(const cplx& a, const cplx& b) { return a + b; }
inline cplx coeff_scale(const cplx& a, cplx s) { return a * s; }
inline cplx coeff_mul(const cplx& a, const cplx& b) { return a * b; }
inline cplx coeff_recip(const cplx& a, int) { return 1.0 / a; }
inline cplx coeff_cpow(const cplx& a, cplx s, int) { return std::pow(a, s); }

constexpr int kFullValid = std::numeric_limits<int>::max() / 4;

// ---------------------------------------------------------------------------
// One ladder: degrees top, top-1, top-2, ...  `exact` means slots beyond the
// stored ones are genuinely zero (finite sum), not merely unknown.

template <class C>
struct Ladder {
  cplx top{0.0, 0.0};
  std::vector<C> c;
  bool exact = false;

  int valid() const { return exact ? kFullValid : static_cast<int>(c.size()); }
  // Degree floor below which slots are unknown (-inf when exact).
  double floor_re() const {
    return exact ? -std::numeric_limits<double>::infinity()
                 : top.real() - (static_cast<int>(c.size()) - 1);
  }
};

// ---------------------------------------------------------------------------

template <class C>
struct Expansion {
  std::vector<Ladder<C>> classes;  // distinct top mod 1, descending Re(top)

  bool is_zero() const { return classes.empty(); }

  static Expansion zero() { return {}; }

  static Expansion monomial(cplx degree, C coeff, bool exact = true) {
    Expansion e;
    Ladder<C> l;
    l.top = degree;
    l.c.push_back(std::move(coeff));
    l.exact = exact;
    e.classes.push_back(std::move(l));
    e.normalize();
    return e;
  }

  double magnitude() const {
    double m = 0.0;
    for (const auto& l : classes)
      for (const auto& co : l.c) m = std::max(m, coeff_mag(co));
    return m;
  }

  // Degree of the leading nonzero slot; throws on the zero expansion.
  cplx top_degree() const {
    if (classes.empty()) throw std::runtime_error("Expansion: zero has no degree");
    return classes.front().top;
  }

  // Pointer to the coefficient of T^degree, nullptr when that slot is a
  // genuine zero; throws if the slot lies below a truncation floor.
  const C* slot_ptr(cplx degree) const {
    for (const auto& l : classes) {
      const cplx d = l.top - degree;
      const double k = std::round(d.real());
      if (std::abs(d.real() - k) < 1e-9 && std::abs(d.imag()) < 1e-9 && k >= 0.0) {
        const int ki = static_cast<int>(k);
        if (ki < static_cast<int>(l.c.size())) return &l.c[ki];
        if (l.exact) return nullptr;
        throw std::runtime_error("Expansion: slot below validity floor");
      }
    }
    return nullptr;
  }

  C slot_at(cplx degree) const {
    const C* p = slot_ptr(degree);
    return p ? *p : coeff_zero(static_cast<const C*>(nullptr));
  }

  // Drop leading zero slots (relative tolerance), merge integer-separated
  // classes, drop empty classes, sort by descending Re(top).
  void normalize() {
    for (size_t i = 0; i < classes.size(); ++i)
      for (size_t j = i + 1; j < classes.size();) {
        if (same_class(classes[i].top, classes[j].top)) {
          classes[i] = merged(classes[i], classes[j]);
          classes.erase(classes.begin() + j);
        } else {
          ++j;
        }
      }
    const double mag = magnitude();
    for (auto& l : classes) {
      size_t lead = 0;
      while (lead < l.c.size() && coeff_is_zero(l.c[lead], mag)) ++lead;
      if (lead > 0) {
        l.c.erase(l.c.begin(), l.c.begin() + lead);
        l.top -= double(lead);
      }
      if (l.exact) {
        while (!l.c.empty() && coeff_is_zero(l.c.back(), mag)) l.c.pop_back();
      }
    }
    classes.erase(std::remove_if(classes.begin(), classes.end(),
                                 [](const Ladder<C>& l) { return l.c.empty(); }),
                  classes.end());
    std::sort(classes.begin(), classes.end(),
              [](const Ladder<C>& a, const Ladder<C>& b) {
                if (a.top.real() != b.top.real()) return a.top.real() > b.top.real();
                return a.top.imag() > b.top.imag();
              });
  }

  void truncate(int len) {
    for (auto& l : classes)
      if (static_cast<int>(l.c.size()) > len) {
        l.c.resize(len);
        l.exact = false;
      }
  }

  Expansion& operator+=(const Expansion& o) {
    for (const auto& l : o.classes) classes.push_back(l);
    normalize();
    return *this;
  }

  Expansion operator+(const Expansion& o) const {
    Expansion r = *this;
    r += o;
    return r;
  }

  Expansion scaled(cplx s) const {
    Expansion r = *this;
    for (auto& l : r.classes)
      for (auto& co : l.c) co = coeff_scale(co, s);
    r.normalize();
    return r;
  }

  Expansion operator-(const Expansion& o) const { return *this + o.scaled(-1.0); }

  // Multiply by T^d.
  Expansion shifted(cplx d) const {
    Expansion r = *this;
    for (auto& l : r.classes) l.top += d;
    return r;
  }

  Expansion operator*(const Expansion& o) const {
    Expansion r;
    for (const auto& a : classes)
      for (const auto& b : o.classes) {
        Ladder<C> p;
        p.top = a.top + b.top;
        p.exact = a.exact && b.exact;
        int nv;
        if (a.exact && b.exact)
          nv = static_cast<int>(a.c.size() + b.c.size()) - 1;
        else if (a.exact)
          nv = b.valid();
        else if (b.exact)
          nv = a.valid();
        else
          nv = std::min(a.valid(), b.valid());
        p.c.assign(nv, coeff_zero(static_cast<const C*>(nullptr)));
        for (int i = 0; i < static_cast<int>(a.c.size()); ++i)
          for (int j = 0; j < static_cast<int>(b.c.size()); ++j)
            if (i + j < nv)
              p.c[i + j] = coeff_add(p.c[i + j], coeff_mul(a.c[i], b.c[j]));
        r.classes.push_back(std::move(p));
      }
    r.normalize();
    return r;
  }

  // 1/this to `len` slots per class.  Requires a strictly dominant leading
  // slot with invertible coefficient (ellipticity in applications).
  Expansion recip(int len) const { return power_core(cplx(-1.0), len, true); }

  // this^s, principal branches down the coefficient tower.
  Expansion cpow(cplx s, int len) const { return power_core(s, len, false); }

  // Diagnostic evaluation at numeric T > 0 (scalar coefficients only).
  cplx eval_scalar(double T) const {
    cplx s(0.0);
    for (const auto& l : classes)
      for (size_t k = 0; k < l.c.size(); ++k)
        if constexpr (std::is_same_v<C, cplx>) s += l.c[k] * rpow(T, l.top - double(k));
    return s;
  }

 private:
  static bool same_class(cplx a, cplx b) {
    const cplx d = a - b;
    return std::abs(d.imag()) < 1e-9 &&
           std::abs(d.real() - std::round(d.real())) < 1e-9;
  }

  static Ladder<C> merged(const Ladder<C>& x, const Ladder<C>& y) {
    const bool x_hi = (x.top - y.top).real() >= -1e-9;
    const Ladder<C>& hi = x_hi ? x : y;
    const Ladder<C>& lo = x_hi ? y : x;
    const int shift = static_cast<int>(std::round((hi.top - lo.top).real()));
    Ladder<C> m;
    m.top = hi.top;
    m.exact = x.exact && y.exact;
    const double fl = std::min(x.floor_re(), y.floor_re());
    int n;
    if (std::isinf(fl))
      n = std::max(static_cast<int>(hi.c.size()),
                   shift + static_cast<int>(lo.c.size()));
    else
      n = static_cast<int>(std::round(m.top.real() - fl)) + 1;
    n = std::max(n, 1);
    m.c.assign(n, coeff_zero(static_cast<const C*>(nullptr)));
    for (int i = 0; i < static_cast<int>(hi.c.size()) && i < n; ++i)
      m.c[i] = coeff_add(m.c[i], hi.c[i]);
    for (int i = 0; i < static_cast<int>(lo.c.size()); ++i)
      if (i + shift < n) m.c[i + shift] = coeff_add(m.c[i + shift], lo.c[i]);
    return m;
  }

  Expansion power_core(cplx s, int len, bool is_recip) const {
    Expansion self = *this;
    self.normalize();
    if (self.classes.empty())
      throw std::runtime_error("Expansion: power of the zero expansion");
    const Ladder<C>& lead = self.classes.front();
    if (self.classes.size() > 1 &&
        self.classes[1].top.real() >= lead.top.real() - 1e-12)
      throw std::runtime_error("Expansion: no strictly dominant leading degree");
    const cplx top0 = lead.top;
    const C& a0 = lead.c.front();

    // lead_inv = a0^{-1} T^{-top0};  v = 1 - lead_inv * self has top(v) < 0.
    Expansion lead_inv = Expansion::monomial(-top0, coeff_recip(a0, len), true);
    Expansion one = Expansion::monomial(
        cplx(0.0), coeff_one(static_cast<const C*>(nullptr)), true);
    Expansion v = one - lead_inv * self;
    v.truncate(len);
    v.normalize();

    Expansion head = is_recip
                         ? lead_inv
                         : Expansion::monomial(s * top0, coeff_cpow(a0, s, len), true);

    // (1 - v)^s = sum_j binom(s, j) (-v)^j;  recip is the case s = -1.
    Expansion acc = one;
    Expansion sum = one;
    double gap = 1.0;
    if (!v.is_zero()) gap = std::max(1e-3, -v.top_degree().real());
    const int jmax = std::min(400, static_cast<int>(std::ceil(len / gap)) + 2);
    const Expansion negv = v.scaled(-1.0);
    for (int j = 1; j <= jmax && !v.is_zero(); ++j) {
      acc = acc * negv;
      acc.truncate(len);
      acc.normalize();
      if (acc.is_zero()) break;
      sum += acc.scaled(cbinom(s, j));
      if (acc.top_degree().real() < -double(len) - 1.0) break;
    }
    Expansion out = head * sum;
    out.truncate(len);
    out.normalize();
    return out;
  }
};

// Trait overloads so Expansions can serve as coefficients of an outer
// Expansion (nested two-variable expansions).

template <class C>
double coeff_mag(const Expansion<C>& e) {
  return e.magnitude();
}
template <class C>
bool coeff_is_zero(const Expansion<C>& e, double scale) {
  return e.magnitude() <= 1e-12 * std::max(1.0, scale);
}
template <class C>
Expansion<C> coeff_zero(const Expansion<C>*) {
  return Expansion<C>::zero();
}
template <class C>
Expansion<C> coeff_one(const Expansion<C>*) {
  return Expansion<C>::monomial(cplx(0.0),
                                coeff_one(static_cast<const C*>(nullptr)), true);
}
template <class C>
Expansion<C> coeff_add(const Expansion<C>& a, const Expansion<C>& b) {
  return a + b;
}
template <class C>
Expansion<C> coeff_scale(const Expansion<C>& a, cplx s) {
  return a.scaled(s);
}
template <class C>
Expansion<C> coeff_mul(const Expansion<C>& a, const Expansion<C>& b) {
  return a * b;
}
template <class C>
Expansion<C> coeff_recip(const Expansion<C>& a, int len) {
  return a.recip(len);
}
template <class C>
Expansion<C> coeff_cpow(const Expansion<C>& a, cplx s, int len) {
  return a.cpow(s, len);
}

using ScalarExpansion = Expansion<cplx>;
using NestedExpansion = Expansion<Expansion<cplx>>;

}  // namespace sgt
