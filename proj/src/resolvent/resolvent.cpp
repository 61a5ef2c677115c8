#include "sgt/resolvent/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "sgt/fpint/fpint.hpp"
#include "sgt/num/quadrature.hpp"

namespace sgt {

namespace {

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

double binom(int a, int b) {
  double r = 1.0;
  for (int i = 1; i <= b; ++i) r = r * double(a - b + i) / double(i);
  return r;
}

cplx inv_pow(cplx z, int p) {
  if (p == 0) return {1.0, 0.0};
  const cplx inv = 1.0 / z;
  cplx r = inv;
  for (int i = 1; i < p; ++i) r *= inv;
  return r;
}

ResolventRational rational_one(const StructuredSymbol& w) {
  ResolventRational r(w);
  r.terms.push_back({StructuredSymbol::constant(w.n, 1.0), 0});
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// rational calculus

ResolventRational ResolventRational::inverse(StructuredSymbol w) {
  ResolventRational r(std::move(w));
  r.terms.push_back({StructuredSymbol::constant(r.base.n, 1.0), 1});
  return r;
}

cplx ResolventRational::eval(const Vec3& x, const Vec3& xi, cplx lambda) const {
  const cplx res = lambda - base.eval(x, xi);
  cplx s{0.0, 0.0};
  for (const RationalTerm& t : terms) s += t.f.eval(x, xi) * inv_pow(res, t.p);
  return s;
}

ResolventRational ResolventRational::operator+(
    const ResolventRational& o) const {
  ResolventRational r = terms.empty() ? o : *this;
  if (!terms.empty()) r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
  r.compact();
  return r;
}

ResolventRational ResolventRational::operator-(
    const ResolventRational& o) const {
  return *this + o.scaled(-1.0);
}

ResolventRational ResolventRational::operator*(
    const ResolventRational& o) const {
  ResolventRational r(terms.empty() ? o.base : base);
  for (const RationalTerm& a : terms)
    for (const RationalTerm& b : o.terms)
      r.terms.push_back({a.f * b.f, a.p + b.p});
  r.compact();
  return r;
}

ResolventRational ResolventRational::mul_symbol(
    const StructuredSymbol& s) const {
  ResolventRational r(base);
  for (const RationalTerm& t : terms) r.terms.push_back({t.f * s, t.p});
  r.compact();
  return r;
}

ResolventRational ResolventRational::scaled(cplx c) const {
  ResolventRational r(base);
  for (const RationalTerm& t : terms) r.terms.push_back({t.f.scaled(c), t.p});
  r.compact();
  return r;
}

// d/dx_i of f (lambda-w)^{-p} = (df) (lambda-w)^{-p} + p f (dw) (lambda-w)^{-p-1}
ResolventRational ResolventRational::derivative_x(int i) const {
  const StructuredSymbol dw = base.derivative_x(i);
  ResolventRational r(base);
  for (const RationalTerm& t : terms) {
    r.terms.push_back({t.f.derivative_x(i), t.p});
    if (t.p > 0 && !dw.is_zero())
      r.terms.push_back({(t.f * dw).scaled(double(t.p)), t.p + 1});
  }
  r.compact();
  return r;
}

ResolventRational ResolventRational::derivative_xi(int i) const {
  const StructuredSymbol dw = base.derivative_xi(i);
  ResolventRational r(base);
  for (const RationalTerm& t : terms) {
    r.terms.push_back({t.f.derivative_xi(i), t.p});
    if (t.p > 0 && !dw.is_zero())
      r.terms.push_back({(t.f * dw).scaled(double(t.p)), t.p + 1});
  }
  r.compact();
  return r;
}

ResolventRational ResolventRational::derivative_x_multi(
    const MIdx& alpha) const {
  ResolventRational r = *this;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < alpha[i]; ++j) r = r.derivative_x(i);
  return r;
}

ResolventRational ResolventRational::derivative_xi_multi(
    const MIdx& alpha) const {
  ResolventRational r = *this;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < alpha[i]; ++j) r = r.derivative_xi(i);
  return r;
}

ResolventRational ResolventRational::derivative_lambda() const {
  ResolventRational r(base);
  for (const RationalTerm& t : terms)
    if (t.p > 0) r.terms.push_back({t.f.scaled(-double(t.p)), t.p + 1});
  r.compact();
  return r;
}

ResolventRational ResolventRational::mul_lambda() const {
  ResolventRational r(base);
  for (const RationalTerm& t : terms) {
    if (t.p == 0)
      throw std::invalid_argument(
          "mul_lambda: plain symbol part has no rational representation");
    r.terms.push_back({t.f, t.p - 1});
    r.terms.push_back({t.f * base, t.p});
  }
  r.compact();
  return r;
}

void ResolventRational::compact() {
  std::map<int, StructuredSymbol> by_p;
  for (RationalTerm& t : terms) {
    auto it = by_p.find(t.p);
    if (it == by_p.end())
      by_p.emplace(t.p, std::move(t.f));
    else
      it->second = it->second + t.f;
  }
  terms.clear();
  for (auto& [p, f] : by_p) {
    f.normalize();
    if (!f.is_zero()) terms.push_back({std::move(f), p});
  }
}

// ---------------------------------------------------------------------------
// parametrix recursion

std::vector<ResolventRational> parametrix_terms(const StructuredSymbol& w,
                                                int N) {
  if (N < 1) throw std::invalid_argument("parametrix_terms: N must be >= 1");
  std::vector<ResolventRational> b;
  b.push_back(ResolventRational::inverse(w));
  for (int k = 1; k < N; ++k) {
    ResolventRational acc(w);
    for (int j = 0; j < k; ++j)
      for (const MIdx& alpha : midx_of_degree(w.n, k - j)) {
        const ResolventRational da = b[j].derivative_xi_multi(alpha);
        if (da.is_zero()) continue;
        const StructuredSymbol dw = w.derivative_x_multi(alpha);
        if (dw.is_zero()) continue;
        const cplx c = minus_i_pow(k - j) / factorial_midx(alpha);
        acc = acc + (da.mul_symbol(dw) * b[0]).scaled(c);
      }
    acc.compact();
    b.push_back(std::move(acc));
  }
  return b;
}

std::vector<ResolventRational> compose_graded(
    const std::vector<ResolventRational>& A,
    const std::vector<ResolventRational>& B) {
  const size_t N = std::min(A.size(), B.size());
  if (N == 0) return {};
  const int n = A[0].base.n;
  std::vector<ResolventRational> out;
  for (size_t g = 0; g < N; ++g) {
    ResolventRational acc(A[0].base);
    for (size_t g1 = 0; g1 <= g; ++g1)
      for (size_t g2 = 0; g1 + g2 <= g; ++g2) {
        const int t = static_cast<int>(g - g1 - g2);
        if (t == 0) {
          acc = acc + A[g1] * B[g2];
          continue;
        }
        for (const MIdx& alpha : midx_of_degree(n, t)) {
          const ResolventRational da = A[g1].derivative_xi_multi(alpha);
          if (da.is_zero()) continue;
          const ResolventRational db = B[g2].derivative_x_multi(alpha);
          if (db.is_zero()) continue;
          acc = acc + (da * db).scaled(minus_i_pow(t) / factorial_midx(alpha));
        }
      }
    acc.compact();
    out.push_back(std::move(acc));
  }
  return out;
}

ResolventRational parametrix_remainder_symbol(const StructuredSymbol& w,
                                              int N) {
  const std::vector<ResolventRational> b = parametrix_terms(w, N);
  ResolventRational B(w);
  for (const ResolventRational& t : b) B = B + t;

  // B # (lambda - w) with the Leibniz sum cut at |alpha| = N + 1.  The
  // derivative pairing must match the recursion (d_xi on the parametrix
  // terms, D_x on w): that is the side on which the cross terms of grade
  // g < N telescope away exactly through b_0 (lambda - w) = 1, leaving only
  // the grade >= N tail.  The constant and first-order parts cancel
  // symbolically against 1.
  ResolventRational r = rational_one(w) - B.mul_lambda() + B.mul_symbol(w);
  for (int t = 1; t <= N + 1; ++t)
    for (const MIdx& alpha : midx_of_degree(w.n, t)) {
      const StructuredSymbol dw = w.derivative_x_multi(alpha);
      if (dw.is_zero()) continue;
      const ResolventRational dB = B.derivative_xi_multi(alpha);
      if (dB.is_zero()) continue;
      r = r + dB.mul_symbol(dw).scaled(minus_i_pow(t) / factorial_midx(alpha));
    }
  r.compact();
  return r;
}

RemainderDecay parametrix_remainder(const StructuredSymbol& w, int N,
                                    const std::vector<cplx>& lambdas) {
  if (lambdas.empty())
    throw std::invalid_argument("parametrix_remainder: no lambda samples");
  const ResolventRational r = parametrix_remainder_symbol(w, N);

  RemainderDecay out;
  out.N = N;

  // largest |lambda| keeps the ray probes inside the resolvent-dominated
  // regime, where the decay order is the one the truncation depth promises
  cplx lam_big = lambdas[0];
  for (const cplx& l : lambdas)
    if (std::abs(l) > std::abs(lam_big)) lam_big = l;

  const Vec3 fix{0.7, 0.0, 0.0};
  const std::vector<double> ray{8, 12, 18, 27, 40, 60};
  std::vector<double> vx, vxi;
  for (double t : ray) {
    const Vec3 probe{t, 0.0, 0.0};
    vxi.push_back(std::abs(r.eval(fix, probe, lam_big)));
    vx.push_back(std::abs(r.eval(probe, fix, lam_big)));
  }
  out.xi = fit_loglog(ray, vxi);
  out.x = fit_loglog(ray, vx);

  // sup over a xi probe set, weighted by <xi>^N so the scan measures the
  // resolvent factor's lambda decay instead of racing it to zero
  const std::vector<double> xiprobes{0, 1, 2, 4, 8, 16, 32};
  std::vector<double> labs, lsup;
  for (const cplx& l : lambdas) {
    double s = 0.0;
    for (double t : xiprobes) {
      const Vec3 probe{t, 0.0, 0.0};
      const double wgt = std::pow(std::sqrt(1.0 + t * t), double(N));
      s = std::max(s, wgt * std::abs(r.eval(fix, probe, l)));
    }
    labs.push_back(std::abs(l));
    lsup.push_back(s);
  }
  out.lam = fit_loglog(labs, lsup);

  out.xi_ok = out.xi.ok && out.xi.residual < 0.2;
  out.x_ok = out.x.ok && out.x.residual < 0.2;
  out.lam_ok = out.lam.ok && out.lam.residual < 0.2;
  return out;
}

// ---------------------------------------------------------------------------
// sigma-form parametrix for homogeneous data

namespace {

std::vector<Vec3> sphere_dirs(int n) {
  std::vector<Vec3> out;
  if (n == 1) {
    out.push_back({1, 0, 0});
    out.push_back({-1, 0, 0});
    return out;
  }
  if (n == 2) {
    for (int k = 0; k < 12; ++k) {
      const double t = 2.0 * M_PI * k / 12.0;
      out.push_back({std::cos(t), std::sin(t), 0});
    }
    return out;
  }
  for (int i = 0; i < 3; ++i)
    for (double s : {1.0, -1.0}) {
      Vec3 v{0, 0, 0};
      v[i] = s;
      out.push_back(v);
    }
  const double d = 1.0 / std::sqrt(3.0);
  for (double s0 : {1.0, -1.0})
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0}) out.push_back({s0 * d, s1 * d, s2 * d});
  return out;
}

std::vector<Vec3> x_probes(int n) {
  const std::vector<double> radii{0, 0.5, 1, 2, 4, 8, 16, 64, 256};
  std::vector<Vec3> out;
  for (double r : radii) {
    if (r == 0) {
      out.push_back({0, 0, 0});
      continue;
    }
    for (const Vec3& d : sphere_dirs(n)) {
      Vec3 v{0, 0, 0};
      for (int i = 0; i < 3; ++i) v[i] = r * d[i];
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace

std::vector<ResolventRational> sigma_parametrix_terms(
    const std::vector<StructuredSymbol>& comps, const Sector& sector, int I) {
  if (comps.empty())
    throw std::invalid_argument("sigma_parametrix_terms: no components");
  if (I < 1) throw std::invalid_argument("sigma_parametrix_terms: I must be >= 1");
  const int n = comps[0].n;

  // spectral pre-check: the top component must stay clear of the sector on
  // the sphere (homogeneity extends this to every |xi| along each ray)
  for (const Vec3& x : x_probes(n))
    for (const Vec3& om : sphere_dirs(n)) {
      const cplx v = comps[0].eval(x, om);
      if (std::abs(v) < 1e-12 || sector.contains(v))
        throw std::domain_error(
            "sigma_parametrix_terms: principal part meets the spectral "
            "sector on the unit sphere");
    }

  std::vector<ResolventRational> p;
  p.push_back(ResolventRational::inverse(comps[0]));
  for (int i = 1; i < I; ++i) {
    ResolventRational acc(comps[0]);
    for (int j = 0; j < i; ++j)
      for (size_t l = 0; l < comps.size(); ++l) {
        const int t = i - j - static_cast<int>(l);
        if (t < 0) continue;
        if (t == 0) {
          if (l == 0) continue;  // j + 0 + 0 = i contradicts j < i
          acc = acc + (p[j].mul_symbol(comps[l]) * p[0]);
          continue;
        }
        for (const MIdx& alpha : midx_of_degree(n, t)) {
          const ResolventRational da = p[j].derivative_xi_multi(alpha);
          if (da.is_zero()) continue;
          const StructuredSymbol dw = comps[l].derivative_x_multi(alpha);
          if (dw.is_zero()) continue;
          const cplx c = minus_i_pow(t) / factorial_midx(alpha);
          acc = acc + (da.mul_symbol(dw) * p[0]).scaled(c);
        }
      }
    acc.compact();
    p.push_back(std::move(acc));
  }
  return p;
}

// ---------------------------------------------------------------------------
// limit symbols along a sigma-ray

LimitProbe limit_symbol(const ResolventRational& p, double mu, cplx d, int j,
                        double psi, const Vec3& x, const Vec3& xi) {
  const auto g = [&](double t) -> cplx {
    // z = t e^{-i psi}, sigma = 1/z, lambda = sigma^mu on the ray
    const cplx zd = std::exp(d * cplx(std::log(t), -psi));
    const cplx lambda = std::polar(std::pow(t, -mu), mu * psi);
    return zd * p.eval(x, xi, lambda);
  };

  // j-th central difference in t, rotated back onto the z-ray
  const cplx rot = std::polar(1.0, double(j) * psi);
  const auto deriv = [&](double t0) -> cplx {
    const double h = t0 / 4.0;
    cplx s{0.0, 0.0};
    for (int m = 0; m <= j; ++m) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      s += sign * binom(j, m) * g(t0 + (0.5 * j - m) * h);
    }
    return rot * s / std::pow(h, double(j));
  };

  std::vector<cplx> seq;
  double t0 = 0.4;
  for (int i = 0; i < 6; ++i, t0 *= 0.5) seq.push_back(deriv(t0));

  LimitProbe out;
  const LimitResult lim = richardson(seq, 2.0, {1, 2, 3, 4});
  out.value = lim.value;
  out.err = lim.err;
  out.converged = std::isfinite(lim.value.real()) &&
                  std::isfinite(lim.value.imag()) &&
                  lim.err <= 1e-6 * std::max(1.0, std::abs(lim.value));
  return out;
}

// ---------------------------------------------------------------------------
// regularized trace of a rational

namespace {

// x-expansion ladder of a rational along a ray: with the base split as
// w = w0 + delta, delta = sum_{m>=1} r^{-m} w_{-m} (exact homogeneous
// components), the resolvent powers expand through
//   (lambda - w0 - delta)^{-p} = sum_j C(p+j-1, j) delta^j (lambda-w0)^{-p-j}
// and the numerator components convolve in.  Entry m collects the exact
// coefficient of r^{-m}: a rational over the frozen base w0 whose symbols
// are x-homogeneous (evaluate at a unit vector for the angular value).
std::map<long, StructuredSymbol> x_parts(const StructuredSymbol& s,
                                         int depth) {
  std::map<long, StructuredSymbol> out;
  for (const cplx& d : s.x_degrees(depth + 1)) {
    if (d.real() > 1e-9 || std::abs(d.imag()) > 1e-9 ||
        std::abs(d.real() - std::round(d.real())) > 1e-9)
      throw std::invalid_argument(
          "tr_rational: x-expansion needs integer degrees <= 0");
    const long m = std::lround(-d.real());
    if (m > depth) continue;
    StructuredSymbol c = s.x_component(d);
    if (!c.is_zero()) out.emplace(m, std::move(c));
  }
  return out;
}

std::map<long, ResolventRational> rational_x_ladder(const ResolventRational& C,
                                                    int depth) {
  const int n = C.base.n;
  const std::map<long, StructuredSymbol> wparts = x_parts(C.base, depth);
  StructuredSymbol w0 = StructuredSymbol::zero(n);
  if (auto it = wparts.find(0); it != wparts.end()) w0 = it->second;

  // powers of delta, truncated at r^{-depth}
  std::vector<std::map<long, StructuredSymbol>> dpow(1);
  dpow[0].emplace(0, StructuredSymbol::constant(n, 1.0));
  for (int j = 1; j <= depth; ++j) {
    std::map<long, StructuredSymbol> next;
    for (const auto& [m1, s1] : dpow[j - 1])
      for (const auto& [m2, s2] : wparts) {
        if (m2 == 0) continue;
        const long m = m1 + m2;
        if (m > depth) continue;
        StructuredSymbol prod = s1 * s2;
        auto it = next.find(m);
        if (it == next.end())
          next.emplace(m, std::move(prod));
        else
          it->second = it->second + prod;
      }
    dpow.push_back(std::move(next));
  }

  std::map<long, ResolventRational> ladder;
  for (const RationalTerm& t : C.terms) {
    const std::map<long, StructuredSymbol> fparts = x_parts(t.f, depth);
    for (int j = 0; j <= depth; ++j) {
      const double cj = binom(t.p + j - 1, j);
      for (const auto& [md, sd] : dpow[j])
        for (const auto& [mf, sf] : fparts) {
          const long m = md + mf;
          if (m > depth) continue;
          auto it = ladder.find(m);
          if (it == ladder.end()) it = ladder.emplace(m, ResolventRational(w0)).first;
          it->second.terms.push_back({(sf * sd).scaled(cj), t.p + j});
        }
    }
  }
  for (auto& [m, r] : ladder) r.compact();
  return ladder;
}

cplx xi_integral(const ResolventRational& C, const Vec3& x, cplx lambda,
                 double xi_scale, double tol) {
  const double s = std::max(1.0, xi_scale);
  const QuadResult q = integrate_line(
      [&](double e) -> cplx {
        return C.eval(x, Vec3{s * e, 0.0, 0.0}, lambda) * s;
      },
      tol);
  return q.value / (2.0 * M_PI);
}

}  // namespace

TraceResult tr_rational(const ResolventRational& C, cplx lambda, int depth,
                        cplx prescale, double xi_scale) {
  if (C.base.n != 1)
    throw std::invalid_argument("tr_rational: only n = 1 is supported");
  for (const RationalTerm& t : C.terms)
    if (t.p == 0 && !t.f.is_zero())
      throw std::invalid_argument(
          "tr_rational: plain symbol part is not integrable in xi");
  for (const SymbolTerm& t : C.base.terms)
    for (const Shell& sh : t.fx.shells)
      if (sh.scale > 8.0)
        throw std::invalid_argument(
            "tr_rational: excision shell wider than the finite-part cap");

  const ResolventRational Cs = C.scaled(prescale);
  const std::map<long, ResolventRational> ladder =
      rational_x_ladder(Cs, depth);

  RadialSymbol1V S;
  S.n = 1;
  for (int m = 0; m <= depth; ++m) S.degrees.push_back(cplx(-double(m), 0.0));
  S.eval = [&Cs, lambda, xi_scale](const Vec3& y) -> cplx {
    return xi_integral(Cs, y, lambda, xi_scale, 1e-9);
  };
  auto cache = std::make_shared<std::map<std::pair<int, int>, cplx>>();
  S.comp = [&ladder, lambda, xi_scale, cache](int k, const Vec3& om) -> cplx {
    const int sgn = om[0] < 0 ? -1 : 1;
    const auto key = std::make_pair(k, sgn);
    if (auto it = cache->find(key); it != cache->end()) return it->second;
    cplx v{0.0, 0.0};
    if (auto it = ladder.find(long(k)); it != ladder.end())
      v = xi_integral(it->second, Vec3{double(sgn), 0.0, 0.0}, lambda,
                      xi_scale, 1e-9);
    (*cache)[key] = v;
    return v;
  };

  FpOptions opt;
  opt.tol = 1e-9;
  const FpBreakdown q = fp_integral(S, opt);

  TraceResult out;
  out.value = q.value / prescale;
  out.err = q.err / std::abs(prescale);
  out.route = "resolvent-ladder";
  return out;
}

// ---------------------------------------------------------------------------
// large-lambda asymptotics

namespace {

struct LadderBasis {
  std::vector<double> exponents;
  std::vector<bool> with_log;
};

// Ladder exponents above the truncation floor (n - N)/mu - k, with a margin
// so no kept column sits inside the truncation error at lambda = lo.
LadderBasis ladder_basis(int n, double mu, int k, int N, double lo,
                         double hi) {
  const double floor_e = (double(n) - double(N)) / mu - double(k);
  const double margin = 1.0 / std::max(1.0, std::log10(lo));
  const double keep = floor_e + margin - 1e-12;

  std::map<long, std::pair<double, bool>> cols;  // round(e*2^20) -> (e, log?)
  const auto put = [&](double e, bool lg) {
    const long key = std::lround(e * 1048576.0) * 2 + (lg ? 1 : 0);
    cols.emplace(key, std::make_pair(e, lg));
  };
  for (int j = 0;; ++j) {
    const double e = (double(n) - double(j)) / mu - double(k);
    if (e < keep) break;
    put(e, false);
  }
  for (int j = 0;; ++j) {
    const double e = -double(j) - double(k);
    if (e < keep) break;
    put(e, false);
    put(e, true);
  }

  LadderBasis b;
  std::vector<std::pair<double, bool>> v;
  for (auto& [key, c] : cols) v.push_back(c);
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return !a.second && b.second;
  });
  for (auto& [e, lg] : v) {
    b.exponents.push_back(e);
    b.with_log.push_back(lg);
  }

  double gap = 1e9;
  for (size_t i = 0; i + 1 < b.exponents.size(); ++i) {
    const double d = b.exponents[i] - b.exponents[i + 1];
    if (d > 1e-9) gap = std::min(gap, d);
  }
  const double decades = std::log10(hi / lo);
  double needed = b.exponents.size() > 1 ? 1.0 / gap : 1.0;
  for (bool lg : b.with_log)
    if (lg) needed = std::max(needed, 2.0);
  if (decades + 1e-9 < needed) {
    std::ostringstream msg;
    msg << "lambda grid spans " << decades << " decades but separating the "
        << "exponent ladder needs at least " << needed;
    throw std::invalid_argument(msg.str());
  }
  return b;
}

// Joint least-squares fit of complex coefficients across all rays, each
// residual weighted relatively.
AsymptoticFit fit_ladder(const LadderBasis& basis,
                         const std::vector<double>& mags,
                         const std::vector<double>& args,
                         const std::vector<cplx>& values, int per_ray) {
  const size_t M = values.size();
  const size_t J = basis.exponents.size();
  if (2 * M < 2 * J + 2)
    throw std::invalid_argument(
        "lambda grid too short for the exponent ladder: need more points "
        "than coefficients");

  std::vector<std::vector<double>> A(2 * M, std::vector<double>(2 * J, 0.0));
  std::vector<double> rhs(2 * M, 0.0);
  for (size_t i = 0; i < M; ++i) {
    const cplx loglam(std::log(mags[i]), args[i]);
    const double wgt = 1.0 / std::max(std::abs(values[i]), 1e-300);
    for (size_t c = 0; c < J; ++c) {
      cplx phi = std::exp(basis.exponents[c] * loglam);
      if (basis.with_log[c]) phi *= loglam;
      A[2 * i][2 * c] = wgt * phi.real();
      A[2 * i][2 * c + 1] = -wgt * phi.imag();
      A[2 * i + 1][2 * c] = wgt * phi.imag();
      A[2 * i + 1][2 * c + 1] = wgt * phi.real();
    }
    rhs[2 * i] = wgt * values[i].real();
    rhs[2 * i + 1] = wgt * values[i].imag();
  }
  const std::vector<double> sol = solve_least_squares(A, rhs);
  if (sol.empty())
    throw std::invalid_argument(
        "exponent ladder is numerically collinear on this lambda grid");

  AsymptoticFit fit;
  fit.exponents = basis.exponents;
  fit.with_log = basis.with_log;
  for (size_t c = 0; c < J; ++c)
    fit.coefficients.push_back(cplx(sol[2 * c], sol[2 * c + 1]));

  double rss = 0.0;
  for (size_t i = 0; i < M; ++i) {
    const cplx loglam(std::log(mags[i]), args[i]);
    cplx model{0.0, 0.0};
    for (size_t c = 0; c < J; ++c) {
      cplx phi = std::exp(basis.exponents[c] * loglam);
      if (basis.with_log[c]) phi *= loglam;
      model += fit.coefficients[c] * phi;
    }
    const double rel =
        std::abs(model - values[i]) / std::max(std::abs(values[i]), 1e-300);
    rss += rel * rel;
  }
  fit.residual = std::sqrt(rss / double(M));
  fit.valid = fit.residual < 1e-3;

  // free slope over the largest lambdas of the first ray
  const int tail = std::min(per_ray, 5);
  std::vector<double> tl, tv;
  for (int i = per_ray - tail; i < per_ray; ++i) {
    tl.push_back(mags[i]);
    tv.push_back(std::abs(values[i]));
  }
  fit.tail_slope = fit_loglog(tl, tv).slope;
  return fit;
}

struct GridPoints {
  std::vector<double> mags, args;
};

GridPoints grid_points(const LambdaGrid& grid, const Sector& sector) {
  if (!(grid.hi > grid.lo) || grid.lo <= 0.0 || grid.count < 2)
    throw std::invalid_argument("lambda grid must satisfy 0 < lo < hi, count >= 2");
  std::vector<double> rays = grid.args;
  if (rays.empty()) {
    const double off = (M_PI - sector.theta) / 2.0;
    rays = {M_PI, M_PI - off, M_PI + off};
  }
  GridPoints p;
  const double step = std::log(grid.hi / grid.lo) / double(grid.count - 1);
  for (double arg : rays)
    for (int i = 0; i < grid.count; ++i) {
      p.mags.push_back(grid.lo * std::exp(step * double(i)));
      p.args.push_back(arg);
    }
  return p;
}

ResolventRational graded_power_sum(const StructuredSymbol& w, int k, int N) {
  const std::vector<ResolventRational> B = parametrix_terms(w, N);
  std::vector<ResolventRational> P = B;
  for (int i = 1; i < k; ++i) P = compose_graded(P, B);
  ResolventRational C(w);
  for (const ResolventRational& g : P) C = C + g;
  C.compact();
  return C;
}

StructuredSymbol certified_excision(const StructuredSymbol& a,
                                    const Sector& sector) {
  const EllipticityCertificate cert = lambda_elliptic_check(a, sector);
  if (!cert.elliptic) {
    std::ostringstream msg;
    msg << "symbol is not elliptic with respect to the sector (spectral "
        << "distance " << cert.min_distance << ")";
    throw std::domain_error(msg.str());
  }
  return tilde_modify(a, sector).symbol;
}

}  // namespace

AsymptoticFit tr_resolvent_asympt(const StructuredSymbol& a, double mu, int k,
                                  const Sector& sector, int N,
                                  const LambdaGrid& grid) {
  if (double(k) * mu <= double(a.n) + 1e-9)
    throw std::invalid_argument("tr_resolvent_asympt: requires k * mu > n");
  const StructuredSymbol w = certified_excision(a, sector);
  const LadderBasis basis = ladder_basis(a.n, mu, k, N, grid.lo, grid.hi);
  const GridPoints pts = grid_points(grid, sector);
  const ResolventRational C = graded_power_sum(w, k, N);

  std::vector<cplx> values;
  for (size_t i = 0; i < pts.mags.size(); ++i) {
    const cplx lambda = std::polar(pts.mags[i], pts.args[i]);
    const double prescale =
        std::pow(pts.mags[i], double(k) - double(a.n) / mu);
    const double xs = std::pow(pts.mags[i], 1.0 / mu);
    values.push_back(tr_rational(C, lambda, 7, prescale, xs).value);
  }
  return fit_ladder(basis, pts.mags, pts.args, values, grid.count);
}

AsymptoticFit kernel_resolvent_asympt(const StructuredSymbol& a, double mu,
                                      int k, const Sector& sector, int N,
                                      const Vec3& x, const LambdaGrid& grid) {
  if (a.n != 1)
    throw std::invalid_argument("kernel_resolvent_asympt: only n = 1");
  if (double(k) * mu <= double(a.n) + 1e-9)
    throw std::invalid_argument("kernel_resolvent_asympt: requires k * mu > n");
  const StructuredSymbol w = certified_excision(a, sector);
  const LadderBasis basis = ladder_basis(a.n, mu, k, N, grid.lo, grid.hi);
  const GridPoints pts = grid_points(grid, sector);
  const ResolventRational C = graded_power_sum(w, k, N);

  std::vector<cplx> values;
  for (size_t i = 0; i < pts.mags.size(); ++i) {
    const cplx lambda = std::polar(pts.mags[i], pts.args[i]);
    const double xs = std::pow(pts.mags[i], 1.0 / mu);
    values.push_back(xi_integral(C, x, lambda, xs, 1e-10));
  }
  return fit_ladder(basis, pts.mags, pts.args, values, grid.count);
}

}  // namespace sgt
