#pragma once

// Closed symbol algebra for SG-type symbols a(x, xi) on R^n x R^n, n <= 3.
//
// A symbol is a finite sum of separable terms
//
//   c * Fx(x) * Fxi(xi),
//
// where each single-variable factor is a product
//
//   (sum_alpha c_alpha y^alpha) * <y>^b * [y]^s * |y|^h * prod chi^{(d)}(|y|)
//
// of a polynomial, powers of the Japanese bracket <y> = sqrt(1+|y|^2), the
// smoothed norm [y], the plain norm |y| (only as a carrier of homogeneous
// components), and derivatives of the radial excision profile chi.  The
// class is closed under +, *, and partial derivatives in x and xi (except
// for derivatives of [y], which have no finite closed family here and are
// rejected), and every member has exactly computable polyhomogeneous
// components in each variable.

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sgt/core.hpp"
#include "sgt/num/profiles.hpp"
#include "sgt/num/series.hpp"

namespace sgt {

using MIdx = std::array<int, 3>;

inline int midx_abs(const MIdx& a) { return a[0] + a[1] + a[2]; }

struct MIdxLess {
  bool operator()(const MIdx& a, const MIdx& b) const {
    if (a[0] != b[0]) return a[0] < b[0];
    if (a[1] != b[1]) return a[1] < b[1];
    return a[2] < b[2];
  }
};

using Poly = std::map<MIdx, cplx, MIdxLess>;

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_derive(const Poly& a, int i);
Poly poly_shift(const Poly& a, const MIdx& by, cplx scale = 1.0);
cplx poly_eval(const Poly& a, const Vec3& y, int n);
int poly_maxdeg(const Poly& a);

// One derivative order of the excision profile appearing as a factor.
struct Shell {
  int d = 0;
  double r0 = 0.5;
  double scale = 1.0;  // profile argument is |y| / scale
  bool operator<(const Shell& o) const {
    if (d != o.d) return d < o.d;
    if (r0 != o.r0) return r0 < o.r0;
    return scale < o.scale;
  }
  bool operator==(const Shell& o) const {
    return d == o.d && r0 == o.r0 && scale == o.scale;
  }
};

struct VarFactor {
  Poly poly;  // empty map means the zero factor
  cplx bpow{0.0, 0.0};   // exponent of <y>
  cplx spow{0.0, 0.0};   // exponent of the smoothed norm [y]
  cplx npow{0.0, 0.0};   // exponent of |y|
  std::vector<Shell> shells;

  static VarFactor one();
  static VarFactor constant(cplx c);

  bool is_zero() const { return poly.empty(); }
  bool is_poly() const {
    return bpow == cplx(0.0) && spow == cplx(0.0) && npow == cplx(0.0) &&
           shells.empty();
  }
  // True when some chi^{(d)}, d >= 1, multiplies the factor: the factor then
  // vanishes identically outside the unit ball.
  bool compactly_supported() const;

  cplx eval(const Vec3& y, int n) const;
  // Declared degree maxdeg(poly) + b + s + h; nullopt for the zero factor or
  // a compactly supported one.
  std::optional<cplx> degree() const;

  VarFactor operator*(const VarFactor& o) const;
  // d/dy_i as a finite sum of factors (throws if spow != 0).
  std::vector<VarFactor> derivative(int i) const;

  // Expansion along the ray y = T*omega, valid for T >= 1, `len` slots.
  ScalarExpansion ray_expansion(const Vec3& omega, int n, int len) const;

  // Exact homogeneous components: list of (degree, factor) with the factor
  // of pure poly * |y|^p form, degrees descending, count slots deep.
  std::vector<std::pair<cplx, VarFactor>> components(int count) const;
  // The factors making up the component of one given degree (grouped by
  // monomial degree; empty when the degree is off the ladder).
  std::vector<std::pair<cplx, VarFactor>> component_groups(cplx degree) const;

  // Canonical key for term merging.
  std::string signature() const;
};

struct SymbolTerm {
  cplx coeff{1.0, 0.0};
  VarFactor fx = VarFactor::one();
  VarFactor fxi = VarFactor::one();
};

class StructuredSymbol {
 public:
  int n = 1;
  std::vector<SymbolTerm> terms;

  StructuredSymbol() = default;
  explicit StructuredSymbol(int dim) : n(dim) {}

  static StructuredSymbol zero(int n) { return StructuredSymbol(n); }
  static StructuredSymbol constant(int n, cplx c);
  // a(x, xi) = f(x) resp. g(xi) from a single factor.
  static StructuredSymbol from_x_factor(int n, VarFactor f, cplx coeff = 1.0);
  static StructuredSymbol from_xi_factor(int n, VarFactor f, cplx coeff = 1.0);

  bool is_zero() const { return terms.empty(); }
  cplx eval(const Vec3& x, const Vec3& xi) const;

  StructuredSymbol operator+(const StructuredSymbol& o) const;
  StructuredSymbol operator-(const StructuredSymbol& o) const;
  StructuredSymbol operator*(const StructuredSymbol& o) const;
  StructuredSymbol scaled(cplx s) const;

  StructuredSymbol derivative_x(int i) const;
  StructuredSymbol derivative_xi(int i) const;
  StructuredSymbol derivative_x_multi(const MIdx& alpha) const;
  StructuredSymbol derivative_xi_multi(const MIdx& alpha) const;

  bool is_poly_x() const;
  bool is_poly_xi() const;
  int poly_deg_x() const;   // meaningful when is_poly_x()
  int poly_deg_xi() const;

  // Declared bi-order (mu, m) as the componentwise max over terms that are
  // not compactly supported in the respective variable; nullopt if every
  // term decays rapidly there.
  std::optional<cplx> order_xi() const;
  std::optional<cplx> order_x() const;

  // Exact homogeneous component of the given degree, as a symbol whose
  // xi-factors (resp. x-factors) are pure poly * |.|^p carriers.
  StructuredSymbol xi_component(cplx degree) const;
  StructuredSymbol x_component(cplx degree) const;
  StructuredSymbol mixed_component(cplx xi_degree, cplx x_degree) const;

  // Union degree ladders, descending by real part (first `count` entries).
  std::vector<cplx> xi_degrees(int count) const;
  std::vector<cplx> x_degrees(int count) const;

  // Restriction expansions (exact slot <-> component correspondence).
  ScalarExpansion xi_ray_expansion(const Vec3& x, const Vec3& omega,
                                   int len) const;
  ScalarExpansion x_ray_expansion(const Vec3& omega, const Vec3& xi,
                                  int len) const;
  // Outer variable x, coefficients are xi-expansions.
  NestedExpansion joint_ray_expansion(const Vec3& omega_x, const Vec3& omega_xi,
                                      int len) const;

  void normalize();
};

// Parity of the homogeneous components against the reflection y -> -y.
// "even-even" means the degree-(d) component satisfies
// f(-y) = (-1)^{d} f(y) for every component in the inspected range,
// "even-odd" the opposite sign throughout, "none" anything else.
enum class ParityClass { EvenEven, EvenOdd, None };

ParityClass parity_check_xi(const StructuredSymbol& a, int depth = 6);
ParityClass parity_check_x(const StructuredSymbol& a, int depth = 6);

const char* parity_name(ParityClass p);

// ---------------------------------------------------------------------------
// Square matrix of structured symbols, size k <= 4.

class MatrixSymbol {
 public:
  int k = 1;
  int n = 1;
  std::vector<StructuredSymbol> e;  // row-major, k*k entries

  MatrixSymbol() = default;
  MatrixSymbol(int size, int dim);
  static MatrixSymbol identity(int size, int dim);
  static MatrixSymbol from_scalar(const StructuredSymbol& a);

  StructuredSymbol& at(int i, int j) { return e[i * k + j]; }
  const StructuredSymbol& at(int i, int j) const { return e[i * k + j]; }

  MatrixSymbol operator+(const MatrixSymbol& o) const;
  MatrixSymbol operator-(const MatrixSymbol& o) const;
  MatrixSymbol operator*(const MatrixSymbol& o) const;
  MatrixSymbol scaled(cplx s) const;
  StructuredSymbol trace() const;

  std::vector<cplx> eval(const Vec3& x, const Vec3& xi) const;  // k*k values
  MatrixSymbol derivative_x(int i) const;
  MatrixSymbol derivative_xi(int i) const;
};

// Common building blocks.
VarFactor bracket_factor(cplx power);                    // <y>^p
VarFactor smoothed_norm_factor(cplx power);              // [y]^p
VarFactor monomial_factor(const MIdx& alpha, cplx c = 1.0);
VarFactor norm_power_factor(cplx power);                 // |y|^p (carrier)
VarFactor shell_factor(int d, double r0 = 0.5,           // chi^{(d)}(|y|/scale)
                       double scale = 1.0);

}  // namespace sgt
