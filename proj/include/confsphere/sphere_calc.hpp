#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "confsphere/ambient_poly.hpp"

namespace confsphere {

/// Volume of the unit sphere S^n in R^{n+1}.
double sphere_volume(int n);

/// Exact integral over S^n, stored as a rational multiple of the sphere volume.
struct SphereIntegral {
  int n = 0;
  Rational coefficient = 0;

  double value() const { return to_double(coefficient) * sphere_volume(n); }
  /// "q * omega_n", or "0".
  std::string to_string() const;
  friend bool operator==(const SphereIntegral& a, const SphereIntegral& b) {
    return a.n == b.n && a.coefficient == b.coefficient;
  }
};

/// Polynomial function on S^n in canonical form: a finite sum of homogeneous
/// harmonic polynomials, keyed by degree. Zero components are never stored, so
/// two functions agree on the sphere exactly when they compare equal.
class SphereFunction {
 public:
  explicit SphereFunction(int n = 5);

  static SphereFunction constant(int n, const Rational& c);
  /// The restriction of x^i, which is already harmonic of degree one.
  static SphereFunction coordinate(int n, int i);
  /// Builds a function directly from harmonic components; each entry is
  /// checked to be homogeneous of the stated degree and harmonic.
  static SphereFunction from_components(int n, const std::map<int, AmbientPoly>& components);

  int dimension() const { return n_; }
  bool is_zero() const { return comps_.empty(); }
  int degree() const { return comps_.empty() ? -1 : comps_.rbegin()->first; }
  const std::map<int, AmbientPoly>& components() const { return comps_; }
  /// The canonical ambient representative, the sum of all components.
  AmbientPoly ambient() const;

  /// Multiplies the degree-l component by eigen(l); zero products are dropped.
  template <class F>
  SphereFunction spectral_scale(F eigen) const {
    SphereFunction out(n_);
    for (const auto& [l, h] : comps_) {
      const Rational s = eigen(l);
      if (s != 0) out.comps_.emplace(l, h * s);
    }
    return out;
  }

  SphereFunction operator-() const;
  SphereFunction& operator+=(const SphereFunction& o);
  SphereFunction& operator-=(const SphereFunction& o);
  SphereFunction& operator*=(const Rational& c);
  friend SphereFunction operator+(SphereFunction a, const SphereFunction& b) { return a += b; }
  friend SphereFunction operator-(SphereFunction a, const SphereFunction& b) { return a -= b; }
  friend SphereFunction operator*(SphereFunction a, const Rational& c) { return a *= c; }
  friend SphereFunction operator*(const Rational& c, SphereFunction a) { return a *= c; }
  friend bool operator==(const SphereFunction& a, const SphereFunction& b) {
    return a.n_ == b.n_ && a.comps_ == b.comps_;
  }

  double evaluate(std::span<const double> point) const;

  /// Pairs (degree, polynomial text), ascending in degree.
  std::vector<std::pair<int, std::string>> serialize() const;
  static SphereFunction deserialize(int n, const std::vector<std::pair<int, std::string>>& data);
  std::string to_string() const;

 private:
  friend SphereFunction reduce(const AmbientPoly& p);
  void check_same_sphere(const SphereFunction& o) const;

  int n_;
  std::map<int, AmbientPoly> comps_;
};

/// Canonical form of the restriction of p to S^{nvars-1}.
SphereFunction reduce(const AmbientPoly& p);

SphereFunction laplace_beltrami(const SphereFunction& f);
SphereFunction grad_inner(const SphereFunction& u, const SphereFunction& v);
/// delta(f du) = <grad f, grad u> + f Lap u.
SphereFunction divergence_term(const SphereFunction& f, const SphereFunction& u);
SphereFunction multiply(const SphereFunction& u, const SphereFunction& v);
SphereIntegral integrate(const SphereFunction& f);

/// Exact integral over S^{nvars-1} of the restriction of p.
SphereIntegral integrate_restriction(const AmbientPoly& p);

/// Calculus on arbitrary ambient representatives. Each result is again an
/// ambient polynomial whose restriction is the stated sphere quantity; nothing
/// is reduced, so long compositions stay cheap and are canonicalised once.
namespace rep {

/// Laplace-Beltrami of the restriction: sum_d (Lap P_d - d(d+n-1) P_d).
AmbientPoly laplace_beltrami(const AmbientPoly& p);
/// <grad u, grad v> on the sphere: ambient pairing minus radial parts.
AmbientPoly grad_inner(const AmbientPoly& u, const AmbientPoly& v);
/// Sum of weighted tangential pairings, accumulated in one pass.
AmbientPoly grad_inner_sum(const std::vector<std::pair<const AmbientPoly*, const AmbientPoly*>>& pairs,
                           const std::vector<Rational>& weights);
AmbientPoly divergence_term(const AmbientPoly& f, const AmbientPoly& u);

}  // namespace rep

}  // namespace confsphere
