#pragma once

#include <functional>
#include <string>
#include <vector>

#include "confsphere/sphere_calc.hpp"

namespace confsphere {

/// Order 2k of a GJMS operator on S^n; requires 0 <= k and 2k < n.
class GjmsOrder {
 public:
  GjmsOrder(int n, int k);
  int n() const { return n_; }
  int k() const { return k_; }

 private:
  int n_;
  int k_;
};

/// prod_{j=1..k} (l(l+n-1) + (n-2j)(n+2j-2)/4); equal to Gamma(l+n/2+k)/Gamma(l+n/2-k).
Rational gjms_eigenvalue(int l, const GjmsOrder& order);
/// Spectral route: scales each harmonic component by its eigenvalue.
SphereFunction gjms_apply(const SphereFunction& u, const GjmsOrder& order);
/// Product route: prod_j (-Lap + (n-2j)(n+2j-2)/4) applied factor by factor.
SphereFunction gjms_apply_composed(const SphereFunction& u, const GjmsOrder& order);
SphereIntegral gjms_energy(const SphereFunction& u, const GjmsOrder& order);

/// Constants of the sigma_2 operator on S^n (n != 4):
/// c = (n-4)/4, alpha = (n-4)/16, beta = (n-1)c^2/4, gamma = n(n-1)c^3/8.
struct Sigma2Constants {
  Rational c, alpha, beta, gamma;
  static Sigma2Constants for_dimension(int n);
};

/// sigma_1(u) = -(n-4)/8 Lap(u^2) - |grad u|^2 + (n/2) c^2 u^2.
SphereFunction sigma1(const SphereFunction& u);
/// I(u) = -(n+2w-2)/2 |grad u|^2 + w u (Lap + w n/2) u; w = -(n-2)/2 is rejected.
SphereFunction i_operator(const SphereFunction& u, const Rational& w);

/// D(u) = 1/2 delta(|grad u|^2 du) - alpha (u Lap|grad u|^2 - delta(Lap(u^2) du))
///        - beta u Lap(u^2) + gamma u^3.
SphereFunction sigma2_diagonal(const SphereFunction& u);
/// The symmetric trilinear operator with L(u,u,u) = D(u), from an explicit
/// symmetrisation.
SphereFunction sigma2_trilinear(const SphereFunction& a, const SphereFunction& b, const SphereFunction& c);
/// The same operator recovered from D alone: L(a,u,u) is read off the cubic
/// s -> D(u + s a) sampled at s = 0, 1, -1, 2, and general slots follow by
/// polarising the bilinear map v -> L(a,v,v).
SphereFunction sigma2_trilinear_interpolated(const SphereFunction& a, const SphereFunction& b, const SphereFunction& c);
/// int u D(u).
SphereIntegral sigma2_energy(const SphereFunction& u);
/// int |grad u|^2 sigma_1(u) + |grad u|^4/2 + (n-2)/2 c^2 u^2 |grad u|^2 + gamma u^4.
SphereIntegral sigma2_dirichlet_form(const SphereFunction& u);

/// Representative-level versions; inputs are arbitrary ambient polynomials
/// and outputs are unreduced representatives of the sphere quantity.
namespace rep {

AmbientPoly gjms(const AmbientPoly& u, const GjmsOrder& order);
AmbientPoly sigma1(const AmbientPoly& u);
AmbientPoly sigma2_diagonal(const AmbientPoly& u);
/// F(a,b,c) = delta(h dc) + c q with h = <grad a, grad b>/2 + alpha Lap(ab) and
/// q = -alpha Lap<grad a, grad b> - beta Lap(ab) + gamma ab. F(u,u,u) = D(u).
AmbientPoly sigma2_unsymmetrized(const AmbientPoly& a, const AmbientPoly& b, const AmbientPoly& c);
AmbientPoly sigma2_trilinear(const AmbientPoly& a, const AmbientPoly& b, const AmbientPoly& c);
/// L(a,u,u) = (2 F(a,u,u) + F(u,u,a)) / 3.
AmbientPoly sigma2_first_slot(const AmbientPoly& a, const AmbientPoly& u);

}  // namespace rep

/// A conformally covariant operator L of total order 2k taking j slots, with
/// energy E(u) = int u L(u, ..., u).
struct OperatorDescriptor {
  enum class Kind { Gjms, Sigma2 };
  Kind kind = Kind::Gjms;
  int n = 0;
  int j = 1;
  int k = 1;
  std::string name;
  std::function<SphereIntegral(const SphereFunction&)> energy;
  /// L(slots[0], ..., slots[j-1]).
  std::function<SphereFunction(const std::vector<SphereFunction>&)> apply;
  /// L(v, u, ..., u).
  std::function<SphereFunction(const SphereFunction& v, const SphereFunction& u)> apply_first_slot;
};

OperatorDescriptor gjms_descriptor(int n, int k);
OperatorDescriptor sigma2_descriptor(int n);

}  // namespace confsphere
