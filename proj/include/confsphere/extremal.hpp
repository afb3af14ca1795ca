#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "confsphere/conformal.hpp"
#include "confsphere/operators.hpp"
#include "confsphere/zonal.hpp"
#include "json.hpp"

namespace confsphere {

/// Lambda = Gamma((n+2k)/2) / Gamma((n-2k)/2) = prod_j (n-2j)(n+2j-2)/4.
Rational sharp_constant_gjms(int n, int k);
/// n(n-1)/8 ((n-4)/4)^3.
Rational sharp_constant_sigma2(int n);
Rational sharp_constant(const OperatorDescriptor& d);

/// Critical exponent N = n(j+1)/(n-2k) and target mass omega_n; sigma_2
/// membership additionally asks for sigma_1(u) > 0, tested at grid nodes.
struct ConstraintSet {
  int n = 5;
  int j = 1;
  int k = 1;
  bool sigma1_positive = false;

  static ConstraintSet for_descriptor(const OperatorDescriptor& d);
  double exponent() const { return static_cast<double>(n) * (j + 1) / (n - 2 * k); }
  double target() const;
  double mass(const ZonalFunction& u, const JacobiQuadrature& quad) const;
  /// Positivity (and sigma_1 positivity when required) at every node.
  bool admissible(const ZonalFunction& u, const JacobiQuadrature& quad) const;
  bool contains(const ZonalFunction& u, const JacobiQuadrature& quad, double tol = 1e-8) const;
};

// Zonal (numeric) versions of the descriptor's operator and energy.
/// L(u, ..., u).
ZonalFunction apply_zonal(const OperatorDescriptor& d, const ZonalFunction& u);
/// L(v, u, ..., u).
ZonalFunction apply_first_slot_zonal(const OperatorDescriptor& d, const ZonalFunction& v, const ZonalFunction& u);
/// E(u) = int u L(u, ..., u); the sigma_2 case uses the Dirichlet-form integrand.
double energy_zonal(const OperatorDescriptor& d, const ZonalFunction& u, const JacobiQuadrature& quad);

/// sup over quadrature nodes of |L(u,...,u) - E/omega_n u^{(nj+2k)/(n-2k)}|.
double euler_lagrange_residual(const ZonalFunction& u, const OperatorDescriptor& d, double energy,
                               const JacobiQuadrature& quad);

/// Both sides of the stability inequality
///   int v L(v,u,...,u) >= (nj+2k)/(j(n-2k)) E(u)/omega_n int v^2 u^{(n(j-1)+4k)/(n-2k)},
/// as coefficients of omega_n. The exact route needs u^{(n(j-1)+4k)/(n-2k)}
/// to be a polynomial, i.e. u constant or the exponent a nonnegative integer.
/// Throws when v is not tangent: int v u^{(nj+2k)/(n-2k)} != 0.
std::pair<Rational, Rational> stability_pair(const SphereFunction& u, const SphereFunction& v, const OperatorDescriptor& d);
/// Quadrature route for zonal u, v; tangency is checked to tol * omega_n.
std::pair<double, double> stability_pair(const ZonalFunction& u, const ZonalFunction& v, const OperatorDescriptor& d,
                                         const JacobiQuadrature& quad, double tol = 1e-8);

struct CommutatorGap {
  /// sum_i int x^i u [L, x^i](u, ..., u), as a coefficient of omega_n.
  Rational lhs;
  /// 2(j+1)k/(j(n-2k)) E(u), as a coefficient of omega_n.
  Rational rhs;
};

/// Exact route for a positive balanced polynomial u. Balancing (moments of
/// u^N below 1e-8) and positivity are checked on the product grid. The
/// constraint normalization is not imposed: both sides are homogeneous of
/// degree j+1 in u, so the comparison is scale invariant.
CommutatorGap commutator_stability_gap(const SphereFunction& u, const OperatorDescriptor& d, const SphereQuadrature& grid);

/// Q(u) - Lambda omega_n with the scale-invariant quotient
///   Q(u) = E(u) (omega_n / int u^N)^{(j+1)/N},
/// which is E(u) - Lambda omega_n on the constraint set. Constants take an
/// exact route and return exactly 0. Throws when u is not admissible.
double deficit(const ZonalFunction& u, const OperatorDescriptor& d, const JacobiQuadrature& quad);
/// Non-zonal trial functions: exact energy, mass on the product grid.
double deficit(const SphereFunction& u, const OperatorDescriptor& d, const SphereQuadrature& grid);

/// Zonal harmonics G_l(t) = C_l^{((n-1)/2)}(t), scaled so int_{S^n} G_l^2 = omega_n.
std::vector<ZonalFunction> zonal_harmonic_basis(int n, int max_degree);

struct MinimizationOptions {
  std::string init = "random";  // or "constant"
  int max_iterations = 5000;
  double grad_tol = 1e-7;
  int nodes = 200;
};

struct BubbleFit {
  double a = 0.0;
  double xi = 0.0;
  /// Relative L^2 misfit sqrt(int (u - fit)^2 / int u^2).
  double residual = 0.0;
};

struct MinimizationResult {
  std::string descriptor;
  int n = 0;
  int k = 0;
  int j = 0;
  int L = 0;
  std::uint64_t seed = 0;
  /// Coefficients on zonal_harmonic_basis(n, L).
  std::vector<double> coefficients;
  double quotient = 0.0;
  double sharp = 0.0;
  double deficit = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
  /// Smallest sigma_1 over the nodes (sigma_2 runs only), reported as boundary proximity.
  double min_sigma1 = 0.0;
  BubbleFit bubble_fit;

  /// {descriptor, n, k, j, L, seed, quotient, sharp, deficit, iterations,
  ///  grad_norm, converged, coefficients, bubble_fit: {a, xi, residual}}.
  nlohmann::json to_json() const;
};

/// Least squares fit of a ((1 + xi t) / sqrt(1 - xi^2))^{-q} to u at the nodes.
BubbleFit fit_bubble(const ZonalFunction& u, double q, const JacobiQuadrature& quad);

/// Preconditioned projected gradient descent on the zonal harmonic
/// coefficients of degree <= L, with Armijo backtracking and step rejection
/// as positivity (and sigma_1) barrier. Every iterate is rescaled onto the
/// constraint set.
MinimizationResult minimize_quotient(const OperatorDescriptor& d, int L, std::uint64_t seed,
                                     const MinimizationOptions& opt = {});

}  // namespace confsphere
