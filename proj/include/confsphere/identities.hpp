#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "confsphere/operators.hpp"
#include "json.hpp"

namespace confsphere {

/// Outcome of one exact identity check. Sides are kept as canonical text so
/// that function-valued and integral-valued identities share one record.
struct IdentityReport {
  std::string identity;
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  int degree = 0;
  std::string lhs;
  std::string rhs;
  std::string lhs_minus_rhs;
  bool verdict = false;

  /// {identity, n, k, seed, degree, verdict, lhs_minus_rhs}.
  nlohmann::json to_json() const;
};

/// Integer coefficients in [-3, 3] on every monomial of degree <= degree in
/// n+1 variables, drawn from mt19937_64(seed) in a fixed monomial order.
AmbientPoly random_polynomial(int n, int degree, std::uint64_t seed);

/// sum_i x^i [L_2k, x^i] u = k(n+2k-2) L_{2k-2} u.
IdentityReport check_gjms_commutator(const SphereFunction& u, const GjmsOrder& order);
/// [L_2k, x^i] u = k(n+2k-2) x^i L_{2k-2} u - 2k <grad x^i, grad L_{2k-2} u>.
IdentityReport check_gjms_first_order(const SphereFunction& u, const GjmsOrder& order, int i);
/// int v L_2k u = int u L_2k v.
IdentityReport check_gjms_self_adjoint(const SphereFunction& u, const SphereFunction& v, const GjmsOrder& order);

/// sum_i x^i [L_sigma2, x^i](u,u,u) = (n-1)/3 u sigma_1(u), where
/// [L, x](u,u,u) = L(xu,u,u) - x L(u,u,u). Accepts any ambient representative.
IdentityReport check_sigma2_commutator(const AmbientPoly& u);
IdentityReport check_sigma2_commutator(const SphereFunction& u);
/// int u D(u) equals the Dirichlet-form expression.
IdentityReport check_sigma2_dirichlet(const SphereFunction& u);
/// int u_{p0} L(u_{p1}, u_{p2}, u_{p3}) is the same for all 24 orderings.
IdentityReport check_sigma2_form_symmetry(const std::vector<SphereFunction>& u);

struct BatteryOptions {
  int n = 5;
  int k = 1;
  int degree = 3;
  int trials = 20;
  std::uint64_t seed = 1;
};

/// Per trial: the commutator identity, the first-order identity for every
/// coordinate, and self-adjointness. Trial t uses seed + t.
std::vector<IdentityReport> run_gjms_battery(const BatteryOptions& opt);
/// Per trial: the sigma_2 commutator identity and the Dirichlet-form identity.
std::vector<IdentityReport> run_sigma2_battery(const BatteryOptions& opt);

/// Exact checks on the degree <= 2 monomial spanning set: GJMS
/// self-adjointness through the product route for every order, and the
/// 24-fold symmetry of the sigma_2 form. The operators commute with
/// coordinate permutations and sign flips, and a tuple in which some
/// coordinate has odd total degree integrates to zero in every ordering, so
/// pairs in x^0, x^1 and quadruples in x^0..x^3 cover all cases.
std::vector<IdentityReport> run_spanning_battery(int n);

}  // namespace confsphere
