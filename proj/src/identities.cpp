#include "confsphere/identities.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <random>
#include <stdexcept>

namespace confsphere {

nlohmann::json IdentityReport::to_json() const {
  return {{"identity", identity}, {"n", n},           {"k", k},
          {"seed", seed},         {"degree", degree}, {"verdict", verdict ? "pass" : "fail"},
          {"lhs_minus_rhs", lhs_minus_rhs}};
}

namespace {

IdentityReport function_report(std::string name, int n, int k, const SphereFunction& lhs, const SphereFunction& rhs) {
  IdentityReport r;
  r.identity = std::move(name);
  r.n = n;
  r.k = k;
  r.lhs = lhs.to_string();
  r.rhs = rhs.to_string();
  const SphereFunction diff = lhs - rhs;
  r.lhs_minus_rhs = diff.to_string();
  r.verdict = diff.is_zero();
  return r;
}

IdentityReport integral_report(std::string name, int n, int k, const SphereIntegral& lhs, const SphereIntegral& rhs) {
  IdentityReport r;
  r.identity = std::move(name);
  r.n = n;
  r.k = k;
  r.lhs = lhs.to_string();
  r.rhs = rhs.to_string();
  const SphereIntegral diff{n, lhs.coefficient - rhs.coefficient};
  r.lhs_minus_rhs = diff.to_string();
  r.verdict = diff.coefficient == 0;
  return r;
}

int poly_degree(const SphereFunction& u) { return std::max(u.degree(), 0); }

}  // namespace

AmbientPoly random_polynomial(int n, int degree, std::uint64_t seed) {
  if (degree < 0) throw std::invalid_argument("degree must be non-negative");
  const int nv = n + 1;
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Monomial, Rational>> terms;
  std::vector<int> e(static_cast<std::size_t>(nv), 0);
  // Graded order: all monomials of degree 0, then 1, ..., each in lexicographic order.
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == nv - 1) {
      e[static_cast<std::size_t>(var)] = left;
      terms.emplace_back(Monomial::from_exponents(e), Rational(static_cast<long>(rng() % 7) - 3));
      return;
    }
    for (int a = left; a >= 0; --a) {
      e[static_cast<std::size_t>(var)] = a;
      rec(var + 1, left - a);
    }
  };
  for (int d = 0; d <= degree; ++d) rec(0, d);
  return AmbientPoly::from_terms(nv, terms);
}

IdentityReport check_gjms_commutator(const SphereFunction& u, const GjmsOrder& order) {
  const int n = order.n(), k = order.k();
  if (k < 1) throw std::invalid_argument("commutator identity needs k >= 1");
  SphereFunction lhs(n);
  const SphereFunction lu = gjms_apply(u, order);
  for (int i = 0; i <= n; ++i) {
    const SphereFunction x = SphereFunction::coordinate(n, i);
    const SphereFunction commutator = gjms_apply(multiply(x, u), order) - multiply(x, lu);
    lhs += multiply(x, commutator);
  }
  const SphereFunction rhs = gjms_apply(u, GjmsOrder(n, k - 1)) * Rational(static_cast<long>(k) * (n + 2 * k - 2));
  IdentityReport r = function_report("gjms_commutator", n, k, lhs, rhs);
  r.degree = poly_degree(u);
  return r;
}

IdentityReport check_gjms_first_order(const SphereFunction& u, const GjmsOrder& order, int i) {
  const int n = order.n(), k = order.k();
  if (k < 1) throw std::invalid_argument("first-order identity needs k >= 1");
  if (i < 0 || i > n) throw std::invalid_argument("coordinate index out of range");
  const SphereFunction x = SphereFunction::coordinate(n, i);
  const SphereFunction lhs = gjms_apply(multiply(x, u), order) - multiply(x, gjms_apply(u, order));
  const SphereFunction lower = gjms_apply(u, GjmsOrder(n, k - 1));
  const SphereFunction rhs = multiply(x, lower) * Rational(static_cast<long>(k) * (n + 2 * k - 2)) -
                             grad_inner(x, lower) * Rational(2 * k);
  IdentityReport r = function_report("gjms_first_order_x" + std::to_string(i), n, k, lhs, rhs);
  r.degree = poly_degree(u);
  return r;
}

IdentityReport check_gjms_self_adjoint(const SphereFunction& u, const SphereFunction& v, const GjmsOrder& order) {
  const SphereIntegral lhs = integrate(multiply(v, gjms_apply(u, order)));
  const SphereIntegral rhs = integrate(multiply(u, gjms_apply(v, order)));
  IdentityReport r = integral_report("gjms_self_adjoint", order.n(), order.k(), lhs, rhs);
  r.degree = std::max(poly_degree(u), poly_degree(v));
  return r;
}

IdentityReport check_sigma2_commutator(const AmbientPoly& u) {
  const int nv = u.nvars(), n = nv - 1;
  Sigma2Constants::for_dimension(n);
  const AmbientPoly d = rep::sigma2_diagonal(u);
  // sum_i x^i (L(x^i u, u, u) - x^i D(u)) = sum_i x^i L(x^i u, u, u) - r^2 D(u).
  AmbientPoly lhs = -(AmbientPoly::radius_squared(nv) * d);
  for (int i = 0; i < nv; ++i) lhs += rep::sigma2_first_slot(u.times_coordinate(i), u).times_coordinate(i);
  const AmbientPoly rhs = u * rep::sigma1(u) * frac(n - 1, 3);
  IdentityReport r = function_report("sigma2_commutator", n, 2, reduce(lhs), reduce(rhs));
  r.degree = std::max(u.degree(), 0);
  return r;
}

IdentityReport check_sigma2_commutator(const SphereFunction& u) { return check_sigma2_commutator(u.ambient()); }

IdentityReport check_sigma2_dirichlet(const SphereFunction& u) {
  IdentityReport r = integral_report("sigma2_dirichlet", u.dimension(), 2, sigma2_energy(u), sigma2_dirichlet_form(u));
  r.degree = poly_degree(u);
  return r;
}

IdentityReport check_sigma2_form_symmetry(const std::vector<SphereFunction>& u) {
  if (u.size() != 4) throw std::invalid_argument("form symmetry needs four functions");
  const int n = u[0].dimension();
  std::array<int, 4> p{0, 1, 2, 3};
  std::vector<Rational> values;
  do {
    values.push_back(integrate(multiply(u[static_cast<std::size_t>(p[0])],
                                        sigma2_trilinear(u[static_cast<std::size_t>(p[1])], u[static_cast<std::size_t>(p[2])],
                                                         u[static_cast<std::size_t>(p[3])])))
                         .coefficient);
  } while (std::next_permutation(p.begin(), p.end()));
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  IdentityReport r = integral_report("sigma2_form_symmetry", n, 2, SphereIntegral{n, *hi}, SphereIntegral{n, *lo});
  r.degree = 0;
  for (const auto& f : u) r.degree = std::max(r.degree, poly_degree(f));
  return r;
}

std::vector<IdentityReport> run_gjms_battery(const BatteryOptions& opt) {
  const GjmsOrder order(opt.n, opt.k);
  std::vector<IdentityReport> out;
  for (int t = 0; t < opt.trials; ++t) {
    const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(t);
    const SphereFunction u = reduce(random_polynomial(opt.n, opt.degree, seed));
    const SphereFunction v = reduce(random_polynomial(opt.n, opt.degree, seed ^ 0x9E3779B97F4A7C15ULL));
    auto stamp = [&](IdentityReport r) {
      r.seed = seed;
      r.degree = opt.degree;
      out.push_back(std::move(r));
    };
    stamp(check_gjms_commutator(u, order));
    for (int i = 0; i <= opt.n; ++i) stamp(check_gjms_first_order(u, order, i));
    stamp(check_gjms_self_adjoint(u, v, order));
  }
  return out;
}

std::vector<IdentityReport> run_sigma2_battery(const BatteryOptions& opt) {
  std::vector<IdentityReport> out;
  for (int t = 0; t < opt.trials; ++t) {
    const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(t);
    const AmbientPoly u = random_polynomial(opt.n, opt.degree, seed);
    IdentityReport a = check_sigma2_commutator(u);
    a.seed = seed;
    a.degree = opt.degree;
    out.push_back(std::move(a));
    IdentityReport b = check_sigma2_dirichlet(reduce(u));
    b.seed = seed;
    b.degree = opt.degree;
    out.push_back(std::move(b));
  }
  return out;
}

namespace {

// Degree <= 2 monomials in the first m coordinates, as exponent vectors.
std::vector<std::vector<int>> low_monomials(int m) {
  std::vector<std::vector<int>> out;
  out.emplace_back(m, 0);
  for (int i = 0; i < m; ++i) {
    std::vector<int> e(static_cast<std::size_t>(m), 0);
    e[static_cast<std::size_t>(i)] = 1;
    out.push_back(e);
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      std::vector<int> e(static_cast<std::size_t>(m), 0);
      ++e[static_cast<std::size_t>(i)];
      ++e[static_cast<std::size_t>(j)];
      out.push_back(e);
    }
  }
  return out;
}

SphereFunction monomial_function(int n, const std::vector<int>& e) {
  std::vector<int> full(static_cast<std::size_t>(n + 1), 0);
  std::copy(e.begin(), e.end(), full.begin());
  return reduce(AmbientPoly::monomial(n + 1, Monomial::from_exponents(full), Rational(1)));
}

bool even_total(const std::vector<const std::vector<int>*>& tuple) {
  const std::size_t m = tuple.front()->size();
  for (std::size_t i = 0; i < m; ++i) {
    int s = 0;
    for (const auto* e : tuple) s += (*e)[i];
    if (s % 2 != 0) return false;
  }
  return true;
}

}  // namespace

std::vector<IdentityReport> run_spanning_battery(int n) {
  if (n < 5) throw std::invalid_argument("spanning battery needs n >= 5");
  std::vector<IdentityReport> out;

  // Pairs involve at most two coordinates; the product route is used so the
  // check is not symmetric by construction.
  const auto pair_basis = low_monomials(2);
  for (int k = 1; 2 * k < n; ++k) {
    const GjmsOrder order(n, k);
    for (std::size_t a = 0; a < pair_basis.size(); ++a) {
      for (std::size_t b = a + 1; b < pair_basis.size(); ++b) {
        if (!even_total({&pair_basis[a], &pair_basis[b]})) continue;
        const SphereFunction u = monomial_function(n, pair_basis[a]);
        const SphereFunction v = monomial_function(n, pair_basis[b]);
        IdentityReport r = integral_report("gjms_self_adjoint_product", n, k, integrate(multiply(v, gjms_apply_composed(u, order))),
                                           integrate(multiply(u, gjms_apply_composed(v, order))));
        r.degree = std::max(poly_degree(u), poly_degree(v));
        out.push_back(std::move(r));
      }
    }
  }

  // Quadruples involve at most four coordinates.
  const auto quad_basis = low_monomials(4);
  std::vector<SphereFunction> funcs;
  for (const auto& e : quad_basis) funcs.push_back(monomial_function(n, e));
  const std::size_t m = quad_basis.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b)
      for (std::size_t c = b; c < m; ++c)
        for (std::size_t d = c; d < m; ++d) {
          if (!even_total({&quad_basis[a], &quad_basis[b], &quad_basis[c], &quad_basis[d]})) continue;
          out.push_back(check_sigma2_form_symmetry({funcs[a], funcs[b], funcs[c], funcs[d]}));
        }
  return out;
}

}  // namespace confsphere
