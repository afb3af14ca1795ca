// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "confsphere/conformal.hpp"
#include "confsphere/extremal.hpp"
#include "confsphere/identities.hpp"

using namespace confsphere;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double bubble_exponent(const OperatorDescriptor& d) {
  return d.kind == OperatorDescriptor::Kind::Gjms ? 0.5 * (d.n - 2 * d.k) : 0.25 * (d.n - 4);
}

// Gamma((n+2k)/2) / Gamma((n-2k)/2) by Gamma(x+1) = x Gamma(x), in halves.
Rational gamma_ratio(int n, int k) {
  Rational r = 1;
  for (int m = 0; m < 2 * k; ++m) r *= frac(n - 2 * k + 2 * m, 2);
  return r;
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  int checks = 0, failed = 0;
  for (int n = 5; n <= 7; ++n) {
    for (int k = 1; k <= (n - 1) / 2; ++k) {
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto r = check_gjms_commutator(reduce(random_polynomial(n, 4, seed)), GjmsOrder(n, k));
        ++checks;
        if (!r.verdict) ++failed;
      }
    }
  }
  const double t = seconds_since(t0);
  return {failed == 0 && t < 120.0, fmt("%d exact checks, %d failed, %.1f s (limit 120 s)", checks, failed, t)};
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  int checks = 0, failed = 0;
  for (int n = 5; n <= 7; ++n) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      ++checks;
      if (!check_sigma2_commutator(random_polynomial(n, 3, seed)).verdict) ++failed;
    }
  }
  const double t = seconds_since(t0);
  return {failed == 0 && t < 180.0, fmt("%d exact checks, %d failed, %.1f s (limit 180 s)", checks, failed, t)};
}

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  int checks = 0, failed = 0;
  auto tally = [&](const std::vector<IdentityReport>& rs) {
    for (const auto& r : rs) {
      ++checks;
      if (!r.verdict) ++failed;
    }
  };
  for (int n = 5; n <= 7; ++n) {
    for (int k = 1; k <= (n - 1) / 2; ++k) {
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SphereFunction u = reduce(random_polynomial(n, 4, seed));
        for (int i = 0; i <= n; ++i) tally({check_gjms_first_order(u, GjmsOrder(n, k), i)});
      }
    }
    for (std::uint64_t seed = 1; seed <= 20; ++seed) tally({check_sigma2_dirichlet(reduce(random_polynomial(n, 3, seed)))});
    tally(run_spanning_battery(n));
  }
  return {failed == 0, fmt("%d exact checks (first-order, Dirichlet form, spanning set), %d failed, %.1f s", checks, failed,
                           seconds_since(t0))};
}

Outcome criterion4() {
  bool ok = sharp_constant_gjms(5, 1) == frac(15, 4) && sharp_constant_gjms(5, 2) == frac(105, 16) &&
            sharp_constant_sigma2(6) == frac(15, 32);
  for (int k : {1, 2}) {
    ok = ok && sharp_constant_gjms(5, k) == gamma_ratio(5, k) && sharp_constant_gjms(5, k) == gjms_eigenvalue(0, GjmsOrder(5, k));
  }
  ok = ok && sharp_constant_sigma2(6) == sigma2_energy(SphereFunction::constant(6, 1)).coefficient;
  return {ok, "15/4, 105/16 (product, Gamma ratio, eigenvalue); 15/32 = E(1)/omega_6"};
}

Outcome criterion5() {
  const int n = 5;
  const JacobiQuadrature quad(n);
  const double w = sphere_volume(n);
  double worst_mass = 0, worst_energy = 0, worst_el = 0;
  for (int k : {1, 2}) {
    const auto d = gjms_descriptor(n, k);
    const ConstraintSet cs = ConstraintSet::for_descriptor(d);
    const double sharp = to_double(sharp_constant(d)) * w;
    for (double xi : {0.0, 0.3, 0.6}) {
      const ZonalFunction b = ZonalFunction::bubble(n, xi, bubble_exponent(d));
      const double e = energy_zonal(d, b, quad);
      worst_mass = std::max(worst_mass, std::abs(cs.mass(b, quad) - w) / w);
      worst_energy = std::max(worst_energy, std::abs(e - sharp) / sharp);
      worst_el = std::max(worst_el, euler_lagrange_residual(b, d, e, quad));
    }
  }
  return {worst_mass < 1e-8 && worst_energy < 1e-7 && worst_el < 1e-7,
          fmt("max mass rel err %.2e, energy rel err %.2e, EL residual %.2e", worst_mass, worst_energy, worst_el)};
}

Outcome criterion6() {
  double worst = 0, min_s1 = 1e300;
  for (int n : {6, 7}) {
    const JacobiQuadrature quad(n);
    const double sharp = to_double(sharp_constant_sigma2(n)) * sphere_volume(n);
    for (double xi : {0.0, 0.4}) {
      const ZonalFunction b = ZonalFunction::bubble(n, xi, 0.25 * (n - 4));
      worst = std::max(worst, std::abs(sigma2_energy_zonal(b, quad) - sharp) / sharp);
      const ZonalFunction s1 = sigma1_zonal(b);
      for (double t : quad.nodes()) min_s1 = std::min(min_s1, s1.evaluate(t));
    }
  }
  return {worst < 1e-6 && min_s1 > 0.0, fmt("max energy rel err %.2e, min sigma_1 at nodes %.3f", worst, min_s1)};
}

Outcome criterion7() {
  bool ok = true;
  int checks = 0;
  for (int n = 5; n <= 7; ++n) {
    const auto one = SphereFunction::constant(n, 1);
    const auto h = multiply(SphereFunction::coordinate(n, 0), SphereFunction::coordinate(n, 1));
    const Rational h2 = integrate(multiply(h, h)).coefficient;
    std::vector<OperatorDescriptor> ds;
    for (int k = 1; 2 * k < n; ++k) ds.push_back(gjms_descriptor(n, k));
    ds.push_back(sigma2_descriptor(n));
    const SphereQuadrature grid(n, 8, 3);
    for (const auto& d : ds) {
      for (int i = 0; i <= n; ++i) {
        const auto [l, r] = stability_pair(one, SphereFunction::coordinate(n, i), d);
        ok = ok && l == r;
        ++checks;
      }
      const auto [l2, r2] = stability_pair(one, h, d);
      ok = ok && l2 > r2;
      if (d.kind == OperatorDescriptor::Kind::Gjms) {
        const GjmsOrder order(n, d.k);
        const Rational gap = (gjms_eigenvalue(2, order) - frac(n + 2 * d.k, n - 2 * d.k) * gjms_eigenvalue(0, order)) * h2;
        ok = ok && l2 - r2 >= gap && gap > 0;
      }
      const auto g = commutator_stability_gap(one, d, grid);
      ok = ok && g.lhs == g.rhs;
      if (d.kind == OperatorDescriptor::Kind::Gjms) {
        ok = ok && g.lhs == Rational(d.k * (n + 2 * d.k - 2)) * gjms_eigenvalue(0, GjmsOrder(n, d.k - 1));
        ok = ok && g.rhs == frac(4 * d.k, n - 2 * d.k) * gjms_eigenvalue(0, GjmsOrder(n, d.k));
      } else {
        const Rational a = frac(n - 1, 3) * frac(n, 2) * frac((n - 4) * (n - 4), 16);
        const Rational b = frac(16, 3 * (n - 4)) * sharp_constant_sigma2(n);
        ok = ok && a == b && g.lhs == a;
      }
      checks += 3;
    }
  }
  return {ok, fmt("%d exact comparisons at u = 1, n = 5..7, all GJMS orders and sigma_2", checks)};
}

Outcome criterion8() {
  const int n = 5, k = 1;
  const double N = static_cast<double>(n) * 2 / (n - 2 * k);
  const SphereQuadrature quad(n);
  const Bubble b = Bubble::gjms(n, k, Eigen::VectorXd::Unit(n + 1, 0) * 0.4);
  const BalanceResult r = balance(b.field(), N, quad);
  double sup = 0;
  for (std::size_t q = 0; q < quad.size(); ++q) sup = std::max(sup, std::abs(r.balanced(quad.point(q)) - 1.0));
  const BalanceResult again = balance(r.balanced, N, quad);
  double moved = 0;
  for (std::size_t q = 0; q < quad.size(); ++q)
    moved = std::max(moved, std::abs(again.balanced(quad.point(q)) - r.balanced(quad.point(q))));
  const bool ok = r.converged && sup < 1e-8 && r.residual_norm < 1e-10 && again.converged && again.iterations == 0 && moved < 1e-14;
  return {ok, fmt("sup |u_bal - 1| %.2e, moment norm %.2e, rebalance steps %d, rebalance change %.1e", sup,
                 r.residual_norm, again.iterations, moved)};
}

Outcome criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  const double w5 = sphere_volume(5), w6 = sphere_volume(6);
  const auto g = minimize_quotient(gjms_descriptor(5, 1), 6, 1);
  const double tg = seconds_since(t0);
  const auto t1 = std::chrono::steady_clock::now();
  const auto s = minimize_quotient(sigma2_descriptor(6), 4, 1);
  const double ts = seconds_since(t1);
  const double dg = std::abs(g.quotient - 3.75 * w5) / w5;
  const double ds = std::abs(s.quotient - 15.0 / 32.0 * w6) / w6;
  const bool ok = dg < 1e-4 && g.bubble_fit.residual < 1e-3 && ds < 1e-3 && s.min_sigma1 > 0.0 && tg < 600 && ts < 600;
  return {ok, fmt("GJMS |Q/w - 15/4| %.1e, fit residual %.1e; sigma_2 |Q/w - 15/32| %.1e; %.2f s and %.2f s", dg,
                  g.bubble_fit.residual, ds, tg, ts)};
}

Outcome criterion10() {
  double worst = 0;
  const double pts[] = {-0.95, -0.6, -0.2, 0.0, 0.3, 0.7, 0.97};
  auto compare = [&](const SphereFunction& e, const ZonalFunction& z, int n) {
    double scale = 0, err = 0;
    for (double t : pts) {
      std::vector<double> p(static_cast<std::size_t>(n + 1), 0.0);
      p[0] = t;
      p[1] = std::sqrt(1 - t * t);
      const double ev = e.evaluate(p);
      scale = std::max(scale, std::abs(ev));
      err = std::max(err, std::abs(ev - z.evaluate(t)));
    }
    worst = std::max(worst, scale > 0 ? err / scale : err);
  };
  auto compare_value = [&](double e, double z) { worst = std::max(worst, std::abs(e - z) / std::max(std::abs(e), 1e-300)); };
  for (int n : {5, 6}) {
    const JacobiQuadrature quad(n);
    for (int m = 0; m <= 6; ++m) {
      std::vector<int> ex(static_cast<std::size_t>(n + 1), 0);
      ex[0] = m;
      const SphereFunction e = reduce(AmbientPoly::monomial(n + 1, Monomial::from_exponents(ex), Rational(1)));
      std::vector<double> c(static_cast<std::size_t>(m + 1), 0.0);
      c.back() = 1.0;
      const ZonalFunction z = ZonalFunction::polynomial(n, c);
      compare(laplace_beltrami(e), laplace_beltrami_zonal(z), n);
      for (int k = 1; 2 * k < n; ++k) compare(gjms_apply(e, GjmsOrder(n, k)), gjms_zonal(z, GjmsOrder(n, k)), n);
      compare(grad_inner(e, e), grad_sq_zonal(z), n);
      compare(sigma1(e), sigma1_zonal(z), n);
      compare_value(sigma2_energy(e).value(), sigma2_energy_zonal(z, quad));
      const SphereIntegral ie = integrate(e);
      if (ie.coefficient == 0) {
        worst = std::max(worst, std::abs(integrate_zonal(z, quad)));
      } else {
        compare_value(ie.value(), integrate_zonal(z, quad));
      }
    }
  }
  return {worst < 1e-11, fmt("max relative discrepancy %.2e over t^m, m <= 6, n = 5, 6", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exact GJMS commutator identity", criterion1},
      {"exact sigma_2 commutator identity", criterion2},
      {"first-order, Dirichlet-form and spanning-set batteries", criterion3},
      {"sharp constants", criterion4},
      {"GJMS bubble equality", criterion5},
      {"sigma_2 bubble equality", criterion6},
      {"stability neutrality and positivity", criterion7},
      {"balancing", criterion8},
      {"minimization", criterion9},
      {"zonal and exact paths agree", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
