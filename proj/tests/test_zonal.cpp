#include <cmath>
#include <functional>
#include <vector>

#include "confsphere/zonal.hpp"
#include "doctest.h"

using namespace confsphere;

namespace {

// A point of S^n with x^0 = t.
std::vector<double> axial_point(int n, double t) {
  std::vector<double> p(static_cast<std::size_t>(n + 1), 0.0);
  p[0] = t;
  p[1] = std::sqrt(1.0 - t * t);
  return p;
}

SphereFunction exact_power(int n, int m) {
  std::vector<int> e(static_cast<std::size_t>(n + 1), 0);
  e[0] = m;
  return reduce(AmbientPoly::monomial(n + 1, Monomial::from_exponents(e), Rational(1)));
}

ZonalFunction zonal_power(int n, int m) {
  std::vector<double> c(static_cast<std::size_t>(m + 1), 0.0);
  c.back() = 1.0;
  return ZonalFunction::polynomial(n, c);
}

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

void check_agreement(const SphereFunction& exact, const ZonalFunction& z, int n, double tol = 1e-11) {
  for (double t : {-0.93, -0.5, -0.1, 0.0, 0.27, 0.64, 0.99}) {
    const auto p = axial_point(n, t);
    CHECK(close_rel(z.evaluate(t), exact.evaluate(p), tol));
  }
}

}  // namespace

TEST_CASE("quadrature normalization, symmetry and exactness") {
  for (int n = 2; n <= 9; ++n) {
    const JacobiQuadrature q(n);
    CHECK(q.size() == 200);
    const double total = q.sphere_integral([](double) { return 1.0; });
    CHECK(std::abs(total - sphere_volume(n)) <= 1e-13 * sphere_volume(n));
    CHECK(std::abs(q.sphere_integral([](double t) { return t; })) < 1e-13);
  }
  // A 5-node rule is exact up to degree 9.
  const int n = 6;
  const JacobiQuadrature q(n, 5);
  for (int m = 0; m <= 9; ++m) {
    const double z = q.sphere_integral([m](double t) { return std::pow(t, m); });
    const double exact = integrate(exact_power(n, m)).value();
    CHECK(std::abs(z - exact) < 1e-13 * std::max(1.0, std::abs(exact)));
  }
  CHECK_THROWS_AS(JacobiQuadrature(1), std::invalid_argument);
}

TEST_CASE("integrate_zonal examples") {
  const int n = 7;
  const double w = sphere_volume(n);
  CHECK(std::abs(integrate_zonal(ZonalFunction::constant(n, 1.0)) - w) < 1e-12 * w);
  CHECK(std::abs(integrate_zonal(zonal_power(n, 1))) < 1e-13);
  CHECK(std::abs(integrate_zonal(zonal_power(n, 2)) - w / (n + 1)) < 1e-12 * w);
}

TEST_CASE("differentiate is exact term by term") {
  const int n = 5;
  const ZonalFunction p = ZonalFunction::power(n, 0.3, -1.5);
  const ZonalFunction d = differentiate(p);
  REQUIRE(d.terms().size() == 1);
  CHECK(d.terms()[0].s == -2.5);
  CHECK(d.terms()[0].c == doctest::Approx(-1.5 * 0.3));
  const ZonalFunction one = differentiate(zonal_power(n, 1));
  REQUIRE(one.terms().size() == 1);
  CHECK(one.terms()[0].m == 0);
  CHECK(one.terms()[0].c == 1.0);
  // Central differences on a bubble.
  const ZonalFunction b = ZonalFunction::bubble(n, 0.6, 1.5) * zonal_power(n, 2);
  const ZonalFunction db = differentiate(b);
  const double h = 1e-3;
  for (double t : {-0.8, -0.2, 0.3, 0.9}) {
    // Fourth-order central stencil.
    const double fd = (8 * (b.evaluate(t + h) - b.evaluate(t - h)) - (b.evaluate(t + 2 * h) - b.evaluate(t - 2 * h))) / (12 * h);
    CHECK(std::abs(fd - db.evaluate(t)) < 1e-9);
  }
}

TEST_CASE("zonal operators agree with the exact path on t^m") {
  for (int n : {5, 6}) {
    for (int m = 0; m <= 6; ++m) {
      CAPTURE(n);
      CAPTURE(m);
      const SphereFunction u = exact_power(n, m);
      const ZonalFunction z = zonal_power(n, m);
      check_agreement(laplace_beltrami(u), laplace_beltrami_zonal(z), n);
      check_agreement(grad_inner(u, u), grad_sq_zonal(z), n);
      for (int k = 1; 2 * k < n; ++k) check_agreement(gjms_apply(u, GjmsOrder(n, k)), gjms_zonal(z, GjmsOrder(n, k)), n);
      check_agreement(sigma1(u), sigma1_zonal(z), n);
      if (m <= 4) check_agreement(sigma2_diagonal(u), sigma2_zonal(z), n);
      const double wi = integrate(u).value();
      CHECK(close_rel(integrate_zonal(z), wi, 1e-11));
    }
  }
}

TEST_CASE("sigma_2 on t^5 and t^6 agrees with the exact path") {
  const int n = 5;
  for (int m : {5, 6}) {
    CAPTURE(m);
    check_agreement(sigma2_diagonal(exact_power(n, m)), sigma2_zonal(zonal_power(n, m)), n);
  }
}

TEST_CASE("operator examples") {
  const int n = 5;
  const ZonalFunction t = zonal_power(n, 1);
  const ZonalFunction lt = laplace_beltrami_zonal(t);
  REQUIRE(lt.terms().size() == 1);
  CHECK(lt.terms()[0].c == -5.0);
  CHECK(laplace_beltrami_zonal(ZonalFunction::constant(n, 3.0)).terms().empty());
  const ZonalFunction l2 = laplace_beltrami_zonal(zonal_power(n, 2));
  CHECK(l2.evaluate(0.5) == doctest::Approx(2.0 - 2.0 * (n + 1) * 0.25));
  const ZonalFunction g = gjms_zonal(t, GjmsOrder(5, 1));
  REQUIRE(g.terms().size() == 1);
  CHECK(g.terms()[0].c == doctest::Approx(35.0 / 4));
  CHECK(gjms_zonal(ZonalFunction::constant(n, 1.0), GjmsOrder(5, 2)).evaluate(0.1) ==
        doctest::Approx(std::tgamma(4.5) / std::tgamma(0.5)));
  CHECK(grad_sq_zonal(ZonalFunction::constant(n, 2.0)).terms().empty());
  CHECK(grad_sq_zonal(t).evaluate(0.4) == doctest::Approx(1 - 0.16));
  const ZonalFunction gb = grad_sq_zonal(ZonalFunction::bubble(n, 0.5, 0.5));
  for (double x : {-0.99, -0.3, 0.5, 0.99}) CHECK(gb.evaluate(x) > 0);
  CHECK(std::abs(gb.evaluate(1.0)) < 1e-15);
}

TEST_CASE("GJMS bubbles: mass, energy and critical-point equation") {
  const int n = 5;
  const JacobiQuadrature q(n);
  const double w = sphere_volume(n);
  for (int k = 1; k <= 2; ++k) {
    const GjmsOrder ord(n, k);
    const double lambda = std::tgamma((n + 2.0 * k) / 2) / std::tgamma((n - 2.0 * k) / 2);
    const double big_n = 2.0 * n / (n - 2 * k);
    for (double r : {0.0, 0.3, 0.6}) {
      CAPTURE(k);
      CAPTURE(r);
      const ZonalFunction b = ZonalFunction::bubble(n, r, 0.5 * (n - 2 * k));
      const double mass = q.sphere_integral([&](double t) { return std::pow(b.evaluate(t), big_n); });
      CHECK(std::abs(mass - w) < 1e-8 * w);
      const double energy = gjms_energy_zonal(b, ord, q);
      CHECK(std::abs(energy - lambda * w) < 1e-7 * lambda * w);
      const ZonalFunction lb = gjms_zonal(b, ord);
      for (double t : q.nodes()) {
        const double u = b.evaluate(t);
        CHECK(std::abs(lb.evaluate(t) - lambda * std::pow(u, (n + 2.0 * k) / (n - 2.0 * k))) < 1e-8 * lambda);
      }
      const double fine = gjms_energy_zonal(b, ord, JacobiQuadrature(n, 400));
      CHECK(std::abs(fine - energy) < 1e-10 * std::max(1.0, energy));
    }
  }
}

TEST_CASE("sigma_2 energy: constants, bubbles and the exact path") {
  for (int n : {5, 6, 7}) {
    const double c = (n - 4) / 4.0;
    const double gamma = n * (n - 1) / 8.0 * c * c * c;
    const double w = sphere_volume(n);
    CHECK(std::abs(sigma2_energy_zonal(ZonalFunction::constant(n, 1.0)) - gamma * w) < 1e-10 * gamma * w);
    for (double r : {0.0, 0.4, 0.6}) {
      const ZonalFunction b = ZonalFunction::bubble(n, r, c);
      const double e = sigma2_energy_zonal(b);
      CHECK(std::abs(e - gamma * w) < 1e-6 * gamma * w);
      CHECK(std::abs(sigma2_energy_zonal(b, JacobiQuadrature(n, 400)) - e) < 1e-10);
      // int u D(u) through the closed-form operator matches the Dirichlet form.
      const ZonalFunction d = sigma2_zonal(b);
      const double direct = integrate_zonal(b * d);
      CHECK(std::abs(direct - e) < 1e-9 * gamma * w);
    }
  }
  const int n = 5;
  const SphereFunction u = reduce(AmbientPoly::parse(n + 1, "1 + x0"));
  CHECK(close_rel(sigma2_energy_zonal(ZonalFunction::polynomial(n, {1.0, 1.0})), sigma2_energy(u).value(), 1e-10));
}

TEST_CASE("closed-form arithmetic and serialization") {
  const int n = 6;
  const ZonalFunction a = ZonalFunction::power(n, 0.2, -0.5, 2.0) + zonal_power(n, 3);
  const ZonalFunction b = a * a - a * 0.5;
  for (double t : {-0.7, 0.1, 0.8}) {
    const double av = a.evaluate(t);
    CHECK(b.evaluate(t) == doctest::Approx(av * av - 0.5 * av).epsilon(1e-14));
  }
  const ZonalFunction back = ZonalFunction::from_json(nlohmann::json::parse(b.to_json().dump()));
  CHECK(back.terms().size() == b.terms().size());
  CHECK(back.evaluate(0.3) == b.evaluate(0.3));
  CHECK((a - a).terms().empty());
  CHECK_THROWS_AS(ZonalFunction::power(n, 0.2, 1.0) + ZonalFunction::power(n, 0.3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ZonalFunction(n, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ZonalFunction::from_json(nlohmann::json::parse(R"({"n":5,"r":0,"terms":[[1,-1,0]]})")),
                  std::invalid_argument);
}

TEST_CASE("unsymmetrized sigma_2 operator and the first slot") {
  const int n = 6;
  const ZonalFunction u = ZonalFunction::polynomial(n, {1.0, 0.2, -0.1});
  const ZonalFunction v = ZonalFunction::polynomial(n, {0.0, 1.0, 0.0, 0.5});
  const ZonalFunction d = sigma2_zonal(u);
  const ZonalFunction f = sigma2_unsymmetrized_zonal(u, u, u);
  const ZonalFunction l = sigma2_first_slot_zonal(u, u);
  for (double t : {-0.6, 0.2, 0.9}) {
    CHECK(f.evaluate(t) == doctest::Approx(d.evaluate(t)).epsilon(1e-13));
    CHECK(l.evaluate(t) == doctest::Approx(d.evaluate(t)).epsilon(1e-13));
  }
  // d/ds D(u + s v) at s = 0 is 3 L(v, u, u); the cubic makes a 4-point stencil exact.
  const ZonalFunction lv = sigma2_first_slot_zonal(v, u);
  const auto d_at = [&](double s) { return sigma2_zonal(u + v * s); };
  const ZonalFunction deriv = (d_at(1.0) - d_at(-1.0)) * (8.0 / 12.0) - (d_at(2.0) - d_at(-2.0)) * (1.0 / 12.0);
  for (double t : {-0.6, 0.2, 0.9}) CHECK(deriv.evaluate(t) == doctest::Approx(3.0 * lv.evaluate(t)).epsilon(1e-11));
  // Exact path oracle.
  const SphereFunction ue = reduce(AmbientPoly::parse(n + 1, "1 + 1/5 * x0 - 1/10 * x0^2"));
  const SphereFunction ve = reduce(AmbientPoly::parse(n + 1, "x0 + 1/2 * x0^3"));
  const SphereFunction exact = sigma2_trilinear(ve, ue, ue);
  for (double t : {-0.6, 0.2, 0.9}) {
    std::vector<double> p(static_cast<std::size_t>(n + 1), 0.0);
    p[0] = t;
    p[1] = std::sqrt(1 - t * t);
    CHECK(lv.evaluate(t) == doctest::Approx(exact.evaluate(p)).epsilon(1e-12));
  }
}
