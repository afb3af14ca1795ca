#include <cmath>
#include <random>

#include "confsphere/operators.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace confsphere;
using confsphere::testing::dense_random;

TEST_CASE("GJMS eigenvalues: literal values and the Gamma-ratio form") {
  CHECK(gjms_eigenvalue(0, GjmsOrder(5, 1)) == frac(15, 4));
  CHECK(gjms_eigenvalue(1, GjmsOrder(5, 1)) == frac(35, 4));
  CHECK(gjms_eigenvalue(0, GjmsOrder(5, 2)) == frac(105, 16));
  CHECK(gjms_eigenvalue(7, GjmsOrder(5, 0)) == 1);
  for (int n = 5; n <= 9; ++n) {
    for (int k = 1; 2 * k < n; ++k) {
      const GjmsOrder ord(n, k);
      CHECK(gjms_eigenvalue(1, ord) / gjms_eigenvalue(0, ord) == frac(n + 2 * k, n - 2 * k));
      for (int l = 0; l <= 6; ++l) {
        const double expect = std::exp(std::lgamma(l + 0.5 * n + k) - std::lgamma(l + 0.5 * n - k));
        CHECK(to_double(gjms_eigenvalue(l, ord)) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("GJMS order validation") {
  CHECK_THROWS_AS(GjmsOrder(5, 3), std::invalid_argument);
  CHECK_THROWS_AS(GjmsOrder(6, 3), std::invalid_argument);
  CHECK_THROWS_AS(GjmsOrder(5, -1), std::invalid_argument);
  CHECK_NOTHROW(GjmsOrder(7, 3));
  CHECK_THROWS_AS(gjms_apply(SphereFunction(6), GjmsOrder(5, 1)), std::invalid_argument);
}

TEST_CASE("GJMS spectral and product routes agree; L_0 is the identity") {
  std::mt19937_64 rng(31);
  for (int n : {5, 6, 7}) {
    const SphereFunction u = reduce(dense_random(rng, n + 1, 4));
    CHECK(gjms_apply(u, GjmsOrder(n, 0)) == u);
    for (int k = 1; 2 * k < n; ++k) {
      const GjmsOrder ord(n, k);
      const SphereFunction spectral = gjms_apply(u, ord);
      CHECK(spectral == gjms_apply_composed(u, ord));
      CHECK(reduce(rep::gjms(u.ambient(), ord)) == spectral);
    }
    CHECK(gjms_apply(SphereFunction::constant(n, 1), GjmsOrder(n, 1)) ==
          SphereFunction::constant(n, frac((n - 2) * n, 4)));
  }
}

TEST_CASE("GJMS operators are self-adjoint with a positive gap") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 5 + trial % 3;
    const SphereFunction u = reduce(dense_random(rng, n + 1, 3));
    const SphereFunction v = reduce(dense_random(rng, n + 1, 3));
    for (int k = 1; 2 * k < n; ++k) {
      const GjmsOrder ord(n, k);
      CHECK(integrate(multiply(v, gjms_apply(u, ord))) == integrate(multiply(u, gjms_apply(v, ord))));
      // int u L u >= Lambda_0 int u^2 with equality only for constants.
      const Rational gap = gjms_energy(u, ord).coefficient - gjms_eigenvalue(0, ord) * integrate(multiply(u, u)).coefficient;
      CHECK(gap > 0);
    }
  }
  const SphereFunction c = SphereFunction::constant(6, 3);
  CHECK(gjms_energy(c, GjmsOrder(6, 2)).coefficient == gjms_eigenvalue(0, GjmsOrder(6, 2)) * 9);
}

TEST_CASE("sigma_1 and the I operator") {
  for (int n : {5, 6, 7, 8}) {
    const SphereFunction one = SphereFunction::constant(n, 1);
    CHECK(sigma1(one) == SphereFunction::constant(n, frac(n * (n - 4) * (n - 4), 32)));
    std::mt19937_64 rng(static_cast<unsigned>(n));
    const SphereFunction u = reduce(dense_random(rng, n + 1, 3));
    CHECK(i_operator(u, frac(-(n - 4), 4)) == sigma1(u));
    // u = x0, w = 1: -n/2 (1 - x0^2) + x0 (-n x0 + n/2 x0).
    const SphereFunction x0 = SphereFunction::coordinate(n, 0);
    const SphereFunction x0sq = multiply(x0, x0);
    const SphereFunction expect = (SphereFunction::constant(n, 1) - x0sq) * frac(-n, 2) + x0sq * frac(-n, 2);
    CHECK(i_operator(x0, 1) == expect);
    CHECK_THROWS_AS(i_operator(u, frac(-(n - 2), 2)), std::invalid_argument);
  }
  CHECK_THROWS_AS(sigma1(SphereFunction::constant(4, 1)), std::invalid_argument);
  CHECK_THROWS_AS(sigma2_diagonal(SphereFunction::constant(4, 1)), std::invalid_argument);
}

TEST_CASE("sigma_2 constants and the value at constants") {
  CHECK(Sigma2Constants::for_dimension(6).gamma == frac(15, 32));
  CHECK(Sigma2Constants::for_dimension(8).gamma == 7);
  for (int n : {5, 6, 7}) {
    const Sigma2Constants s = Sigma2Constants::for_dimension(n);
    CHECK(sigma2_diagonal(SphereFunction::constant(n, 1)) == SphereFunction::constant(n, s.gamma));
    CHECK(sigma2_diagonal(SphereFunction::constant(n, 2)) == SphereFunction::constant(n, 8 * s.gamma));
  }
}

TEST_CASE("sigma_2 trilinear: diagonal, symmetry, and the interpolation route") {
  std::mt19937_64 rng(40);
  for (int n : {5, 6}) {
    const int nv = n + 1;
    const SphereFunction a = reduce(dense_random(rng, nv, 2));
    const SphereFunction b = reduce(dense_random(rng, nv, 2));
    const SphereFunction c = reduce(dense_random(rng, nv, 1));
    const SphereFunction u = reduce(dense_random(rng, nv, 2));
    CHECK(sigma2_trilinear(u, u, u) == sigma2_diagonal(u));
    CHECK(reduce(rep::sigma2_unsymmetrized(u.ambient(), u.ambient(), u.ambient())) == sigma2_diagonal(u));
    const SphereFunction abc = sigma2_trilinear(a, b, c);
    CHECK(sigma2_trilinear(b, c, a) == abc);
    CHECK(sigma2_trilinear(c, b, a) == abc);
    CHECK(sigma2_trilinear_interpolated(a, b, c) == abc);
    CHECK(sigma2_trilinear_interpolated(a, u, u) == sigma2_trilinear(a, u, u));
    CHECK(reduce(rep::sigma2_first_slot(a.ambient(), u.ambient())) == sigma2_trilinear(a, u, u));
  }
}

TEST_CASE("sigma_2 acting on spherical harmonics with two constant slots") {
  // L(h,1,1) = (gamma + 2 beta l(l+n-1)/3) h for h harmonic of degree l.
  for (int n : {5, 6, 7}) {
    const Sigma2Constants s = Sigma2Constants::for_dimension(n);
    const SphereFunction one = SphereFunction::constant(n, 1);
    const SphereFunction x = SphereFunction::coordinate(n, 1);
    CHECK(sigma2_trilinear(x, one, one) == x * (s.gamma + Rational(n * (n - 1)) * s.c * s.c / 6));
    const SphereFunction h = reduce(AmbientPoly::parse(n + 1, "x0 x1 x2"));
    CHECK(sigma2_trilinear(h, one, one) == h * (s.gamma + 2 * s.beta * (3 * (3 + n - 1)) / 3));
  }
}

TEST_CASE("sigma_2 energy equals its Dirichlet form") {
  std::mt19937_64 rng(41);
  for (int n : {5, 6, 7}) {
    const SphereFunction u = reduce(dense_random(rng, n + 1, 2));
    CHECK(sigma2_energy(u) == sigma2_dirichlet_form(u));
  }
  // u = 1, n = 6: both sides equal gamma omega.
  CHECK(sigma2_energy(SphereFunction::constant(6, 1)).coefficient == frac(15, 32));
}

TEST_CASE("operator descriptors") {
  const OperatorDescriptor g = gjms_descriptor(7, 2);
  CHECK(g.j == 1);
  CHECK(g.k == 2);
  const SphereFunction one = SphereFunction::constant(7, 1);
  CHECK(g.energy(one).coefficient == gjms_eigenvalue(0, GjmsOrder(7, 2)));
  const OperatorDescriptor s = sigma2_descriptor(6);
  CHECK(s.j == 3);
  CHECK(s.k == 2);
  const SphereFunction one6 = SphereFunction::constant(6, 1);
  CHECK(s.apply({one6, one6, one6}) == SphereFunction::constant(6, frac(15, 32)));
  CHECK(s.apply_first_slot(one6, one6) == SphereFunction::constant(6, frac(15, 32)));
  CHECK_THROWS_AS(s.apply({one6}), std::invalid_argument);
  CHECK_THROWS_AS(sigma2_descriptor(4), std::invalid_argument);
}
