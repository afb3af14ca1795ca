#include <map>
#include <random>

#include "confsphere/ambient_poly.hpp"
#include "doctest.h"

using namespace confsphere;

namespace {

AmbientPoly random_poly(std::mt19937_64& rng, int nvars, int degree, int terms, long coef_range) {
  std::vector<std::pair<Monomial, Rational>> t;
  for (int k = 0; k < terms; ++k) {
    std::vector<int> e(static_cast<std::size_t>(nvars), 0);
    int budget = static_cast<int>(rng() % static_cast<unsigned>(degree + 1));
    while (budget-- > 0) e[rng() % static_cast<unsigned>(nvars)]++;
    const long num = static_cast<long>(rng() % static_cast<unsigned long>(2 * coef_range + 1)) - coef_range;
    const long den = 1 + static_cast<long>(rng() % 5);
    t.emplace_back(Monomial::from_exponents(e), Rational(num, den));
  }
  return AmbientPoly::from_terms(nvars, t);
}

// Naive product through a map of exponent vectors, used as an oracle.
std::map<std::vector<int>, Rational> naive_product(const AmbientPoly& a, const AmbientPoly& b) {
  std::map<std::vector<int>, Rational> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::vector<int> e(static_cast<std::size_t>(a.nvars()));
      for (int v = 0; v < a.nvars(); ++v) e[static_cast<std::size_t>(v)] = a.monomial_at(i).exponent(v) + b.monomial_at(j).exponent(v);
      out[e] += a.coefficient_at(i) * b.coefficient_at(j);
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

std::map<std::vector<int>, Rational> as_map(const AmbientPoly& p) {
  std::map<std::vector<int>, Rational> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<int> e(static_cast<std::size_t>(p.nvars()));
    for (int v = 0; v < p.nvars(); ++v) e[static_cast<std::size_t>(v)] = p.monomial_at(i).exponent(v);
    out[e] = p.coefficient_at(i);
  }
  return out;
}

}  // namespace

TEST_CASE("rational text round trip") {
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(to_string(Rational(-3, 2)) == "-3/2");
  CHECK(to_string(Rational(4, 2)) == "2");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
}

TEST_CASE("monomial packing") {
  const int e[] = {3, 0, 2, 31};
  const Monomial m = Monomial::from_exponents(e);
  CHECK(m.exponent(0) == 3);
  CHECK(m.exponent(3) == 31);
  CHECK(m.degree() == 36);
  CHECK_FALSE(m.all_even());
  CHECK_THROWS_AS(m * Monomial::variable(3), std::overflow_error);
}

TEST_CASE("product agrees with a naive oracle, small and large coefficients") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const long range = trial % 2 == 0 ? 5 : 4000000000000000000L;
    AmbientPoly a = random_poly(rng, 6, 5, 30, range);
    AmbientPoly b = random_poly(rng, 6, 4, 25, range);
    CHECK(as_map(a * b) == naive_product(a, b));
  }
}

TEST_CASE("ring axioms on random inputs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    AmbientPoly a = random_poly(rng, 7, 4, 12, 9);
    AmbientPoly b = random_poly(rng, 7, 3, 12, 9);
    AmbientPoly c = random_poly(rng, 7, 3, 12, 9);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
    CHECK(a + b - b == a);
  }
}

TEST_CASE("weighted accumulation equals the sum of products") {
  std::mt19937_64 rng(3);
  AmbientPoly a = random_poly(rng, 5, 3, 10, 9), b = random_poly(rng, 5, 3, 10, 9);
  AmbientPoly c = random_poly(rng, 5, 3, 10, 9), d = random_poly(rng, 5, 3, 10, 9);
  ProductAccumulator acc(5);
  acc.add(a, b, Rational(2, 3));
  acc.add(c, d, Rational(-5, 7));
  CHECK(acc.result() == a * b * Rational(2, 3) - c * d * Rational(5, 7));
}

TEST_CASE("derivatives: Leibniz rule and Euler identity") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    AmbientPoly a = random_poly(rng, 6, 4, 15, 9), b = random_poly(rng, 6, 4, 15, 9);
    for (int i = 0; i < 6; ++i) CHECK((a * b).partial(i) == a.partial(i) * b + a * b.partial(i));
    // sum_i x_i d_i P_d = d P_d on each homogeneous part.
    AmbientPoly euler(6);
    for (int i = 0; i < 6; ++i) euler += a.partial(i).times_coordinate(i);
    CHECK(euler == a.euler());
  }
}

TEST_CASE("laplacian of known polynomials") {
  const int nv = 6;
  const AmbientPoly r2 = AmbientPoly::radius_squared(nv);
  CHECK(ambient_laplacian(r2) == AmbientPoly::constant(nv, 2 * nv));
  // Lap(r^2 h) = (2N + 4 deg h) h for harmonic h.
  const AmbientPoly h = AmbientPoly::parse(nv, "1 * x0 x1 x2");
  CHECK(ambient_laplacian(h).is_zero());
  CHECK(ambient_laplacian(r2 * h) == h * Rational(2 * nv + 12));
  CHECK(ambient_gradient(h).size() == 6);
}

TEST_CASE("text serialization round trips") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    AmbientPoly a = random_poly(rng, 8, 5, 20, 12);
    CHECK(AmbientPoly::parse(8, a.to_string()) == a);
  }
  const AmbientPoly p = AmbientPoly::parse(3, "3/2 * x0^2 x1 - 1 * x2 + 5");
  CHECK(p.coefficient(Monomial::from_exponents(std::vector<int>{2, 1, 0})) == Rational(3, 2));
  CHECK(p.to_string() == "3/2 * x0^2 x1 - 1 * x2 + 5");
  CHECK(AmbientPoly::parse(3, "-x0 + x0") .is_zero());
  CHECK_THROWS_AS(AmbientPoly::parse(3, "x3"), std::invalid_argument);
  CHECK_THROWS_AS(AmbientPoly::parse(3, "1 + + 2"), std::invalid_argument);
}

TEST_CASE("evaluation matches exact evaluation") {
  const AmbientPoly p = AmbientPoly::parse(3, "3/2 * x0^2 x1 - 1 * x2 + 5");
  const double x[] = {0.5, -2.0, 1.0};
  CHECK(p.evaluate(x) == doctest::Approx(3.25));
  const Rational xq[] = {Rational(1, 2), Rational(-2), Rational(1)};
  CHECK(p.evaluate(xq) == Rational(13, 4));
}

TEST_CASE("mixed spaces are rejected") {
  CHECK_THROWS_AS(AmbientPoly(3) + AmbientPoly(4), std::invalid_argument);
  CHECK_THROWS_AS(AmbientPoly(11), std::invalid_argument);
}
