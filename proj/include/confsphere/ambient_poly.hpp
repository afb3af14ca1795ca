#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "confsphere/rational.hpp"

namespace confsphere {

/// Exponent vector packed into 64 bits, six bits per variable.
///
/// Exponents are limited to 31 so that the product of two admissible
/// monomials never carries across fields; products are checked against that.
class Monomial {
 public:
  static constexpr int kMaxVariables = 10;
  static constexpr int kBits = 6;
  static constexpr int kMaxExponent = 31;

  constexpr Monomial() = default;
  constexpr explicit Monomial(std::uint64_t key) : key_(key) {}

  static Monomial from_exponents(std::span<const int> exponents);
  static Monomial variable(int i, int power = 1);

  int exponent(int i) const { return static_cast<int>((key_ >> (kBits * i)) & 63u); }
  int degree() const;
  std::uint64_t key() const { return key_; }
  bool all_even() const;

  Monomial operator*(Monomial other) const;

  friend bool operator==(Monomial a, Monomial b) { return a.key_ == b.key_; }
  friend bool operator<(Monomial a, Monomial b) { return a.key_ < b.key_; }

 private:
  std::uint64_t key_ = 0;
};

/// Exact polynomial in the ambient coordinates x0..x_{nvars-1}.
///
/// Stored as sorted monomials with integer numerators over one shared positive
/// denominator, normalised so that the gcd of all numerators and the
/// denominator is one. The representation is therefore canonical and equality
/// is structural.
class AmbientPoly {
 public:
  AmbientPoly() = default;
  explicit AmbientPoly(int nvars);

  static AmbientPoly constant(int nvars, const Rational& c);
  static AmbientPoly coordinate(int nvars, int i);
  static AmbientPoly monomial(int nvars, Monomial m, const Rational& c = 1);
  static AmbientPoly radius_squared(int nvars);
  static AmbientPoly from_terms(int nvars, const std::vector<std::pair<Monomial, Rational>>& terms);

  /// Accepts the format produced by to_string, e.g. "3/2 * x0^2 x1 - 1 * x2 + 5".
  static AmbientPoly parse(int nvars, std::string_view text);

  int nvars() const { return nvars_; }
  bool is_zero() const { return monos_.empty(); }
  std::size_t size() const { return monos_.size(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous() const;

  Monomial monomial_at(std::size_t i) const { return monos_[i]; }
  const Integer& numerator_at(std::size_t i) const { return nums_[i]; }
  const Integer& denominator() const { return den_; }
  Rational coefficient_at(std::size_t i) const;
  Rational coefficient(Monomial m) const;

  AmbientPoly homogeneous_part(int d) const;
  /// Entry d is the degree-d part; size is degree()+1.
  std::vector<AmbientPoly> homogeneous_parts() const;

  AmbientPoly partial(int i) const;
  AmbientPoly times_coordinate(int i) const;
  /// Multiplies every degree-d part by d (the radial derivative x . grad).
  AmbientPoly euler() const;
  /// Multiplies every degree-d part by the integer f(d).
  template <class F>
  AmbientPoly scale_by_degree(F f) const;

  AmbientPoly operator-() const;
  AmbientPoly& operator+=(const AmbientPoly& o);
  AmbientPoly& operator-=(const AmbientPoly& o);
  AmbientPoly& operator*=(const Rational& c);
  friend AmbientPoly operator+(AmbientPoly a, const AmbientPoly& b) { return a += b; }
  friend AmbientPoly operator-(AmbientPoly a, const AmbientPoly& b) { return a -= b; }
  friend AmbientPoly operator*(AmbientPoly a, const Rational& c) { return a *= c; }
  friend AmbientPoly operator*(const Rational& c, AmbientPoly a) { return a *= c; }
  friend AmbientPoly operator*(const AmbientPoly& a, const AmbientPoly& b);
  friend bool operator==(const AmbientPoly& a, const AmbientPoly& b);

  double evaluate(std::span<const double> x) const;
  Rational evaluate(std::span<const Rational> x) const;

  std::string to_string() const;

 private:
  friend class ProductAccumulator;
  void normalize();
  void check_same_space(const AmbientPoly& o) const;

  int nvars_ = 1;
  std::vector<Monomial> monos_;
  std::vector<Integer> nums_;
  Integer den_ = 1;
};

/// Accumulates sum_k w_k * A_k * B_k with a single hash pass.
///
/// Uses 128-bit accumulators when an a-priori magnitude bound rules out
/// overflow and GMP integers otherwise.
class ProductAccumulator {
 public:
  explicit ProductAccumulator(int nvars) : nvars_(nvars) {}
  void add(const AmbientPoly& a, const AmbientPoly& b, const Rational& weight = 1);
  AmbientPoly result() const;

 private:
  struct Item {
    const AmbientPoly* a;
    const AmbientPoly* b;
    Rational weight;
  };
  int nvars_;
  std::vector<Item> items_;
};

AmbientPoly add(const AmbientPoly& a, const AmbientPoly& b);
AmbientPoly mul(const AmbientPoly& a, const AmbientPoly& b);
AmbientPoly ambient_laplacian(const AmbientPoly& p);
std::vector<AmbientPoly> ambient_gradient(const AmbientPoly& p);

template <class F>
AmbientPoly AmbientPoly::scale_by_degree(F f) const {
  AmbientPoly out(nvars_);
  out.den_ = den_;
  out.monos_.reserve(size());
  out.nums_.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const long factor = static_cast<long>(f(monos_[i].degree()));
    if (factor == 0) continue;
    out.monos_.push_back(monos_[i]);
    out.nums_.push_back(nums_[i] * factor);
  }
  out.normalize();
  return out;
}

}  // namespace confsphere
