#pragma once

#include <vector>

#include "confsphere/operators.hpp"
#include "json.hpp"

namespace confsphere {

/// Gauss-Jacobi rule on [-1, 1] for the weight (1 - t^2)^{(n-2)/2}, which
/// turns zonal integrals over S^n into one-dimensional ones:
///   int_{S^n} f(t) = omega_{n-1} int_{-1}^{1} f(t) (1 - t^2)^{(n-2)/2} dt.
class JacobiQuadrature {
 public:
  explicit JacobiQuadrature(int n, int nodes = 200);

  int dimension() const { return n_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// omega_{n-1} sum_i w_i f(t_i).
  template <class F>
  double sphere_integral(F f) const {
    double total = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) total += weights_[i] * f(nodes_[i]);
    return total * sub_volume_;
  }

 private:
  int n_;
  double sub_volume_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct ZonalTerm {
  double c;
  int m;
  double s;
};

/// sum c t^m (1 + r t)^s on S^n, where t is the axial coordinate and |r| < 1.
/// Terms are kept merged on equal (m, s); exponents built from halves and
/// quarters stay exact in binary64, so merging by equality is reliable.
class ZonalFunction {
 public:
  explicit ZonalFunction(int n = 5, double r = 0.0);

  static ZonalFunction constant(int n, double c);
  /// sum_m coeffs[m] t^m.
  static ZonalFunction polynomial(int n, const std::vector<double>& coeffs);
  /// c (1 + r t)^s.
  static ZonalFunction power(int n, double r, double s, double c = 1.0);
  /// ((1 + r t) / sqrt(1 - r^2))^{-q}, the zonal profile of a bubble with |xi| = r.
  static ZonalFunction bubble(int n, double r, double q);
  static ZonalFunction from_terms(int n, double r, const std::vector<ZonalTerm>& terms);

  int dimension() const { return n_; }
  double r() const { return r_; }
  const std::vector<ZonalTerm>& terms() const { return terms_; }
  bool is_polynomial() const;

  double evaluate(double t) const;

  ZonalFunction operator-() const;
  ZonalFunction& operator+=(const ZonalFunction& o);
  ZonalFunction& operator-=(const ZonalFunction& o);
  ZonalFunction& operator*=(double c);
  friend ZonalFunction operator+(ZonalFunction a, const ZonalFunction& b) { return a += b; }
  friend ZonalFunction operator-(ZonalFunction a, const ZonalFunction& b) { return a -= b; }
  friend ZonalFunction operator*(ZonalFunction a, double c) { return a *= c; }
  friend ZonalFunction operator*(double c, ZonalFunction a) { return a *= c; }
  friend ZonalFunction operator*(const ZonalFunction& a, const ZonalFunction& b);

  /// {n, r, terms: [[c, m, s], ...]}.
  nlohmann::json to_json() const;
  static ZonalFunction from_json(const nlohmann::json& j);

 private:
  void add_term(double c, int m, double s);
  void simplify();
  double common_r(const ZonalFunction& o) const;

  int n_;
  double r_;
  std::vector<ZonalTerm> terms_;
};

ZonalFunction differentiate(const ZonalFunction& f);
/// (1 - t^2) f'' - n t f'.
ZonalFunction laplace_beltrami_zonal(const ZonalFunction& f);
/// prod_j (-Lap + (n-2j)(n+2j-2)/4) applied factor by factor.
ZonalFunction gjms_zonal(const ZonalFunction& f, const GjmsOrder& order);
/// (1 - t^2) f'^2.
ZonalFunction grad_sq_zonal(const ZonalFunction& f);
/// (1 - t^2) f' g'.
ZonalFunction grad_inner_zonal(const ZonalFunction& f, const ZonalFunction& g);
/// delta(g df) = <grad g, grad f> + g Lap f.
ZonalFunction divergence_term_zonal(const ZonalFunction& g, const ZonalFunction& f);
ZonalFunction sigma1_zonal(const ZonalFunction& f);
/// The sigma_2 operator D(f) = L(f, f, f) in closed form.
ZonalFunction sigma2_zonal(const ZonalFunction& f);
/// F(a,b,c) = delta(h dc) + c q with h = <grad a, grad b>/2 + alpha Lap(ab) and
/// q = -alpha Lap<grad a, grad b> - beta Lap(ab) + gamma ab.
ZonalFunction sigma2_unsymmetrized_zonal(const ZonalFunction& a, const ZonalFunction& b, const ZonalFunction& c);
/// L(v, u, u) = (2 F(v,u,u) + F(u,u,v)) / 3.
ZonalFunction sigma2_first_slot_zonal(const ZonalFunction& v, const ZonalFunction& u);

double integrate_zonal(const ZonalFunction& f, const JacobiQuadrature& quad);
double integrate_zonal(const ZonalFunction& f);
/// Quadrature value of int |grad f|^2 sigma_1(f) + |grad f|^4/2
///   + (n-2)/2 c^2 f^2 |grad f|^2 + gamma f^4.
double sigma2_energy_zonal(const ZonalFunction& f, const JacobiQuadrature& quad);
double sigma2_energy_zonal(const ZonalFunction& f);
/// int f L_2k f.
double gjms_energy_zonal(const ZonalFunction& f, const GjmsOrder& order, const JacobiQuadrature& quad);

}  // namespace confsphere
