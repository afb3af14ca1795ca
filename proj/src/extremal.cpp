#include "confsphere/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

namespace confsphere {

// ----------------------------------------------------- sharp constants

Rational sharp_constant_gjms(int n, int k) {
  GjmsOrder(n, k);
  Rational out = 1;
  for (int j = 1; j <= k; ++j) out *= frac(static_cast<long>(n - 2 * j) * (n + 2 * j - 2), 4);
  return out;
}

Rational sharp_constant_sigma2(int n) {
  if (n < 5) throw std::invalid_argument("the sigma_2 inequality needs n >= 5");
  const Rational c = frac(n - 4, 4);
  return frac(static_cast<long>(n) * (n - 1), 8) * c * c * c;
}

Rational sharp_constant(const OperatorDescriptor& d) {
  return d.kind == OperatorDescriptor::Kind::Gjms ? sharp_constant_gjms(d.n, d.k) : sharp_constant_sigma2(d.n);
}

// ------------------------------------------------------- constraint set

ConstraintSet ConstraintSet::for_descriptor(const OperatorDescriptor& d) {
  return ConstraintSet{d.n, d.j, d.k, d.kind == OperatorDescriptor::Kind::Sigma2};
}

double ConstraintSet::target() const { return sphere_volume(n); }

double ConstraintSet::mass(const ZonalFunction& u, const JacobiQuadrature& quad) const {
  const double N = exponent();
  return quad.sphere_integral([&](double t) {
    const double v = u.evaluate(t);
    if (!(v > 0.0)) throw std::invalid_argument("constraint mass needs a positive function");
    return std::pow(v, N);
  });
}

bool ConstraintSet::admissible(const ZonalFunction& u, const JacobiQuadrature& quad) const {
  for (double t : quad.nodes()) {
    if (!(u.evaluate(t) > 0.0)) return false;
  }
  if (sigma1_positive) {
    const ZonalFunction s1 = sigma1_zonal(u);
    for (double t : quad.nodes()) {
      if (!(s1.evaluate(t) > 0.0)) return false;
    }
  }
  return true;
}

bool ConstraintSet::contains(const ZonalFunction& u, const JacobiQuadrature& quad, double tol) const {
  if (!admissible(u, quad)) return false;
  return std::abs(mass(u, quad) - target()) <= tol * target();
}

// ------------------------------------------------------- zonal operator

ZonalFunction apply_zonal(const OperatorDescriptor& d, const ZonalFunction& u) {
  if (d.kind == OperatorDescriptor::Kind::Gjms) return gjms_zonal(u, GjmsOrder(d.n, d.k));
  return sigma2_zonal(u);
}

ZonalFunction apply_first_slot_zonal(const OperatorDescriptor& d, const ZonalFunction& v, const ZonalFunction& u) {
  if (d.kind == OperatorDescriptor::Kind::Gjms) return gjms_zonal(v, GjmsOrder(d.n, d.k));
  return sigma2_first_slot_zonal(v, u);
}

double energy_zonal(const OperatorDescriptor& d, const ZonalFunction& u, const JacobiQuadrature& quad) {
  if (d.kind == OperatorDescriptor::Kind::Gjms) return gjms_energy_zonal(u, GjmsOrder(d.n, d.k), quad);
  return sigma2_energy_zonal(u, quad);
}

double euler_lagrange_residual(const ZonalFunction& u, const OperatorDescriptor& d, double energy,
                               const JacobiQuadrature& quad) {
  const double p = static_cast<double>(d.n * d.j + 2 * d.k) / (d.n - 2 * d.k);
  const double scale = energy / sphere_volume(d.n);
  const ZonalFunction lu = apply_zonal(d, u);
  double sup = 0.0;
  for (double t : quad.nodes()) {
    const double v = u.evaluate(t);
    if (!(v > 0.0)) throw std::invalid_argument("Euler-Lagrange residual needs a positive function");
    sup = std::max(sup, std::abs(lu.evaluate(t) - scale * std::pow(v, p)));
  }
  return sup;
}

// ------------------------------------------------------------ stability

namespace {

// u^e for rational e, where this stays polynomial.
SphereFunction exact_power(const SphereFunction& u, const Rational& e) {
  const int n = u.dimension();
  if (e == 0) return SphereFunction::constant(n, 1);
  if (u.degree() <= 0) {
    const Rational c = u.is_zero() ? Rational(0) : u.components().begin()->second.coefficient_at(0);
    if (c == 1) return u;
  }
  if (e.get_den() != 1 || e < 0) throw std::invalid_argument("power is not a polynomial; the exact route needs u = 1 or an integral exponent");
  SphereFunction out = SphereFunction::constant(n, 1);
  for (long i = 0; i < e.get_num().get_si(); ++i) out = multiply(out, u);
  return out;
}

Rational ratio(long a, long b) { return frac(a, b); }

}  // namespace

std::pair<Rational, Rational> stability_pair(const SphereFunction& u, const SphereFunction& v, const OperatorDescriptor& d) {
  const int n = d.n, j = d.j, k = d.k;
  if (u.dimension() != n || v.dimension() != n) throw std::invalid_argument("dimension mismatch");
  const SphereFunction tangent = multiply(v, exact_power(u, ratio(n * j + 2 * k, n - 2 * k)));
  if (integrate(tangent).coefficient != 0) throw std::invalid_argument("v is not tangent to the constraint set at u");
  const Rational lhs = integrate(multiply(v, d.apply_first_slot(v, u))).coefficient;
  const Rational energy = d.energy(u).coefficient;
  const SphereFunction weight = exact_power(u, ratio(n * (j - 1) + 4 * k, n - 2 * k));
  const Rational rhs = ratio(n * j + 2 * k, j * (n - 2 * k)) * energy * integrate(multiply(multiply(v, v), weight)).coefficient;
  return {lhs, rhs};
}

std::pair<double, double> stability_pair(const ZonalFunction& u, const ZonalFunction& v, const OperatorDescriptor& d,
                                         const JacobiQuadrature& quad, double tol) {
  const int n = d.n, j = d.j, k = d.k;
  const double w = sphere_volume(n);
  const double p1 = static_cast<double>(n * j + 2 * k) / (n - 2 * k);
  const double p2 = static_cast<double>(n * (j - 1) + 4 * k) / (n - 2 * k);
  const double tangency = quad.sphere_integral([&](double t) { return v.evaluate(t) * std::pow(u.evaluate(t), p1); });
  if (std::abs(tangency) > tol * w) throw std::invalid_argument("v is not tangent to the constraint set at u");
  const ZonalFunction lv = apply_first_slot_zonal(d, v, u);
  const double lhs = quad.sphere_integral([&](double t) { return v.evaluate(t) * lv.evaluate(t); });
  const double energy = energy_zonal(d, u, quad);
  const double mass = quad.sphere_integral([&](double t) {
    const double x = v.evaluate(t);
    return x * x * std::pow(u.evaluate(t), p2);
  });
  const double rhs = static_cast<double>(n * j + 2 * k) / (j * (n - 2 * k)) * energy / w * mass;
  return {lhs, rhs};
}

CommutatorGap commutator_stability_gap(const SphereFunction& u, const OperatorDescriptor& d, const SphereQuadrature& grid) {
  const int n = d.n, j = d.j, k = d.k;
  if (u.dimension() != n || grid.dimension() != n) throw std::invalid_argument("dimension mismatch");
  const SphereField field = [&u](std::span<const double> x) { return u.evaluate(x); };
  for (std::size_t q = 0; q < grid.size(); ++q) {
    if (!(field(grid.point(q)) > 0.0)) throw std::invalid_argument("commutator gap needs a positive function");
  }
  const auto m = moments(field, static_cast<double>(n) * (j + 1) / (n - 2 * k), grid);
  double norm2 = 0.0;
  for (double x : m) norm2 += x * x;
  if (std::sqrt(norm2) >= 1e-8) throw std::invalid_argument("commutator gap needs a balanced function");

  std::vector<SphereFunction> slots(static_cast<std::size_t>(j), u);
  const SphereFunction lu = d.apply(slots);
  SphereFunction sum(n);
  for (int i = 0; i <= n; ++i) {
    const SphereFunction x = SphereFunction::coordinate(n, i);
    const SphereFunction xu = multiply(x, u);
    sum += multiply(xu, d.apply_first_slot(xu, u) - multiply(x, lu));
  }
  CommutatorGap gap;
  gap.lhs = integrate(sum).coefficient;
  gap.rhs = ratio(2L * (j + 1) * k, j * (n - 2 * k)) * d.energy(u).coefficient;
  return gap;
}

// -------------------------------------------------------------- deficit

namespace {

void require_sigma1_positive(const SphereFunction& u, const SphereQuadrature& grid) {
  const SphereFunction s1 = sigma1(u);
  for (std::size_t q = 0; q < grid.size(); ++q) {
    if (!(s1.evaluate(grid.point(q)) > 0.0)) throw std::invalid_argument("sigma_1(u) must be positive on the grid");
  }
}

// Exact route for constants c > 0: Q(c) = E(1), so the deficit is E(1)/omega_n - Lambda.
double constant_deficit(const OperatorDescriptor& d) {
  const SphereFunction one = SphereFunction::constant(d.n, 1);
  return to_double(d.energy(one).coefficient - sharp_constant(d)) * sphere_volume(d.n);
}

}  // namespace

double deficit(const ZonalFunction& u, const OperatorDescriptor& d, const JacobiQuadrature& quad) {
  const ConstraintSet cs = ConstraintSet::for_descriptor(d);
  if (!cs.admissible(u, quad)) throw std::invalid_argument("trial function is not admissible");
  const bool constant =
      u.is_polynomial() && std::all_of(u.terms().begin(), u.terms().end(), [](const ZonalTerm& t) { return t.m == 0; });
  if (constant) return constant_deficit(d);
  const double w = cs.target();
  const double q = energy_zonal(d, u, quad) * std::pow(w / cs.mass(u, quad), (d.j + 1) / cs.exponent());
  return q - to_double(sharp_constant(d)) * w;
}

double deficit(const SphereFunction& u, const OperatorDescriptor& d, const SphereQuadrature& grid) {
  const ConstraintSet cs = ConstraintSet::for_descriptor(d);
  const double N = cs.exponent();
  double mass = 0.0;
  for (std::size_t q = 0; q < grid.size(); ++q) {
    const double v = u.evaluate(grid.point(q));
    if (!(v > 0.0)) throw std::invalid_argument("trial function is not admissible");
    mass += grid.weights()[q] * std::pow(v, N);
  }
  if (cs.sigma1_positive) require_sigma1_positive(u, grid);
  if (u.degree() == 0) return constant_deficit(d);
  const double w = cs.target();
  return d.energy(u).value() * std::pow(w / mass, (d.j + 1) / N) - to_double(sharp_constant(d)) * w;
}

// --------------------------------------------------------- minimization

std::vector<ZonalFunction> zonal_harmonic_basis(int n, int max_degree) {
  if (max_degree < 0) throw std::invalid_argument("degree must be non-negative");
  const double lambda = 0.5 * (n - 1);
  // Gegenbauer recurrence on monomial coefficients.
  std::vector<std::vector<double>> c;
  c.push_back({1.0});
  if (max_degree >= 1) c.push_back({0.0, 2.0 * lambda});
  for (int l = 1; l < max_degree; ++l) {
    std::vector<double> next(static_cast<std::size_t>(l + 2), 0.0);
    for (std::size_t i = 0; i < c[static_cast<std::size_t>(l)].size(); ++i)
      next[i + 1] += 2.0 * (l + lambda) * c[static_cast<std::size_t>(l)][i] / (l + 1);
    for (std::size_t i = 0; i < c[static_cast<std::size_t>(l - 1)].size(); ++i)
      next[i] -= (l + 2.0 * lambda - 1.0) * c[static_cast<std::size_t>(l - 1)][i] / (l + 1);
    c.push_back(std::move(next));
  }
  const JacobiQuadrature quad(n);
  const double w = sphere_volume(n);
  std::vector<ZonalFunction> out;
  for (const auto& coeffs : c) {
    const ZonalFunction g = ZonalFunction::polynomial(n, coeffs);
    const double norm2 = quad.sphere_integral([&](double t) { return g.evaluate(t) * g.evaluate(t); });
    out.push_back(g * std::sqrt(w / norm2));
  }
  return out;
}

nlohmann::json MinimizationResult::to_json() const {
  return {{"descriptor", descriptor},
          {"n", n},
          {"k", k},
          {"j", j},
          {"L", L},
          {"seed", seed},
          {"quotient", quotient},
          {"sharp", sharp},
          {"deficit", deficit},
          {"iterations", iterations},
          {"grad_norm", grad_norm},
          {"converged", converged},
          {"coefficients", coefficients},
          {"bubble_fit", {{"a", bubble_fit.a}, {"xi", bubble_fit.xi}, {"residual", bubble_fit.residual}}}};
}

namespace {

// Functor shape expected by Eigen's NumericalDiff.
struct FitFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const std::vector<double>& t;
  const std::vector<double>& sw;
  const std::vector<double>& u;
  double q;
  FitFunctor(const std::vector<double>& t_, const std::vector<double>& sw_, const std::vector<double>& u_, double q_)
      : t(t_), sw(sw_), u(u_), q(q_) {}
  int inputs() const { return 2; }
  int values() const { return static_cast<int>(t.size()); }
  // Parameters (a, eta) with xi = tanh(eta) to stay inside (-1, 1).
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
    const double xi = std::tanh(x(1));
    const double s = std::sqrt(1.0 - xi * xi);
    for (std::size_t i = 0; i < t.size(); ++i) {
      fvec(static_cast<Eigen::Index>(i)) = sw[i] * (u[i] - x(0) * std::pow((1.0 + xi * t[i]) / s, -q));
    }
    return 0;
  }
};

}  // namespace

BubbleFit fit_bubble(const ZonalFunction& u, double q, const JacobiQuadrature& quad) {
  std::vector<double> sw, uv;
  double unorm = 0.0, mean = 0.0, wsum = 0.0;
  for (int i = 0; i < quad.size(); ++i) {
    const double w = quad.weights()[static_cast<std::size_t>(i)];
    const double v = u.evaluate(quad.nodes()[static_cast<std::size_t>(i)]);
    sw.push_back(std::sqrt(w));
    uv.push_back(v);
    unorm += w * v * v;
    mean += w * v;
    wsum += w;
  }
  FitFunctor f(quad.nodes(), sw, uv, q);
  Eigen::NumericalDiff<FitFunctor> nd(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<FitFunctor>> lm(nd);
  lm.parameters.xtol = 1e-14;
  lm.parameters.ftol = 1e-14;
  lm.parameters.maxfev = 2000;
  Eigen::VectorXd x(2);
  x << mean / wsum, 0.0;
  lm.minimize(x);
  Eigen::VectorXd fvec(quad.size());
  f(x, fvec);
  BubbleFit fit;
  fit.a = x(0);
  fit.xi = std::tanh(x(1));
  fit.residual = std::sqrt(fvec.squaredNorm() / unorm);
  return fit;
}

namespace {

// Quotient state on the coefficient vector.
class QuotientModel {
 public:
  QuotientModel(const OperatorDescriptor& d, int L, int nodes)
      : d_(d), quad_(d.n, nodes), basis_(zonal_harmonic_basis(d.n, L)), cs_(ConstraintSet::for_descriptor(d)) {
    w_ = sphere_volume(d.n);
    N_ = cs_.exponent();
    const std::size_t nn = static_cast<std::size_t>(quad_.size());
    values_.assign(basis_.size(), std::vector<double>(nn));
    for (std::size_t l = 0; l < basis_.size(); ++l)
      for (std::size_t i = 0; i < nn; ++i) values_[l][i] = basis_[l].evaluate(quad_.nodes()[i]);
    if (d.kind == OperatorDescriptor::Kind::Sigma2) {
      first_.assign(basis_.size(), std::vector<double>(nn));
      second_.assign(basis_.size(), std::vector<double>(nn));
      for (std::size_t l = 0; l < basis_.size(); ++l) {
        const ZonalFunction d1 = differentiate(basis_[l]);
        const ZonalFunction d2 = differentiate(d1);
        for (std::size_t i = 0; i < nn; ++i) {
          first_[l][i] = d1.evaluate(quad_.nodes()[i]);
          second_[l][i] = d2.evaluate(quad_.nodes()[i]);
        }
      }
    }
    for (std::size_t l = 0; l < basis_.size(); ++l) {
      const int deg = static_cast<int>(l);
      const double lam = static_cast<double>(deg) * (deg + d.n - 1);
      double mu;
      if (d.kind == OperatorDescriptor::Kind::Gjms) {
        mu = to_double(gjms_eigenvalue(deg, GjmsOrder(d.n, d.k)));
        eig_.push_back(mu);
      } else {
        const Sigma2Constants s = Sigma2Constants::for_dimension(d.n);
        mu = to_double(s.gamma) + 2.0 * to_double(s.beta) * lam / 3.0;
      }
      precond_.push_back(1.0 / ((d.j + 1) * d.j * mu * w_));
    }
  }

  const JacobiQuadrature& quad() const { return quad_; }
  double omega() const { return w_; }
  std::size_t size() const { return basis_.size(); }
  const std::vector<double>& preconditioner() const { return precond_; }

  ZonalFunction function(const std::vector<double>& c) const {
    ZonalFunction u(d_.n);
    for (std::size_t l = 0; l < c.size(); ++l) u += basis_[l] * c[l];
    return u;
  }

  std::vector<double> nodal(const std::vector<double>& c) const {
    std::vector<double> v(static_cast<std::size_t>(quad_.size()), 0.0);
    for (std::size_t l = 0; l < c.size(); ++l)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += c[l] * values_[l][i];
    return v;
  }

  bool admissible(const std::vector<double>& c) const {
    for (double v : nodal(c))
      if (!(v > 0.0)) return false;
    return !cs_.sigma1_positive || cs_.admissible(function(c), quad_);
  }

  double mass(const std::vector<double>& c) const {
    const auto v = nodal(c);
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) m += quad_.weights()[i] * std::pow(v[i], N_);
    return m * sub_volume();
  }

  /// Rescales c onto the constraint set.
  void normalize(std::vector<double>& c) const {
    const double s = std::pow(w_ / mass(c), 1.0 / N_);
    for (double& x : c) x *= s;
  }

  /// Q(c) and its gradient.
  double evaluate(const std::vector<double>& c, std::vector<double>* grad) const {
    const std::size_t nb = basis_.size();
    const auto v = nodal(c);
    const double sub = sub_volume();
    double energy = 0.0;
    std::vector<double> ge(nb, 0.0);
    if (d_.kind == OperatorDescriptor::Kind::Gjms) {
      for (std::size_t l = 0; l < nb; ++l) {
        energy += w_ * eig_[l] * c[l] * c[l];
        ge[l] = 2.0 * w_ * eig_[l] * c[l];
      }
    } else {
      const ZonalFunction dv = sigma2_zonal(function(c));
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double wd = quad_.weights()[i] * sub * dv.evaluate(quad_.nodes()[i]);
        energy += wd * v[i];
        for (std::size_t l = 0; l < nb; ++l) ge[l] += 4.0 * wd * values_[l][i];
      }
    }
    double mass = 0.0;
    std::vector<double> gm(nb, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double wi = quad_.weights()[i] * sub;
      const double p = std::pow(v[i], N_ - 1.0);
      mass += wi * p * v[i];
      for (std::size_t l = 0; l < nb; ++l) gm[l] += N_ * wi * p * values_[l][i];
    }
    const double e = (d_.j + 1) / N_;
    const double scale = std::pow(w_ / mass, e);
    if (grad) {
      grad->assign(nb, 0.0);
      for (std::size_t l = 0; l < nb; ++l) (*grad)[l] = scale * (ge[l] - e * energy / mass * gm[l]);
    }
    return energy * scale;
  }

  /// log Q(c + step) - log Q(c), formed from the increments of E and of the
  /// mass so that changes far below the rounding level of Q stay visible.
  double log_ratio(const std::vector<double>& c, const std::vector<double>& step) const {
    const std::size_t nb = basis_.size();
    std::vector<double> trial(nb);
    for (std::size_t l = 0; l < nb; ++l) trial[l] = c[l] + step[l];
    double e0 = 0.0, de = 0.0;
    if (d_.kind == OperatorDescriptor::Kind::Gjms) {
      for (std::size_t l = 0; l < nb; ++l) {
        e0 += w_ * eig_[l] * c[l] * c[l];
        de += w_ * eig_[l] * step[l] * (2.0 * c[l] + step[l]);
      }
    } else {
      const auto [e, inc] = sigma2_energy_increment(c, step);
      e0 = e;
      de = inc;
    }
    const auto v = nodal(c);
    const auto dv = nodal(step);
    double m0 = 0.0, dm = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double p = std::pow(v[i], N_);
      m0 += quad_.weights()[i] * p;
      dm += quad_.weights()[i] * p * std::expm1(N_ * std::log1p(dv[i] / v[i]));
    }
    return std::log1p(de / e0) - (d_.j + 1) / N_ * std::log1p(dm / m0);
  }

  double min_sigma1(const std::vector<double>& c) const {
    const ZonalFunction s1 = sigma1_zonal(function(c));
    double m = std::numeric_limits<double>::infinity();
    for (double t : quad_.nodes()) m = std::min(m, s1.evaluate(t));
    return m;
  }

 private:
  double sub_volume() const { return sphere_volume(d_.n - 1); }

  // A value together with its increment under c -> c + step; products expand
  // the increment so that it never comes from subtracting two values.
  struct Inc {
    double x, d;
    friend Inc operator+(Inc a, Inc b) { return {a.x + b.x, a.d + b.d}; }
    friend Inc operator-(Inc a, Inc b) { return {a.x - b.x, a.d - b.d}; }
    friend Inc operator*(Inc a, Inc b) { return {a.x * b.x, a.x * b.d + a.d * b.x + a.d * b.d}; }
    friend Inc operator*(double s, Inc a) { return {s * a.x, s * a.d}; }
  };

  // Dirichlet-form sigma_2 energy at c and its increment, with
  // sigma_1 = -(n-4)/8 Lap(u^2) - |grad u|^2 + n c^2 u^2 / 2.
  std::pair<double, double> sigma2_energy_increment(const std::vector<double>& c, const std::vector<double>& step) const {
    const int n = d_.n;
    const double cc = 0.25 * (n - 4);
    const double gamma = 0.125 * n * (n - 1) * cc * cc * cc;
    double e = 0.0, de = 0.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(quad_.size()); ++i) {
      const double t = quad_.nodes()[i];
      Inc u{0, 0}, u1{0, 0}, u2{0, 0};
      for (std::size_t l = 0; l < c.size(); ++l) {
        u = u + Inc{c[l] * values_[l][i], step[l] * values_[l][i]};
        u1 = u1 + Inc{c[l] * first_[l][i], step[l] * first_[l][i]};
        u2 = u2 + Inc{c[l] * second_[l][i], step[l] * second_[l][i]};
      }
      const Inc g = (1.0 - t * t) * (u1 * u1);
      const Inc lap = (1.0 - t * t) * u2 - (n * t) * u1;
      const Inc uu = u * u;
      const Inc s1 = (-(n - 4) / 4.0) * (u * lap + g) - g + (0.5 * n * cc * cc) * uu;
      const Inc f = g * s1 + 0.5 * (g * g) + (0.5 * (n - 2) * cc * cc) * (uu * g) + gamma * (uu * uu);
      e += quad_.weights()[i] * f.x;
      de += quad_.weights()[i] * f.d;
    }
    return {e * sub_volume(), de * sub_volume()};
  }

  const OperatorDescriptor& d_;
  JacobiQuadrature quad_;
  std::vector<ZonalFunction> basis_;
  ConstraintSet cs_;
  double w_ = 0.0;
  double N_ = 0.0;
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<double>> first_, second_;
  std::vector<double> eig_;
  std::vector<double> precond_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

MinimizationResult minimize_quotient(const OperatorDescriptor& d, int L, std::uint64_t seed, const MinimizationOptions& opt) {
  if (L < 0 || L > 8) throw std::invalid_argument("truncation degree must lie in [0, 8]");
  if (opt.init != "random" && opt.init != "constant") throw std::invalid_argument("init must be \"random\" or \"constant\"");
  const QuotientModel model(d, L, opt.nodes);
  const std::size_t nb = model.size();
  const double w = model.omega();

  std::vector<double> c(nb, 0.0);
  c[0] = 1.0;
  if (opt.init == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (std::size_t l = 1; l < nb; ++l) c[l] = 0.3 * uni(rng) / static_cast<double>(l * l);
    while (!model.admissible(c)) {
      for (std::size_t l = 1; l < nb; ++l) c[l] *= 0.5;
    }
  }
  model.normalize(c);

  MinimizationResult res;
  res.descriptor = d.name;
  res.n = d.n;
  res.k = d.k;
  res.j = d.j;
  res.L = L;
  res.seed = seed;

  std::vector<double> g;
  double q = model.evaluate(c, &g);
  double alpha = 1.0;
  std::vector<std::vector<double>> hist_s, hist_y;
  std::vector<double> hist_rho;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    res.grad_norm = norm(g) / w;
    if (res.grad_norm < opt.grad_tol) {
      res.converged = true;
      break;
    }
    // L-BFGS two-loop recursion with the diagonal preconditioner as the
    // initial inverse Hessian; falls back to the preconditioned gradient
    // whenever the result is not a descent direction.
    std::vector<double> dir(g);
    std::vector<double> coef(hist_s.size());
    for (std::size_t h = hist_s.size(); h-- > 0;) {
      coef[h] = hist_rho[h] * dot(hist_s[h], dir);
      for (std::size_t l = 0; l < nb; ++l) dir[l] -= coef[h] * hist_y[h][l];
    }
    for (std::size_t l = 0; l < nb; ++l) dir[l] *= model.preconditioner()[l];
    for (std::size_t h = 0; h < hist_s.size(); ++h) {
      const double b = hist_rho[h] * dot(hist_y[h], dir);
      for (std::size_t l = 0; l < nb; ++l) dir[l] += (coef[h] - b) * hist_s[h][l];
    }
    for (double& x : dir) x = -x;
    double slope = dot(g, dir);
    if (!(slope < 0.0)) {
      hist_s.clear();
      hist_y.clear();
      hist_rho.clear();
      for (std::size_t l = 0; l < nb; ++l) dir[l] = -model.preconditioner()[l] * g[l];
      slope = dot(g, dir);
    }
    alpha = hist_s.empty() ? std::min(2.0 * alpha, 64.0) : 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, alpha *= 0.5) {
      std::vector<double> step(nb), trial(nb);
      for (std::size_t l = 0; l < nb; ++l) {
        step[l] = alpha * dir[l];
        trial[l] = c[l] + step[l];
      }
      if (!model.admissible(trial)) continue;
      const double dq = q * std::expm1(model.log_ratio(c, step));
      if (dq <= 1e-4 * alpha * slope) {
        model.normalize(trial);
        std::vector<double> gt;
        const double qt = model.evaluate(trial, &gt);
        std::vector<double> sv(nb), yv(nb);
        for (std::size_t l = 0; l < nb; ++l) {
          sv[l] = trial[l] - c[l];
          yv[l] = gt[l] - g[l];
        }
        const double sy = dot(sv, yv);
        if (sy > 1e-14 * norm(sv) * norm(yv)) {
          if (hist_s.size() == 8) {
            hist_s.erase(hist_s.begin());
            hist_y.erase(hist_y.begin());
            hist_rho.erase(hist_rho.begin());
          }
          hist_s.push_back(std::move(sv));
          hist_y.push_back(std::move(yv));
          hist_rho.push_back(1.0 / sy);
        }
        c = std::move(trial);
        g = std::move(gt);
        q = qt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // barrier starvation or no further decrease at working precision
  }
  res.grad_norm = norm(g) / w;
  res.converged = res.grad_norm < opt.grad_tol;
  res.iterations = it;
  res.coefficients = c;
  res.quotient = q;
  res.sharp = to_double(sharp_constant(d)) * w;
  res.deficit = q - res.sharp;
  const double qexp = d.kind == OperatorDescriptor::Kind::Gjms ? 0.5 * (d.n - 2 * d.k) : 0.25 * (d.n - 4);
  res.bubble_fit = fit_bubble(model.function(c), qexp, model.quad());
  if (d.kind == OperatorDescriptor::Kind::Sigma2) res.min_sigma1 = model.min_sigma1(c);
  return res;
}

}  // namespace confsphere
