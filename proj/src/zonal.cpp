#include "confsphere/zonal.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace confsphere {

// ------------------------------------------------------------ quadrature

namespace {

// P_N^{(a,a)}(t) and P_{N-1}^{(a,a)}(t) by the three-term recurrence.
std::pair<double, double> jacobi_pair(int N, double a, double t) {
  double p0 = 1.0, p1 = (a + 1.0) * t;
  if (N == 0) return {p0, 0.0};
  for (int k = 2; k <= N; ++k) {
    const double s = 2.0 * k + 2.0 * a;
    const double p2 = ((s - 1.0) * s * (s - 2.0) * t * p1 - 2.0 * (k + a - 1.0) * (k + a - 1.0) * s * p0) /
                      (2.0 * k * (k + 2.0 * a) * (s - 2.0));
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

}  // namespace

JacobiQuadrature::JacobiQuadrature(int n, int nodes) : n_(n), sub_volume_(sphere_volume(n - 1)) {
  if (n < 2) throw std::invalid_argument("zonal quadrature needs n >= 2");
  if (nodes < 2) throw std::invalid_argument("quadrature needs at least two nodes");
  const double a = 0.5 * (n - 2);
  const int N = nodes;
  // Starting values from the Jacobi matrix of the monic recurrence.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd off(N - 1);
  for (int k = 1; k < N; ++k) {
    off(k - 1) = std::sqrt(k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  std::vector<double> t(solver.eigenvalues().data(), solver.eigenvalues().data() + N);
  // Newton polish on P_N, using (1 - t^2) P_N' = -N t P_N + (N + a) P_{N-1}.
  std::vector<double> dp(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    double x = t[static_cast<std::size_t>(i)];
    for (int it = 0; it < 8; ++it) {
      const auto [pn, pm] = jacobi_pair(N, a, x);
      const double d = (-N * x * pn + (N + a) * pm) / (1.0 - x * x);
      const double step = pn / d;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const auto [pn, pm] = jacobi_pair(N, a, x);
    t[static_cast<std::size_t>(i)] = x;
    dp[static_cast<std::size_t>(i)] = (-N * x * pn + (N + a) * pm) / (1.0 - x * x);
  }
  // w_i = 2^{2a+1} Gamma(N+a+1)^2 / (Gamma(N+2a+1) N!) / ((1 - t_i^2) P_N'(t_i)^2).
  const double log_c = (2.0 * a + 1.0) * std::log(2.0) + 2.0 * std::lgamma(N + a + 1.0) - std::lgamma(N + 2.0 * a + 1.0) -
                       std::lgamma(N + 1.0);
  const double c = std::exp(log_c);
  nodes_.resize(static_cast<std::size_t>(N));
  weights_.resize(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    const double x = t[u];
    nodes_[u] = x;
    weights_[u] = c / ((1.0 - x * x) * dp[u] * dp[u]);
  }
  // Exact mirror symmetry of the rule.
  for (int i = 0; i < N / 2; ++i) {
    const std::size_t lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(N - 1 - i);
    const double x = 0.5 * (nodes_[hi] - nodes_[lo]);
    const double w = 0.5 * (weights_[lo] + weights_[hi]);
    nodes_[lo] = -x;
    nodes_[hi] = x;
    weights_[lo] = weights_[hi] = w;
  }
  if (N % 2 == 1) nodes_[static_cast<std::size_t>(N / 2)] = 0.0;
  // The lgamma constant carries ~1e-12 relative error at N = 200; pin the
  // total mass to int (1 - t^2)^a dt = 2^{2a+1} Gamma(a+1)^2 / Gamma(2a+2).
  const double mass = std::pow(2.0, 2.0 * a + 1.0) * std::tgamma(a + 1.0) * std::tgamma(a + 1.0) / std::tgamma(2.0 * a + 2.0);
  double sum = 0.0;
  for (double w : weights_) sum += w;
  for (double& w : weights_) w *= mass / sum;
}

// -------------------------------------------------------- ZonalFunction

ZonalFunction::ZonalFunction(int n, double r) : n_(n), r_(r) {
  if (n < 2) throw std::invalid_argument("zonal functions need n >= 2");
  if (!(std::abs(r) < 1.0)) throw std::invalid_argument("zonal parameter r must satisfy |r| < 1");
}

ZonalFunction ZonalFunction::constant(int n, double c) {
  ZonalFunction f(n);
  f.add_term(c, 0, 0.0);
  f.simplify();
  return f;
}

ZonalFunction ZonalFunction::polynomial(int n, const std::vector<double>& coeffs) {
  ZonalFunction f(n);
  for (std::size_t m = 0; m < coeffs.size(); ++m) f.add_term(coeffs[m], static_cast<int>(m), 0.0);
  f.simplify();
  return f;
}

ZonalFunction ZonalFunction::power(int n, double r, double s, double c) {
  ZonalFunction f(n, r);
  f.add_term(c, 0, s);
  f.simplify();
  return f;
}

ZonalFunction ZonalFunction::bubble(int n, double r, double q) {
  return power(n, r, -q, std::pow(1.0 - r * r, 0.5 * q));
}

ZonalFunction ZonalFunction::from_terms(int n, double r, const std::vector<ZonalTerm>& terms) {
  ZonalFunction f(n, r);
  for (const auto& t : terms) {
    if (t.m < 0) throw std::invalid_argument("negative power of t");
    f.add_term(t.c, t.m, t.s);
  }
  f.simplify();
  return f;
}

bool ZonalFunction::is_polynomial() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const ZonalTerm& t) { return t.s == 0.0; });
}

void ZonalFunction::add_term(double c, int m, double s) {
  if (c != 0.0) terms_.push_back({c, m, s});
}

void ZonalFunction::simplify() {
  std::sort(terms_.begin(), terms_.end(), [](const ZonalTerm& a, const ZonalTerm& b) {
    return a.m != b.m ? a.m < b.m : a.s < b.s;
  });
  std::vector<ZonalTerm> merged;
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().m == t.m && merged.back().s == t.s) {
      merged.back().c += t.c;
    } else {
      merged.push_back(t);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const ZonalTerm& t) { return t.c == 0.0; }), merged.end());
  terms_ = std::move(merged);
}

double ZonalFunction::evaluate(double t) const {
  const double base = 1.0 + r_ * t;
  double total = 0.0;
  for (const auto& term : terms_) {
    double v = term.c;
    for (int i = 0; i < term.m; ++i) v *= t;
    if (term.s != 0.0) v *= std::pow(base, term.s);
    total += v;
  }
  return total;
}

double ZonalFunction::common_r(const ZonalFunction& o) const {
  if (n_ != o.n_) throw std::invalid_argument("zonal functions on spheres of different dimension");
  if (r_ == o.r_ || o.is_polynomial()) return r_;
  if (is_polynomial()) return o.r_;
  throw std::invalid_argument("zonal functions with different parameters r cannot be combined");
}

ZonalFunction ZonalFunction::operator-() const { return *this * -1.0; }

ZonalFunction& ZonalFunction::operator+=(const ZonalFunction& o) {
  r_ = common_r(o);
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  simplify();
  return *this;
}

ZonalFunction& ZonalFunction::operator-=(const ZonalFunction& o) { return *this += -o; }

ZonalFunction& ZonalFunction::operator*=(double c) {
  for (auto& t : terms_) t.c *= c;
  simplify();
  return *this;
}

ZonalFunction operator*(const ZonalFunction& a, const ZonalFunction& b) {
  ZonalFunction out(a.n_, a.common_r(b));
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) out.add_term(x.c * y.c, x.m + y.m, x.s + y.s);
  }
  out.simplify();
  return out;
}

nlohmann::json ZonalFunction::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_) terms.push_back({t.c, t.m, t.s});
  return {{"n", n_}, {"r", r_}, {"terms", terms}};
}

ZonalFunction ZonalFunction::from_json(const nlohmann::json& j) {
  std::vector<ZonalTerm> terms;
  for (const auto& t : j.at("terms")) {
    if (t.size() != 3) throw std::invalid_argument("zonal term must be [c, m, s]");
    terms.push_back({t[0].get<double>(), t[1].get<int>(), t[2].get<double>()});
  }
  return from_terms(j.at("n").get<int>(), j.at("r").get<double>(), terms);
}

// ------------------------------------------------------------ calculus

ZonalFunction differentiate(const ZonalFunction& f) {
  // d/dt [t^m (1+rt)^s] = m t^{m-1} (1+rt)^s + s r t^m (1+rt)^{s-1}.
  std::vector<ZonalTerm> out;
  for (const auto& t : f.terms()) {
    if (t.m > 0) out.push_back({t.c * t.m, t.m - 1, t.s});
    if (t.s != 0.0 && f.r() != 0.0) out.push_back({t.c * t.s * f.r(), t.m, t.s - 1.0});
  }
  return ZonalFunction::from_terms(f.dimension(), f.r(), out);
}

namespace {

ZonalFunction one_minus_t2(int n) { return ZonalFunction::polynomial(n, {1.0, 0.0, -1.0}); }
ZonalFunction t_times(int n, double c) { return ZonalFunction::polynomial(n, {0.0, c}); }

}  // namespace

ZonalFunction laplace_beltrami_zonal(const ZonalFunction& f) {
  const int n = f.dimension();
  const ZonalFunction d1 = differentiate(f);
  return one_minus_t2(n) * differentiate(d1) - t_times(n, n) * d1;
}

ZonalFunction gjms_zonal(const ZonalFunction& f, const GjmsOrder& order) {
  if (f.dimension() != order.n()) throw std::invalid_argument("dimension mismatch");
  const int n = order.n();
  ZonalFunction v = f;
  for (int j = 1; j <= order.k(); ++j) {
    const double shift = 0.25 * (n - 2.0 * j) * (n + 2.0 * j - 2.0);
    v = v * shift - laplace_beltrami_zonal(v);
  }
  return v;
}

ZonalFunction grad_inner_zonal(const ZonalFunction& f, const ZonalFunction& g) {
  return one_minus_t2(f.dimension()) * differentiate(f) * differentiate(g);
}

ZonalFunction grad_sq_zonal(const ZonalFunction& f) { return grad_inner_zonal(f, f); }

ZonalFunction divergence_term_zonal(const ZonalFunction& g, const ZonalFunction& f) {
  return grad_inner_zonal(g, f) + g * laplace_beltrami_zonal(f);
}

ZonalFunction sigma1_zonal(const ZonalFunction& f) {
  const int n = f.dimension();
  if (n == 4) throw std::invalid_argument("sigma operators are not defined for n = 4");
  const double c = 0.25 * (n - 4);
  const ZonalFunction f2 = f * f;
  return laplace_beltrami_zonal(f2) * (-(n - 4) / 8.0) - grad_sq_zonal(f) + f2 * (0.5 * n * c * c);
}

ZonalFunction sigma2_zonal(const ZonalFunction& f) {
  const int n = f.dimension();
  if (n == 4) throw std::invalid_argument("sigma operators are not defined for n = 4");
  const double c = 0.25 * (n - 4);
  const double alpha = (n - 4) / 16.0, beta = 0.25 * (n - 1) * c * c, gamma = 0.125 * n * (n - 1) * c * c * c;
  const ZonalFunction g = grad_sq_zonal(f);
  const ZonalFunction f2 = f * f;
  const ZonalFunction lap_f2 = laplace_beltrami_zonal(f2);
  return divergence_term_zonal(g, f) * 0.5 - (f * laplace_beltrami_zonal(g) - divergence_term_zonal(lap_f2, f)) * alpha -
         f * lap_f2 * beta + f2 * f * gamma;
}

ZonalFunction sigma2_unsymmetrized_zonal(const ZonalFunction& a, const ZonalFunction& b, const ZonalFunction& c) {
  const int n = a.dimension();
  if (n == 4) throw std::invalid_argument("sigma operators are not defined for n = 4");
  const double cc = 0.25 * (n - 4);
  const double alpha = (n - 4) / 16.0, beta = 0.25 * (n - 1) * cc * cc, gamma = 0.125 * n * (n - 1) * cc * cc * cc;
  const ZonalFunction ab = a * b;
  const ZonalFunction gab = grad_inner_zonal(a, b);
  const ZonalFunction lap_ab = laplace_beltrami_zonal(ab);
  const ZonalFunction h = gab * 0.5 + lap_ab * alpha;
  const ZonalFunction q = laplace_beltrami_zonal(gab) * (-alpha) - lap_ab * beta + ab * gamma;
  return divergence_term_zonal(h, c) + c * q;
}

ZonalFunction sigma2_first_slot_zonal(const ZonalFunction& v, const ZonalFunction& u) {
  return (sigma2_unsymmetrized_zonal(v, u, u) * 2.0 + sigma2_unsymmetrized_zonal(u, u, v)) * (1.0 / 3.0);
}

double integrate_zonal(const ZonalFunction& f, const JacobiQuadrature& quad) {
  if (f.dimension() != quad.dimension()) throw std::invalid_argument("quadrature built for another dimension");
  return quad.sphere_integral([&f](double t) { return f.evaluate(t); });
}

double integrate_zonal(const ZonalFunction& f) { return integrate_zonal(f, JacobiQuadrature(f.dimension())); }

double sigma2_energy_zonal(const ZonalFunction& f, const JacobiQuadrature& quad) {
  const int n = f.dimension();
  if (n < 5) throw std::invalid_argument("sigma_2 energy needs n >= 5");
  const double c = 0.25 * (n - 4);
  const double gamma = 0.125 * n * (n - 1) * c * c * c;
  const ZonalFunction g = grad_sq_zonal(f);
  const ZonalFunction s1 = sigma1_zonal(f);
  return quad.sphere_integral([&](double t) {
    const double u = f.evaluate(t), gv = g.evaluate(t);
    return gv * s1.evaluate(t) + 0.5 * gv * gv + 0.5 * (n - 2) * c * c * u * u * gv + gamma * u * u * u * u;
  });
}

double sigma2_energy_zonal(const ZonalFunction& f) { return sigma2_energy_zonal(f, JacobiQuadrature(f.dimension())); }

double gjms_energy_zonal(const ZonalFunction& f, const GjmsOrder& order, const JacobiQuadrature& quad) {
  const ZonalFunction lf = gjms_zonal(f, order);
  return quad.sphere_integral([&](double t) { return f.evaluate(t) * lf.evaluate(t); });
}

}  // namespace confsphere
