#include "confsphere/sphere_calc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace confsphere {

double sphere_volume(int n) {
  const double half = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

std::string SphereIntegral::to_string() const {
  if (coefficient == 0) return "0";
  return confsphere::to_string(coefficient) + " * omega_" + std::to_string(n);
}

// ---------------------------------------------------------- SphereFunction

SphereFunction::SphereFunction(int n) : n_(n) {
  if (n < 1 || n + 1 > Monomial::kMaxVariables) throw std::invalid_argument("unsupported sphere dimension");
}

SphereFunction SphereFunction::constant(int n, const Rational& c) {
  SphereFunction f(n);
  if (c != 0) f.comps_.emplace(0, AmbientPoly::constant(n + 1, c));
  return f;
}

SphereFunction SphereFunction::coordinate(int n, int i) {
  SphereFunction f(n);
  f.comps_.emplace(1, AmbientPoly::coordinate(n + 1, i));
  return f;
}

SphereFunction SphereFunction::from_components(int n, const std::map<int, AmbientPoly>& components) {
  SphereFunction f(n);
  for (const auto& [l, h] : components) {
    if (h.nvars() != n + 1) throw std::invalid_argument("component lives in the wrong ambient space");
    if (h.is_zero()) continue;
    if (!h.is_homogeneous() || h.degree() != l) throw std::invalid_argument("component is not homogeneous of its degree");
    if (!ambient_laplacian(h).is_zero()) throw std::invalid_argument("component is not harmonic");
    f.comps_.emplace(l, h);
  }
  return f;
}

AmbientPoly SphereFunction::ambient() const {
  AmbientPoly out(n_ + 1);
  for (const auto& [l, h] : comps_) out += h;
  return out;
}

void SphereFunction::check_same_sphere(const SphereFunction& o) const {
  if (n_ != o.n_) throw std::invalid_argument("functions live on spheres of different dimension");
}

SphereFunction SphereFunction::operator-() const {
  SphereFunction out(*this);
  for (auto& [l, h] : out.comps_) h = -h;
  return out;
}

SphereFunction& SphereFunction::operator+=(const SphereFunction& o) {
  check_same_sphere(o);
  for (const auto& [l, h] : o.comps_) {
    auto it = comps_.find(l);
    if (it == comps_.end()) {
      comps_.emplace(l, h);
    } else {
      it->second += h;
      if (it->second.is_zero()) comps_.erase(it);
    }
  }
  return *this;
}

SphereFunction& SphereFunction::operator-=(const SphereFunction& o) { return *this += -o; }

SphereFunction& SphereFunction::operator*=(const Rational& c) {
  if (c == 0) {
    comps_.clear();
    return *this;
  }
  for (auto& [l, h] : comps_) h *= c;
  return *this;
}

double SphereFunction::evaluate(std::span<const double> point) const {
  double total = 0.0;
  for (const auto& [l, h] : comps_) total += h.evaluate(point);
  return total;
}

std::vector<std::pair<int, std::string>> SphereFunction::serialize() const {
  std::vector<std::pair<int, std::string>> out;
  for (const auto& [l, h] : comps_) out.emplace_back(l, h.to_string());
  return out;
}

SphereFunction SphereFunction::deserialize(int n, const std::vector<std::pair<int, std::string>>& data) {
  std::map<int, AmbientPoly> comps;
  for (const auto& [l, text] : data) {
    if (comps.count(l)) throw std::invalid_argument("duplicate component degree");
    comps.emplace(l, AmbientPoly::parse(n + 1, text));
  }
  return from_components(n, comps);
}

std::string SphereFunction::to_string() const {
  if (comps_.empty()) return "0";
  std::string out;
  for (const auto& [l, h] : comps_) {
    if (!out.empty()) out += "; ";
    out += "[" + std::to_string(l) + "] " + h.to_string();
  }
  return out;
}

// ------------------------------------------------------------------ reduce

SphereFunction reduce(const AmbientPoly& p) {
  const int nv = p.nvars();
  SphereFunction out(nv - 1);
  if (p.is_zero()) return out;
  std::vector<AmbientPoly> buckets = p.homogeneous_parts();
  const AmbientPoly r2 = AmbientPoly::radius_squared(nv);
  // A homogeneous P of degree m splits as sum_j r^{2j} h_{m-2j}. Since
  // Lap(r^{2j} h) = 2j(N + 2m - 2j - 2) r^{2j-2} h for h harmonic of degree
  // m - 2j, the top component solves the triangular system
  //   h_m = sum_j c_j r^{2j} Lap^j P,  c_{j+1} = -c_j / (2(j+1)(N + 2m - 2j - 4)).
  // On the sphere P - h_m = -sum_{j>=1} c_j Lap^j P, which feeds lower degrees.
  for (int m = static_cast<int>(buckets.size()) - 1; m >= 0; --m) {
    AmbientPoly& top = buckets[static_cast<std::size_t>(m)];
    if (top.is_zero()) continue;
    std::vector<AmbientPoly> laps{top};
    while (static_cast<int>(laps.size()) <= m / 2) {
      AmbientPoly next = ambient_laplacian(laps.back());
      if (next.is_zero()) break;
      laps.push_back(std::move(next));
    }
    std::vector<Rational> c(laps.size());
    c[0] = 1;
    for (std::size_t j = 0; j + 1 < laps.size(); ++j) {
      const long denom = 2 * static_cast<long>(j + 1) * (nv + 2 * m - 2 * static_cast<long>(j) - 4);
      c[j + 1] = -c[j] / Rational(denom);
    }
    AmbientPoly h = laps.back() * c.back();
    for (std::size_t j = laps.size() - 1; j-- > 0;) h = r2 * h + laps[j] * c[j];
    for (std::size_t j = 1; j < laps.size(); ++j) buckets[static_cast<std::size_t>(m) - 2 * j] -= laps[j] * c[j];
    if (!h.is_zero()) out.comps_.emplace(m, std::move(h));
  }
  return out;
}

// ------------------------------------------------------------- integration

namespace {

// prod over even exponents of (a-1)!!, the numerator of the moment ratio.
Integer double_factorial_product(Monomial m, int nvars) {
  Integer acc = 1;
  for (int i = 0; i < nvars; ++i) {
    for (int e = m.exponent(i) - 1; e > 1; e -= 2) acc *= e;
  }
  return acc;
}

}  // namespace

SphereIntegral integrate_restriction(const AmbientPoly& p) {
  const int nv = p.nvars();
  // int x^a / omega_n = prod (a_i - 1)!! / (N (N + 2) ... (N + |a| - 2)).
  std::map<int, Integer> by_degree;
  for (std::size_t t = 0; t < p.size(); ++t) {
    const Monomial m = p.monomial_at(t);
    if (!m.all_even()) continue;
    by_degree[m.degree()] += p.numerator_at(t) * double_factorial_product(m, nv);
  }
  Rational total = 0;
  for (const auto& [d, sum] : by_degree) {
    Integer denom = 1;
    for (int q = 0; q < d; q += 2) denom *= nv + q;
    Rational part(sum, denom);
    part.canonicalize();
    total += part;
  }
  total /= Rational(p.denominator());
  total.canonicalize();
  return {nv - 1, total};
}

SphereIntegral integrate(const SphereFunction& f) { return integrate_restriction(f.ambient()); }

// -------------------------------------------------------------- operations

namespace rep {

AmbientPoly laplace_beltrami(const AmbientPoly& p) {
  const int n = p.nvars() - 1;
  return ambient_laplacian(p) - p.scale_by_degree([n](int d) { return d * (d + n - 1); });
}

AmbientPoly grad_inner_sum(const std::vector<std::pair<const AmbientPoly*, const AmbientPoly*>>& pairs,
                           const std::vector<Rational>& weights) {
  if (pairs.empty()) throw std::invalid_argument("empty pairing list");
  const int nv = pairs.front().first->nvars();
  std::vector<std::vector<AmbientPoly>> grads_u, grads_v;
  std::vector<AmbientPoly> radial_u, radial_v;
  for (const auto& [u, v] : pairs) {
    grads_u.push_back(ambient_gradient(*u));
    grads_v.push_back(ambient_gradient(*v));
    radial_u.push_back(u->euler());
    radial_v.push_back(v->euler());
  }
  ProductAccumulator acc(nv);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    for (int i = 0; i < nv; ++i) acc.add(grads_u[k][static_cast<std::size_t>(i)], grads_v[k][static_cast<std::size_t>(i)], weights[k]);
    acc.add(radial_u[k], radial_v[k], -weights[k]);
  }
  return acc.result();
}

AmbientPoly grad_inner(const AmbientPoly& u, const AmbientPoly& v) { return grad_inner_sum({{&u, &v}}, {Rational(1)}); }

AmbientPoly divergence_term(const AmbientPoly& f, const AmbientPoly& u) {
  const AmbientPoly lap = laplace_beltrami(u);
  std::vector<AmbientPoly> gf = ambient_gradient(f), gu = ambient_gradient(u);
  const AmbientPoly ef = f.euler(), eu = u.euler();
  ProductAccumulator acc(f.nvars());
  for (std::size_t i = 0; i < gf.size(); ++i) acc.add(gf[i], gu[i]);
  acc.add(ef, eu, -1);
  acc.add(f, lap);
  return acc.result();
}

}  // namespace rep

SphereFunction laplace_beltrami(const SphereFunction& f) {
  const int n = f.dimension();
  return f.spectral_scale([n](int l) { return Rational(-l * (l + n - 1)); });
}

SphereFunction grad_inner(const SphereFunction& u, const SphereFunction& v) {
  return reduce(rep::grad_inner(u.ambient(), v.ambient()));
}

SphereFunction divergence_term(const SphereFunction& f, const SphereFunction& u) {
  return reduce(rep::divergence_term(f.ambient(), u.ambient()));
}

SphereFunction multiply(const SphereFunction& u, const SphereFunction& v) {
  if (u.dimension() != v.dimension()) throw std::invalid_argument("functions live on spheres of different dimension");
  return reduce(u.ambient() * v.ambient());
}

}  // namespace confsphere
