#include "confsphere/operators.hpp"

#include <stdexcept>

namespace confsphere {

namespace {

void require_sigma_dimension(int n) {
  if (n == 4) throw std::invalid_argument("sigma operators are not defined for n = 4");
  if (n < 1) throw std::invalid_argument("sphere dimension must be positive");
}

Rational gjms_shift(int n, int j) { return frac(static_cast<long>(n - 2 * j) * (n + 2 * j - 2), 4); }

}  // namespace

GjmsOrder::GjmsOrder(int n, int k) : n_(n), k_(k) {
  if (n < 1) throw std::invalid_argument("sphere dimension must be positive");
  if (k < 0) throw std::invalid_argument("GJMS order must be non-negative");
  if (2 * k >= n) throw std::invalid_argument("GJMS operator requires 2k < n");
}

Rational gjms_eigenvalue(int l, const GjmsOrder& order) {
  if (l < 0) throw std::invalid_argument("negative harmonic degree");
  const int n = order.n();
  Rational value = 1;
  for (int j = 1; j <= order.k(); ++j) value *= Rational(static_cast<long>(l) * (l + n - 1)) + gjms_shift(n, j);
  return value;
}

SphereFunction gjms_apply(const SphereFunction& u, const GjmsOrder& order) {
  if (u.dimension() != order.n()) throw std::invalid_argument("dimension mismatch");
  return u.spectral_scale([&order](int l) { return gjms_eigenvalue(l, order); });
}

SphereFunction gjms_apply_composed(const SphereFunction& u, const GjmsOrder& order) {
  if (u.dimension() != order.n()) throw std::invalid_argument("dimension mismatch");
  SphereFunction v = u;
  for (int j = 1; j <= order.k(); ++j) v = gjms_shift(order.n(), j) * v - laplace_beltrami(v);
  return v;
}

SphereIntegral gjms_energy(const SphereFunction& u, const GjmsOrder& order) {
  return integrate(multiply(u, gjms_apply(u, order)));
}

Sigma2Constants Sigma2Constants::for_dimension(int n) {
  require_sigma_dimension(n);
  Sigma2Constants s;
  s.c = frac(n - 4, 4);
  s.alpha = frac(n - 4, 16);
  s.beta = Rational(n - 1) * s.c * s.c / 4;
  s.gamma = Rational(static_cast<long>(n) * (n - 1)) * s.c * s.c * s.c / 8;
  return s;
}

// ---------------------------------------------------------- representatives

namespace rep {

AmbientPoly gjms(const AmbientPoly& u, const GjmsOrder& order) {
  AmbientPoly v = u;
  for (int j = 1; j <= order.k(); ++j) v = v * gjms_shift(order.n(), j) - laplace_beltrami(v);
  return v;
}

AmbientPoly sigma1(const AmbientPoly& u) {
  const int n = u.nvars() - 1;
  const Sigma2Constants s = Sigma2Constants::for_dimension(n);
  const AmbientPoly u2 = u * u;
  return laplace_beltrami(u2) * frac(-(n - 4), 8) - grad_inner(u, u) + u2 * (frac(n, 2) * s.c * s.c);
}

AmbientPoly sigma2_diagonal(const AmbientPoly& u) {
  const int n = u.nvars() - 1;
  const Sigma2Constants s = Sigma2Constants::for_dimension(n);
  const AmbientPoly grad2 = grad_inner(u, u);
  const AmbientPoly u2 = u * u;
  const AmbientPoly lap_u2 = laplace_beltrami(u2);
  AmbientPoly out = divergence_term(grad2, u) * frac(1, 2);
  out -= (u * laplace_beltrami(grad2) - divergence_term(lap_u2, u)) * s.alpha;
  out -= u * lap_u2 * s.beta;
  out += u2 * u * s.gamma;
  return out;
}

AmbientPoly sigma2_unsymmetrized(const AmbientPoly& a, const AmbientPoly& b, const AmbientPoly& c) {
  const int n = a.nvars() - 1;
  const Sigma2Constants s = Sigma2Constants::for_dimension(n);
  const AmbientPoly g = grad_inner(a, b);
  const AmbientPoly ab = a * b;
  const AmbientPoly lap_ab = laplace_beltrami(ab);
  const AmbientPoly h = g * frac(1, 2) + lap_ab * s.alpha;
  const AmbientPoly q = laplace_beltrami(g) * (-s.alpha) - lap_ab * s.beta + ab * s.gamma;
  const AmbientPoly lap_c = laplace_beltrami(c);
  // delta(h dc) + c q, accumulated as one sum of products.
  std::vector<AmbientPoly> gh = ambient_gradient(h), gc = ambient_gradient(c);
  const AmbientPoly eh = h.euler(), ec = c.euler();
  ProductAccumulator acc(a.nvars());
  for (std::size_t i = 0; i < gh.size(); ++i) acc.add(gh[i], gc[i]);
  acc.add(eh, ec, -1);
  acc.add(h, lap_c);
  acc.add(c, q);
  return acc.result();
}

AmbientPoly sigma2_trilinear(const AmbientPoly& a, const AmbientPoly& b, const AmbientPoly& c) {
  return (sigma2_unsymmetrized(a, b, c) + sigma2_unsymmetrized(b, c, a) + sigma2_unsymmetrized(c, a, b)) * frac(1, 3);
}

AmbientPoly sigma2_first_slot(const AmbientPoly& a, const AmbientPoly& u) {
  return (sigma2_unsymmetrized(a, u, u) * Rational(2) + sigma2_unsymmetrized(u, u, a)) * frac(1, 3);
}

}  // namespace rep

// ----------------------------------------------------------- sphere level

SphereFunction sigma1(const SphereFunction& u) {
  require_sigma_dimension(u.dimension());
  return reduce(rep::sigma1(u.ambient()));
}

SphereFunction i_operator(const SphereFunction& u, const Rational& w) {
  const int n = u.dimension();
  if (w == frac(-(n - 2), 2)) throw std::invalid_argument("weight w = -(n-2)/2 is excluded");
  const AmbientPoly a = u.ambient();
  const AmbientPoly inner = rep::laplace_beltrami(a) + a * (w * frac(n, 2));
  return reduce(rep::grad_inner(a, a) * (-(Rational(n - 2) + 2 * w) / 2) + a * inner * w);
}

SphereFunction sigma2_diagonal(const SphereFunction& u) {
  require_sigma_dimension(u.dimension());
  return reduce(rep::sigma2_diagonal(u.ambient()));
}

SphereFunction sigma2_trilinear(const SphereFunction& a, const SphereFunction& b, const SphereFunction& c) {
  require_sigma_dimension(a.dimension());
  if (a.dimension() != b.dimension() || a.dimension() != c.dimension()) throw std::invalid_argument("dimension mismatch");
  return reduce(rep::sigma2_trilinear(a.ambient(), b.ambient(), c.ambient()));
}

namespace {

// L(a,v,v) from D(v + s a) = D(v) + 3s L(a,v,v) + 3s^2 L(a,a,v) + s^3 D(a).
SphereFunction first_slot_by_interpolation(const SphereFunction& a, const SphereFunction& v) {
  const SphereFunction p0 = sigma2_diagonal(v);
  const SphereFunction p1 = sigma2_diagonal(v + a);
  const SphereFunction pm = sigma2_diagonal(v - a);
  const SphereFunction p2 = sigma2_diagonal(v + Rational(2) * a);
  // With d_s = P(s) - P(0): c1 + c2 + c3 = d_1, -c1 + c2 - c3 = d_-1, 2c1 + 4c2 + 8c3 = d_2.
  const SphereFunction odd = (p1 - pm) * frac(1, 2);        // c1 + c3
  const SphereFunction c2 = (p1 + pm) * frac(1, 2) - p0;
  const SphereFunction c3 = ((p2 - p0 - Rational(4) * c2) - Rational(2) * odd) * frac(1, 6);
  return (odd - c3) * frac(1, 3);
}

}  // namespace

SphereFunction sigma2_trilinear_interpolated(const SphereFunction& a, const SphereFunction& b, const SphereFunction& c) {
  require_sigma_dimension(a.dimension());
  if (b == c) return first_slot_by_interpolation(a, b);
  return (first_slot_by_interpolation(a, b + c) - first_slot_by_interpolation(a, b) - first_slot_by_interpolation(a, c)) *
         frac(1, 2);
}

SphereIntegral sigma2_energy(const SphereFunction& u) {
  require_sigma_dimension(u.dimension());
  const AmbientPoly a = u.ambient();
  return integrate_restriction(a * rep::sigma2_diagonal(a));
}

SphereIntegral sigma2_dirichlet_form(const SphereFunction& u) {
  const int n = u.dimension();
  const Sigma2Constants s = Sigma2Constants::for_dimension(n);
  const AmbientPoly a = u.ambient();
  const AmbientPoly grad2 = rep::grad_inner(a, a);
  const AmbientPoly u2 = a * a;
  ProductAccumulator acc(n + 1);
  const AmbientPoly s1 = rep::sigma1(a);
  acc.add(grad2, s1);
  acc.add(grad2, grad2, frac(1, 2));
  acc.add(u2, grad2, frac(n - 2, 2) * s.c * s.c);
  acc.add(u2, u2, s.gamma);
  return integrate_restriction(acc.result());
}

// ------------------------------------------------------------- descriptors

OperatorDescriptor gjms_descriptor(int n, int k) {
  const GjmsOrder order(n, k);
  OperatorDescriptor d;
  d.kind = OperatorDescriptor::Kind::Gjms;
  d.n = n;
  d.j = 1;
  d.k = k;
  d.name = "gjms";
  d.energy = [order](const SphereFunction& u) { return gjms_energy(u, order); };
  d.apply = [order](const std::vector<SphereFunction>& slots) {
    if (slots.size() != 1) throw std::invalid_argument("GJMS operator takes one slot");
    return gjms_apply(slots[0], order);
  };
  d.apply_first_slot = [order](const SphereFunction& v, const SphereFunction&) { return gjms_apply(v, order); };
  return d;
}

OperatorDescriptor sigma2_descriptor(int n) {
  require_sigma_dimension(n);
  OperatorDescriptor d;
  d.kind = OperatorDescriptor::Kind::Sigma2;
  d.n = n;
  d.j = 3;
  d.k = 2;
  d.name = "sigma2";
  d.energy = [](const SphereFunction& u) { return sigma2_energy(u); };
  d.apply = [](const std::vector<SphereFunction>& slots) {
    if (slots.size() != 3) throw std::invalid_argument("sigma_2 operator takes three slots");
    return sigma2_trilinear(slots[0], slots[1], slots[2]);
  };
  d.apply_first_slot = [](const SphereFunction& v, const SphereFunction& u) {
    return reduce(rep::sigma2_first_slot(v.ambient(), u.ambient()));
  };
  return d;
}

}  // namespace confsphere
