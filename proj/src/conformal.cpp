#include "confsphere/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace confsphere {

namespace {

Eigen::VectorXd to_vector(std::span<const double> x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

void check_on_sphere(std::span<const double> zeta, int n) {
  if (static_cast<int>(zeta.size()) != n + 1) throw std::invalid_argument("point has the wrong number of coordinates");
  double s = 0.0;
  for (double v : zeta) s += v * v;
  if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("point is not on the unit sphere");
}

void check_ball(const Eigen::VectorXd& xi) {
  if (xi.size() < 2 || xi.size() > 16) throw std::invalid_argument("Moebius maps need 1 <= n <= 15");
  if (!(xi.norm() < 1.0)) throw std::invalid_argument("Moebius parameter must lie in the open unit ball");
}

// T_a on the closed ball.
Eigen::VectorXd ahlfors(const Eigen::VectorXd& a, const Eigen::VectorXd& x) {
  const double a2 = a.squaredNorm();
  const Eigen::VectorXd d = x - a;
  const double den = 1.0 - 2.0 * a.dot(x) + a2 * x.squaredNorm();
  return ((1.0 - a2) * d - d.squaredNorm() * a) / den;
}

Eigen::VectorXd a_from_xi(const Eigen::VectorXd& xi) { return -xi / (1.0 + std::sqrt(1.0 - xi.squaredNorm())); }

Eigen::VectorXd xi_from_a(const Eigen::VectorXd& a) { return -2.0 * a / (1.0 + a.squaredNorm()); }

}  // namespace

// ------------------------------------------------------------ MobiusMap

MobiusMap::MobiusMap(int n) : MobiusMap(Eigen::VectorXd::Zero(n + 1)) {}

MobiusMap::MobiusMap(const Eigen::VectorXd& xi)
    : MobiusMap(xi, Eigen::MatrixXd::Identity(xi.size(), xi.size())) {}

MobiusMap::MobiusMap(const Eigen::VectorXd& xi, const Eigen::MatrixXd& rotation) : xi_(xi), rotation_(rotation) {
  check_ball(xi_);
  if (rotation_.rows() != xi_.size() || rotation_.cols() != xi_.size()) throw std::invalid_argument("rotation has the wrong shape");
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(xi_.size(), xi_.size());
  if ((rotation_.transpose() * rotation_ - id).norm() >= 1e-12) throw std::invalid_argument("rotation is not orthogonal");
  a_ = a_from_xi(xi_);
  identity_rotation_ = rotation_.isIdentity(0.0);
  scale_ = std::sqrt(1.0 - xi_.squaredNorm());
}

MobiusMap MobiusMap::axial(int n, double x, int axis) {
  if (axis < 0 || axis > n) throw std::invalid_argument("axis out of range");
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(n + 1);
  xi(axis) = x;
  return MobiusMap(xi);
}

bool MobiusMap::rotation_is_identity() const { return identity_rotation_; }

double MobiusMap::jacobian(std::span<const double> zeta) const {
  check_on_sphere(zeta, dimension());
  double dot = 0.0;
  for (std::size_t i = 0; i < zeta.size(); ++i) dot += xi_(static_cast<Eigen::Index>(i)) * zeta[i];
  return std::pow((1.0 + dot) / scale_, -dimension());
}

void MobiusMap::apply_into(std::span<const double> zeta, std::span<double> out) const {
  // On the sphere T_a(zeta) = (1 - |a|^2)(zeta - a) / |zeta - a|^2 - a.
  constexpr std::size_t kMax = 16;
  const std::size_t d = zeta.size();
  double diff[kMax];
  double a2 = 0.0, dist2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double a = a_(static_cast<Eigen::Index>(i));
    diff[i] = zeta[i] - a;
    a2 += a * a;
    dist2 += diff[i] * diff[i];
  }
  const double f = (1.0 - a2) / dist2;
  double y[kMax];
  double norm2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    y[i] = f * diff[i] - a_(static_cast<Eigen::Index>(i));
    norm2 += y[i] * y[i];
  }
  const double inv = 1.0 / std::sqrt(norm2);
  if (identity_rotation_) {
    for (std::size_t i = 0; i < d; ++i) out[i] = y[i] * inv;
    return;
  }
  for (std::size_t r = 0; r < d; ++r) {
    double v = 0.0;
    for (std::size_t c = 0; c < d; ++c) v += rotation_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * y[c];
    out[r] = v * inv;
  }
}

Eigen::VectorXd MobiusMap::apply(std::span<const double> zeta) const {
  check_on_sphere(zeta, dimension());
  Eigen::VectorXd y(zeta.size());
  apply_into(zeta, std::span<double>(y.data(), zeta.size()));
  return y;
}

Eigen::VectorXd MobiusMap::apply_ball(const Eigen::VectorXd& x) const { return rotation_ * ahlfors(a_, x); }

nlohmann::json MobiusMap::to_json() const {
  nlohmann::json j;
  j["xi"] = std::vector<double>(xi_.data(), xi_.data() + xi_.size());
  if (rotation_is_identity()) {
    j["rotation"] = "identity";
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < rotation_.rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(rotation_.cols()));
      for (Eigen::Index c = 0; c < rotation_.cols(); ++c) row[static_cast<std::size_t>(c)] = rotation_(r, c);
      rows.push_back(row);
    }
    j["rotation"] = rows;
  }
  return j;
}

MobiusMap MobiusMap::from_json(const nlohmann::json& j) {
  const auto xs = j.at("xi").get<std::vector<double>>();
  const Eigen::VectorXd xi = to_vector(xs);
  const auto& rot = j.at("rotation");
  if (rot.is_string()) {
    if (rot.get<std::string>() != "identity") throw std::invalid_argument("rotation must be \"identity\" or a matrix");
    return MobiusMap(xi);
  }
  const Eigen::Index d = xi.size();
  if (static_cast<Eigen::Index>(rot.size()) != d) throw std::invalid_argument("rotation has the wrong shape");
  Eigen::MatrixXd r(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto row = rot.at(static_cast<std::size_t>(i)).get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != d) throw std::invalid_argument("rotation has the wrong shape");
    for (Eigen::Index c = 0; c < d; ++c) r(i, c) = row[static_cast<std::size_t>(c)];
  }
  return MobiusMap(xi, r);
}

MobiusMap compose(const MobiusMap& phi, const MobiusMap& psi) {
  if (phi.dimension() != psi.dimension()) throw std::invalid_argument("maps act on spheres of different dimension");
  // F = phi o psi = R T_c, where c = F^{-1}(0) and T_a^{-1} = T_{-a}.
  const Eigen::VectorXd a_phi = a_from_xi(phi.xi()), a_psi = a_from_xi(psi.xi());
  const Eigen::VectorXd c = ahlfors(-a_psi, psi.rotation().transpose() * a_phi);
  const Eigen::Index d = c.size();
  Eigen::MatrixXd r(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(d, i);
    r.col(i) = phi.apply_ball(psi.apply_ball(ahlfors(-c, e)));
  }
  // Remove rounding drift so the orthogonality invariant holds.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return MobiusMap(xi_from_a(c), svd.matrixU() * svd.matrixV().transpose());
}

// --------------------------------------------------------------- Bubble

Bubble Bubble::gjms(int n, int k, const Eigen::VectorXd& xi) {
  GjmsOrder(n, k);
  check_ball(xi);
  if (xi.size() != n + 1) throw std::invalid_argument("xi has the wrong dimension");
  return Bubble{n, xi, (n - 2.0 * k) / (2.0 * n)};
}

Bubble Bubble::sigma2(int n, const Eigen::VectorXd& xi) {
  Sigma2Constants::for_dimension(n);
  check_ball(xi);
  if (xi.size() != n + 1) throw std::invalid_argument("xi has the wrong dimension");
  return Bubble{n, xi, (n - 4.0) / (4.0 * n)};
}

double Bubble::evaluate(std::span<const double> zeta) const {
  const double s = std::sqrt(1.0 - xi.squaredNorm());
  return std::pow((1.0 + xi.dot(to_vector(zeta))) / s, -p * n);
}

SphereField Bubble::field() const {
  return [b = *this](std::span<const double> zeta) { return b.evaluate(zeta); };
}

ZonalFunction Bubble::zonal() const { return ZonalFunction::bubble(n, xi.norm(), p * n); }

// ------------------------------------------------------------- pullback

SphereField pullback_density(const MobiusMap& phi, SphereField u, double theta) {
  return [phi, u = std::move(u), theta](std::span<const double> zeta) {
    double y[16];
    const std::span<double> ys(y, zeta.size());
    phi.apply_into(zeta, ys);
    return std::pow(phi.jacobian(zeta), theta) * u(ys);
  };
}

ZonalFunction pullback_zonal(const ZonalFunction& u, double x, double theta) {
  if (!u.is_polynomial()) throw std::invalid_argument("closed-form pullback needs a zonal polynomial");
  if (!(std::abs(x) < 1.0)) throw std::invalid_argument("Moebius parameter must lie in the open unit ball");
  const int n = u.dimension();
  const double q = n * theta;
  const double scale = std::pow(1.0 - x * x, 0.5 * q);
  // u((t + x) / (1 + x t)) = sum_m c_m sum_j C(m, j) x^{m-j} t^j (1 + x t)^{-m}.
  std::vector<ZonalTerm> terms;
  for (const auto& term : u.terms()) {
    double binom = 1.0;
    for (int j = 0; j <= term.m; ++j) {
      terms.push_back({scale * term.c * binom * std::pow(x, term.m - j), j, -q - term.m});
      binom = binom * (term.m - j) / (j + 1);
    }
  }
  return ZonalFunction::from_terms(n, x, terms);
}

// ------------------------------------------------------- product grid

SphereQuadrature::SphereQuadrature(int n, int axial_nodes, int inner_nodes) : n_(n), axial_(axial_nodes) {
  if (n < 1) throw std::invalid_argument("sphere dimension must be positive");
  if (axial_nodes < 2) throw std::invalid_argument("axial node count must be at least 2");
  if (inner_nodes == 0) {
    // axial * inner^{n-2} * 2 inner <= 1e6, capped at 8.
    const double budget = 1e6 / (2.0 * axial_nodes);
    inner_nodes = n <= 1 ? 8 : std::clamp(static_cast<int>(std::floor(std::pow(budget, 1.0 / (n - 1)))), 3, 8);
  }
  if (inner_nodes < 2) throw std::invalid_argument("inner node count must be at least 2");
  inner_ = inner_nodes;

  // Circle.
  const int m_circle = n == 1 ? 2 * axial_nodes : 2 * inner_nodes;
  std::vector<double> pts, wts;
  for (int i = 0; i < m_circle; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / m_circle;
    pts.push_back(std::cos(phi));
    pts.push_back(std::sin(phi));
    wts.push_back(2.0 * std::numbers::pi / m_circle);
  }
  for (int m = 2; m <= n; ++m) {
    const JacobiQuadrature jq(m, m == n ? axial_nodes : inner_nodes);
    std::vector<double> next_pts, next_wts;
    const std::size_t dim = static_cast<std::size_t>(m);  // coordinates of the sub-sphere points
    next_pts.reserve(static_cast<std::size_t>(jq.size()) * wts.size() * (dim + 1));
    for (int i = 0; i < jq.size(); ++i) {
      const double t = jq.nodes()[static_cast<std::size_t>(i)];
      const double rho = std::sqrt(1.0 - t * t);
      // The sub-sphere weights already carry omega_{m-1}.
      const double w = jq.weights()[static_cast<std::size_t>(i)];
      for (std::size_t q = 0; q < wts.size(); ++q) {
        next_pts.push_back(t);
        for (std::size_t c = 0; c < dim; ++c) next_pts.push_back(rho * pts[q * dim + c]);
        next_wts.push_back(w * wts[q]);
      }
    }
    pts = std::move(next_pts);
    wts = std::move(next_wts);
  }
  points_ = std::move(pts);
  weights_ = std::move(wts);
}

// -------------------------------------------------------------- moments

std::vector<double> moments(const SphereField& u, double N, const SphereQuadrature& quad) {
  const int d = quad.dimension() + 1;
  const bool integral_power = N == std::floor(N);
  std::vector<double> out(static_cast<std::size_t>(d), 0.0);
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const auto x = quad.point(q);
    const double v = u(x);
    if (!integral_power && !(v > 0.0)) throw std::invalid_argument("fractional moments need a positive function");
    const double f = quad.weights()[q] * std::pow(v, N);
    for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] += f * x[static_cast<std::size_t>(i)];
  }
  return out;
}

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

BalanceResult balance(const SphereField& u, double N, const SphereQuadrature& quad, const BalanceOptions& opt) {
  if (!(N > 0.0)) throw std::invalid_argument("balancing exponent must be positive");
  const int n = quad.dimension();
  const int d = n + 1;
  const double theta = 1.0 / N;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    if (!(u(quad.point(q)) > 0.0)) throw std::invalid_argument("balancing needs a positive function");
  }
  auto residual_at = [&](const Eigen::VectorXd& xi) { return moments(pullback_density(MobiusMap(xi), u, theta), N, quad); };

  BalanceResult result;
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(d);
  std::vector<double> f = residual_at(xi);
  double fn = norm(f);
  int it = 0;
  for (; it < opt.max_iterations && fn >= opt.tolerance; ++it) {
    Eigen::MatrixXd jac(d, d);
    for (int c = 0; c < d; ++c) {
      Eigen::VectorXd xp = xi, xm = xi;
      xp(c) += opt.fd_step;
      xm(c) -= opt.fd_step;
      const auto fp = residual_at(xp), fm = residual_at(xm);
      for (int r = 0; r < d; ++r) jac(r, c) = (fp[static_cast<std::size_t>(r)] - fm[static_cast<std::size_t>(r)]) / (2.0 * opt.fd_step);
    }
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(f.data(), d);
    Eigen::VectorXd step = -jac.colPivHouseholderQr().solve(rhs);
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
      const Eigen::VectorXd trial = xi + step;
      // Keep a margin from the boundary, where the finite-difference stencil must still fit.
      if (trial.norm() + opt.fd_step >= 1.0) continue;
      const auto ft = residual_at(trial);
      const double tn = norm(ft);
      if (tn < fn) {
        xi = trial;
        f = ft;
        fn = tn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  result.map = MobiusMap(xi);
  result.balanced = pullback_density(result.map, u, theta);
  result.residual = f;
  result.residual_norm = fn;
  result.iterations = it;
  result.converged = fn < opt.tolerance;
  return result;
}

}  // namespace confsphere
