#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "confsphere/zonal.hpp"
#include "json.hpp"

namespace confsphere {

/// A real-valued function on S^n given pointwise on unit vectors of R^{n+1}.
using SphereField = std::function<double(std::span<const double>)>;

/// Phi(zeta) = R T_a(zeta), where T_a is the ball-model Moebius map
///   T_a(x) = ((1 - |a|^2)(x - a) - |x - a|^2 a) / (1 - 2 a.x + |a|^2 |x|^2)
/// with a = -xi / (1 + sqrt(1 - |xi|^2)). This choice makes
///   |J_Phi|(zeta) = ((1 + xi.zeta) / sqrt(1 - |xi|^2))^{-n}.
class MobiusMap {
 public:
  explicit MobiusMap(int n);
  explicit MobiusMap(const Eigen::VectorXd& xi);
  MobiusMap(const Eigen::VectorXd& xi, const Eigen::MatrixXd& rotation);

  static MobiusMap identity(int n) { return MobiusMap(n); }
  /// xi = x e_axis.
  static MobiusMap axial(int n, double x, int axis = 0);

  int dimension() const { return static_cast<int>(xi_.size()) - 1; }
  const Eigen::VectorXd& xi() const { return xi_; }
  const Eigen::MatrixXd& rotation() const { return rotation_; }
  bool rotation_is_identity() const;

  double jacobian(std::span<const double> zeta) const;
  Eigen::VectorXd apply(std::span<const double> zeta) const;
  /// Allocation-free variant of apply for hot loops; out needs n+1 slots and
  /// zeta is not validated.
  void apply_into(std::span<const double> zeta, std::span<double> out) const;
  /// The ball extension of the map; used to locate compositions.
  Eigen::VectorXd apply_ball(const Eigen::VectorXd& x) const;

  /// {xi: [...], rotation: "identity" | [[...], ...]}.
  nlohmann::json to_json() const;
  static MobiusMap from_json(const nlohmann::json& j);

 private:
  Eigen::VectorXd xi_;
  Eigen::VectorXd a_;
  Eigen::MatrixXd rotation_;
  bool identity_rotation_ = true;
  double scale_ = 1.0;  // sqrt(1 - |xi|^2)
};

/// phi o psi.
MobiusMap compose(const MobiusMap& phi, const MobiusMap& psi);

/// zeta -> ((1 + xi.zeta) / sqrt(1 - |xi|^2))^{-p n}.
struct Bubble {
  int n = 5;
  Eigen::VectorXd xi;
  double p = 0.0;

  /// p = (n - 2k) / (2n), the GJMS extremal.
  static Bubble gjms(int n, int k, const Eigen::VectorXd& xi);
  /// p = (n - 4) / (4n), the sigma_2 extremal (exponent -(n-4)/4).
  static Bubble sigma2(int n, const Eigen::VectorXd& xi);

  double evaluate(std::span<const double> zeta) const;
  SphereField field() const;
  /// Profile in t = (xi / |xi|).zeta; for xi = 0 the constant 1.
  ZonalFunction zonal() const;
};

/// zeta -> |J_Phi|(zeta)^theta u(Phi(zeta)).
SphereField pullback_density(const MobiusMap& phi, SphereField u, double theta);

/// Pullback of a zonal polynomial by the axial map xi = x e_0, in closed form:
/// Phi acts on the axial coordinate as t -> (t + x) / (1 + x t).
ZonalFunction pullback_zonal(const ZonalFunction& u, double x, double theta);

/// Product rule on S^n: Gauss-Jacobi in x^0, then recursively in each
/// sub-sphere, ending with an equispaced rule on the circle. Exact for
/// polynomials of degree < 2 * axial_nodes in x^0 and < 2 * inner_nodes
/// in the remaining polar coordinates.
class SphereQuadrature {
 public:
  /// inner_nodes = 0 picks the largest count keeping the grid under ~1e6 points.
  explicit SphereQuadrature(int n, int axial_nodes = 48, int inner_nodes = 0);

  int dimension() const { return n_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> point(std::size_t q) const {
    return {points_.data() + q * static_cast<std::size_t>(n_ + 1), static_cast<std::size_t>(n_ + 1)};
  }
  const std::vector<double>& weights() const { return weights_; }
  int axial_nodes() const { return axial_; }
  int inner_nodes() const { return inner_; }

  template <class F>
  double integrate(F f) const {
    double total = 0.0;
    for (std::size_t q = 0; q < weights_.size(); ++q) total += weights_[q] * f(point(q));
    return total;
  }

 private:
  int n_;
  int axial_;
  int inner_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

/// Component i is int x^i u^N. Throws on u <= 0 at a node when N is fractional.
std::vector<double> moments(const SphereField& u, double N, const SphereQuadrature& quad);

struct BalanceOptions {
  int max_iterations = 200;
  double tolerance = 1e-10;
  double fd_step = 1e-5;
};

struct BalanceResult {
  MobiusMap map{5};
  SphereField balanced;
  std::vector<double> residual;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Finds Phi (rotation = identity) with moments(u_Phi, N) = 0, where
/// u_Phi = |J_Phi|^{1/N} Phi^* u. Damped Newton on xi with a central
/// difference Jacobian; steps are halved until they stay inside the ball and
/// decrease the residual.
BalanceResult balance(const SphereField& u, double N, const SphereQuadrature& quad, const BalanceOptions& opt = {});

}  // namespace confsphere
