#pragma once

#include <Eigen/Dense>

#include "genmm/extended.hpp"
#include "genmm/generic.hpp"

namespace genmm {

/// Material constants of the damped thermo-mechanical oscillator.
/// All strictly positive; enforced at construction.
struct OscillatorParams {
  double m;       ///< mass
  double nu;      ///< viscosity
  double kappa;   ///< elastic modulus
  double lambda;  ///< thermal-exchange coefficient
  double c;       ///< heat capacity

  OscillatorParams(double m_, double nu_, double kappa_, double lambda_, double c_)
      : m(m_), nu(nu_), kappa(kappa_), lambda(lambda_), c(c_) {
    if (!(m > 0 && nu > 0 && kappa > 0 && lambda > 0 && c > 0))
      throw std::invalid_argument("OscillatorParams: all constants must be positive");
  }

  static OscillatorParams unit() { return OscillatorParams(1, 1, 1, 1, 1); }
};

/// Oscillator state (q, p, theta) with theta > 0.
struct State {
  double q;
  double p;
  double theta;

  State(double q_, double p_, double theta_) : q(q_), p(p_), theta(theta_) {
    if (!(theta > 0))
      throw InvalidStateError("State: theta must be positive");
  }

  Eigen::Vector3d vec() const { return {q, p, theta}; }
  static State from_vec(const Eigen::Vector3d& v) { return State(v[0], v[1], v[2]); }
};

namespace osc {

double energy(const OscillatorParams& pr, const State& y);
double entropy(const OscillatorParams& pr, const State& y);
double free_energy(const OscillatorParams& pr, const State& y);

/// Residuals of the Helmholtz relations S = -dPhi/dtheta and
/// E = p^2/(2m) + Phi + theta*S. Both vanish up to rounding.
std::pair<double, double> helmholtz_residuals(const OscillatorParams& pr, const State& y);

Eigen::Vector3d grad_energy(const OscillatorParams& pr, const State& y);
Eigen::Vector3d grad_entropy(const OscillatorParams& pr, const State& y);

Eigen::Matrix3d poisson_matrix(const OscillatorParams& pr, const State& y);
Eigen::Matrix3d onsager_matrix(const OscillatorParams& pr, const State& y);

/// d/dtheta of the Poisson matrix (the only nonzero partial).
Eigen::Matrix3d poisson_matrix_dtheta(const OscillatorParams& pr);

/// Right-hand side of the first-order oscillator system.
Eigen::Vector3d rhs(const OscillatorParams& pr, const State& y);

/// Closed-form dual entropy-production potential. Feasibility of the two
/// linear constraints is tested against 1e-10 * max(1, |eta|).
ExtendedScalar psi_star_closed(const OscillatorParams& pr, const State& y,
                               const Eigen::Vector3d& eta);

}  // namespace osc

/// Adapter exposing the oscillator as a generic SystemModel.
class OscillatorModel : public SystemModel {
 public:
  explicit OscillatorModel(const OscillatorParams& pr) : pr_(pr) {}

  int dimension() const override { return 3; }
  bool in_domain(const Eigen::VectorXd& y) const override { return y[2] > 0; }
  double energy(const Eigen::VectorXd& y) const override;
  double entropy(const Eigen::VectorXd& y) const override;
  Eigen::VectorXd grad_energy(const Eigen::VectorXd& y) const override;
  Eigen::VectorXd grad_entropy(const Eigen::VectorXd& y) const override;
  Eigen::MatrixXd poisson(const Eigen::VectorXd& y) const override;
  Eigen::MatrixXd onsager(const Eigen::VectorXd& y) const override;
  std::optional<Eigen::MatrixXd> poisson_partial(const Eigen::VectorXd& y,
                                                 int dir) const override;

  const OscillatorParams& params() const { return pr_; }

 private:
  State as_state(const Eigen::VectorXd& y) const;
  OscillatorParams pr_;
};

}  // namespace genmm
