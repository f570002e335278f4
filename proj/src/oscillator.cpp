#include "genmm/oscillator.hpp"

#include <cmath>

namespace genmm {
namespace osc {

double energy(const OscillatorParams& pr, const State& y) {
  return y.p * y.p / (2.0 * pr.m) + pr.c * y.theta + pr.kappa * y.q * y.q / 2.0;
}

double entropy(const OscillatorParams& pr, const State& y) {
  return -pr.lambda * y.q + pr.c + pr.c * std::log(y.theta);
}

double free_energy(const OscillatorParams& pr, const State& y) {
  return pr.kappa * y.q * y.q / 2.0 + pr.lambda * y.q * y.theta -
         pr.c * y.theta * std::log(y.theta);
}

std::pair<double, double> helmholtz_residuals(const OscillatorParams& pr, const State& y) {
  // dPhi/dtheta = lambda q - c ln(theta) - c
  const double dphi_dtheta = pr.lambda * y.q - pr.c * std::log(y.theta) - pr.c;
  const double r1 = entropy(pr, y) + dphi_dtheta;
  const double r2 = energy(pr, y) - y.p * y.p / (2.0 * pr.m) - free_energy(pr, y) -
                    y.theta * entropy(pr, y);
  return {r1, r2};
}

Eigen::Vector3d grad_energy(const OscillatorParams& pr, const State& y) {
  return {pr.kappa * y.q, y.p / pr.m, pr.c};
}

Eigen::Vector3d grad_entropy(const OscillatorParams& pr, const State& y) {
  return {-pr.lambda, 0.0, pr.c / y.theta};
}

Eigen::Matrix3d poisson_matrix(const OscillatorParams& pr, const State& y) {
  const double a = pr.lambda * y.theta / pr.c;
  Eigen::Matrix3d L;
  L << 0, 1, 0,
      -1, 0, -a,
       0, a, 0;
  return L;
}

Eigen::Matrix3d onsager_matrix(const OscillatorParams& pr, const State& y) {
  const double s = y.p / (pr.m * pr.c);
  Eigen::Matrix3d K;
  K << 0, 0, 0,
       0, 1, -s,
       0, -s, s * s;
  return pr.nu * y.theta * K;
}

Eigen::Matrix3d poisson_matrix_dtheta(const OscillatorParams& pr) {
  const double a = pr.lambda / pr.c;
  Eigen::Matrix3d dL;
  dL << 0, 0, 0,
        0, 0, -a,
        0, a, 0;
  return dL;
}

Eigen::Vector3d rhs(const OscillatorParams& pr, const State& y) {
  return {y.p / pr.m,
          -pr.nu * y.p / pr.m - pr.kappa * y.q - pr.lambda * y.theta,
          pr.nu * y.p * y.p / (pr.m * pr.m * pr.c) +
              pr.lambda * y.p * y.theta / (pr.m * pr.c)};
}

ExtendedScalar psi_star_closed(const OscillatorParams& pr, const State& y,
                               const Eigen::Vector3d& eta) {
  const double atol = 1e-10 * std::max(1.0, eta.norm());
  const double c1 = eta[0];
  const double c2 = y.p * eta[1] + pr.m * pr.c * eta[2];
  if (std::abs(c1) > atol || std::abs(c2) > atol) return ExtendedScalar::pos_inf();
  return ExtendedScalar::finite(eta[1] * eta[1] / (2.0 * pr.nu * y.theta));
}

}  // namespace osc

State OscillatorModel::as_state(const Eigen::VectorXd& y) const {
  if (!(y[2] > 0)) throw InvalidStateError("OscillatorModel: theta <= 0");
  return State(y[0], y[1], y[2]);
}

double OscillatorModel::energy(const Eigen::VectorXd& y) const {
  return osc::energy(pr_, as_state(y));
}

double OscillatorModel::entropy(const Eigen::VectorXd& y) const {
  return osc::entropy(pr_, as_state(y));
}

Eigen::VectorXd OscillatorModel::grad_energy(const Eigen::VectorXd& y) const {
  return osc::grad_energy(pr_, as_state(y));
}

Eigen::VectorXd OscillatorModel::grad_entropy(const Eigen::VectorXd& y) const {
  return osc::grad_entropy(pr_, as_state(y));
}

Eigen::MatrixXd OscillatorModel::poisson(const Eigen::VectorXd& y) const {
  return osc::poisson_matrix(pr_, as_state(y));
}

Eigen::MatrixXd OscillatorModel::onsager(const Eigen::VectorXd& y) const {
  return osc::onsager_matrix(pr_, as_state(y));
}

std::optional<Eigen::MatrixXd> OscillatorModel::poisson_partial(
    const Eigen::VectorXd&, int dir) const {
  if (dir == 2) return Eigen::MatrixXd(osc::poisson_matrix_dtheta(pr_));
  return Eigen::MatrixXd(Eigen::Matrix3d::Zero());
}

}  // namespace genmm
