#include "genmm/reference.hpp"

#include <algorithm>
#include <cmath>

namespace genmm {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

Eigen::Vector3d f(const OscillatorParams& pr, const Eigen::Vector3d& y) {
  return osc::rhs(pr, State::from_vec(y));
}

}  // namespace

ReferenceSolution solve_reference(const OscillatorParams& pr, const State& y0,
                                  double T, double abs_tol, double max_step) {
  if (!(T > 0) || !(abs_tol > 0) || !(max_step > 0))
    throw std::invalid_argument("solve_reference: bad arguments");

  ReferenceSolution sol;
  sol.abs_tol_ = abs_tol;
  sol.max_step_ = max_step;

  double t = 0.0;
  Eigen::Vector3d y = y0.vec();
  Eigen::Vector3d k1 = f(pr, y);
  double h = max_step;

  sol.t_.push_back(0.0);
  sol.y_.push_back(y);

  while (t < T) {
    h = std::min(h, max_step);
    if (t + h > T) h = T - t;

    const Eigen::Vector3d k2 = f(pr, y + h * (a21 * k1));
    const Eigen::Vector3d k3 = f(pr, y + h * (a31 * k1 + a32 * k2));
    const Eigen::Vector3d k4 = f(pr, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::Vector3d k5 = f(pr, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::Vector3d k6 =
        f(pr, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Eigen::Vector3d ynew =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::Vector3d k7 = f(pr, ynew);
    const Eigen::Vector3d errv =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    // Per-component absolute tolerance only.
    const double err = errv.cwiseAbs().maxCoeff() / abs_tol;
    if (err <= 1.0) {
      if (!(ynew[2] > 0))
        throw InvalidStateError("solve_reference: temperature crossed zero");
      const Eigen::Vector3d ydiff = ynew - y;
      const Eigen::Vector3d bspl = h * k1 - ydiff;
      std::array<Eigen::Vector3d, 5> rc;
      rc[0] = y;
      rc[1] = ydiff;
      rc[2] = bspl;
      rc[3] = ydiff - h * k7 - bspl;
      rc[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      sol.rcont_.push_back(rc);

      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      sol.t_.push_back(t);
      sol.y_.push_back(y);
      ++sol.accepted_;
    } else {
      ++sol.rejected_;
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    h = std::max(h * fac, 1e-14);
  }
  return sol;
}

State ReferenceSolution::eval(double t) const {
  if (t < t_.front() || t > t_.back())
    throw std::out_of_range("ReferenceSolution::eval: t outside [0, T]");
  if (t == t_.front()) return State::from_vec(y_.front());
  const auto it = std::lower_bound(t_.begin() + 1, t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin());
  const double h = t_[i] - t_[i - 1];
  const double s = (t - t_[i - 1]) / h;
  const double s1 = 1.0 - s;
  const auto& rc = rcont_[i - 1];
  const Eigen::Vector3d v = rc[0] + s * (rc[1] + s1 * (rc[2] + s * (rc[3] + s1 * rc[4])));
  return State::from_vec(v);
}

std::vector<double> ReferenceSolution::sample_grid(double dt) const {
  const double T = t_.back();
  const int n = std::max(1, static_cast<int>(std::ceil(T / dt)));
  std::vector<double> grid(n + 1);
  for (int i = 0; i <= n; ++i) grid[i] = T * static_cast<double>(i) / n;
  grid.back() = T;
  return grid;
}

}  // namespace genmm
