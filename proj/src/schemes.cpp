#include "genmm/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace genmm {

Partition::Partition(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("Partition: need at least one step");
  if (nodes_.front() != 0.0) throw std::invalid_argument("Partition: t_0 must be 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw std::invalid_argument("Partition: nodes must be strictly increasing");
}

Partition Partition::uniform(double T, int n) {
  if (!(T > 0) || n < 1) throw std::invalid_argument("Partition::uniform: bad arguments");
  std::vector<double> nodes(n + 1);
  for (int i = 0; i <= n; ++i) nodes[i] = T * static_cast<double>(i) / n;
  nodes.back() = T;
  return Partition(std::move(nodes));
}

Partition Partition::with_step(double T, double tau) {
  if (!(T > 0) || !(tau > 0)) throw std::invalid_argument("Partition::with_step: bad arguments");
  const double ratio = T / tau;
  int n = static_cast<int>(std::llround(ratio));
  if (n < 1 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
    n = static_cast<int>(std::ceil(ratio));
  return uniform(T, n);
}

double Partition::diameter() const {
  double d = 0.0;
  for (int i = 0; i < steps(); ++i) d = std::max(d, step(i));
  return d;
}

Trajectory::Trajectory(Partition partition, std::vector<State> states)
    : partition_(std::move(partition)), states_(std::move(states)) {
  if (states_.size() != partition_.nodes().size())
    throw std::invalid_argument("Trajectory: states/nodes size mismatch");
}

int Trajectory::interval_index(double t) const {
  const auto& nodes = partition_.nodes();
  if (t < nodes.front() || t > nodes.back())
    throw std::out_of_range("Trajectory: t outside [0, T]");
  // smallest i with t <= t_i, i >= 1
  const auto it = std::lower_bound(nodes.begin() + 1, nodes.end(), t);
  return static_cast<int>(it - nodes.begin());
}

State Trajectory::eval_linear(double t) const {
  const auto& nodes = partition_.nodes();
  if (t == nodes.front()) return states_.front();
  const int i = interval_index(t);
  if (t == nodes[i]) return states_[i];
  const double w = (t - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
  const Eigen::Vector3d v =
      states_[i - 1].vec() + w * (states_[i].vec() - states_[i - 1].vec());
  return State::from_vec(v);
}

State Trajectory::eval_constant(double t) const {
  const auto& nodes = partition_.nodes();
  if (t == nodes.front()) return states_.front();
  return states_[interval_index(t)];
}

FeasibleInterval feasible_interval(const State& prev, double tau,
                                   const OscillatorParams& pr) {
  const double a = 2.0 + 2.0 * tau * tau * pr.kappa / pr.m;
  const double b = prev.p - tau * pr.kappa * prev.q;
  const double p_hat = b / a;
  const double r_hat =
      std::sqrt(b * b + 4.0 * (1.0 + tau * tau * pr.kappa / pr.m) * pr.m * pr.c * prev.theta) /
      a;
  return {p_hat, r_hat};
}

double reduced_temperature(const State& prev, double tau, const OscillatorParams& pr,
                           double p) {
  const double mc = pr.m * pr.c;
  return prev.theta - tau * tau * pr.kappa * p * p / (pr.m * mc) -
         tau * pr.kappa * p * prev.q / mc - p * p / mc + p * prev.p / mc;
}

double max_reduced_temperature(const State& prev, double tau,
                               const OscillatorParams& pr) {
  const double b = prev.p - tau * pr.kappa * prev.q;
  return b * b / (4.0 * (tau * tau * pr.kappa * pr.c + pr.m * pr.c)) + prev.theta;
}

ReducedObjective reduced_objective(const State& prev, double tau,
                                   const OscillatorParams& pr, double p) {
  const double mc = pr.m * pr.c;
  const double f = reduced_temperature(prev, tau, pr, p);
  if (!(f > 0)) throw InvalidStateError("reduced_objective: f(p) <= 0");
  const double fp = -2.0 * (tau * tau * pr.kappa / (pr.m * mc) + 1.0 / mc) * p -
                    tau * pr.kappa * prev.q / mc + prev.p / mc;
  const double fpp = -2.0 * (tau * tau * pr.kappa / (pr.m * mc) + 1.0 / mc);

  const double A = (p - prev.p) / tau + tau * pr.kappa * p / pr.m +
                   pr.kappa * prev.q + pr.lambda * f;
  const double Ap = 1.0 / tau + tau * pr.kappa / pr.m + pr.lambda * fp;
  const double App = pr.lambda * fpp;

  const double F = tau * pr.lambda * p / pr.m - pr.c * std::log(f) +
                   tau / (2.0 * pr.nu) * A * A / f +
                   tau * pr.nu / (2.0 * pr.m) * p * p / f + pr.c * std::log(prev.theta);

  const double dF = tau * pr.lambda / pr.m - pr.c * fp / f +
                    tau / (2.0 * pr.nu) * (2.0 * A * Ap * f - A * A * fp) / (f * f) +
                    tau * pr.nu / (2.0 * pr.m) * (2.0 * p * f - p * p * fp) / (f * f);

  // (A^2/f)'' and (p^2/f)''
  const double d2_quot_A = (2.0 * Ap * Ap + 2.0 * A * App) / f -
                           (4.0 * A * Ap * fp + A * A * fpp) / (f * f) +
                           2.0 * A * A * fp * fp / (f * f * f);
  const double d2_quot_p = 2.0 / f - (4.0 * p * fp + p * p * fpp) / (f * f) +
                           2.0 * p * p * fp * fp / (f * f * f);
  const double d2F = -pr.c * (fpp * f - fp * fp) / (f * f) +
                     tau / (2.0 * pr.nu) * d2_quot_A +
                     tau * pr.nu / (2.0 * pr.m) * d2_quot_p;

  return {F, dF, d2F};
}

bool convexity_condition(const State& prev, double tau, const OscillatorParams& pr) {
  return max_reduced_temperature(prev, tau, pr) <=
         2.0 * pr.nu * pr.c / (tau * pr.lambda * pr.lambda);
}

bool global_small_step(double c0, double tau_max, const OscillatorParams& pr) {
  return c0 <= 2.0 * pr.nu * pr.c / (tau_max * pr.lambda * pr.lambda);
}

namespace {

struct NewtonOutcome {
  double p;
  int iterations;
};

// Safeguarded Newton on F' over a bracket [lo, hi] with F'(lo) < 0 < F'(hi).
NewtonOutcome newton_on_bracket(const State& prev, double tau, const OscillatorParams& pr,
                                double lo, double hi, double start,
                                const MmOptions& opts) {
  double a = lo, b = hi;
  double p = std::clamp(start, lo, hi);
  int iters = 0;
  for (; iters < opts.max_newton_iterations; ++iters) {
    const ReducedObjective obj = reduced_objective(prev, tau, pr, p);
    if (obj.derivative == 0.0) break;
    if (obj.derivative < 0)
      a = p;
    else
      b = p;
    if (b - a <= 1e-16 * (1.0 + std::abs(p))) break;
    double next = p;
    if (obj.second_derivative > 0) next = p - obj.derivative / obj.second_derivative;
    if (!(next > a) || !(next < b)) next = 0.5 * (a + b);  // bisection safeguard
    // A tiny step alone is not convergence: steps also collapse against the
    // log barrier, where the Newton decrement F'^2/F'' stays O(c) instead of
    // vanishing. Require both.
    const bool tiny_step = std::abs(next - p) <= opts.newton_tol * (1.0 + std::abs(p));
    const bool stationary =
        obj.second_derivative > 0 &&
        obj.derivative * obj.derivative / obj.second_derivative <= 1e-9;
    p = next;
    if (tiny_step && stationary) break;
  }
  return {p, iters};
}

}  // namespace

std::pair<State, StepDiagnostics> mm_step(const State& prev, double tau,
                                          const OscillatorParams& pr,
                                          const MmOptions& opts) {
  if (!(tau > 0)) throw std::invalid_argument("mm_step: tau must be positive");
  const FeasibleInterval iv = feasible_interval(prev, tau, pr);
  const double shrink = opts.interval_clamp_rel * iv.r_hat;
  const double lo = iv.p_hat - iv.r_hat + shrink;
  const double hi = iv.p_hat + iv.r_hat - shrink;

  StepDiagnostics diag;
  diag.interval_lo = lo;
  diag.interval_hi = hi;
  diag.convexity_ok = convexity_condition(prev, tau, pr);

  const double dlo = reduced_objective(prev, tau, pr, lo).derivative;
  const double dhi = reduced_objective(prev, tau, pr, hi).derivative;
  if (!(dlo < 0) || !(dhi > 0))
    throw SolverFailure("mm_step: no bracketing sign change of F'", diag);

  double p;
  if (diag.convexity_ok) {
    // Seed at the previous momentum, but clamped away from the endpoints:
    // starting inside the log barrier costs dozens of escape iterations.
    const double pad = 0.01 * (hi - lo);
    const NewtonOutcome out =
        newton_on_bracket(prev, tau, pr, lo, hi, std::clamp(prev.p, lo + pad, hi - pad),
                          opts);
    p = out.p;
    diag.newton_iterations = out.iterations;
  } else {
    // Multistart: scan the interval, refine the best grid point locally.
    diag.fallback_used = true;
    const int n = opts.multistart_grid;
    int best = -1;
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
      grid[i] = lo + (hi - lo) * (i + 0.5) / n;
    for (int i = 0; i < n; ++i) {
      const double v = reduced_objective(prev, tau, pr, grid[i]).value;
      if (v < best_val) {
        best_val = v;
        best = i;
      }
    }
    const double llo = best > 0 ? grid[best - 1] : lo;
    const double lhi = best + 1 < n ? grid[best + 1] : hi;
    const NewtonOutcome out = newton_on_bracket(prev, tau, pr, llo, lhi, grid[best], opts);
    p = out.p;
    diag.newton_iterations = out.iterations;
    if (reduced_objective(prev, tau, pr, p).value > best_val)
      p = grid[best];
  }

  const double theta = reduced_temperature(prev, tau, pr, p);
  if (!(theta > 0)) throw SolverFailure("mm_step: accepted p has f(p) <= 0", diag);
  const State next(prev.q + tau * p / pr.m, p, theta);

  diag.g_value = incremental_g(prev, next, tau, pr).value();
  const double dq = next.q - prev.q;
  const double dp = next.p - prev.p;
  diag.energy_residual = osc::energy(pr, next) + pr.kappa * dq * dq / 2.0 +
                         dp * dp / (2.0 * pr.m) - osc::energy(pr, prev);
  return {next, diag};
}

State euler_step(const State& prev, double tau, const OscillatorParams& pr) {
  if (!(tau > 0)) throw std::invalid_argument("euler_step: tau must be positive");
  const double den = pr.m + tau * pr.nu + tau * tau * pr.kappa;
  const double alpha = -tau * pr.m * pr.lambda / den;
  const double beta = (-tau * pr.m * pr.kappa * prev.q + pr.m * prev.p) / den;
  const double m2c = pr.m * pr.m * pr.c;
  const double mc = pr.m * pr.c;

  const double gamma = tau * pr.nu * alpha * alpha / m2c + tau * pr.lambda * alpha / mc;
  const double delta =
      2.0 * tau * pr.nu * alpha * beta / m2c + tau * pr.lambda * beta / mc - 1.0;
  const double eps = prev.theta + tau * pr.nu * beta * beta / m2c;

  // gamma < 0 and eps > 0: exactly one positive root of the quadratic.
  const double disc = delta * delta - 4.0 * gamma * eps;
  if (disc < 0) throw InvalidStateError("euler_step: negative discriminant from rounding");
  const double sq = std::sqrt(disc);
  const double qq = -0.5 * (delta + (delta >= 0 ? sq : -sq));
  const double r1 = qq / gamma;
  const double r2 = (qq != 0.0) ? eps / qq : 0.0;
  const double theta = r1 > 0 ? r1 : r2;
  if (!(theta > 0)) throw InvalidStateError("euler_step: no positive root");

  const double p = alpha * theta + beta;
  return State(prev.q + tau * p / pr.m, p, theta);
}

ExtendedScalar incremental_g(const State& prev, const State& cand, double tau,
                             const OscillatorParams& pr, double constraint_tol) {
  if (!(cand.theta > 0)) return ExtendedScalar::pos_inf();
  if (std::isfinite(constraint_tol)) {
    const double scale = constraint_tol * (1.0 + cand.vec().norm());
    const double r1 = (cand.q - prev.q) / tau - cand.p / pr.m;
    const double r2 = pr.c * (cand.theta - prev.theta) / tau +
                      pr.kappa * cand.q * cand.p / pr.m +
                      (cand.p / pr.m) * (cand.p - prev.p) / tau;
    if (std::abs(r1) > scale || std::abs(r2) > scale) return ExtendedScalar::pos_inf();
  }
  const double A = (cand.p - prev.p) / tau + pr.kappa * cand.q + pr.lambda * cand.theta;
  const double g = pr.lambda * cand.q - pr.c * std::log(cand.theta) +
                   tau / (2.0 * pr.nu * cand.theta) * A * A +
                   tau * pr.nu * cand.p * cand.p / (2.0 * pr.m * cand.theta) -
                   pr.lambda * prev.q + pr.c * std::log(prev.theta);
  return ExtendedScalar::finite(g);
}

RunResult run(Scheme scheme, const State& y0, const Partition& partition,
              const OscillatorParams& pr, const MmOptions& opts) {
  std::vector<State> states;
  states.reserve(partition.nodes().size());
  states.push_back(y0);
  std::vector<StepDiagnostics> diags;
  diags.reserve(partition.steps());

  std::optional<int> failed;
  std::string error;
  for (int i = 0; i < partition.steps(); ++i) {
    const double tau = partition.step(i);
    try {
      if (scheme == Scheme::MinimizingMovements) {
        auto [next, diag] = mm_step(states.back(), tau, pr, opts);
        states.push_back(next);
        diags.push_back(diag);
      } else {
        const State next = euler_step(states.back(), tau, pr);
        StepDiagnostics diag;
        diag.g_value = incremental_g(states.back(), next, tau, pr).value_or(
            std::numeric_limits<double>::quiet_NaN());
        const double dq = next.q - states.back().q;
        const double dp = next.p - states.back().p;
        diag.energy_residual = osc::energy(pr, next) + pr.kappa * dq * dq / 2.0 +
                               dp * dp / (2.0 * pr.m) - osc::energy(pr, states.back());
        states.push_back(next);
        diags.push_back(diag);
      }
    } catch (const std::exception& e) {
      if (i == 0) throw;  // nothing to return, not even a partial trajectory
      failed = i + 1;
      error = e.what();
      break;
    }
  }

  // Partial trajectories keep the nodes actually reached.
  std::vector<double> nodes(partition.nodes().begin(),
                            partition.nodes().begin() + states.size());
  return {Trajectory(Partition(std::move(nodes)), std::move(states)), std::move(diags),
          failed, std::move(error)};
}

}  // namespace genmm
