#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "genmm/oscillator.hpp"

namespace genmm {

/// Strictly increasing time grid 0 = t_0 < ... < t_N = T.
class Partition {
 public:
  explicit Partition(std::vector<double> nodes);

  /// N equal steps on [0, T].
  static Partition uniform(double T, int n);

  /// Uniform partition with step as close to tau as possible: N = T/tau when
  /// that is an integer (up to rounding), otherwise N = ceil(T/tau) so the
  /// actual step never exceeds tau.
  static Partition with_step(double T, double tau);

  const std::vector<double>& nodes() const { return nodes_; }
  int steps() const { return static_cast<int>(nodes_.size()) - 1; }
  double horizon() const { return nodes_.back(); }
  double step(int i) const { return nodes_[i + 1] - nodes_[i]; }
  /// Diameter: the largest step.
  double diameter() const;

 private:
  std::vector<double> nodes_;
};

/// Discrete states on a partition, with the backward piecewise-constant and
/// piecewise-linear interpolants.
class Trajectory {
 public:
  Trajectory(Partition partition, std::vector<State> states);

  const Partition& partition() const { return partition_; }
  const std::vector<State>& states() const { return states_; }

  /// Piecewise-linear interpolant; eval_linear(t_i) = y_i exactly.
  State eval_linear(double t) const;
  /// Backward piecewise-constant interpolant: y_i on (t_{i-1}, t_i], y_0 at 0.
  State eval_constant(double t) const;

 private:
  int interval_index(double t) const;
  Partition partition_;
  std::vector<State> states_;
};

struct StepDiagnostics {
  double g_value = 0.0;            ///< incremental functional at the accepted state
  int newton_iterations = 0;
  bool convexity_ok = true;        ///< per-step small-step condition held
  double interval_lo = 0.0;        ///< feasible momentum interval
  double interval_hi = 0.0;
  bool fallback_used = false;      ///< multistart fallback engaged
  double energy_residual = 0.0;    ///< discrete energy identity residual
};

struct MmOptions {
  double newton_tol = 1e-12;       ///< stop when the Newton step is below this, times 1+|p|
  int max_newton_iterations = 50;
  int multistart_grid = 64;        ///< fallback grid size when convexity fails
  double interval_clamp_rel = 1e-12;  ///< endpoints pulled in by this fraction of the radius
};

struct SolverFailure : std::runtime_error {
  SolverFailure(const std::string& what, StepDiagnostics diag)
      : std::runtime_error(what), diagnostics(diag) {}
  StepDiagnostics diagnostics;
};

/// Open momentum interval (p_hat - r_hat, p_hat + r_hat) on which the
/// reduced temperature is positive.
struct FeasibleInterval {
  double p_hat;
  double r_hat;
};

FeasibleInterval feasible_interval(const State& prev, double tau,
                                   const OscillatorParams& pr);

/// Reduced temperature f(p): the value of theta_i forced by the step
/// constraints once p_i = p is chosen.
double reduced_temperature(const State& prev, double tau,
                           const OscillatorParams& pr, double p);

/// Maximum of the reduced temperature over the feasible interval (closed form).
double max_reduced_temperature(const State& prev, double tau,
                               const OscillatorParams& pr);

/// Reduced objective F and its first two derivatives at p. Requires f(p) > 0.
struct ReducedObjective {
  double value;
  double derivative;
  double second_derivative;
};
ReducedObjective reduced_objective(const State& prev, double tau,
                                   const OscillatorParams& pr, double p);

/// Per-step strict-convexity condition: max f <= 2 nu c / (tau lambda^2).
bool convexity_condition(const State& prev, double tau, const OscillatorParams& pr);

/// Partition-wide uniqueness condition c0 <= 2 nu c / (tau_max lambda^2).
bool global_small_step(double c0, double tau_max, const OscillatorParams& pr);

/// One minimizing-movements step.
std::pair<State, StepDiagnostics> mm_step(const State& prev, double tau,
                                          const OscillatorParams& pr,
                                          const MmOptions& opts = {});

/// One implicit Euler step via the closed-form quadratic for theta.
State euler_step(const State& prev, double tau, const OscillatorParams& pr);

/// Incremental functional G(tau, prev; cand). Returns the +inf sentinel when
/// cand leaves the domain or violates the step constraints beyond
/// constraint_tol * (1 + |cand|). Pass an infinite constraint_tol to evaluate
/// the finite branch on any positive-temperature candidate.
ExtendedScalar incremental_g(const State& prev, const State& cand, double tau,
                             const OscillatorParams& pr,
                             double constraint_tol = 1e-9);

enum class Scheme { MinimizingMovements, ImplicitEuler };

struct RunResult {
  Trajectory trajectory;
  std::vector<StepDiagnostics> steps;
  std::optional<int> failed_step;  ///< 1-based index of the failing step, if any
  std::string error;
};

/// Sequential stepping over a partition. On a step failure the partial
/// trajectory is returned with failed_step set.
RunResult run(Scheme scheme, const State& y0, const Partition& partition,
              const OscillatorParams& pr, const MmOptions& opts = {});

}  // namespace genmm
