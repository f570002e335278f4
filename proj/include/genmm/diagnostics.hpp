#pragma once

#include <optional>
#include <vector>

#include "genmm/reference.hpp"
#include "genmm/schemes.hpp"

namespace genmm {

/// Per-run bookkeeping: conserved/dissipated quantities and the
/// a-posteriori estimator.
struct RunReport {
  std::vector<double> energy;             ///< E(y_i)
  std::vector<double> entropy;            ///< S(y_i)
  std::vector<double> diss_q;             ///< cumulative kappa/2 |dq|^2
  std::vector<double> diss_p;             ///< cumulative |dp|^2 / (2m)
  std::vector<double> g_values;           ///< finite G per step (+inf recorded as NaN)
  double g_plus_sum = 0.0;                ///< sum of positive parts
  double min_theta = 0.0;
  double max_energy_residual = 0.0;       ///< worst per-step energy-identity residual
};

RunReport make_report(const Trajectory& traj, const OscillatorParams& pr);

/// Sum of positive parts of G along the trajectory. constraint_tol as in
/// incremental_g; pass +inf to evaluate the finite branch everywhere.
double g_plus_sum(const Trajectory& traj, const OscillatorParams& pr,
                  double constraint_tol = 1e-9);

/// Per-step residuals of the discrete energy identity.
std::vector<double> energy_identity_residuals(const Trajectory& traj,
                                              const OscillatorParams& pr);

/// Cumulative dissipation sums D^q_j and D^p_j.
std::pair<std::vector<double>, std::vector<double>> dissipation_sums(
    const Trajectory& traj, const OscillatorParams& pr);

/// Indices i with S(y_i) < S(y_{i-1}) - tol.
std::vector<int> entropy_violations(const Trajectory& traj,
                                    const OscillatorParams& pr,
                                    double tol = 1e-12);

enum class ErrorComponent { Position, Momentum, Temperature, Energy };

/// Sup error over the reference sample grid (spacing grid_dt) between the
/// piecewise-linear interpolant of traj and the reference. The Energy variant
/// compares E along the interpolant against the constant E(y0).
double sup_error(const Trajectory& traj, const ReferenceSolution& ref,
                 const OscillatorParams& pr, ErrorComponent component,
                 double grid_dt = 1e-3);

struct ConvergenceRow {
  double tau;  ///< actual step used
  std::optional<double> err_theta_mm;
  std::optional<double> err_theta_euler;
  std::optional<double> err_energy_mm;
  std::optional<double> err_energy_euler;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double slope_theta_mm = 0.0;
  double slope_theta_euler = 0.0;
  double slope_energy_mm = 0.0;
  double slope_energy_euler = 0.0;
};

struct ConvergenceOptions {
  int n_min = -1;               ///< tau = 2^-n, n = n_min..n_max
  int n_max = 11;
  int fit_n_min = 2;            ///< log-log fit window
  int fit_n_max = 8;
  double grid_dt = 1e-3;
  ExecPolicy exec = ExecPolicy::Parallel;
  MmOptions mm{};
};

/// Runs both schemes for tau = 2^-n over the requested range and fits
/// log-log slopes over the fit window. Failed cells stay empty and are
/// excluded from the fit.
ConvergenceTable convergence_study(const OscillatorParams& pr, const State& y0,
                                   double T, const ReferenceSolution& ref,
                                   const ConvergenceOptions& opts = {});

/// Least-squares slope of log(err) vs log(tau).
double fit_order(const std::vector<double>& taus, const std::vector<double>& errors);

}  // namespace genmm
