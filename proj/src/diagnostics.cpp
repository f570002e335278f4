#include "genmm/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace genmm {

RunReport make_report(const Trajectory& traj, const OscillatorParams& pr) {
  const auto& states = traj.states();
  RunReport rep;
  rep.energy.reserve(states.size());
  rep.entropy.reserve(states.size());
  rep.min_theta = std::numeric_limits<double>::infinity();
  for (const State& y : states) {
    rep.energy.push_back(osc::energy(pr, y));
    rep.entropy.push_back(osc::entropy(pr, y));
    rep.min_theta = std::min(rep.min_theta, y.theta);
  }
  auto [dq, dp] = dissipation_sums(traj, pr);
  rep.diss_q = std::move(dq);
  rep.diss_p = std::move(dp);

  const auto res = energy_identity_residuals(traj, pr);
  for (double r : res) rep.max_energy_residual = std::max(rep.max_energy_residual, std::abs(r));

  rep.g_values.reserve(traj.partition().steps());
  for (int i = 0; i < traj.partition().steps(); ++i) {
    const ExtendedScalar g =
        incremental_g(states[i], states[i + 1], traj.partition().step(i), pr);
    const double v = g.value_or(std::numeric_limits<double>::quiet_NaN());
    rep.g_values.push_back(v);
    if (g.is_pos_inf())
      rep.g_plus_sum = std::numeric_limits<double>::infinity();
    else if (v > 0)
      rep.g_plus_sum += v;
  }
  return rep;
}

double g_plus_sum(const Trajectory& traj, const OscillatorParams& pr,
                  double constraint_tol) {
  const auto& states = traj.states();
  double sum = 0.0;
  for (int i = 0; i < traj.partition().steps(); ++i) {
    const ExtendedScalar g = incremental_g(states[i], states[i + 1],
                                           traj.partition().step(i), pr, constraint_tol);
    if (g.is_pos_inf()) return std::numeric_limits<double>::infinity();
    sum += std::max(0.0, g.value());
  }
  return sum;
}

std::vector<double> energy_identity_residuals(const Trajectory& traj,
                                              const OscillatorParams& pr) {
  const auto& states = traj.states();
  std::vector<double> res;
  res.reserve(traj.partition().steps());
  for (int i = 0; i < traj.partition().steps(); ++i) {
    const double dq = states[i + 1].q - states[i].q;
    const double dp = states[i + 1].p - states[i].p;
    res.push_back(osc::energy(pr, states[i + 1]) + pr.kappa * dq * dq / 2.0 +
                  dp * dp / (2.0 * pr.m) - osc::energy(pr, states[i]));
  }
  return res;
}

std::pair<std::vector<double>, std::vector<double>> dissipation_sums(
    const Trajectory& traj, const OscillatorParams& pr) {
  const auto& states = traj.states();
  std::vector<double> dq_sum, dp_sum;
  dq_sum.reserve(traj.partition().steps());
  dp_sum.reserve(traj.partition().steps());
  double sq = 0.0, sp = 0.0;
  for (int i = 0; i < traj.partition().steps(); ++i) {
    const double dq = states[i + 1].q - states[i].q;
    const double dp = states[i + 1].p - states[i].p;
    sq += pr.kappa * dq * dq / 2.0;
    sp += dp * dp / (2.0 * pr.m);
    dq_sum.push_back(sq);
    dp_sum.push_back(sp);
  }
  return {dq_sum, dp_sum};
}

std::vector<int> entropy_violations(const Trajectory& traj, const OscillatorParams& pr,
                                    double tol) {
  const auto& states = traj.states();
  std::vector<int> out;
  for (std::size_t i = 1; i < states.size(); ++i)
    if (osc::entropy(pr, states[i]) < osc::entropy(pr, states[i - 1]) - tol)
      out.push_back(static_cast<int>(i));
  return out;
}

double sup_error(const Trajectory& traj, const ReferenceSolution& ref,
                 const OscillatorParams& pr, ErrorComponent component, double grid_dt) {
  if (std::abs(traj.partition().horizon() - ref.horizon()) >
      1e-9 * std::max(1.0, ref.horizon()))
    throw std::invalid_argument("sup_error: trajectory and reference horizons differ");
  const std::vector<double> grid = ref.sample_grid(grid_dt);
  const double e0 = osc::energy(pr, traj.states().front());
  double worst = 0.0;
  for (double t : grid) {
    const State a = traj.eval_linear(t);
    double err;
    switch (component) {
      case ErrorComponent::Position:
        err = std::abs(a.q - ref.eval(t).q);
        break;
      case ErrorComponent::Momentum:
        err = std::abs(a.p - ref.eval(t).p);
        break;
      case ErrorComponent::Temperature:
        err = std::abs(a.theta - ref.eval(t).theta);
        break;
      case ErrorComponent::Energy:
        err = std::abs(osc::energy(pr, a) - e0);
        break;
    }
    worst = std::max(worst, err);
  }
  return worst;
}

double fit_order(const std::vector<double>& taus, const std::vector<double>& errors) {
  if (taus.size() != errors.size() || taus.size() < 2)
    throw std::invalid_argument("fit_order: need at least two (tau, error) pairs");
  const std::size_t n = taus.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = std::log(taus[i]);
    ys[i] = std::log(errors[i]);
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

ConvergenceTable convergence_study(const OscillatorParams& pr, const State& y0, double T,
                                   const ReferenceSolution& ref,
                                   const ConvergenceOptions& opts) {
  const int count = opts.n_max - opts.n_min + 1;
  ConvergenceTable table;
  table.rows.resize(count);

#pragma omp parallel for schedule(dynamic) if (opts.exec == ExecPolicy::Parallel)
  for (int idx = 0; idx < count; ++idx) {
    const int n = opts.n_min + idx;
    const double tau = std::pow(2.0, -n);
    const Partition part = Partition::with_step(T, tau);
    ConvergenceRow row;
    row.tau = part.diameter();
    try {
      const RunResult mm = run(Scheme::MinimizingMovements, y0, part, pr, opts.mm);
      if (!mm.failed_step) {
        row.err_theta_mm =
            sup_error(mm.trajectory, ref, pr, ErrorComponent::Temperature, opts.grid_dt);
        row.err_energy_mm =
            sup_error(mm.trajectory, ref, pr, ErrorComponent::Energy, opts.grid_dt);
      }
    } catch (const std::exception&) {
    }
    try {
      const RunResult eu = run(Scheme::ImplicitEuler, y0, part, pr, opts.mm);
      if (!eu.failed_step) {
        row.err_theta_euler =
            sup_error(eu.trajectory, ref, pr, ErrorComponent::Temperature, opts.grid_dt);
        row.err_energy_euler =
            sup_error(eu.trajectory, ref, pr, ErrorComponent::Energy, opts.grid_dt);
      }
    } catch (const std::exception&) {
    }
    table.rows[idx] = row;
  }

  auto fit = [&](auto getter) {
    std::vector<double> ts, es;
    for (int idx = 0; idx < count; ++idx) {
      const int n = opts.n_min + idx;
      if (n < opts.fit_n_min || n > opts.fit_n_max) continue;
      const auto& cell = getter(table.rows[idx]);
      if (cell) {
        ts.push_back(table.rows[idx].tau);
        es.push_back(*cell);
      }
    }
    return ts.size() >= 2 ? fit_order(ts, es) : std::numeric_limits<double>::quiet_NaN();
  };
  table.slope_theta_mm = fit([](const ConvergenceRow& r) -> const std::optional<double>& {
    return r.err_theta_mm;
  });
  table.slope_theta_euler = fit([](const ConvergenceRow& r) -> const std::optional<double>& {
    return r.err_theta_euler;
  });
  table.slope_energy_mm = fit([](const ConvergenceRow& r) -> const std::optional<double>& {
    return r.err_energy_mm;
  });
  table.slope_energy_euler = fit([](const ConvergenceRow& r) -> const std::optional<double>& {
    return r.err_energy_euler;
  });
  return table;
}

}  // namespace genmm
