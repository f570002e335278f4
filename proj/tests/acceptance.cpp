// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "genmm/diagnostics.hpp"
#include "genmm/generic.hpp"
#include "genmm/oscillator.hpp"
#include "genmm/reference.hpp"
#include "genmm/schemes.hpp"
#include "oracles.hpp"

using namespace genmm;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int number, bool pass, const char* description, const std::string& detail) {
  std::printf("[%s] Criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", number,
              description, detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const OscillatorParams pr = OscillatorParams::unit();
const State init(1, 1, 1);

}  // namespace

int main() {
  // Shared artifacts.
  const Partition part = Partition::uniform(15.0, 60);  // tau = 0.25, T = 15
  const RunResult mm_run = run(Scheme::MinimizingMovements, init, part, pr);
  const RunResult eu_run = run(Scheme::ImplicitEuler, init, part, pr);

  // 1. Structural validation.
  {
    const auto t0 = Clock::now();
    const OscillatorModel model(pr);
    const auto samples = sample_states(100, 42);
    const auto anti = check_antisymmetry(model, samples, 1e-12);
    const auto psd = check_onsager_psd(model, samples, 1e-12);
    const auto nic = check_noninteraction(model, samples, 1e-12);
    const auto jac = check_jacobi(model, samples, 1e-6, {.fd_step = 1e-6});
    const double dt = seconds_since(t0);
    const bool pass = anti.pass && psd.pass && nic.pass && jac.pass && dt < 1.0;
    report(1, pass, "structural validation on 100 seeded states",
           fmt("anti %.2e, psd min eig %.2e, nic %.2e, jacobi %.2e, %.2f s",
               anti.max_residual, psd.min_eigenvalue, nic.max_residual,
               jac.max_residual, dt));
  }

  // 2. Discrete energy identity.
  {
    const auto t0 = Clock::now();
    const RunResult res = run(Scheme::MinimizingMovements, init, part, pr);
    const RunReport rep = make_report(res.trajectory, pr);
    const double e0 = rep.energy.front();
    const double telescope =
        std::abs(rep.diss_q.back() + rep.diss_p.back() - (e0 - rep.energy.back()));
    const double dt = seconds_since(t0);
    const bool pass = !res.failed_step && rep.max_energy_residual <= 1e-12 * 3.0 &&
                      telescope <= 1e-12 && dt < 1.0;
    report(2, pass, "discrete energy identity for the MM run",
           fmt("max residual %.2e, telescoping %.2e, %.2f s", rep.max_energy_residual,
               telescope, dt));
  }

  // 3. Stronger G condition.
  {
    double worst_g = -1e300;
    for (const StepDiagnostics& d : mm_run.steps) worst_g = std::max(worst_g, d.g_value);
    const double gsum = g_plus_sum(mm_run.trajectory, pr);
    const bool pass = !mm_run.failed_step && worst_g <= 1e-10 && gsum <= 1e-8;
    report(3, pass, "G <= 0 at every MM step and small estimator",
           fmt("max G %.2e, sum(G)+ %.2e", worst_g, gsum));
  }

  // 4. Entropy structure.
  {
    const auto mm_viol = entropy_violations(mm_run.trajectory, pr, 1e-12);
    const auto eu_viol = entropy_violations(eu_run.trajectory, pr, 1e-6);
    const bool pass = mm_viol.empty() && !eu_viol.empty();
    report(4, pass,
           "MM entropy nondecreasing; Euler entropy strictly decreases somewhere",
           fmt("MM violations %zu, Euler violations > 1e-6: %zu", mm_viol.size(),
               eu_viol.size()));
  }

  // 5. Oracle equivalence on randomized instances.
  {
    const auto t0 = Clock::now();
    const int n = 200;
    std::vector<State> prevs;
    std::vector<double> taus;
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> uq(-2, 2), uth(0.1, 10), utau(1e-3, 0.5);
    for (int i = 0; i < n; ++i) {
      prevs.emplace_back(uq(rng), uq(rng), uth(rng));
      taus.push_back(utau(rng));
    }
    double worst_p = 0.0, worst_eu = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : worst_p, worst_eu)
    for (int i = 0; i < n; ++i) {
      const auto [y, diag] = mm_step(prevs[i], taus[i], pr);
      const double p_oracle = oracle::grid_minimizer_p(prevs[i], taus[i], pr);
      worst_p = std::max(worst_p, std::abs(y.p - p_oracle));

      const State eu = euler_step(prevs[i], taus[i], pr);
      const State po = oracle::picard_euler(prevs[i], taus[i], pr);
      worst_eu = std::max({worst_eu, std::abs(eu.q - po.q), std::abs(eu.p - po.p),
                           std::abs(eu.theta - po.theta)});
    }
    const double dt = seconds_since(t0);
    const bool pass = worst_p <= 1e-8 && worst_eu <= 1e-10 && dt < 60.0;
    report(5, pass, "mm_step and euler_step match independent oracles",
           fmt("max |dp| %.2e, max Euler dev %.2e, %.1f s", worst_p, worst_eu, dt));
  }

  // Reference for criteria 6, 7, 9 at the pinned tolerances.
  const auto tref0 = Clock::now();
  const ReferenceSolution ref = solve_reference(pr, init, 15.0, 1e-8, 1e-4);

  // 6. Convergence order.
  {
    ConvergenceOptions opts;  // n = -1..11, fit over 2..8
    const ConvergenceTable table = convergence_study(pr, init, 15.0, ref, opts);
    const double dt = seconds_since(tref0);
    const bool theta_ok = table.slope_theta_mm >= 0.8 && table.slope_theta_mm <= 1.2 &&
                          table.slope_theta_euler >= 0.8 &&
                          table.slope_theta_euler <= 1.2;
    const bool pass = theta_ok && table.slope_energy_mm >= 0.8 && dt < 300.0;
    report(6, pass, "order-1 convergence in theta and energy drift",
           fmt("slopes theta mm %.3f, theta euler %.3f, E mm %.3f, %.1f s",
               table.slope_theta_mm, table.slope_theta_euler, table.slope_energy_mm,
               dt));
  }

  // 7. Large-step accuracy ordering.
  {
    bool pass = true;
    std::string detail;
    for (double tau : {2.0, 1.0, 0.5}) {
      const Partition p_tau = Partition::with_step(15.0, tau);
      const RunResult mm = run(Scheme::MinimizingMovements, init, p_tau, pr);
      const RunResult eu = run(Scheme::ImplicitEuler, init, p_tau, pr);
      if (mm.failed_step || eu.failed_step) {
        pass = false;
        detail += fmt("tau=%g failed; ", tau);
        continue;
      }
      const double e_mm = sup_error(mm.trajectory, ref, pr, ErrorComponent::Energy);
      const double e_eu = sup_error(eu.trajectory, ref, pr, ErrorComponent::Energy);
      pass = pass && e_mm < e_eu;
      detail += fmt("tau=%g: mm %.4f vs euler %.4f; ", tau, e_mm, e_eu);
    }
    report(7, pass, "MM sup energy error below Euler's at large steps", detail);
  }

  // 8. Uniqueness condition.
  {
    bool global_ok = global_small_step(2.0, 1.5, pr) == false;
    for (double tau : {0.125, 0.25, 0.5, 1.0})
      global_ok = global_ok && global_small_step(2.0, tau, pr);
    bool per_step_ok = true;
    for (const StepDiagnostics& d : mm_run.steps) per_step_ok = per_step_ok && d.convexity_ok;
    const bool pass = global_ok && per_step_ok;
    report(8, pass, "small-step uniqueness condition",
           fmt("global flags %s, per-step convexity %s", global_ok ? "ok" : "bad",
               per_step_ok ? "all true" : "violated"));
  }

  // 9. Reference integrity.
  {
    double drift = 0.0, entropy_dip = 0.0, prev_s = -1e300;
    const double e0 = osc::energy(pr, init);
    for (double t : ref.sample_grid(1e-3)) {
      const State y = ref.eval(t);
      drift = std::max(drift, std::abs(osc::energy(pr, y) - e0));
      const double s = osc::entropy(pr, y);
      entropy_dip = std::max(entropy_dip, prev_s - s);
      prev_s = s;
    }
    const ReferenceSolution half = solve_reference(pr, init, 15.0, 5e-9, 1e-4);
    const double self_conv =
        (ref.eval(15.0).vec() - half.eval(15.0).vec()).cwiseAbs().maxCoeff();
    const bool pass = drift <= 1e-6 && entropy_dip <= 1e-9 && self_conv <= 1e-7;
    report(9, pass, "reference conserves energy and self-converges",
           fmt("drift %.2e, entropy dip %.2e, self-convergence %.2e", drift,
               entropy_dip, self_conv));
  }

  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures;
}
