// Timing comparison of the serial versus OpenMP-parallel execution of the
// structural validators and the convergence-study sweep.

#include <chrono>
#include <cstdio>

#include "genmm/diagnostics.hpp"
#include "genmm/generic.hpp"
#include "genmm/oscillator.hpp"
#include "genmm/reference.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_ms(F&& fn) {
  const auto t0 = Clock::now();
  fn();
  const auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
  const genmm::OscillatorParams pr = genmm::OscillatorParams::unit();
  const genmm::OscillatorModel model(pr);
  const auto samples = genmm::sample_states(20000, 42);

  std::printf("%-28s %12s %12s %8s\n", "workload", "serial [ms]", "parallel", "speedup");

  auto bench = [&](const char* name, auto&& fn) {
    // Warm up once, then take the best of three runs per policy.
    double best_s = 1e300, best_p = 1e300;
    fn(genmm::ExecPolicy::Serial);
    for (int r = 0; r < 3; ++r)
      best_s = std::min(best_s, time_ms([&] { fn(genmm::ExecPolicy::Serial); }));
    fn(genmm::ExecPolicy::Parallel);
    for (int r = 0; r < 3; ++r)
      best_p = std::min(best_p, time_ms([&] { fn(genmm::ExecPolicy::Parallel); }));
    std::printf("%-28s %12.2f %12.2f %7.2fx\n", name, best_s, best_p, best_s / best_p);
  };

  bench("antisymmetry", [&](genmm::ExecPolicy e) {
    genmm::check_antisymmetry(model, samples, 1e-12, e);
  });
  bench("onsager psd", [&](genmm::ExecPolicy e) {
    genmm::check_onsager_psd(model, samples, 1e-12, e);
  });
  bench("noninteraction", [&](genmm::ExecPolicy e) {
    genmm::check_noninteraction(model, samples, 1e-12, e);
  });
  bench("jacobi (fd)", [&](genmm::ExecPolicy e) {
    genmm::check_jacobi(model, samples, 1e-6, {}, e);
  });

  const genmm::State y0(1, 1, 1);
  const double T = 15.0;
  const auto ref = genmm::solve_reference(pr, y0, T, 1e-8, 1e-3);
  bench("convergence sweep n=-1..9", [&](genmm::ExecPolicy e) {
    genmm::ConvergenceOptions opts;
    opts.n_max = 9;
    opts.exec = e;
    genmm::convergence_study(pr, y0, T, ref, opts);
  });
  return 0;
}
