// Independent slow-but-simple oracles used by the unit tests and the
// acceptance suite. Deliberately implemented without reusing the library's
// solver internals beyond the reduced objective itself.
#pragma once

#include <cmath>
#include <functional>

#include "genmm/schemes.hpp"

namespace oracle {

// Global minimizer of F over the feasible momentum interval: dense grid scan
// followed by golden-section refinement around the best cell.
inline double grid_minimizer_p(const genmm::State& prev, double tau,
                               const genmm::OscillatorParams& pr,
                               int grid_n = 1000000) {
  const auto [p_hat, r_hat] = genmm::feasible_interval(prev, tau, pr);
  const double lo = p_hat - r_hat, hi = p_hat + r_hat;
  auto F = [&](double p) { return genmm::reduced_objective(prev, tau, pr, p).value; };

  double best_p = p_hat, best_F = F(p_hat);
  for (int i = 1; i < grid_n; ++i) {
    const double p = lo + (hi - lo) * static_cast<double>(i) / grid_n;
    const double v = F(p);
    if (v < best_F) {
      best_F = v;
      best_p = p;
    }
  }

  const double cell = (hi - lo) / grid_n;
  double a = std::max(lo + cell * 1e-3, best_p - cell);
  double b = std::min(hi - cell * 1e-3, best_p + cell);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = F(c), fd = F(d);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = F(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = F(d);
    }
  }
  const double refined = (a + b) / 2.0;
  double out = F(refined) <= best_F ? refined : best_p;

  // Golden section localizes the minimizer only to ~sqrt(eps) because it
  // compares near-equal F values; polish by sign bisection of F' over the
  // winning cell when it brackets a sign change.
  auto dF = [&](double p) { return genmm::reduced_objective(prev, tau, pr, p).derivative; };
  double a2 = std::max(lo + cell * 1e-3, out - cell);
  double b2 = std::min(hi - cell * 1e-3, out + cell);
  if (dF(a2) < 0 && dF(b2) > 0) {
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a2 + b2);
      if (dF(m) < 0)
        a2 = m;
      else
        b2 = m;
    }
    // F is flat to rounding here; compare stationarity instead of values.
    const double m = 0.5 * (a2 + b2);
    if (std::abs(dF(m)) <= std::abs(dF(out))) out = m;
  }
  return out;
}

inline genmm::State grid_minimizer_state(const genmm::State& prev, double tau,
                                         const genmm::OscillatorParams& pr,
                                         int grid_n = 1000000) {
  const double p = grid_minimizer_p(prev, tau, pr, grid_n);
  return genmm::State(prev.q + tau * p / pr.m, p,
                      genmm::reduced_temperature(prev, tau, pr, p));
}

// Damped Picard fixed-point iteration on the implicit Euler equations.
inline genmm::State picard_euler(const genmm::State& prev, double tau,
                                 const genmm::OscillatorParams& pr,
                                 int iterations = 10000, double omega = 0.5) {
  double q = prev.q, p = prev.p, th = prev.theta;
  for (int it = 0; it < iterations; ++it) {
    const double qn = prev.q + tau * p / pr.m;
    const double pn =
        prev.p + tau * (-pr.nu * p / pr.m - pr.kappa * q - pr.lambda * th);
    const double tn = prev.theta + tau * (pr.nu * p * p / (pr.m * pr.m * pr.c) +
                                          pr.lambda * p * th / (pr.m * pr.c));
    q += omega * (qn - q);
    p += omega * (pn - p);
    th += omega * (tn - th);
  }
  return genmm::State(q, p, th);
}

// Central finite difference of a scalar function of one coordinate.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle
