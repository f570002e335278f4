#pragma once

#include <array>
#include <vector>

#include "genmm/oscillator.hpp"

namespace genmm {

/// High-accuracy baseline trajectory from an embedded Dormand-Prince 5(4)
/// pair with dense output.
class ReferenceSolution {
 public:
  State eval(double t) const;

  /// Uniform sample grid with spacing <= dt (endpoint included).
  std::vector<double> sample_grid(double dt) const;

  const std::vector<double>& nodes() const { return t_; }
  double horizon() const { return t_.back(); }

  long accepted_steps() const { return accepted_; }
  long rejected_steps() const { return rejected_; }
  double abs_tol() const { return abs_tol_; }
  double max_step() const { return max_step_; }

 private:
  friend ReferenceSolution solve_reference(const OscillatorParams&, const State&,
                                           double, double, double);
  std::vector<double> t_;
  std::vector<Eigen::Vector3d> y_;
  // 4th-order dense-output coefficients per accepted step.
  std::vector<std::array<Eigen::Vector3d, 5>> rcont_;
  long accepted_ = 0;
  long rejected_ = 0;
  double abs_tol_ = 0;
  double max_step_ = 0;
};

/// Integrates the oscillator system on [0, T] with per-component absolute
/// error control (no relative component) and a hard step-size cap.
ReferenceSolution solve_reference(const OscillatorParams& pr, const State& y0,
                                  double T, double abs_tol = 1e-8,
                                  double max_step = 1e-4);

}  // namespace genmm
