#include <doctest.h>

#include <cmath>

#include "genmm/reference.hpp"

using namespace genmm;

namespace {
const OscillatorParams unit_params = OscillatorParams::unit();
}

TEST_CASE("equilibrium start stays constant") {
  const auto ref = solve_reference(unit_params, State(-1, 0, 1), 5.0, 1e-8, 1e-3);
  for (double t : ref.sample_grid(0.05)) {
    const State y = ref.eval(t);
    CHECK(std::abs(y.q + 1.0) <= 1e-10);
    CHECK(std::abs(y.p) <= 1e-10);
    CHECK(std::abs(y.theta - 1.0) <= 1e-10);
  }
}

TEST_CASE("paper data: energy conserved, entropy nondecreasing") {
  const auto ref = solve_reference(unit_params, State(1, 1, 1), 15.0);
  const double e0 = osc::energy(unit_params, State(1, 1, 1));
  double prev_s = -1e300;
  for (double t : ref.sample_grid(1e-3)) {
    const State y = ref.eval(t);
    CHECK(std::abs(osc::energy(unit_params, y) - e0) <= 1e-7);
    const double s = osc::entropy(unit_params, y);
    CHECK(s >= prev_s - 1e-9);
    prev_s = s;
  }
  CHECK(ref.accepted_steps() >= 150000);  // max_step 1e-4 over [0, 15]
}

TEST_CASE("self-convergence under tolerance halving") {
  const auto a = solve_reference(unit_params, State(1, 1, 1), 15.0, 1e-8, 1e-4);
  const auto b = solve_reference(unit_params, State(1, 1, 1), 15.0, 5e-9, 1e-4);
  const Eigen::Vector3d da = a.eval(15.0).vec() - b.eval(15.0).vec();
  CHECK(da.cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("dense output hits the stored nodes and respects bounds") {
  const auto ref = solve_reference(unit_params, State(1, 1, 1), 1.0, 1e-8, 1e-2);
  const auto& nodes = ref.nodes();
  REQUIRE(nodes.size() >= 3);
  // Interior node: interpolation at a node must reproduce the stored state.
  const double tm = nodes[nodes.size() / 2];
  const State y = ref.eval(tm);
  CHECK(y.theta > 0.0);
  const State again = ref.eval(tm);
  CHECK(y.q == again.q);

  CHECK_THROWS_AS(ref.eval(-0.1), std::out_of_range);
  CHECK_THROWS_AS(ref.eval(1.0 + 1e-6), std::out_of_range);
  CHECK(ref.eval(0.0).q == 1.0);
  CHECK_NOTHROW(ref.eval(1.0));
}

TEST_CASE("dense output is 4th-order accurate between nodes") {
  // Compare a coarse solve's dense output against a near-exact solve.
  const auto coarse = solve_reference(unit_params, State(1, 1, 1), 1.0, 1e-6, 1e-2);
  const auto fine = solve_reference(unit_params, State(1, 1, 1), 1.0, 1e-12, 1e-4);
  double worst = 0.0;
  for (double t : fine.sample_grid(1e-2))
    worst = std::max(worst,
                     (coarse.eval(t).vec() - fine.eval(t).vec()).cwiseAbs().maxCoeff());
  CHECK(worst <= 1e-5);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(solve_reference(unit_params, State(1, 1, 1), -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_reference(unit_params, State(1, 1, 1), 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_reference(unit_params, State(1, 1, 1), 1.0, 1e-8, 0.0),
                  std::invalid_argument);
}

TEST_CASE("sample_grid covers the horizon") {
  const auto ref = solve_reference(unit_params, State(1, 1, 1), 2.0, 1e-8, 1e-2);
  const auto grid = ref.sample_grid(0.3);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(2.0).epsilon(1e-15));
  for (std::size_t i = 1; i < grid.size(); ++i)
    CHECK(grid[i] - grid[i - 1] <= 0.3 + 1e-12);
}
