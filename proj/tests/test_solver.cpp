#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "thermistor/error.hpp"
#include "thermistor/random.hpp"
#include "thermistor/solver.hpp"

using namespace thermistor;

namespace {

ProblemSpec single_node() {
  ProblemSpec spec;
  spec.grid = Grid::interval(1.0, 2);
  spec.m = 2.0;
  spec.kappa = 1.0;
  spec.source = SourceLaw::constant_floor(1.0);
  return spec;
}

StepperConfig tight(double dt) {
  StepperConfig cfg;
  cfg.dt = dt;
  cfg.newton_tol = 1e-13;
  cfg.picard_tol = 1e-13;
  cfg.picard_max_iters = 100;
  return cfg;
}

double max_diff(const Field& a, const Field& b) {
  double out = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) out = std::max(out, std::abs(a[k] - b[k]));
  return out;
}

}  // namespace

TEST_CASE("single interior node closed form") {
  const ProblemSpec spec = single_node();
  const Field v0(spec.grid);
  const auto step = implicit_step(v0, spec, tight(0.1));
  CHECK(step.state[0] == doctest::Approx(0.1 / 1.8).epsilon(1e-12));
  CHECK(brute_force_step(v0, spec, 0.1)[0] == doctest::Approx(0.1 / 1.8).epsilon(1e-12));
}

TEST_CASE("zero state is a fixed point without the source") {
  for (double m : {2.0, 3.0, 4.0}) {
    ProblemSpec spec;
    spec.grid = Grid::interval(1.0, 16);
    spec.m = m;
    spec.kappa = 0.0;
    const auto step = implicit_step(Field(spec.grid), spec, tight(0.05));
    for (double v : step.state.values) CHECK(v == 0.0);
  }
}

TEST_CASE("m = 2 without source equals a dense linear solve") {
  std::mt19937_64 rng(41);
  ProblemSpec spec;
  spec.grid = Grid::interval(1.0, 12);
  spec.kappa = 0.0;
  Field v0(spec.grid);
  for (auto& x : v0.values) x = uniform(rng, -1.0, 1.0);
  const double dt = 0.01, h = spec.grid.spacing(0);
  const int n = static_cast<int>(v0.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) += 2 * dt / (h * h);
    if (i > 0) a(i, i - 1) = -dt / (h * h);
    if (i + 1 < n) a(i, i + 1) = -dt / (h * h);
  }
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(v0.values.data(), n);
  const Eigen::VectorXd x = a.partialPivLu().solve(b);
  const auto step = implicit_step(v0, spec, tight(dt));
  for (int i = 0; i < n; ++i) CHECK(step.state[i] == doctest::Approx(x(i)).epsilon(1e-11));
}

TEST_CASE("three nodes, m = 4, cubic material against the oracle") {
  ProblemSpec spec;
  spec.grid = Grid::interval(1.0, 4);
  spec.m = 4.0;
  spec.material = MaterialLaw::cubic_affine(1.0, 1.0, 3.0);
  spec.source = SourceLaw::gaussian_bump(1.0, 1.0, 0.3, 0.5);
  const Field v0(spec.grid, {0.3, 0.8, -0.2});
  const Field fast = implicit_step(v0, spec, tight(0.05)).state;
  const Field slow = brute_force_step(v0, spec, 0.05);
  CHECK(max_diff(fast, slow) <= 1e-10);
}

TEST_CASE("property: implicit step agrees with the oracle on tiny grids") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    ProblemSpec spec;
    spec.grid = Grid::interval(1.0, 2 + trial % 5);
    spec.m = 2.0 + trial % 3;
    spec.material = trial % 2 ? MaterialLaw::cubic_affine(1.0, 0.5, 2.0)
                              : MaterialLaw::smoothed_piecewise(1.0, 3.0, 0.2, 0.5);
    const double amp = uniform(rng, 0.0, 2.0), center = uniform(rng, -0.5, 0.5);
    spec.source = SourceLaw::gaussian_bump(1.0, amp, center, 0.6);
    spec.kappa = uniform(rng, 0.5, 2.0);
    Field v0(spec.grid);
    for (auto& x : v0.values) x = uniform(rng, -1.0, 1.0);
    const double dt = uniform(rng, 0.01, 0.1);
    CHECK(max_diff(implicit_step(v0, spec, tight(dt)).state, brute_force_step(v0, spec, dt)) <=
          1e-9);
  }
}

TEST_CASE("lagged nonlocal coefficient is a first-order perturbation") {
  ProblemSpec spec;
  spec.grid = Grid::interval(1.0, 4);
  spec.m = 3.0;
  spec.source = SourceLaw::gaussian_bump(1.0, 2.0, 0.5, 0.6);
  spec.kappa = 2.0;
  const Field v0(spec.grid, {0.4, 0.9, 0.5});
  const double horizon = 0.2;

  auto run = [&](double dt, bool lagged) {
    StepperConfig cfg = tight(dt);
    if (lagged) {
      cfg.picard_max_iters = 1;
      cfg.picard_tol = 0.99;
    }
    Field v = v0;
    const int steps = static_cast<int>(std::lround(horizon / dt));
    for (int k = 0; k < steps; ++k) v = lagged ? implicit_step(v, spec, cfg).state
                                               : brute_force_step(v, spec, dt);
    return v;
  };
  std::vector<double> gaps;
  for (double dt : {0.02, 0.01, 0.005, 0.0025}) gaps.push_back(max_diff(run(dt, true), run(dt, false)));
  for (std::size_t k = 1; k < gaps.size(); ++k) {
    const double ratio = gaps[k - 1] / gaps[k];
    CHECK(ratio > 1.7);
    CHECK(ratio < 2.3);
  }
}

TEST_CASE("energy balance residual is first order in dt") {
  ProblemSpec spec;
  spec.grid = Grid::interval(1.0, 32);
  spec.m = 3.0;
  spec.reg_r = 1e-3;
  spec.material = MaterialLaw::smoothed_piecewise(1.0, 2.0, 0.3, 0.4);
  spec.source = SourceLaw::gaussian_bump(1.0, 1.0, 0.5, 0.5);
  const Field v0 = sample(spec.grid, [](double x, double) { return std::sin(3.14159 * x); });
  std::vector<double> res;
  for (double dt : {0.004, 0.002, 0.001}) {
    const Field v1 = implicit_step(v0, spec, tight(dt)).state;
    res.push_back(std::abs(energy_balance_residual(spec, v0, v1, dt)));
  }
  CHECK(res[0] / res[1] > 1.6);
  CHECK(res[1] / res[2] > 1.6);
}

TEST_CASE("trajectories") {
  ProblemSpec spec;
  spec.grid = Grid::interval(1.0, 16);
  spec.m = 3.0;
  StepperConfig cfg;
  cfg.dt = 0.01;

  const auto none = integrate_trajectory(spec, cfg, uniform_record_times(0.0, 10));
  CHECK(none.rows.size() == 1);
  CHECK(none.rows[0].time == 0.0);
  CHECK(none.rows[0].linf == doctest::Approx(1.0));

  const auto times = uniform_record_times(0.25, 5);
  REQUIRE(times.size() == 5);
  CHECK(times.back() == 0.25);
  const auto a = integrate_trajectory(spec, cfg, times);
  const auto b = integrate_trajectory(spec, cfg, times);
  REQUIRE(a.rows.size() == 6);
  REQUIRE(a.states.size() == 6);
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(a.rows[k].time == b.rows[k].time);
    CHECK(a.states[k].values == b.states[k].values);
    CHECK(a.rows[k].linf == b.rows[k].linf);
  }
  CHECK(a.rows.back().time == doctest::Approx(0.25));
  CHECK(a.rows.back().step == 25);
  CHECK(a.w1m_time_integral > 0.0);
}

TEST_CASE("solver configuration errors") {
  StepperConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.dt = 0.1;
  cfg.newton_tol = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("oracle refuses large grids") {
  ProblemSpec spec;
  spec.grid = Grid::interval(1.0, 16);
  CHECK_THROWS_AS(brute_force_step(Field(spec.grid), spec, 0.1), Error);
}
