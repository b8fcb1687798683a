#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "thermistor/analysis.hpp"
#include "thermistor/error.hpp"
#include "thermistor/random.hpp"
#include "thermistor/suites.hpp"

using namespace thermistor;

namespace {

long double brute_semidistance(const std::vector<std::vector<double>>& a,
                               const std::vector<std::vector<double>>& b) {
  long double sup = 0.0L;
  for (const auto& x : a) {
    long double inf = INFINITY;
    for (const auto& y : b) {
      long double d = 0.0L;
      for (std::size_t k = 0; k < x.size(); ++k)
        d = std::max(d, std::abs(static_cast<long double>(x[k]) - y[k]));
      inf = std::min(inf, d);
    }
    sup = std::max(sup, inf);
  }
  return sup;
}

SnapshotSet to_set(const Grid& g, const std::vector<std::vector<double>>& rows) {
  SnapshotSet s;
  for (std::size_t k = 0; k < rows.size(); ++k) s.add(Field(g, rows[k]), static_cast<int>(k), 0.0);
  return s;
}

}  // namespace

TEST_CASE("tartar examples") {
  const std::vector<double> a{1.0, 0.0}, b{0.0, 1.0};
  const auto same = tartar_check(a, a, 4.0);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == 0.0);
  CHECK(same.holds);

  const auto r4 = tartar_check(a, b, 4.0);
  CHECK(r4.lhs == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r4.rhs == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r4.holds);

  std::mt19937_64 rng(51);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> x(3), y(3);
    for (auto& v : x) v = uniform(rng, -3.0, 3.0);
    for (auto& v : y) v = uniform(rng, -3.0, 3.0);
    const auto r2 = tartar_check(x, y, 2.0);
    CHECK(r2.lhs == doctest::Approx(r2.rhs).epsilon(1e-12));
  }
  CHECK(tartar_constant(2.0) == 1.0);
  CHECK(tartar_constant(4.0) == 0.25);
  CHECK(tartar_constant(1.5) == 0.5);
}

TEST_CASE("gronwall examples") {
  std::vector<double> t(201), z(201), one(201, 1.0), zero(201, 0.0), c(201, 3.0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = 0.01 * static_cast<double>(k);
    z[k] = std::exp(t[k]);
  }
  const auto exp_case = gronwall_check(t, z, one, zero);
  CHECK(exp_case.holds);
  CHECK(std::abs(exp_case.max_violation) <= 1e-10 * std::exp(2.0));

  const auto flat = gronwall_check(t, c, zero, zero);
  CHECK(flat.holds);
  CHECK(flat.max_violation == 0.0);

  // z' = 2z violates z' <= z
  std::vector<double> fast(201);
  for (std::size_t k = 0; k < t.size(); ++k) fast[k] = std::exp(2 * t[k]);
  CHECK_THROWS_AS(gronwall_check(t, fast, one, zero), Error);
}

TEST_CASE("ghidaglia envelope") {
  CHECK(ghidaglia_envelope({1.0, 1.0, 2.0}, 1e12) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(ghidaglia_envelope({2.0, 0.0, 3.0}, 0.7) == doctest::Approx(std::pow(2.0 * 2.0 * 0.7, -0.5)));
  CHECK(ghidaglia_envelope({1.0, 2.0, 3.0}, 1.0) ==
        doctest::Approx(1.96702783108142069).epsilon(1e-15));
}

TEST_CASE("absorbing radius") {
  TheoryConstants tc;
  tc.C14 = 1.0;
  tc.C15 = 1.0;
  CHECK(absorbing_radius_rho_s(tc, 3.0, 1e14) == doctest::Approx(1.0).epsilon(1e-12));
  tc.C14 = 2.0;
  CHECK(absorbing_radius_rho_s(tc, 4.0, 1.0) == doctest::Approx(1.96702783108142069).epsilon(1e-15));
  CHECK_THROWS_AS(absorbing_radius_rho_s(tc, 2.0, 1.0), Error);

  CHECK(absorbing_radius(MaterialLaw::identity(), 2.5) == 2.5);
  const auto cubic = MaterialLaw::cubic_affine(1.0, 1.0, 3.0);
  CHECK(absorbing_radius(cubic, 10.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("theory constants") {
  ProblemSpec spec;
  spec.grid = Grid::interval(1.0, 256);
  spec.m = 2.0;
  spec.kappa = 1.0;
  spec.source = SourceLaw::constant_floor(1.0);
  const auto tc = compute_theory_constants(spec, spec.grid);
  CHECK(tc.lambda == 1.0);
  CHECK(tc.L1 == 1.0);
  CHECK(tc.C13 == doctest::Approx(9.86948053964673232).epsilon(1e-8));
  CHECK(tc.C15 == std::min(tc.C13, 1.0));
  CHECK(tc.C14 == doctest::Approx(1.0));
  CHECK(tc.entries().size() == 7);

  spec.material = MaterialLaw::smoothed_piecewise(2.0, 4.0, 0.0, 1.0);
  spec.source = SourceLaw::constant_floor(2.0);
  spec.kappa = 4.0;
  const auto tc2 = compute_theory_constants(spec, spec.grid);
  CHECK(tc2.C15 == doctest::Approx(std::min(2.0 * tc2.C13 / 4.0, 2.0)));
  CHECK(tc2.C14 == doctest::Approx(4.0 * 2.0 / 4.0));
  CHECK(std::isfinite(tc2.C14));
  CHECK(tc2.C14 > 0.0);
}

TEST_CASE("hausdorff semidistance") {
  const Grid g = Grid::interval(1.0, 5);
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> a(5, std::vector<double>(4)), b(7, std::vector<double>(4));
    for (auto& row : a)
      for (auto& v : row) v = uniform(rng, -1.0, 1.0);
    for (auto& row : b)
      for (auto& v : row) v = uniform(rng, -1.0, 1.0);
    const auto sa = to_set(g, a), sb = to_set(g, b);
    CHECK(std::abs(hausdorff_semidistance(sa, sb) - brute_semidistance(a, b)) <= 1e-15L);
    CHECK(std::abs(hausdorff_semidistance(sb, sa) - brute_semidistance(b, a)) <= 1e-15L);
    CHECK(hausdorff_semidistance(sa, sa) == 0.0);
    // a subset sits at distance zero from its superset
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    CHECK(hausdorff_semidistance(sa, to_set(g, ab)) == 0.0);
    // sup-inf triangle inequality
    std::vector<std::vector<double>> c(3, std::vector<double>(4));
    for (auto& row : c)
      for (auto& v : row) v = uniform(rng, -1.0, 1.0);
    const auto sc = to_set(g, c);
    CHECK(hausdorff_semidistance(sa, sc) <=
          hausdorff_semidistance(sa, sb) + hausdorff_semidistance(sb, sc) + 1e-15);
  }
  const auto single_a = to_set(g, {{1, 2, 3, 4}}), single_b = to_set(g, {{1, 2, 3.5, 4}});
  CHECK(hausdorff_semidistance(single_a, single_b) == 0.5);
  CHECK_THROWS_AS(hausdorff_semidistance(SnapshotSet{}, single_a), Error);
}

TEST_CASE("omega-limit estimate") {
  const Grid g = Grid::interval(1.0, 4);
  TrajectoryRecord constant;
  for (int k = 0; k < 5; ++k) {
    RecordRow row;
    row.time = 0.1 * k;
    constant.rows.push_back(row);
    constant.states.emplace_back(g, std::vector<double>{1.0, 2.0, 3.0});
  }
  const std::vector<TrajectoryRecord> one{constant};
  CHECK(omega_limit_estimate(one, 0.0, 1e-6).size() == 1);
  CHECK_THROWS_AS(omega_limit_estimate(one, 5.0, 1e-6), Error);

  ProblemSpec spec;
  spec.grid = Grid::interval(1.0, 16);
  spec.m = 3.0;
  spec.reg_r = 1e-3;
  spec.horizon_M = 6.0;
  StepperConfig cfg;
  cfg.dt = 0.01;
  const std::vector<TrajectoryRecord> run{
      integrate_trajectory(spec, cfg, uniform_record_times(6.0, 30))};
  CHECK(omega_limit_estimate(run, 5.0, 1e-6).size() == 1);
}

TEST_CASE("contraction estimate") {
  ProblemSpec spec;
  spec.grid = Grid::interval(1.0, 16);
  spec.m = 3.0;
  spec.reg_r = 1e-3;
  StepperConfig cfg;
  cfg.dt = 0.01;
  const auto times = uniform_record_times(0.5, 10);
  const auto v = integrate_trajectory(spec, cfg, times);
  const auto same = contraction_estimate(v, v, spec.material, 1e-9);
  CHECK(same.degenerate);
  CHECK(same.holds);

  Field u0 = initial_field(spec.initial, spec.grid);
  for (auto& x : u0.values) x += 0.1;
  const auto u = integrate_trajectory(spec, cfg, u0, times);
  const auto pair = contraction_estimate(v, u, spec.material, 1e-9);
  CHECK_FALSE(pair.degenerate);
  CHECK(std::isfinite(pair.fitted_K));
  CHECK(pair.holds);
  // alpha = id: the distance is the plain L1 distance of the states
  std::vector<double> diff(u0.size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = std::abs(v.states[3][k] - u.states[3][k]);
  CHECK(pair.distance[3] == doctest::Approx(integrate(spec.grid, diff)).epsilon(1e-14));
}

TEST_CASE("upper envelope fit") {
  std::vector<double> t, y;
  for (int k = 1; k <= 50; ++k) {
    t.push_back(0.1 * k);
    y.push_back(2.0 + 3.0 / std::sqrt(0.1 * k) - 0.01 * std::sin(static_cast<double>(k)));
  }
  const auto fit = fit_upper_envelope(t, y, 0.5);
  CHECK(fit.min_margin >= -1e-12);
  CHECK(fit.A >= 0.0);
  CHECK(fit.B >= 0.0);
  CHECK(fit.A == doctest::Approx(2.0).epsilon(0.02));
  CHECK(fit.B == doctest::Approx(3.0).epsilon(0.02));
  for (std::size_t k = 0; k < t.size(); ++k)
    CHECK(fit.A + fit.B * std::pow(t[k], -0.5) >= y[k] - 1e-12);
}

TEST_CASE("property suites at reduced size") {
  for (const auto& v : tartar_suite(5, 5000)) CHECK_MESSAGE(v.pass(), v.check << " " << v.parameters);
  for (const auto& v : legendre_suite(5, 1000)) CHECK_MESSAGE(v.pass(), v.check << " " << v.parameters);
  for (const auto& v : ghidaglia_suite(5, 50)) CHECK_MESSAGE(v.pass(), v.check << " " << v.parameters);
  for (const auto& v : gronwall_suite(5, 10)) CHECK_MESSAGE(v.pass(), v.check << " " << v.parameters);
  for (const auto& v : oracle_suite(5, 12)) CHECK_MESSAGE(v.pass(), v.check << " " << v.parameters);
  for (const auto& v : tartar_suite(5, 500)) CHECK(v.parameters.find(',') == std::string::npos);
}
