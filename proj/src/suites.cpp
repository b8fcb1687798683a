#include "thermistor/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include <boost/numeric/odeint.hpp>

#include "thermistor/analysis.hpp"
#include "thermistor/error.hpp"
#include "thermistor/model.hpp"
#include "thermistor/random.hpp"
#include "thermistor/solver.hpp"

namespace thermistor {

namespace {

namespace odeint = boost::numeric::odeint;
using Scalar1 = std::array<double, 1>;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Signed power so that a trial step overshooting below zero stays finite.
double spow(double z, double q) { return z >= 0.0 ? std::pow(z, q) : -std::pow(-z, q); }

}  // namespace

std::vector<Verdict> tartar_suite(std::uint64_t seed, std::size_t samples) {
  const std::array<double, 5> exponents{2.0, 2.5, 3.0, 4.0, 6.0};
  const std::array<double, 2> sub_quadratic{1.3, 1.7};
  std::vector<Verdict> out;
  std::mt19937_64 rng(seed);

  auto run = [&](double m, std::size_t count, const std::string& tag) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < count; ++k) {
      const int dim = 1 + static_cast<int>(k % 3);
      const double scale = std::pow(10.0, uniform(rng, -2.0, 2.0));
      std::array<double, 3> a{}, b{};
      for (int d = 0; d < dim; ++d) {
        a[d] = scale * uniform(rng, -1.0, 1.0);
        b[d] = scale * uniform(rng, -1.0, 1.0);
      }
      // a sprinkling of coincident and near-coincident pairs
      if (k % 97 == 0) b = a;
      if (k % 89 == 0)
        for (int d = 0; d < dim; ++d) b[d] = a[d] * (1.0 + 1e-6 * uniform(rng, -1.0, 1.0));
      const auto r = tartar_check(std::span<const double>(a.data(), dim),
                                  std::span<const double>(b.data(), dim), m);
      worst = std::max(worst, (r.rhs - r.lhs) / (1.0 + r.rhs));
    }
    out.push_back({tag, "m=" + fmt(m) + ";dims=1-3;samples=" + std::to_string(count), worst,
                   1e-12});
  };

  const std::size_t per_m = std::max<std::size_t>(1, samples / exponents.size());
  for (double m : exponents) run(m, per_m, "tartar");
  const std::size_t per_sub = std::max<std::size_t>(1, per_m / 10);
  for (double m : sub_quadratic) run(m, per_sub, "tartar-subquadratic");
  return out;
}

std::vector<Verdict> legendre_suite(std::uint64_t seed, std::size_t samples_per_family) {
  const std::array<MaterialLaw, 3> laws{
      MaterialLaw::identity(),
      MaterialLaw::smoothed_piecewise(1.0, 3.0, 0.5, 2.0),
      MaterialLaw::cubic_affine(1.0, 1.0, 3.0),
  };
  std::vector<Verdict> out;
  std::mt19937_64 rng(seed);
  for (const auto& law : laws) {
    double worst = 0.0;
    for (std::size_t k = 0; k < samples_per_family; ++k) {
      const double t = k == 0 ? 0.0 : uniform(rng, -10.0, 10.0);
      const double legendre = law.psi_star(law.alpha(t));
      const double closed = t * law.alpha(t) - law.psi(t);
      const double t4 = t * t * t * t;
      worst = std::max(worst, std::abs(legendre - closed) / (1e-10 * (1.0 + t4)));
    }
    out.push_back({"legendre",
                   std::string("family=") + to_string(law.family()) +
                       ";samples=" + std::to_string(samples_per_family),
                   worst, 1.0});
  }
  return out;
}

std::vector<Verdict> ghidaglia_suite(std::uint64_t seed, std::size_t draws) {
  std::mt19937_64 rng(seed);
  constexpr int kSamples = 60;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < draws; ++k) {
    GhidagliaParams p;
    p.delta = std::pow(10.0, uniform(rng, -1.0, 0.7));
    p.eta = uniform(rng, 0.0, 5.0);
    p.q = uniform(rng, 1.5, 5.0);
    const double z0 = k % 10 == 0 ? 0.0 : uniform(rng, 0.0, 50.0);
    const double horizon = uniform(rng, 1.0, 20.0);

    std::vector<double> times(kSamples + 1);
    for (int i = 0; i <= kSamples; ++i) times[i] = horizon * i / kSamples;
    Scalar1 z{z0};
    std::vector<double> values;
    auto rhs = [&p](const Scalar1& x, Scalar1& dxdt, double) {
      dxdt[0] = p.eta - p.delta * spow(x[0], p.q);
    };
    auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<Scalar1>());
    odeint::integrate_times(stepper, rhs, z, times.begin(), times.end(), 1e-6,
                            [&values](const Scalar1& x, double) { values.push_back(x[0]); });
    for (int i = 1; i <= kSamples; ++i)
      worst = std::max(worst, values[i] - ghidaglia_envelope(p, times[i]));
  }
  return {{"ghidaglia", "draws=" + std::to_string(draws) + ";samples_per_draw=" +
                            std::to_string(kSamples),
           worst, 1e-8}};
}

std::vector<Verdict> gronwall_suite(std::uint64_t seed, std::size_t draws) {
  std::mt19937_64 rng(seed);
  constexpr int kSamples = 2000;
  constexpr double kHorizon = 2.0;
  std::size_t failures = 0;
  for (std::size_t k = 0; k < draws; ++k) {
    // the first draw is z' = z/2 + sin^2(s)
    const double h = k == 0 ? 0.5 : uniform(rng, 0.0, 1.0);
    const double a = k == 0 ? 1.0 : uniform(rng, 0.0, 2.0);
    const double b = k == 0 ? 0.0 : uniform(rng, 0.0, 1.0);
    const double theta = k == 0 ? 1.0 : uniform(rng, 0.0, 1.0);
    const double z0 = k == 0 ? 1.0 : uniform(rng, 0.0, 2.0);
    auto g = [a, b](double s) { return a * std::sin(s) * std::sin(s) + b; };

    std::vector<double> times(kSamples + 1), zs, hs(kSamples + 1, h), gs(kSamples + 1);
    for (int i = 0; i <= kSamples; ++i) {
      times[i] = kHorizon * i / kSamples;
      gs[i] = g(times[i]);
    }
    Scalar1 z{z0};
    auto rhs = [&](const Scalar1& x, Scalar1& dxdt, double s) {
      dxdt[0] = h * x[0] + theta * g(s);
    };
    auto stepper = odeint::make_controlled(1e-12, 1e-12, odeint::runge_kutta_dopri5<Scalar1>());
    odeint::integrate_times(stepper, rhs, z, times.begin(), times.end(), 1e-4,
                            [&zs](const Scalar1& x, double) { zs.push_back(x[0]); });
    try {
      if (!gronwall_check(times, zs, hs, gs).holds) ++failures;
    } catch (const Error&) {
      ++failures;
    }
  }
  return {{"gronwall", "draws=" + std::to_string(draws) + ";samples_per_draw=" +
                           std::to_string(kSamples + 1),
           static_cast<double>(failures), 0.0}};
}

std::vector<Verdict> oracle_suite(std::uint64_t seed, std::size_t configs) {
  const std::array<double, 3> exponents{2.0, 3.0, 4.0};
  std::array<double, 3> worst{};
  std::array<std::size_t, 3> counts{};
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < configs; ++k) {
    const std::size_t mi = k % exponents.size();
    ProblemSpec spec;
    spec.m = exponents[mi];
    const double length = uniform(rng, 0.5, 2.0);
    spec.grid = Grid::interval(length, 2 + static_cast<int>(rng() % 5));
    spec.kappa = uniform(rng, 0.5, 2.0);
    spec.reg_r = std::pow(10.0, uniform(rng, -3.0, -1.0));
    // draws bound to names: argument evaluation order is unspecified
    const double p0 = uniform(rng, 0.5, 1.5);
    const double p1 = uniform(rng, 1.0, 3.0);
    const double p2 = uniform(rng, -0.5, 0.5);
    const double p3 = uniform(rng, 0.2, 1.0);
    if ((k / exponents.size()) % 2 == 0) {
      spec.material = MaterialLaw::smoothed_piecewise(p0, p1, p2, p3);
    } else {
      spec.material = MaterialLaw::cubic_affine(p0, p1 - 0.9, p1);
    }
    const double sigma = uniform(rng, 0.5, 1.5);
    const double amplitude = uniform(rng, 0.0, 1.0);
    const double center = uniform(rng, -0.5, 0.5);
    const double width = uniform(rng, 0.5, 2.0);
    spec.source = SourceLaw::gaussian_bump(sigma, amplitude, center, width);
    Field state(spec.grid);
    for (auto& v : state.values) v = uniform(rng, -1.0, 1.0);

    StepperConfig cfg;
    cfg.dt = uniform(rng, 0.01, 0.1);
    cfg.newton_tol = 1e-12;
    cfg.picard_tol = 1e-12;
    cfg.picard_max_iters = 100;
    const Field ours = implicit_step(state, spec, cfg).state;
    const Field oracle = brute_force_step(state, spec, cfg.dt);
    double diff = 0.0;
    for (std::size_t i = 0; i < ours.size(); ++i) diff = std::max(diff, std::abs(ours[i] - oracle[i]));
    worst[mi] = std::max(worst[mi], diff);
    ++counts[mi];
  }
  std::vector<Verdict> out;
  for (std::size_t mi = 0; mi < exponents.size(); ++mi)
    out.push_back({"oracle-equivalence",
                   "m=" + fmt(exponents[mi]) + ";configs=" + std::to_string(counts[mi]) +
                       ";max_interior=5",
                   worst[mi], 1e-9});
  return out;
}

}  // namespace thermistor
