#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "thermistor/error.hpp"
#include "thermistor/experiments.hpp"
#include "thermistor/random.hpp"

namespace thermistor {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Runs fn(0..count-1) on up to `jobs` threads. Every index runs to
// completion or failure; the failure with the lowest index is rethrown, so
// the outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

ProblemSpec with_initial(const ProblemSpec& base, const InitialData& init) {
  ProblemSpec out = base;
  const double radius = base.initial.mollify_r;
  out.initial = init;
  out.initial.mollify_r = radius;
  return out;
}

std::vector<double> record_times(const ExperimentConfig& config, double horizon) {
  return uniform_record_times(horizon, config.record_count);
}

void append(ScenarioResult& result, int run_id, const TrajectoryRecord& rec) {
  for (const auto& row : rec.rows) result.trajectory.push_back({run_id, row, rec.r, rec.m});
}

void add_constant(ScenarioResult& result, std::string name, double value, std::string formula) {
  result.constants.push_back({std::move(name), value, std::move(formula)});
}

void add_theory_constants(ScenarioResult& result, const ProblemSpec& spec) {
  add_constant(result, "kappa", spec.kappa,
               spec.current_I ? "current_I^2 / area_B^2" : "configured");
  add_constant(result, "sigma", spec.source.sigma(), "source floor");
  add_constant(result, "f_max", spec.source.f_max(), "source ceiling");
  add_constant(result, "L2", spec.source.lip_L2(spec.material), "sup|f'| / lambda");
  const TheoryConstants c = compute_theory_constants(spec, spec.grid);
  for (const auto& e : c.entries()) {
    if (e.name == "eta" || e.name == "fitted_K") continue;
    add_constant(result, e.name, e.value, e.formula);
  }
}

std::vector<TrajectoryRecord> run_all(const std::vector<ProblemSpec>& specs,
                                      const StepperConfig& cfg,
                                      const std::vector<std::vector<double>>& times,
                                      bool keep_states, int jobs) {
  std::vector<TrajectoryRecord> out(specs.size());
  parallel_for(specs.size(), jobs, [&](std::size_t i) {
    out[i] = integrate_trajectory(specs[i], cfg, times[i], TrajectoryOptions{keep_states});
  });
  return out;
}

double l2_error(const Field& field, const ProblemSpec& spec, double s) {
  const Grid& g = field.grid;
  std::vector<double> sq(field.size());
  if (g.dim() == 1) {
    for (int i = 1; i < g.cells(0); ++i) {
      const double e = field[g.index(i)] - spec.mms.value(g.coord(0, i), 0.0, g, s);
      sq[g.index(i)] = e * e;
    }
  } else {
    for (int j = 1; j < g.cells(1); ++j)
      for (int i = 1; i < g.cells(0); ++i) {
        const double e =
            field[g.index(i, j)] - spec.mms.value(g.coord(0, i), g.coord(1, j), g, s);
        sq[g.index(i, j)] = e * e;
      }
  }
  return std::sqrt(integrate(g, sq));
}

// ---------------------------------------------------------------------------

ScenarioResult simulate(const ExperimentConfig& config, std::uint64_t seed, int jobs) {
  ScenarioResult result;
  const ProblemSpec base = effective_problem(config, seed);
  std::vector<ProblemSpec> specs;
  if (config.ensemble.count > 0) {
    for (int k = 0; k < config.ensemble.count; ++k)
      specs.push_back(with_initial(base, ensemble_member(config.ensemble, base.grid.dim(), seed, k)));
  } else {
    specs.push_back(base);
  }
  const auto times = record_times(config, base.horizon_M);
  const auto runs = run_all(specs, config.stepper,
                            std::vector<std::vector<double>>(specs.size(), times), false, jobs);

  double residual = 0.0, nonfinite = 0.0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    append(result, static_cast<int>(k), runs[k]);
    for (const auto& row : runs[k].rows) {
      residual = std::max(residual, row.residual);
      for (double v : {row.linf, row.l1, row.l2, row.lp_max, row.w1m_seminorm,
                       row.energy_psi_star, row.dalpha_dt_l2, row.nonlocal_coeff})
        if (!std::isfinite(v)) nonfinite += 1.0;
    }
  }
  const std::string params = "runs=" + std::to_string(runs.size()) + ";m=" + fmt(base.m);
  result.verdicts.push_back({"step-residual", params, residual, config.stepper.newton_tol});
  result.verdicts.push_back({"finite-records", params, nonfinite, 0.0});
  add_theory_constants(result, base);
  return result;
}

ScenarioResult mms(const ExperimentConfig& config, std::uint64_t seed, int jobs) {
  ScenarioResult result;
  ExperimentConfig cfg = config;
  cfg.problem.mms = true;
  cfg.initial.family = InitialFamily::sine;
  cfg.initial.amplitude = config.problem.mms_amplitude;
  cfg.initial.mollify = false;
  const int levels = config.mms.levels;

  std::vector<ProblemSpec> specs;
  std::vector<StepperConfig> steppers;
  std::vector<double> horizons;
  for (int k = 0; k < levels; ++k) {
    ExperimentConfig c = cfg;
    c.domain.cells_x = c.domain.cells_y = config.mms.temporal_cells;
    specs.push_back(effective_problem(c, seed));
    StepperConfig sc = config.stepper;
    sc.dt = config.mms.dt_coarse / std::pow(2.0, k);
    steppers.push_back(sc);
    horizons.push_back(config.problem.horizon);
  }
  for (int k = 0; k < levels; ++k) {
    ExperimentConfig c = cfg;
    c.domain.cells_x = c.domain.cells_y = config.mms.cells_coarse << k;
    c.problem.horizon = config.mms.spatial_horizon;
    specs.push_back(effective_problem(c, seed));
    const double h = specs.back().grid.spacing(0);
    StepperConfig sc = config.stepper;
    sc.dt = config.mms.dt_h2_factor * h * h;
    steppers.push_back(sc);
    horizons.push_back(config.mms.spatial_horizon);
  }

  std::vector<TrajectoryRecord> runs(specs.size());
  // Temporal levels record on the coarse step so records never shorten a step.
  const int coarse_records =
      std::max(1, static_cast<int>(std::lround(config.problem.horizon / config.mms.dt_coarse)));
  parallel_for(specs.size(), jobs, [&](std::size_t i) {
    auto times = i < static_cast<std::size_t>(levels)
                     ? uniform_record_times(horizons[i], coarse_records)
                     : record_times(config, horizons[i]);
    runs[i] = integrate_trajectory(specs[i], steppers[i], times, TrajectoryOptions{true});
  });

  std::vector<double> errors(specs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    append(result, static_cast<int>(i), runs[i]);
    errors[i] = l2_error(runs[i].states.back(), specs[i], runs[i].rows.back().time);
  }

  auto study = [&](const char* name, std::size_t first, double required, const char* knob) {
    double worst = kInf;
    for (int k = 0; k < levels; ++k) {
      const std::size_t i = first + static_cast<std::size_t>(k);
      add_constant(result, std::string(name) + "_error_" + std::to_string(k), errors[i],
                   std::string("L2 error at the final time; ") + knob);
      if (k == 0) continue;
      const double order = std::log2(errors[i - 1] / errors[i]);
      add_constant(result, std::string(name) + "_order_" + std::to_string(k), order,
                   "log2(error_{k-1} / error_k)");
      worst = std::min(worst, std::isfinite(order) ? order : -kInf);
    }
    result.verdicts.push_back({std::string("mms-") + name + "-order",
                               "levels=" + std::to_string(levels) + ";m=" + fmt(cfg.problem.m) +
                                   ";lhs=required;rhs=observed_min",
                               required, worst});
  };
  study("temporal", 0, config.mms.min_temporal_order, "dt halved per level");
  study("spatial", static_cast<std::size_t>(levels), config.mms.min_spatial_order,
        "h halved per level with dt proportional to h^2");
  return result;
}

ScenarioResult reg_sweep(const ExperimentConfig& config, std::uint64_t seed, int jobs) {
  ScenarioResult result;
  const auto& rs = config.reg_sweep.r_values;
  std::vector<ProblemSpec> specs;
  for (double r : rs) {
    ExperimentConfig c = config;
    c.problem.reg_r = r;
    specs.push_back(effective_problem(c, seed));
  }
  const auto times = record_times(config, specs.front().horizon_M);
  const auto runs = run_all(specs, config.stepper,
                            std::vector<std::vector<double>>(specs.size(), times), true, jobs);

  std::vector<double> sups, energies;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    append(result, static_cast<int>(k), runs[k]);
    double sup = 0.0;
    for (const auto& row : runs[k].rows) sup = std::max(sup, row.linf);
    sups.push_back(sup);
    energies.push_back(runs[k].w1m_time_integral);
    add_constant(result, "sup_linf_r=" + fmt(rs[k]), sup, "max over records of ||v_r||_inf");
    add_constant(result, "w1m_energy_r=" + fmt(rs[k]), energies.back(),
                 "sum over steps of dt * int |grad v_r|^m");
  }
  const double lo = *std::min_element(sups.begin(), sups.end());
  const double hi = *std::max_element(sups.begin(), sups.end());
  const std::string params = "runs=" + std::to_string(rs.size()) + ";m=" + fmt(specs[0].m);
  result.verdicts.push_back({"reg-sweep-sup-spread", params, (hi - lo) / lo,
                             config.reg_sweep.sup_tolerance});
  result.verdicts.push_back({"reg-sweep-sup-bound", params, hi,
                             (1.0 + config.reg_sweep.bound_slack) * sups.front()});
  result.verdicts.push_back({"reg-sweep-energy-bound", params,
                             *std::max_element(energies.begin(), energies.end()),
                             config.reg_sweep.energy_factor * energies.front()});

  // discrete L^m(0, M; W^{1,m}) distance of consecutive runs on the record grid
  const double m = specs[0].m;
  std::vector<double> dist;
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 1; i < runs[k].rows.size(); ++i) {
      const double span = runs[k].rows[i].time - runs[k].rows[i - 1].time;
      Field d(runs[k].states[i].grid);
      for (std::size_t j = 0; j < d.size(); ++j)
        d[j] = runs[k].states[i][j] - runs[k + 1].states[i][j];
      acc += span * w1m_seminorm(d, m);
    }
    dist.push_back(std::pow(acc, 1.0 / m));
    add_constant(result, "cauchy_distance_r=" + fmt(rs[k]) + "->" + fmt(rs[k + 1]), dist.back(),
                 "(sum over records of ds * int |grad(v_a - v_b)|^m)^(1/m)");
  }
  for (std::size_t k = 1; k < dist.size(); ++k)
    result.verdicts.push_back({"reg-sweep-cauchy",
                               "pair=" + fmt(rs[k]) + "->" + fmt(rs[k + 1]) +
                                   ";previous=" + fmt(rs[k - 1]) + "->" + fmt(rs[k]),
                               dist[k], dist[k - 1]});
  return result;
}

ScenarioResult uniqueness(const ExperimentConfig& config, std::uint64_t seed, int jobs) {
  ScenarioResult result;
  const ProblemSpec spec = effective_problem(config, seed);
  const Field v0 = initial_field(spec.initial, spec.grid);
  Field u0 = v0;
  for (auto& x : u0.values) x += config.uniqueness.offset;
  const std::vector<Field> initials{v0, u0, v0};
  const auto times = record_times(config, spec.horizon_M);

  std::vector<TrajectoryRecord> runs(initials.size());
  parallel_for(initials.size(), jobs, [&](std::size_t i) {
    runs[i] = integrate_trajectory(spec, config.stepper, initials[i], times, TrajectoryOptions{true});
  });
  for (std::size_t i = 0; i < runs.size(); ++i) append(result, static_cast<int>(i), runs[i]);

  const double tol = config.uniqueness.tolerance_factor * config.stepper.newton_tol;
  const std::string params = "offset=" + fmt(config.uniqueness.offset) + ";m=" + fmt(spec.m) +
                             ";records=" + std::to_string(runs[0].rows.size());

  // v0 <= u0 must persist
  double order_gap = -kInf;
  for (std::size_t k = 0; k < runs[0].states.size(); ++k)
    for (std::size_t j = 0; j < runs[0].states[k].size(); ++j)
      order_gap = std::max(order_gap, runs[0].states[k][j] - runs[1].states[k][j]);
  result.verdicts.push_back({"comparison", params, order_gap, tol});

  const auto perturbed = contraction_estimate(runs[0], runs[1], spec.material, tol);
  double worst = -kInf;
  for (std::size_t k = 0; k < perturbed.times.size(); ++k) {
    const double bound = std::exp(perturbed.fitted_K * (perturbed.times[k] - perturbed.times[0])) *
                         perturbed.distance.front();
    worst = std::max(worst, perturbed.distance[k] / bound - 1.0);
  }
  if (perturbed.degenerate) worst = kInf;
  result.verdicts.push_back({"contraction", params + ";K=" + fmt(perturbed.fitted_K), worst, 1e-12});

  const auto same = contraction_estimate(runs[0], runs[2], spec.material, tol);
  result.verdicts.push_back({"identical-data", params, same.degenerate ? same.max_violation : kInf, tol});

  add_constant(result, "d0", perturbed.distance.front(), "||alpha(v0) - alpha(u0)||_1");
  add_constant(result, "fitted_K", perturbed.fitted_K, "smallest K with d(s) <= exp(K s) d(0)");
  add_constant(result, "least_squares_K", perturbed.least_squares_K,
               "least-squares slope of log(d(s)/d(0)) against s");
  return result;
}

ScenarioResult absorbing(const ExperimentConfig& config, std::uint64_t seed, int jobs) {
  ScenarioResult result;
  const ProblemSpec base = effective_problem(config, seed);
  if (!(base.m > 2.0)) throw Error(ErrorCode::ConfigError, "absorbing scenario needs m > 2");
  const auto& amps = config.absorbing.amplitudes;
  std::vector<ProblemSpec> specs;
  for (double a : amps) {
    ProblemSpec s = base;
    s.initial.amplitude = a;
    specs.push_back(s);
  }
  const auto times = record_times(config, base.horizon_M);
  const auto runs = run_all(specs, config.stepper,
                            std::vector<std::vector<double>>(specs.size(), times), false, jobs);
  for (std::size_t k = 0; k < runs.size(); ++k) append(result, static_cast<int>(k), runs[k]);

  add_theory_constants(result, base);
  const TheoryConstants consts = compute_theory_constants(base, base.grid);
  const double eta = config.absorbing.eta;
  const double rho_eta = absorbing_radius_rho_s(consts, base.m, eta);
  const double radius = absorbing_radius(base.material, rho_eta);
  add_constant(result, "eta", eta, "transient cutoff");
  add_constant(result, "rho_eta", rho_eta,
               "(C14/C15)^(1/(m-1)) + (C15 (m-2) eta)^(-1/(m-2))");
  add_constant(result, "rho_inf", std::pow(consts.C14 / consts.C15, 1.0 / (base.m - 1.0)),
               "(C14/C15)^(1/(m-1))");
  add_constant(result, "ball_radius", radius, "max(|alpha^-1(rho_eta)|, |alpha^-1(-rho_eta)|)");

  // entry time: first record after which ||v||_inf stays inside the ball
  double transient = 0.0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& rows = runs[k].rows;
    double entry = kInf;
    for (std::size_t i = rows.size(); i-- > 0;) {
      if (rows[i].linf > radius) break;
      entry = rows[i].time;
    }
    transient = std::max(transient, entry);
    add_constant(result, "entry_time_amplitude=" + fmt(amps[k]), entry,
                 "first record time after which ||v||_inf <= ball_radius");
    result.verdicts.push_back({"absorbing-entry",
                               "amplitude=" + fmt(amps[k]) + ";radius=" + fmt(radius),
                               entry, base.horizon_M});
  }

  // running sup-norm across all runs, from the common entry time on
  std::vector<double> ts, ys;
  if (std::isfinite(transient)) {
    const std::size_t n = runs[0].rows.size();
    std::vector<double> tail(n, 0.0);
    for (const auto& run : runs) {
      double running = 0.0;
      for (std::size_t i = n; i-- > 0;) {
        running = std::max(running, run.rows[i].linf);
        tail[i] = std::max(tail[i], running);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double s = runs[0].rows[i].time;
      if (s > 0.0 && s >= transient) {
        ts.push_back(s);
        ys.push_back(tail[i]);
      }
    }
  }
  const double exponent = 1.0 / (base.m - 2.0);
  const std::string params = "m=" + fmt(base.m) + ";exponent=" + fmt(exponent) +
                             ";runs=" + std::to_string(runs.size());
  if (ts.size() < 2) {
    result.verdicts.push_back({"absorbing-shape", params + ";samples=" + std::to_string(ts.size()),
                               kInf, 0.0});
    return result;
  }
  const double fit_end = ts.front() + config.absorbing.fit_fraction * (ts.back() - ts.front());
  std::size_t fit_n = 0;
  while (fit_n < ts.size() && ts[fit_n] <= fit_end * (1.0 + 1e-12)) ++fit_n;
  fit_n = std::max<std::size_t>(fit_n, 2);
  const EnvelopeFit fit = fit_upper_envelope(std::span<const double>(ts.data(), fit_n),
                                             std::span<const double>(ys.data(), fit_n), exponent);
  double margin = kInf;
  for (std::size_t i = 0; i < ts.size(); ++i)
    margin = std::min(margin, fit.A + fit.B * std::pow(ts[i], -exponent) - ys[i]);
  add_constant(result, "transient", transient, "latest entry time over all runs");
  add_constant(result, "fit_A", fit.A, "A in A + B s^(-1/(m-2)) above the running sup-norm");
  add_constant(result, "fit_B", fit.B, "B in A + B s^(-1/(m-2)) above the running sup-norm");
  add_constant(result, "fit_mean_gap", fit.mean_gap, "mean of curve minus data on the fit window");
  result.verdicts.push_back({"absorbing-shape",
                             params + ";samples=" + std::to_string(ts.size()) +
                                 ";fit_samples=" + std::to_string(fit_n),
                             -margin, 0.0});
  result.verdicts.push_back({"absorbing-shape-coefficients", params, -std::min(fit.A, fit.B), 0.0});
  return result;
}

ScenarioResult attractor(const ExperimentConfig& config, std::uint64_t seed, int jobs) {
  ScenarioResult result;
  const auto& a = config.attractor;
  const ProblemSpec base = effective_problem(config, seed);
  if (!(a.cutoff < base.horizon_M))
    throw Error(ErrorCode::ConfigError, "[attractor] cutoff must be below the horizon");
  const EnsembleSpec fam_a{a.count, a.family_a, a.amplitude_a_min, a.amplitude_a_max, a.modes};
  const EnsembleSpec fam_b{a.count, a.family_b, a.amplitude_b_min, a.amplitude_b_max, a.modes};
  const std::uint64_t seed_a = mix_seed(seed, 0xA), seed_b = mix_seed(seed, 0xB);
  std::vector<ProblemSpec> specs;
  for (int k = 0; k < a.count; ++k)
    specs.push_back(with_initial(base, ensemble_member(fam_a, base.grid.dim(), seed_a, k)));
  for (int k = 0; k < a.count; ++k)
    specs.push_back(with_initial(base, ensemble_member(fam_b, base.grid.dim(), seed_b, k)));

  const auto times = record_times(config, base.horizon_M);
  const auto runs = run_all(specs, config.stepper,
                            std::vector<std::vector<double>>(specs.size(), times), true, jobs);
  for (std::size_t k = 0; k < runs.size(); ++k) append(result, static_cast<int>(k), runs[k]);

  const auto count = static_cast<std::size_t>(a.count);
  SnapshotSet init_a, init_b;
  for (std::size_t k = 0; k < count; ++k) {
    init_a.add(runs[k].states.front(), static_cast<int>(k), 0.0);
    init_b.add(runs[count + k].states.front(), static_cast<int>(count + k), 0.0);
  }
  const std::span<const TrajectoryRecord> all(runs);
  const SnapshotSet omega_a = omega_limit_estimate(all.subspan(0, count), a.cutoff, a.merge_tol);
  const SnapshotSet omega_b = omega_limit_estimate(all.subspan(count, count), a.cutoff, a.merge_tol);

  const double d0_ab = hausdorff_semidistance(init_a, init_b);
  const double d0_ba = hausdorff_semidistance(init_b, init_a);
  const double d_ab = hausdorff_semidistance(omega_a, omega_b);
  const double d_ba = hausdorff_semidistance(omega_b, omega_a);
  add_constant(result, "initial_semidistance_a_to_b", d0_ab, "sup_a inf_b ||a - b||_inf at s = 0");
  add_constant(result, "initial_semidistance_b_to_a", d0_ba, "sup_b inf_a ||b - a||_inf at s = 0");
  add_constant(result, "omega_semidistance_a_to_b", d_ab, "sup_a inf_b over snapshots past cutoff");
  add_constant(result, "omega_semidistance_b_to_a", d_ba, "sup_b inf_a over snapshots past cutoff");
  add_constant(result, "omega_size_a", static_cast<double>(omega_a.size()), "snapshots kept after merging");
  add_constant(result, "omega_size_b", static_cast<double>(omega_b.size()), "snapshots kept after merging");

  const std::string params = "count=" + std::to_string(a.count) + ";cutoff=" + fmt(a.cutoff) +
                             ";m=" + fmt(base.m) + ";norm=linf";
  result.verdicts.push_back({"attractor-semidistance", params + ";direction=a->b", d_ab, a.tolerance});
  result.verdicts.push_back({"attractor-semidistance", params + ";direction=b->a", d_ba, a.tolerance});
  result.verdicts.push_back({"attractor-ratio", params + ";ratio=" + fmt(a.ratio),
                             a.ratio * std::max(d_ab, d_ba), std::min(d0_ab, d0_ba)});
  return result;
}

ScenarioResult verify(const ExperimentConfig& config, std::uint64_t seed) {
  ScenarioResult result;
  const auto& v = config.verify;
  auto take = [&result](std::vector<Verdict> vs) {
    for (auto& x : vs) result.verdicts.push_back(std::move(x));
  };
  take(tartar_suite(mix_seed(seed, 1), v.tartar_samples));
  take(legendre_suite(mix_seed(seed, 2), v.legendre_samples));
  take(ghidaglia_suite(mix_seed(seed, 3), v.ghidaglia_draws));
  take(gronwall_suite(mix_seed(seed, 4), v.gronwall_draws));
  take(oracle_suite(mix_seed(seed, 5), v.oracle_configs));
  return result;
}

}  // namespace

bool ScenarioResult::all_pass() const noexcept {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass(); });
}

ScenarioResult run_scenario(Scenario scenario, const ExperimentConfig& config,
                            const RunOptions& options) {
  const std::uint64_t seed = options.seed.value_or(config.seed);
  const int jobs = std::max(1, options.jobs);
  ScenarioResult result;
  switch (scenario) {
    case Scenario::simulate: result = simulate(config, seed, jobs); break;
    case Scenario::mms: result = mms(config, seed, jobs); break;
    case Scenario::reg_sweep: result = reg_sweep(config, seed, jobs); break;
    case Scenario::uniqueness: result = uniqueness(config, seed, jobs); break;
    case Scenario::absorbing: result = absorbing(config, seed, jobs); break;
    case Scenario::attractor: result = attractor(config, seed, jobs); break;
    case Scenario::verify: result = verify(config, seed); break;
  }
  result.scenario = scenario;
  return result;
}

}  // namespace thermistor
