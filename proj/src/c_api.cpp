#include "thermistor/thermistor.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "thermistor/analysis.hpp"
#include "thermistor/error.hpp"
#include "thermistor/experiments.hpp"

using namespace thermistor;

struct thm_problem {
  ExperimentConfig config;
  std::uint64_t seed = 1;
  ProblemSpec spec;
};

struct thm_trajectory {
  TrajectoryRecord record;
};

namespace {

thread_local std::string last_error;

thm_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return THM_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidR: return THM_ERR_INVALID_R;
    case ErrorCode::DenominatorTooSmall: return THM_ERR_DENOMINATOR;
    case ErrorCode::NonConvergence: return THM_ERR_NONCONVERGENCE;
    case ErrorCode::StepFailure: return THM_ERR_STEP_FAILURE;
    case ErrorCode::OracleFailure: return THM_ERR_ORACLE;
    case ErrorCode::HypothesisViolated: return THM_ERR_HYPOTHESIS;
    case ErrorCode::InvalidExponent: return THM_ERR_INVALID_EXPONENT;
    case ErrorCode::EmptySet: return THM_ERR_EMPTY_SET;
    case ErrorCode::ConfigError: return THM_ERR_CONFIG;
  }
  return THM_ERR_INTERNAL;
}

thm_status fail(thm_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <class Body>
thm_status guarded(Body body) {
  try {
    last_error.clear();
    return body();
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(THM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(THM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(THM_ERR_INTERNAL, "unknown exception");
  }
}

#define REQUIRE(cond, what) \
  do {                      \
    if (!(cond)) return fail(THM_ERR_INVALID_ARGUMENT, what); \
  } while (0)

thm_status make_problem(ExperimentConfig config, thm_problem** out) {
  auto p = std::make_unique<thm_problem>();
  p->config = std::move(config);
  p->seed = p->config.seed;
  p->spec = effective_problem(p->config, p->seed);
  *out = p.release();
  return THM_OK;
}

}  // namespace

extern "C" {

const char* thm_version(void) { return library_version(); }

const char* thm_status_string(thm_status status) {
  switch (status) {
    case THM_OK: return "ok";
    case THM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case THM_ERR_CONFIG: return "configuration error";
    case THM_ERR_STEP_FAILURE: return "step failure";
    case THM_ERR_NONCONVERGENCE: return "no convergence";
    case THM_ERR_DENOMINATOR: return "nonlocal denominator too small";
    case THM_ERR_ORACLE: return "oracle failure";
    case THM_ERR_HYPOTHESIS: return "hypothesis violated";
    case THM_ERR_INVALID_EXPONENT: return "invalid exponent";
    case THM_ERR_EMPTY_SET: return "empty set";
    case THM_ERR_INVALID_R: return "invalid regularisation parameter";
    case THM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* thm_last_error(void) { return last_error.c_str(); }

thm_status thm_problem_from_file(const char* path, thm_problem** out) {
  return guarded([&] {
    REQUIRE(path && out, "null argument");
    *out = nullptr;
    return make_problem(load_config(path), out);
  });
}

thm_status thm_problem_from_string(const char* text, thm_problem** out) {
  return guarded([&] {
    REQUIRE(text && out, "null argument");
    *out = nullptr;
    return make_problem(parse_config(text), out);
  });
}

void thm_problem_free(thm_problem* problem) { delete problem; }

thm_status thm_problem_set(thm_problem* problem, const char* section, const char* key,
                           const char* value) {
  return guarded([&] {
    REQUIRE(problem && section && key && value, "null argument");
    ExperimentConfig config = problem->config;
    set_config_value(config, section, key, value);
    ProblemSpec spec = effective_problem(config, problem->seed);
    problem->config = std::move(config);
    problem->spec = std::move(spec);
    return THM_OK;
  });
}

thm_status thm_problem_set_seed(thm_problem* problem, uint64_t seed) {
  return guarded([&] {
    REQUIRE(problem, "null problem");
    problem->seed = seed;
    problem->spec = effective_problem(problem->config, seed);
    return THM_OK;
  });
}

thm_status thm_problem_node_count(const thm_problem* problem, size_t* out) {
  return guarded([&] {
    REQUIRE(problem && out, "null argument");
    *out = problem->spec.grid.interior_count();
    return THM_OK;
  });
}

thm_status thm_problem_initial_field(const thm_problem* problem, double* out, size_t n) {
  return guarded([&] {
    REQUIRE(problem && out, "null argument");
    const Field f = initial_field(problem->spec.initial, problem->spec.grid);
    REQUIRE(n == f.size(), "buffer length does not match the interior node count");
    std::memcpy(out, f.values.data(), n * sizeof(double));
    return THM_OK;
  });
}

thm_status thm_problem_nonlocal_coefficient(const thm_problem* problem, const double* field,
                                            size_t n, double* out) {
  return guarded([&] {
    REQUIRE(problem && field && out, "null argument");
    const Field f(problem->spec.grid, std::vector<double>(field, field + n));
    *out = nonlocal_coefficient(problem->spec, f);
    return THM_OK;
  });
}

thm_status thm_problem_step(const thm_problem* problem, const double* state, size_t n, double dt,
                            double time, double* out) {
  return guarded([&] {
    REQUIRE(problem && state && out, "null argument");
    const Field f(problem->spec.grid, std::vector<double>(state, state + n));
    StepperConfig cfg = problem->config.stepper;
    cfg.dt = dt;
    const auto result = implicit_step(f, problem->spec, cfg, time);
    std::memcpy(out, result.state.values.data(), n * sizeof(double));
    return THM_OK;
  });
}

thm_status thm_problem_oracle_step(const thm_problem* problem, const double* state, size_t n,
                                   double dt, double time, double* out) {
  return guarded([&] {
    REQUIRE(problem && state && out, "null argument");
    const Field f(problem->spec.grid, std::vector<double>(state, state + n));
    const Field next = brute_force_step(f, problem->spec, dt, time);
    std::memcpy(out, next.values.data(), n * sizeof(double));
    return THM_OK;
  });
}

thm_status thm_trajectory_run(const thm_problem* problem, thm_trajectory** out) {
  return guarded([&] {
    REQUIRE(problem && out, "null argument");
    *out = nullptr;
    const auto times =
        uniform_record_times(problem->spec.horizon_M, problem->config.record_count);
    auto t = std::make_unique<thm_trajectory>();
    t->record = integrate_trajectory(problem->spec, problem->config.stepper, times);
    *out = t.release();
    return THM_OK;
  });
}

void thm_trajectory_free(thm_trajectory* trajectory) { delete trajectory; }

thm_status thm_trajectory_size(const thm_trajectory* trajectory, size_t* rows) {
  return guarded([&] {
    REQUIRE(trajectory && rows, "null argument");
    *rows = trajectory->record.rows.size();
    return THM_OK;
  });
}

thm_status thm_trajectory_record(const thm_trajectory* trajectory, size_t row, thm_record* out) {
  return guarded([&] {
    REQUIRE(trajectory && out, "null argument");
    REQUIRE(row < trajectory->record.rows.size(), "row out of range");
    const RecordRow& r = trajectory->record.rows[row];
    out->step = r.step;
    out->time = r.time;
    out->linf = r.linf;
    out->l1 = r.l1;
    out->l2 = r.l2;
    out->lp_max = r.lp_max;
    out->w1m_seminorm = r.w1m_seminorm;
    out->energy_psi_star = r.energy_psi_star;
    out->dalpha_dt_l2 = r.dalpha_dt_l2;
    out->nonlocal_coeff = r.nonlocal_coeff;
    out->newton_iters = r.newton_iters;
    out->picard_iters = r.picard_iters;
    out->halvings = r.halvings;
    out->residual = r.residual;
    return THM_OK;
  });
}

thm_status thm_trajectory_state(const thm_trajectory* trajectory, size_t row, double* out,
                                size_t n) {
  return guarded([&] {
    REQUIRE(trajectory && out, "null argument");
    REQUIRE(row < trajectory->record.states.size(), "row out of range");
    const Field& f = trajectory->record.states[row];
    REQUIRE(n == f.size(), "buffer length does not match the interior node count");
    std::memcpy(out, f.values.data(), n * sizeof(double));
    return THM_OK;
  });
}

thm_status thm_run_scenario(const char* scenario, const char* config_path, const char* out_dir,
                            uint64_t seed, int has_seed, int jobs, int* exit_code) {
  return guarded([&] {
    REQUIRE(scenario && config_path && out_dir && exit_code, "null argument");
    RunOptions options;
    if (has_seed) options.seed = seed;
    options.jobs = jobs;
    std::string message;
    *exit_code = run_scenario_to_dir(scenario, config_path, out_dir, options, message);
    last_error = message;
    return THM_OK;
  });
}

thm_status thm_tartar_check(const double* a, const double* b, size_t n, double m, double* lhs,
                            double* rhs, int* holds) {
  return guarded([&] {
    REQUIRE(a && b && lhs && rhs && holds, "null argument");
    const auto r = tartar_check(std::span<const double>(a, n), std::span<const double>(b, n), m);
    *lhs = r.lhs;
    *rhs = r.rhs;
    *holds = r.holds ? 1 : 0;
    return THM_OK;
  });
}

thm_status thm_ghidaglia_envelope(double delta, double eta, double q, double s, double* out) {
  return guarded([&] {
    REQUIRE(out, "null argument");
    *out = ghidaglia_envelope({delta, eta, q}, s);
    return THM_OK;
  });
}

thm_status thm_poincare_constant(int dim, double length_x, double length_y, int cells_x,
                                 int cells_y, double m, double* out) {
  return guarded([&] {
    REQUIRE(out, "null argument");
    REQUIRE(dim == 1 || dim == 2, "dim must be 1 or 2");
    const Grid g = dim == 1 ? Grid::interval(length_x, cells_x)
                            : Grid::rectangle(length_x, length_y, cells_x, cells_y);
    *out = poincare_constant(g, m).value;
    return THM_OK;
  });
}

}  // extern "C"
