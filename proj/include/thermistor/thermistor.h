/* C interface to the thermistor simulator.
 *
 * Every function returns a thm_status. On failure a description is
 * available from thm_last_error() until the next call on the same thread.
 * Handles are opaque; a handle may be used from one thread at a time, and
 * distinct handles are independent.
 */
#ifndef THERMISTOR_THERMISTOR_H
#define THERMISTOR_THERMISTOR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(THM_BUILDING_LIBRARY)
#    define THM_API __declspec(dllexport)
#  else
#    define THM_API __declspec(dllimport)
#  endif
#else
#  define THM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum thm_status {
  THM_OK = 0,
  THM_ERR_INVALID_ARGUMENT = 1,
  THM_ERR_CONFIG = 2,
  THM_ERR_STEP_FAILURE = 3,
  THM_ERR_NONCONVERGENCE = 4,
  THM_ERR_DENOMINATOR = 5,
  THM_ERR_ORACLE = 6,
  THM_ERR_HYPOTHESIS = 7,
  THM_ERR_INVALID_EXPONENT = 8,
  THM_ERR_EMPTY_SET = 9,
  THM_ERR_INVALID_R = 10,
  THM_ERR_INTERNAL = 11
} thm_status;

typedef struct thm_problem thm_problem;
typedef struct thm_trajectory thm_trajectory;

/* One recorded time of a trajectory; mirrors a trajectory.csv row. */
typedef struct thm_record {
  uint64_t step;
  double time;
  double linf;
  double l1;
  double l2;
  double lp_max;
  double w1m_seminorm;
  double energy_psi_star;
  double dalpha_dt_l2;
  double nonlocal_coeff;
  int32_t newton_iters;
  int32_t picard_iters;
  int32_t halvings;
  double residual;
} thm_record;

THM_API const char* thm_version(void);
THM_API const char* thm_status_string(thm_status status);
THM_API const char* thm_last_error(void);

/* Problems are built from the INI experiment configuration. */
THM_API thm_status thm_problem_from_file(const char* path, thm_problem** out);
THM_API thm_status thm_problem_from_string(const char* text, thm_problem** out);
THM_API void thm_problem_free(thm_problem* problem);

/* Overrides one key, e.g. ("problem", "m", "4"), and revalidates. */
THM_API thm_status thm_problem_set(thm_problem* problem, const char* section, const char* key,
                                   const char* value);
/* Seed used for random initial data (default: [ensemble] seed). */
THM_API thm_status thm_problem_set_seed(thm_problem* problem, uint64_t seed);

THM_API thm_status thm_problem_node_count(const thm_problem* problem, size_t* out);
THM_API thm_status thm_problem_initial_field(const thm_problem* problem, double* out, size_t n);
THM_API thm_status thm_problem_nonlocal_coefficient(const thm_problem* problem,
                                                    const double* field, size_t n, double* out);

/* One backward-Euler step of size dt from state (n interior values) at
 * time `time`; writes the new state to out. The oracle variant accepts at
 * most 8 interior nodes. */
THM_API thm_status thm_problem_step(const thm_problem* problem, const double* state, size_t n,
                                    double dt, double time, double* out);
THM_API thm_status thm_problem_oracle_step(const thm_problem* problem, const double* state,
                                           size_t n, double dt, double time, double* out);

/* Integrates to the configured horizon, recording [record] count times. */
THM_API thm_status thm_trajectory_run(const thm_problem* problem, thm_trajectory** out);
THM_API void thm_trajectory_free(thm_trajectory* trajectory);
THM_API thm_status thm_trajectory_size(const thm_trajectory* trajectory, size_t* rows);
THM_API thm_status thm_trajectory_record(const thm_trajectory* trajectory, size_t row,
                                         thm_record* out);
THM_API thm_status thm_trajectory_state(const thm_trajectory* trajectory, size_t row, double* out,
                                        size_t n);

/* Runs a named scenario and writes its artifacts to out_dir. exit_code
 * receives the command-line exit code (0 pass, 1 failed check, 2 config
 * error, 3 solver failure); the return value is THM_OK whenever the run
 * was attempted. */
THM_API thm_status thm_run_scenario(const char* scenario, const char* config_path,
                                    const char* out_dir, uint64_t seed, int has_seed, int jobs,
                                    int* exit_code);

THM_API thm_status thm_tartar_check(const double* a, const double* b, size_t n, double m,
                                    double* lhs, double* rhs, int* holds);
THM_API thm_status thm_ghidaglia_envelope(double delta, double eta, double q, double s,
                                          double* out);
THM_API thm_status thm_poincare_constant(int dim, double length_x, double length_y, int cells_x,
                                         int cells_y, double m, double* out);

#ifdef __cplusplus
}
#endif

#endif /* THERMISTOR_THERMISTOR_H */
