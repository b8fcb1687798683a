#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "thermistor/grid.hpp"
#include "thermistor/problem.hpp"

namespace thermistor {

/// How Newton linearises the diffusion term.
///   face_normal  exact derivative of each face flux with respect to its
///                normal difference (tangential dependence in 2D dropped)
///   lagged       frozen face coefficient (Picard / Kacanov linearisation)
enum class JacobianMode { face_normal, lagged };

const char* to_string(JacobianMode mode) noexcept;

struct StepperConfig {
  double dt = 1e-3;
  double newton_tol = 1e-10;
  int newton_max_iters = 50;
  int picard_max_iters = 20;
  double picard_tol = 1e-10;
  int dt_halving_max = 6;
  JacobianMode jacobian = JacobianMode::face_normal;

  void validate() const;
};

struct StepReport {
  double accepted_dt = 0.0;  // smallest substep actually taken
  int newton_iters = 0;
  int picard_iters = 0;
  double final_residual = 0.0;  // max-norm Newton residual of the last solve
  int halvings = 0;
};

struct StepResult {
  Field state;
  StepReport report;
};

/// One backward-Euler step of the regularised problem over cfg.dt:
///   alpha(v+) - alpha(v) = dt * (Delta_m^r v+ + c f(v+) + g),
/// with c = kappa / (integral f(v+))^2 held fixed inside each Newton solve and
/// refreshed between Picard sweeps until it stops moving by picard_tol
/// (relative). A failed solve is retried as two half steps, recursively, up to
/// dt_halving_max levels; beyond that StepFailure is thrown. `time` is the
/// start of the step (only the manufactured forcing depends on it).
StepResult implicit_step(const Field& state, const ProblemSpec& spec,
                         const StepperConfig& cfg, double time = 0.0);

/// Verification oracle for tiny grids (<= 8 interior nodes): solves the same
/// step with the nonlocal coefficient coupled self-consistently, by dense
/// damped Newton on a finite-difference Jacobian in extended precision, to a
/// residual of 1e-13, with per-coordinate bisection sweeps when Newton
/// stalls. Throws OracleFailure if the residual stays above 1e-12.
Field brute_force_step(const Field& state, const ProblemSpec& spec, double dt,
                       double time = 0.0);

/// Manufactured forcing g at the interior nodes at time s (zeros when the
/// spec has no manufactured solution).
std::vector<double> manufactured_forcing(const ProblemSpec& spec, double s);

/// Discrete energy balance of one step from `before` to `after`:
///   [int Psi*(alpha(after)) - int Psi*(alpha(before))]/dt
///     + int (|grad after|^2 + r)^{(m-2)/2} |grad after|^2
///     - int c f(after) after - int g after,
/// which is O(dt) for the backward-Euler step.
double energy_balance_residual(const ProblemSpec& spec, const Field& before,
                               const Field& after, double dt, double time = 0.0);

struct RecordRow {
  std::size_t step = 0;
  double time = 0.0;
  double linf = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double lp_max = 0.0;
  double w1m_seminorm = 0.0;
  double energy_psi_star = 0.0;
  double dalpha_dt_l2 = 0.0;
  double nonlocal_coeff = 0.0;
  int newton_iters = 0;   // summed since the previous record
  int picard_iters = 0;   // summed since the previous record
  int halvings = 0;       // max since the previous record
  double residual = 0.0;  // last accepted Newton residual
};

/// Discrete image of the semigroup S(s) v0 on the record times.
struct TrajectoryRecord {
  std::vector<RecordRow> rows;
  std::vector<Field> states;  // parallel to rows when states are kept
  double m = 2.0;
  double r = 0.0;
  /// sum over all steps of dt * w1m_seminorm(v(s)), i.e. the discrete
  /// L^m(0, M; W^{1,m}) energy raised to the m-th power.
  double w1m_time_integral = 0.0;
};

struct TrajectoryOptions {
  bool keep_states = true;
};

/// Integrates from the problem's initial data to every record time (sorted,
/// within (0, M]); the initial state is always the first row. Throws
/// StepFailure carrying the time of failure.
TrajectoryRecord integrate_trajectory(const ProblemSpec& spec,
                                      const StepperConfig& cfg,
                                      std::span<const double> record_times,
                                      const TrajectoryOptions& options = {});

/// Same, from an explicit initial field.
TrajectoryRecord integrate_trajectory(const ProblemSpec& spec,
                                      const StepperConfig& cfg,
                                      const Field& initial,
                                      std::span<const double> record_times,
                                      const TrajectoryOptions& options = {});

/// count equally spaced times in (0, horizon].
std::vector<double> uniform_record_times(double horizon, int count);

}  // namespace thermistor
