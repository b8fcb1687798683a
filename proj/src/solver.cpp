#include "thermistor/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "thermistor/error.hpp"

namespace thermistor {

const char* to_string(JacobianMode mode) noexcept {
  return mode == JacobianMode::lagged ? "lagged" : "face-normal";
}

void StepperConfig::validate() const {
  std::ostringstream msg;
  if (!(dt > 0.0)) msg << "dt must be positive; ";
  if (!(newton_tol > 0.0 && newton_tol < 1.0)) msg << "newton_tol must lie in (0, 1); ";
  if (!(picard_tol > 0.0 && picard_tol < 1.0)) msg << "picard_tol must lie in (0, 1); ";
  if (newton_max_iters <= 0) msg << "newton_max_iters must be positive; ";
  if (picard_max_iters <= 0) msg << "picard_max_iters must be positive; ";
  if (dt_halving_max < 0) msg << "dt_halving_max must be nonnegative; ";
  const auto text = msg.str();
  if (!text.empty()) throw Error(ErrorCode::InvalidArgument, text);
}

// ---------------------------------------------------------------------------
// Manufactured forcing

namespace {

// Continuous div((|grad v|^2 + r)^{(m-2)/2} grad v) for the manufactured
// solution A e^{-s} prod sin(pi x_d / l_d).
double manufactured_operator(const ProblemSpec& spec, double x, double y, double s) {
  const Grid& g = spec.grid;
  const double amp = spec.mms.amplitude * std::exp(-s);
  const double ax = std::numbers::pi / g.extent(0);
  const double sx = std::sin(ax * x), cx = std::cos(ax * x);
  double v, vx, vy = 0.0, vxx, vyy = 0.0, vxy = 0.0;
  if (g.dim() == 1) {
    v = amp * sx;
    vx = amp * ax * cx;
    vxx = -ax * ax * v;
  } else {
    const double ay = std::numbers::pi / g.extent(1);
    const double sy = std::sin(ay * y), cy = std::cos(ay * y);
    v = amp * sx * sy;
    vx = amp * ax * cx * sy;
    vy = amp * ay * sx * cy;
    vxx = -ax * ax * v;
    vyy = -ay * ay * v;
    vxy = amp * ax * ay * cx * cy;
  }
  const double m = spec.m;
  const double lap = vxx + vyy;
  if (m == 2.0) return lap;
  const double base = vx * vx + vy * vy + spec.reg_r;
  if (base <= 0.0) return 0.0;
  const double quad = vx * vxx * vx + 2.0 * vx * vxy * vy + vy * vyy * vy;
  return std::pow(base, 0.5 * (m - 2.0)) * lap +
         (m - 2.0) * std::pow(base, 0.5 * (m - 4.0)) * quad;
}

}  // namespace

std::vector<double> manufactured_forcing(const ProblemSpec& spec, double s) {
  const Grid& g = spec.grid;
  std::vector<double> out(g.interior_count(), 0.0);
  if (!spec.mms.enabled) return out;
  const Field exact = sample(g, [&](double x, double y) { return spec.mms.value(x, y, g, s); });
  const double c = nonlocal_coefficient(spec, exact);
  for (int j = 1; j <= g.interior(1); ++j) {
    for (int i = 1; i <= g.interior(0); ++i) {
      const std::size_t k = g.index(i, j);
      const double x = g.coord(0, i);
      const double y = g.dim() == 2 ? g.coord(1, j) : 0.0;
      const double v = exact[k];
      const double dalpha_ds = -spec.material.alpha_prime(v) * v;
      out[k] = dalpha_ds - manufactured_operator(spec, x, y, s) - c * spec.source.value(v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Newton / Picard machinery

namespace {

double max_abs(const std::vector<double>& v) {
  double out = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
    out = std::max(out, std::abs(x));
  }
  return out;
}

double norm2(const std::vector<double>& v) {
  double out = 0.0;
  for (double x : v) out += x * x;
  return std::isfinite(out) ? std::sqrt(out) : std::numeric_limits<double>::infinity();
}

// Derivative of the face flux k * g_n with respect to g_n.
double flux_derivative(double gn, double mag2, double m, double r, JacobianMode mode) {
  const double k = face_coefficient(mag2, m, r);
  if (mode == JacobianMode::lagged || m == 2.0) return k;
  const double base = mag2 + r;
  if (base <= 0.0) return 0.0;
  return k * (1.0 + (m - 2.0) * gn * gn / base);
}

// Solves a tridiagonal system in place (Thomas algorithm); rhs becomes the
// solution. Returns false on a zero pivot.
bool solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                       std::vector<double> sup, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) return false;
    const double f = sub[i] / diag[i - 1];
    diag[i] -= f * sup[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  if (diag[n - 1] == 0.0) return false;
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
  return true;
}

struct NewtonOutcome {
  bool ok = false;
  int iterations = 0;
  double residual = 0.0;
};

class StepSystem {
 public:
  StepSystem(const ProblemSpec& spec, const StepperConfig& cfg, const Field& old,
             double dt, double time)
      : spec_(spec), cfg_(cfg), dt_(dt), alpha_old_(old.size()) {
    for (std::size_t k = 0; k < old.size(); ++k) alpha_old_[k] = spec.material.alpha(old[k]);
    forcing_ = manufactured_forcing(spec, time + dt);
  }

  void residual(const Field& w, double c, std::vector<double>& out) const {
    const Field lap = m_laplacian_apply(w, spec_.m, spec_.reg_r);
    out.resize(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
      out[k] = spec_.material.alpha(w[k]) - alpha_old_[k] -
               dt_ * (lap[k] + c * spec_.source.value(w[k]) + forcing_[k]);
    }
  }

  NewtonOutcome newton(Field& w, double c) const {
    NewtonOutcome out;
    std::vector<double> res, trial_res;
    residual(w, c, res);
    double rmax = max_abs(res);
    for (int it = 0;; ++it) {
      out.iterations = it;
      out.residual = rmax;
      if (rmax <= cfg_.newton_tol) {
        out.ok = true;
        return out;
      }
      if (it >= cfg_.newton_max_iters || !std::isfinite(rmax)) return out;

      std::vector<double> delta(res.size());
      for (std::size_t k = 0; k < res.size(); ++k) delta[k] = -res[k];
      if (!solve_jacobian(w, c, delta)) return out;

      const double r2 = norm2(res);
      double lambda = 1.0;
      bool accepted = false;
      Field trial(w.grid);
      for (int ls = 0; ls < 30; ++ls) {
        for (std::size_t k = 0; k < w.size(); ++k) trial[k] = w[k] + lambda * delta[k];
        residual(trial, c, trial_res);
        const double t2 = norm2(trial_res);
        if (t2 <= (1.0 - 1e-4 * lambda) * r2) {
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!accepted) return out;
      w = trial;
      res.swap(trial_res);
      rmax = max_abs(res);
    }
  }

 private:
  // Solves J delta = rhs in place.
  bool solve_jacobian(const Field& w, double c, std::vector<double>& rhs) const {
    const Grid& g = w.grid;
    const auto faces = face_gradients(w);
    const double m = spec_.m, r = spec_.reg_r;
    std::vector<double> diag(w.size());
    for (std::size_t k = 0; k < w.size(); ++k)
      diag[k] = spec_.material.alpha_prime(w[k]) - dt_ * c * spec_.source.derivative(w[k]);

    if (g.dim() == 1) {
      const auto& fs = faces[0];
      const double s = dt_ / (g.spacing(0) * g.spacing(0));
      std::vector<double> d(fs.count_i);
      for (int f = 0; f < fs.count_i; ++f)
        d[f] = s * flux_derivative(fs.normal[f], fs.magnitude2[f], m, r, cfg_.jacobian);
      const std::size_t n = w.size();
      std::vector<double> sub(n, 0.0), sup(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        // node i+1 sits between faces i and i+1
        diag[i] += d[i] + d[i + 1];
        if (i > 0) sub[i] = -d[i];
        if (i + 1 < n) sup[i] = -d[i + 1];
      }
      return solve_tridiagonal(std::move(sub), std::move(diag), std::move(sup), rhs);
    }

    const int nx = g.cells(0), ny = g.cells(1);
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(w.size() * 5);
    auto couple = [&](int i0, int j0, int i1, int j1, double value) {
      const bool in0 = i0 > 0 && i0 < nx && j0 > 0 && j0 < ny;
      const bool in1 = i1 > 0 && i1 < nx && j1 > 0 && j1 < ny;
      const auto k0 = in0 ? static_cast<Eigen::Index>(g.index(i0, j0)) : -1;
      const auto k1 = in1 ? static_cast<Eigen::Index>(g.index(i1, j1)) : -1;
      if (in0) diag[static_cast<std::size_t>(k0)] += value;
      if (in1) diag[static_cast<std::size_t>(k1)] += value;
      if (in0 && in1) {
        entries.emplace_back(k0, k1, -value);
        entries.emplace_back(k1, k0, -value);
      }
    };
    const double sx = dt_ / (g.spacing(0) * g.spacing(0));
    const double sy = dt_ / (g.spacing(1) * g.spacing(1));
    const auto& xf = faces[0];
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const std::size_t f = static_cast<std::size_t>(j - 1) * nx + i;
        couple(i, j, i + 1, j,
               sx * flux_derivative(xf.normal[f], xf.magnitude2[f], m, r, cfg_.jacobian));
      }
    const auto& yf = faces[1];
    for (int i = 1; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        const std::size_t f = static_cast<std::size_t>(i - 1) * ny + j;
        couple(i, j, i, j + 1,
               sy * flux_derivative(yf.normal[f], yf.magnitude2[f], m, r, cfg_.jacobian));
      }
    for (std::size_t k = 0; k < w.size(); ++k)
      entries.emplace_back(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k), diag[k]);
    const auto n = static_cast<Eigen::Index>(w.size());
    Eigen::SparseMatrix<double> jac(n, n);
    jac.setFromTriplets(entries.begin(), entries.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(jac);
    if (lu.info() != Eigen::Success) return false;
    Eigen::Map<Eigen::VectorXd> b(rhs.data(), n);
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) return false;
    b = x;
    return true;
  }

  const ProblemSpec& spec_;
  const StepperConfig& cfg_;
  double dt_;
  std::vector<double> alpha_old_;
  std::vector<double> forcing_;
};

struct Attempt {
  std::optional<Field> state;
  int newton_iters = 0;
  int picard_iters = 0;
  double residual = std::numeric_limits<double>::infinity();
};

Attempt try_step(const Field& v, const ProblemSpec& spec, const StepperConfig& cfg,
                 double dt, double time) {
  Attempt out;
  try {
    StepSystem system(spec, cfg, v, dt, time);
    Field w = v;
    for (int p = 1; p <= cfg.picard_max_iters; ++p) {
      out.picard_iters = p;
      const double c = nonlocal_coefficient(spec, w);
      const auto nwt = system.newton(w, c);
      out.newton_iters += nwt.iterations;
      out.residual = nwt.residual;
      if (!nwt.ok) return out;
      const double c_new = nonlocal_coefficient(spec, w);
      if (std::abs(c_new - c) <= cfg.picard_tol * std::abs(c)) {
        out.state = std::move(w);
        return out;
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DenominatorTooSmall) throw;
  }
  return out;
}

bool advance(Field& v, const ProblemSpec& spec, const StepperConfig& cfg, double dt,
             double time, int depth, StepReport& report, double& fail_time) {
  auto attempt = try_step(v, spec, cfg, dt, time);
  report.newton_iters += attempt.newton_iters;
  report.picard_iters += attempt.picard_iters;
  if (attempt.state) {
    v = std::move(*attempt.state);
    report.final_residual = attempt.residual;
    report.accepted_dt = report.accepted_dt == 0.0 ? dt : std::min(report.accepted_dt, dt);
    report.halvings = std::max(report.halvings, depth);
    return true;
  }
  report.final_residual = attempt.residual;
  if (depth >= cfg.dt_halving_max) {
    fail_time = time;
    return false;
  }
  const double half = 0.5 * dt;
  if (!advance(v, spec, cfg, half, time, depth + 1, report, fail_time)) return false;
  return advance(v, spec, cfg, half, time + half, depth + 1, report, fail_time);
}

StepResult step_over(const Field& state, const ProblemSpec& spec, const StepperConfig& cfg,
                     double dt, double time) {
  StepResult result{state, {}};
  double fail_time = time;
  if (!advance(result.state, spec, cfg, dt, time, 0, result.report, fail_time)) {
    std::ostringstream msg;
    msg << "Newton/Picard did not converge at t = " << fail_time << " after "
        << cfg.dt_halving_max << " halvings of dt = " << dt << " (residual "
        << result.report.final_residual << ")";
    throw StepFailure(msg.str(), fail_time, result.report.final_residual);
  }
  return result;
}

}  // namespace

StepResult implicit_step(const Field& state, const ProblemSpec& spec,
                         const StepperConfig& cfg, double time) {
  spec.validate();
  cfg.validate();
  return step_over(state, spec, cfg, cfg.dt, time);
}

double energy_balance_residual(const ProblemSpec& spec, const Field& before,
                               const Field& after, double dt, double time) {
  const Grid& g = after.grid;
  std::vector<double> e0(before.size()), e1(after.size()), src(after.size());
  const double c = nonlocal_coefficient(spec, after);
  const auto forcing = manufactured_forcing(spec, time + dt);
  for (std::size_t k = 0; k < after.size(); ++k) {
    e0[k] = spec.material.psi_star_of_alpha(before[k]);
    e1[k] = spec.material.psi_star_of_alpha(after[k]);
    src[k] = (c * spec.source.value(after[k]) + forcing[k]) * after[k];
  }
  return (integrate(g, e1) - integrate(g, e0)) / dt + dissipation(after, spec.m, spec.reg_r) -
         integrate(g, src);
}

// ---------------------------------------------------------------------------
// Trajectories

std::vector<double> uniform_record_times(double horizon, int count) {
  std::vector<double> out;
  if (count <= 0 || horizon <= 0.0) return out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) out.push_back(horizon * k / count);
  return out;
}

namespace {

RecordRow make_row(const ProblemSpec& spec, const Field& v, std::size_t step, double time) {
  RecordRow row;
  row.step = step;
  row.time = time;
  const Norms n = norms(v, spec.m);
  row.linf = n.linf;
  row.l1 = n.l1;
  row.l2 = n.l2;
  row.lp_max = n.lp_max;
  row.w1m_seminorm = n.w1m_seminorm;
  std::vector<double> energy(v.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    energy[k] = spec.material.psi_star_of_alpha(v[k]);
  row.energy_psi_star = integrate(v.grid, energy);
  row.nonlocal_coeff = nonlocal_coefficient(spec, v);
  return row;
}

}  // namespace

TrajectoryRecord integrate_trajectory(const ProblemSpec& spec, const StepperConfig& cfg,
                                      std::span<const double> record_times,
                                      const TrajectoryOptions& options) {
  return integrate_trajectory(spec, cfg, initial_field(spec.initial, spec.grid), record_times,
                              options);
}

TrajectoryRecord integrate_trajectory(const ProblemSpec& spec, const StepperConfig& cfg,
                                      const Field& initial,
                                      std::span<const double> record_times,
                                      const TrajectoryOptions& options) {
  spec.validate();
  cfg.validate();
  if (!(initial.grid == spec.grid))
    throw Error(ErrorCode::InvalidArgument, "initial field grid differs from the problem grid");
  const double horizon = spec.horizon_M;
  const double eps = 1e-12 * std::max(1.0, horizon);
  std::vector<double> targets;
  for (double t : record_times) {
    if (!std::isfinite(t) || t < -eps || t > horizon + eps) {
      std::ostringstream msg;
      msg << "record time " << t << " outside [0, " << horizon << "]";
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    if (t > eps) targets.push_back(std::min(t, horizon));
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end(),
                            [&](double a, double b) { return std::abs(a - b) <= eps; }),
                targets.end());

  TrajectoryRecord rec;
  rec.m = spec.m;
  rec.r = spec.reg_r;
  Field v = initial;
  rec.rows.push_back(make_row(spec, v, 0, 0.0));
  if (options.keep_states) rec.states.push_back(v);

  double t = 0.0;
  std::size_t step = 0;
  for (double target : targets) {
    RecordRow pending;
    double last_dt = 0.0;
    Field previous = v;
    while (target - t > eps) {
      const double remaining = target - t;
      const double h = remaining <= cfg.dt * (1.0 + 1e-9) ? remaining : cfg.dt;
      previous = v;
      auto result = step_over(v, spec, cfg, h, t);
      v = std::move(result.state);
      t = remaining <= cfg.dt * (1.0 + 1e-9) ? target : t + h;
      ++step;
      last_dt = h;
      pending.newton_iters += result.report.newton_iters;
      pending.picard_iters += result.report.picard_iters;
      pending.halvings = std::max(pending.halvings, result.report.halvings);
      pending.residual = result.report.final_residual;
      rec.w1m_time_integral += h * w1m_seminorm(v, spec.m);
    }
    RecordRow row = make_row(spec, v, step, target);
    row.newton_iters = pending.newton_iters;
    row.picard_iters = pending.picard_iters;
    row.halvings = pending.halvings;
    row.residual = pending.residual;
    if (last_dt > 0.0) {
      std::vector<double> rate(v.size());
      for (std::size_t k = 0; k < v.size(); ++k) {
        const double d = (spec.material.alpha(v[k]) - spec.material.alpha(previous[k])) / last_dt;
        rate[k] = d * d;
      }
      row.dalpha_dt_l2 = integrate(v.grid, rate);
    }
    rec.rows.push_back(row);
    if (options.keep_states) rec.states.push_back(v);
  }
  return rec;
}

}  // namespace thermistor
