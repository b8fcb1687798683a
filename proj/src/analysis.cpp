#include "thermistor/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "thermistor/error.hpp"

namespace thermistor {

// ---------------------------------------------------------------------------
// Tartar

double tartar_constant(double m) {
  if (!(m > 1.0)) throw Error(ErrorCode::InvalidExponent, "Tartar inequality needs m > 1");
  return m >= 2.0 ? std::pow(2.0, 2.0 - m) : m - 1.0;
}

TartarResult tartar_check(std::span<const double> a, std::span<const double> b, double m) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "vector sizes differ");
  const double cm = tartar_constant(m);
  double na2 = 0.0, nb2 = 0.0, d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    na2 += a[k] * a[k];
    nb2 += b[k] * b[k];
    d2 += (a[k] - b[k]) * (a[k] - b[k]);
  }
  const double na = std::sqrt(na2), nb = std::sqrt(nb2);
  // |x|^{m-2} x vanishes at x = 0 for every m > 1
  auto scale = [m](double n) { return n > 0.0 ? std::pow(n, m - 2.0) : 0.0; };
  const double sa = scale(na), sb = scale(nb);
  TartarResult out;
  for (std::size_t k = 0; k < a.size(); ++k) out.lhs += (sa * a[k] - sb * b[k]) * (a[k] - b[k]);
  const double dist = std::sqrt(d2);
  if (m >= 2.0) {
    out.rhs = cm * std::pow(dist, m);
  } else {
    const double denom = na + nb;
    out.rhs = denom > 0.0 ? cm * d2 / std::pow(denom, 2.0 - m) : 0.0;
  }
  out.holds = out.lhs >= out.rhs - 1e-12 * (1.0 + out.rhs);
  return out;
}

// ---------------------------------------------------------------------------
// Gronwall / Ghidaglia

GronwallResult gronwall_check(std::span<const double> times, std::span<const double> z,
                              std::span<const double> h, std::span<const double> g,
                              double hypothesis_tol, double bound_tol) {
  const std::size_t n = times.size();
  if (z.size() != n || h.size() != n || g.size() != n || n == 0)
    throw Error(ErrorCode::InvalidArgument, "gronwall_check needs equally sized, nonempty series");
  for (std::size_t k = 0; k < n; ++k) {
    if (z[k] < 0.0 || h[k] < 0.0 || g[k] < 0.0)
      throw Error(ErrorCode::InvalidArgument, "gronwall_check samples must be nonnegative");
    if (k > 0 && !(times[k] > times[k - 1]))
      throw Error(ErrorCode::InvalidArgument, "gronwall_check times must increase");
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double dt = times[k + 1] - times[k];
    const double slope = (z[k + 1] - z[k]) / dt;
    const double rhs = 0.5 * (h[k] * z[k] + h[k + 1] * z[k + 1]) + 0.5 * (g[k] + g[k + 1]);
    if (slope > rhs + hypothesis_tol * (1.0 + std::abs(rhs))) {
      std::ostringstream msg;
      msg << "z' <= h z + g fails on [" << times[k] << ", " << times[k + 1] << "]: " << slope
          << " > " << rhs;
      throw Error(ErrorCode::HypothesisViolated, msg.str());
    }
  }
  GronwallResult out;
  out.holds = true;
  out.max_violation = -std::numeric_limits<double>::infinity();
  double int_h = 0.0, int_g = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      const double dt = times[k] - times[k - 1];
      int_h += 0.5 * dt * (h[k] + h[k - 1]);
      int_g += 0.5 * dt * (g[k] + g[k - 1]);
    }
    const double bound = std::exp(int_h) * (z[0] + int_g);
    const double violation = z[k] - bound;
    if (violation > out.max_violation) {
      out.max_violation = violation;
      out.worst_index = k;
    }
    if (violation > bound_tol * (1.0 + bound)) out.holds = false;
  }
  return out;
}

double ghidaglia_envelope(const GhidagliaParams& p, double s) {
  if (!(p.q > 1.0) || !(p.delta > 0.0) || !(p.eta >= 0.0) || !(s > 0.0))
    throw Error(ErrorCode::InvalidArgument, "ghidaglia_envelope needs q > 1, delta > 0, eta >= 0, s > 0");
  return std::pow(p.eta / p.delta, 1.0 / p.q) +
         std::pow(p.delta * (p.q - 1.0) * s, -1.0 / (p.q - 1.0));
}

// ---------------------------------------------------------------------------
// Constants

std::vector<TheoryConstants::Entry> TheoryConstants::entries() const {
  return {
      {"lambda", lambda, "inf alpha'"},
      {"L1", L1, "sup alpha'"},
      {"C13", C13, "min Rayleigh quotient int|grad v|^m / int|v|^m on the grid"},
      {"C14", C14, "kappa * f_max / (sigma * |Omega|)^2"},
      {"C15", C15, "min(lambda * C13 / L1, lambda)"},
      {"eta", eta, "transient cutoff"},
      {"fitted_K", fitted_K, "smallest K with d(s) <= exp(K s) d(0)"},
  };
}

TheoryConstants compute_theory_constants(const ProblemSpec& spec, const Grid& grid) {
  spec.validate();
  TheoryConstants c;
  c.lambda = spec.material.lambda_low();
  c.L1 = spec.material.lip_L1();
  c.C13 = poincare_constant(grid, spec.m).value;
  c.C15 = std::min(c.lambda * c.C13 / c.L1, c.lambda);
  const double floor = spec.source.sigma() * grid.measure();
  c.C14 = spec.kappa * spec.source.f_max() / (floor * floor);
  return c;
}

double absorbing_radius_rho_s(const TheoryConstants& consts, double m, double s) {
  if (!(m > 2.0)) throw Error(ErrorCode::InvalidExponent, "absorbing radius needs m > 2");
  return ghidaglia_envelope({consts.C15, consts.C14, m - 1.0}, s);
}

double absorbing_radius(const MaterialLaw& law, double c_eta) {
  return std::max(std::abs(law.inverse(c_eta)), std::abs(law.inverse(-c_eta)));
}

// ---------------------------------------------------------------------------
// Contraction

ContractionResult contraction_estimate(const TrajectoryRecord& run_v,
                                       const TrajectoryRecord& run_u,
                                       const MaterialLaw& law, double degenerate_tol) {
  if (run_v.states.size() != run_v.rows.size() || run_u.states.size() != run_u.rows.size())
    throw Error(ErrorCode::InvalidArgument, "contraction_estimate needs recorded states");
  if (run_v.rows.size() != run_u.rows.size() || run_v.rows.empty())
    throw Error(ErrorCode::InvalidArgument, "runs have different record counts");
  ContractionResult out;
  for (std::size_t k = 0; k < run_v.rows.size(); ++k) {
    if (std::abs(run_v.rows[k].time - run_u.rows[k].time) > 1e-12 * (1.0 + run_v.rows[k].time))
      throw Error(ErrorCode::InvalidArgument, "record times differ");
    const Field& v = run_v.states[k];
    const Field& u = run_u.states[k];
    if (!(v.grid == u.grid)) throw Error(ErrorCode::InvalidArgument, "grids differ");
    std::vector<double> diff(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      diff[i] = std::abs(law.alpha(v[i]) - law.alpha(u[i]));
    out.times.push_back(run_v.rows[k].time);
    out.distance.push_back(integrate(v.grid, diff));
  }

  const double d0 = out.distance.front();
  if (d0 == 0.0) {
    out.degenerate = true;
    out.max_violation = *std::max_element(out.distance.begin(), out.distance.end());
    out.holds = out.max_violation <= degenerate_tol;
    return out;
  }

  double sxy = 0.0, sxx = 0.0, k_env = 0.0;
  for (std::size_t k = 1; k < out.times.size(); ++k) {
    const double s = out.times[k] - out.times[0];
    if (s <= 0.0 || out.distance[k] <= 0.0) continue;
    const double y = std::log(out.distance[k] / d0);
    sxy += s * y;
    sxx += s * s;
    k_env = std::max(k_env, y / s);
  }
  out.least_squares_K = sxx > 0.0 ? sxy / sxx : 0.0;
  out.fitted_K = std::max({0.0, out.least_squares_K, k_env});
  out.max_violation = -std::numeric_limits<double>::infinity();
  out.holds = true;
  for (std::size_t k = 0; k < out.times.size(); ++k) {
    const double bound = std::exp(out.fitted_K * (out.times[k] - out.times[0])) * d0;
    const double violation = out.distance[k] - bound;
    out.max_violation = std::max(out.max_violation, violation);
    if (violation > 1e-12 * bound) out.holds = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Snapshot sets

void SnapshotSet::add(const Field& f, int run_id, double time) {
  fields.push_back(f);
  run_ids.push_back(run_id);
  times.push_back(time);
}

double distance(const Field& a, const Field& b, NormKind norm) {
  if (!(a.grid == b.grid)) throw Error(ErrorCode::InvalidArgument, "fields live on different grids");
  std::vector<double> d(a.size());
  double sup = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d[k] = std::abs(a[k] - b[k]);
    sup = std::max(sup, d[k]);
  }
  switch (norm) {
    case NormKind::linf:
      return sup;
    case NormKind::l1:
      return integrate(a.grid, d);
    case NormKind::l2:
      for (double& x : d) x *= x;
      return std::sqrt(integrate(a.grid, d));
  }
  return sup;
}

double hausdorff_semidistance(const SnapshotSet& a, const SnapshotSet& b, NormKind norm) {
  if (a.fields.empty() || b.fields.empty())
    throw Error(ErrorCode::EmptySet, "semidistance of an empty snapshot set");
  double sup = 0.0;
  for (const auto& fa : a.fields) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& fb : b.fields) inf = std::min(inf, distance(fa, fb, norm));
    sup = std::max(sup, inf);
  }
  return sup;
}

SnapshotSet omega_limit_estimate(std::span<const TrajectoryRecord> ensemble, double cutoff,
                                 double merge_tol) {
  SnapshotSet out;
  for (std::size_t run = 0; run < ensemble.size(); ++run) {
    const auto& rec = ensemble[run];
    if (rec.states.size() != rec.rows.size())
      throw Error(ErrorCode::InvalidArgument, "omega_limit_estimate needs recorded states");
    for (std::size_t k = 0; k < rec.rows.size(); ++k) {
      if (rec.rows[k].time < cutoff) continue;
      const Field& f = rec.states[k];
      bool novel = true;
      for (const auto& kept : out.fields) {
        if (distance(f, kept, NormKind::linf) <= merge_tol) {
          novel = false;
          break;
        }
      }
      if (novel) out.add(f, static_cast<int>(run), rec.rows[k].time);
    }
  }
  if (out.fields.empty()) {
    std::ostringstream msg;
    msg << "no snapshots at or after cutoff " << cutoff;
    throw Error(ErrorCode::EmptySet, msg.str());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Envelope fit

EnvelopeFit fit_upper_envelope(std::span<const double> times, std::span<const double> values,
                               double exponent) {
  if (times.size() != values.size() || times.empty())
    throw Error(ErrorCode::InvalidArgument, "envelope fit needs equally sized, nonempty series");
  const std::size_t n = times.size();
  std::vector<double> phi(n);
  double phi_sum = 0.0, y_sum = 0.0, b_max = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(times[k] > 0.0)) throw Error(ErrorCode::InvalidArgument, "envelope fit needs s > 0");
    phi[k] = std::pow(times[k], -exponent);
    phi_sum += phi[k];
    y_sum += values[k];
    b_max = std::max(b_max, std::max(values[k], 0.0) / phi[k]);
  }
  // For fixed B the tightest feasible A is max(0, max_k y_k - B phi_k); the
  // summed gap n A + B sum(phi) - sum(y) is then convex piecewise linear in B.
  auto lift = [&](double b) {
    double a = 0.0;
    for (std::size_t k = 0; k < n; ++k) a = std::max(a, values[k] - b * phi[k]);
    return a;
  };
  auto objective = [&](double b) { return static_cast<double>(n) * lift(b) + b * phi_sum; };
  double lo = 0.0, hi = b_max;
  for (int it = 0; it < 300 && hi - lo > 1e-15 * (1.0 + b_max); ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (objective(m1) <= objective(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  EnvelopeFit fit;
  fit.exponent = exponent;
  fit.B = 0.5 * (lo + hi);
  fit.A = lift(fit.B);
  // Nudge A upward until rounding cannot leave a sample above the curve.
  for (int guard = 0; guard < 64; ++guard) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) worst = std::min(worst, fit.A + fit.B * phi[k] - values[k]);
    fit.min_margin = worst;
    if (worst >= 0.0) break;
    fit.A = std::nextafter(fit.A - worst, std::numeric_limits<double>::infinity());
  }
  fit.mean_gap = (static_cast<double>(n) * fit.A + fit.B * phi_sum - y_sum) / static_cast<double>(n);
  return fit;
}

}  // namespace thermistor
