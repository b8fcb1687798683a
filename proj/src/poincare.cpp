#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "thermistor/error.hpp"
#include "thermistor/grid.hpp"
#include "thermistor/random.hpp"

namespace thermistor {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

// Standard 3-point / 5-point Dirichlet Laplacian, sign chosen positive
// definite.
SparseMatrix dirichlet_laplacian(const Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.interior_count());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(n) * 5);
  for (int j = 1; j <= grid.interior(1); ++j) {
    for (int i = 1; i <= grid.interior(0); ++i) {
      const auto row = static_cast<Eigen::Index>(grid.index(i, j));
      double diag = 0.0;
      for (int axis = 0; axis < grid.dim(); ++axis) {
        const double inv_h2 = 1.0 / (grid.spacing(axis) * grid.spacing(axis));
        diag += 2.0 * inv_h2;
        for (int step : {-1, 1}) {
          const int ni = axis == 0 ? i + step : i;
          const int nj = axis == 1 ? j + step : j;
          if (ni < 1 || ni > grid.interior(0) || nj < 1 || nj > grid.interior(1)) continue;
          entries.emplace_back(row, static_cast<Eigen::Index>(grid.index(ni, nj)), -inv_h2);
        }
      }
      entries.emplace_back(row, row, diag);
    }
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

double rayleigh(const Field& v, double m) {
  const double den = std::pow(lp_norm(v, m), m);
  return w1m_seminorm(v, m) / den;
}

struct DescentOutcome {
  double value = 0.0;
  int iterations = 0;
  double last_change = 0.0;
  bool converged = false;
};

// Minimises the Rayleigh quotient N(v)/D(v) with N = integral |grad v|^m and
// D = integral |v|^m, using the Laplacian as preconditioner.
DescentOutcome minimise_quotient(Field v, double m,
                                 const Eigen::SimplicialLDLT<SparseMatrix>& precond,
                                 const PoincareOptions& opt) {
  const Grid& grid = v.grid;
  const double w = grid.node_weight();
  DescentOutcome out;
  auto normalise = [&](Field& f) {
    const double nrm = lp_norm(f, m);
    for (double& x : f.values) x /= nrm;
  };
  normalise(v);
  double value = rayleigh(v, m);
  double tau = 1.0;
  int calm = 0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    out.iterations = it;
    // D(v) = 1 after normalisation.
    const auto gn = w1m_seminorm_gradient(v, m);
    Vector grad(static_cast<Eigen::Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double dd = w * m * std::pow(std::abs(v[k]), m - 2.0) * v[k];
      grad[static_cast<Eigen::Index>(k)] = gn[k] - value * dd;
    }
    Vector dir = -precond.solve(grad);
    const double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      out.converged = true;
      break;
    }
    // Step scale relative to the current iterate.
    double step = tau;
    Field trial(grid);
    double trial_value = value;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t k = 0; k < v.size(); ++k)
        trial[k] = v[k] + step * dir[static_cast<Eigen::Index>(k)];
      trial_value = rayleigh(trial, m);
      if (std::isfinite(trial_value) && trial_value <= value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      out.converged = true;  // no descent possible at working precision
      break;
    }
    tau = std::min(step * 2.0, 1e6);
    normalise(trial);
    trial_value = rayleigh(trial, m);
    out.last_change = std::abs(value - trial_value) / std::max(1e-300, std::abs(value));
    v = std::move(trial);
    value = trial_value;
    if (out.last_change < opt.tolerance) {
      if (++calm >= 3) {
        out.converged = true;
        break;
      }
    } else {
      calm = 0;
    }
  }
  out.value = value;
  return out;
}

}  // namespace

PoincareResult poincare_constant(const Grid& grid, double m,
                                 const PoincareOptions& opt) {
  if (!(m > 1.0)) throw Error(ErrorCode::InvalidExponent, "Poincare exponent must exceed 1");
  const SparseMatrix lap = dirichlet_laplacian(grid);
  Eigen::SimplicialLDLT<SparseMatrix> solver(lap);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NonConvergence, "Laplacian factorisation failed");

  // Inverse power iteration for the smallest Laplacian eigenpair.
  const auto n = lap.rows();
  Vector x = Vector::Ones(n);
  x.normalize();
  double lambda = x.dot(lap * x);
  PoincareResult result;
  bool converged = false;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Vector y = solver.solve(x);
    y.normalize();
    const double next = y.dot(lap * y);
    result.iterations = it;
    result.last_change = std::abs(next - lambda) / next;
    x = y;
    lambda = next;
    if (result.last_change < opt.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "inverse power iteration stalled after " << result.iterations
        << " iterations (relative change " << result.last_change << ")";
    throw Error(ErrorCode::NonConvergence, msg.str());
  }
  if (m == 2.0) {
    result.value = lambda;
    return result;
  }

  // General m: the m = 2 eigenvector and smoothed random fields seed a
  // preconditioned descent on the Rayleigh quotient; the smallest value wins.
  std::vector<Field> starts;
  starts.emplace_back(grid, std::vector<double>(x.data(), x.data() + n));
  std::mt19937_64 rng(opt.seed);
  for (int s = 0; s < opt.random_starts; ++s) {
    Vector r(n);
    for (Eigen::Index k = 0; k < n; ++k) r[k] = uniform(rng, 0.0, 1.0);
    Vector smooth = solver.solve(r);
    starts.emplace_back(grid, std::vector<double>(smooth.data(), smooth.data() + n));
  }

  double best = std::numeric_limits<double>::infinity();
  bool any_converged = false;
  int total_iterations = result.iterations;
  double last_change = 0.0;
  for (const auto& start : starts) {
    const auto outcome = minimise_quotient(start, m, solver, opt);
    total_iterations += outcome.iterations;
    if (outcome.converged) any_converged = true;
    if (outcome.value < best) {
      best = outcome.value;
      last_change = outcome.last_change;
    }
  }
  if (!any_converged) {
    std::ostringstream msg;
    msg << "Rayleigh quotient descent stalled: best value " << best
        << ", last relative change " << last_change << " after "
        << total_iterations << " iterations";
    throw Error(ErrorCode::NonConvergence, msg.str());
  }
  result.value = best;
  result.iterations = total_iterations;
  result.last_change = last_change;
  return result;
}

}  // namespace thermistor
