#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "thermistor/error.hpp"
#include "thermistor/solver.hpp"

namespace thermistor {

namespace {

using Real = long double;
using Vec = std::vector<Real>;

constexpr Real kTargetResidual = 1e-13L;
constexpr Real kAcceptResidual = 1e-12L;

// Self-contained residual of the backward-Euler system with the nonlocal
// coefficient evaluated from the unknown itself.
class OracleSystem {
 public:
  OracleSystem(const ProblemSpec& spec, const Field& old, double dt, double time)
      : spec_(spec), grid_(old.grid), dt_(dt) {
    alpha_old_.resize(old.size());
    for (std::size_t k = 0; k < old.size(); ++k) alpha_old_[k] = spec.material.alpha(old[k]);
    const auto g = manufactured_forcing(spec, time + dt);
    forcing_.assign(g.begin(), g.end());
  }

  Vec residual(const Vec& w) const {
    const std::size_t n = w.size();
    Vec div = divergence(w);
    const Real weight = grid_.node_weight();
    Real total_f = 0.0L;
    for (Real x : w) total_f += weight * spec_.source.value(static_cast<double>(x));
    total_f += static_cast<Real>(spec_.source.value(0.0)) *
               (static_cast<Real>(grid_.measure()) - weight * static_cast<Real>(n));
    const Real c = static_cast<Real>(spec_.kappa) / (total_f * total_f);
    Vec out(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double wk = static_cast<double>(w[k]);
      out[k] = static_cast<Real>(spec_.material.alpha(wk)) - alpha_old_[k] -
               static_cast<Real>(dt_) *
                   (div[k] + c * static_cast<Real>(spec_.source.value(wk)) + forcing_[k]);
    }
    return out;
  }

 private:
  Real node(const Vec& w, int i, int j) const {
    if (i <= 0 || i >= grid_.cells(0)) return 0.0L;
    if (grid_.dim() == 2 && (j <= 0 || j >= grid_.cells(1))) return 0.0L;
    return w[grid_.index(i, grid_.dim() == 2 ? j : 1)];
  }

  Real coefficient(Real mag2) const {
    const Real m = spec_.m;
    if (m == 2.0L) return 1.0L;
    const Real base = mag2 + static_cast<Real>(spec_.reg_r);
    if (base <= 0.0L) return 0.0L;
    return std::pow(base, (m - 2.0L) / 2.0L);
  }

  Vec divergence(const Vec& w) const {
    Vec out(w.size(), 0.0L);
    const Real hx = grid_.spacing(0);
    if (grid_.dim() == 1) {
      for (int i = 1; i < grid_.cells(0); ++i) {
        const Real gr = (node(w, i + 1, 1) - node(w, i, 1)) / hx;
        const Real gl = (node(w, i, 1) - node(w, i - 1, 1)) / hx;
        out[grid_.index(i)] = (coefficient(gr * gr) * gr - coefficient(gl * gl) * gl) / hx;
      }
      return out;
    }
    const Real hy = grid_.spacing(1);
    // x-directed flux through the face between (i, j) and (i + 1, j)
    auto flux_x = [&](int i, int j) {
      const Real gn = (node(w, i + 1, j) - node(w, i, j)) / hx;
      const Real gt = ((node(w, i, j + 1) - node(w, i, j - 1)) +
                       (node(w, i + 1, j + 1) - node(w, i + 1, j - 1))) /
                      (4.0L * hy);
      return coefficient(gn * gn + gt * gt) * gn;
    };
    auto flux_y = [&](int i, int j) {
      const Real gn = (node(w, i, j + 1) - node(w, i, j)) / hy;
      const Real gt = ((node(w, i + 1, j) - node(w, i - 1, j)) +
                       (node(w, i + 1, j + 1) - node(w, i - 1, j + 1))) /
                      (4.0L * hx);
      return coefficient(gn * gn + gt * gt) * gn;
    };
    for (int j = 1; j < grid_.cells(1); ++j)
      for (int i = 1; i < grid_.cells(0); ++i)
        out[grid_.index(i, j)] =
            (flux_x(i, j) - flux_x(i - 1, j)) / hx + (flux_y(i, j) - flux_y(i, j - 1)) / hy;
    return out;
  }

  const ProblemSpec& spec_;
  Grid grid_;
  double dt_;
  Vec alpha_old_;
  Vec forcing_;
};

Real max_abs(const Vec& v) {
  Real out = 0.0L;
  for (Real x : v) {
    if (!std::isfinite(x)) return INFINITY;
    out = std::max(out, std::abs(x));
  }
  return out;
}

Real norm2(const Vec& v) {
  Real out = 0.0L;
  for (Real x : v) out += x * x;
  return std::sqrt(out);
}

// Gaussian elimination with partial pivoting; b is overwritten by the
// solution.
bool dense_solve(std::vector<Vec> a, Vec& b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0L) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Real f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    Real acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * b[c];
    b[r] = acc / a[r][r];
  }
  return true;
}

// Damped Newton with a central-difference Jacobian. Returns the final
// residual max-norm.
Real newton(const OracleSystem& sys, Vec& w, int max_iters) {
  const std::size_t n = w.size();
  Vec res = sys.residual(w);
  Real rmax = max_abs(res);
  for (int it = 0; it < max_iters && rmax > kTargetResidual; ++it) {
    std::vector<Vec> jac(n, Vec(n));
    for (std::size_t j = 0; j < n; ++j) {
      const Real eps = 1e-7L * std::max<Real>(1.0L, std::abs(w[j]));
      Vec wp = w, wm = w;
      wp[j] += eps;
      wm[j] -= eps;
      const Vec rp = sys.residual(wp), rm = sys.residual(wm);
      for (std::size_t i = 0; i < n; ++i) jac[i][j] = (rp[i] - rm[i]) / (2.0L * eps);
    }
    Vec delta(n);
    for (std::size_t i = 0; i < n; ++i) delta[i] = -res[i];
    if (!dense_solve(jac, delta)) break;
    const Real r2 = norm2(res);
    Real lambda = 1.0L;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      Vec trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = w[i] + lambda * delta[i];
      Vec tr = sys.residual(trial);
      if (norm2(tr) < r2) {
        w = std::move(trial);
        res = std::move(tr);
        accepted = true;
        break;
      }
      lambda *= 0.5L;
    }
    if (!accepted) break;
    rmax = max_abs(res);
  }
  return rmax;
}

// Nonlinear Gauss-Seidel: bisection on each coordinate's own residual.
void bisection_sweeps(const OracleSystem& sys, Vec& w, int sweeps) {
  const std::size_t n = w.size();
  for (int s = 0; s < sweeps; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      auto ri = [&](Real x) {
        Vec t = w;
        t[i] = x;
        return sys.residual(t)[i];
      };
      Real lo = w[i], hi = w[i];
      Real step = 1e-3L * std::max<Real>(1.0L, std::abs(w[i]));
      Real rlo = ri(lo), rhi = rlo;
      int grow = 0;
      while (rlo > 0.0L && grow < 200) {
        lo -= step;
        step *= 2.0L;
        rlo = ri(lo);
        ++grow;
      }
      step = 1e-3L * std::max<Real>(1.0L, std::abs(w[i]));
      while (rhi < 0.0L && grow < 400) {
        hi += step;
        step *= 2.0L;
        rhi = ri(hi);
        ++grow;
      }
      if (!(rlo <= 0.0L && rhi >= 0.0L)) continue;
      for (int b = 0; b < 200 && hi - lo > 0.0L; ++b) {
        const Real mid = 0.5L * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (ri(mid) > 0.0L) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      w[i] = 0.5L * (lo + hi);
    }
    if (max_abs(sys.residual(w)) <= kTargetResidual) return;
  }
}

}  // namespace

Field brute_force_step(const Field& state, const ProblemSpec& spec, double dt, double time) {
  if (state.size() > 8)
    throw Error(ErrorCode::InvalidArgument, "brute_force_step supports at most 8 interior nodes");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  spec.validate();
  const OracleSystem sys(spec, state, dt, time);
  Vec w(state.values.begin(), state.values.end());
  Real res = newton(sys, w, 100);
  if (res > kTargetResidual) {
    bisection_sweeps(sys, w, 500);
    res = newton(sys, w, 100);
  }
  if (!(res <= kAcceptResidual)) {
    std::ostringstream msg;
    msg << "oracle residual " << static_cast<double>(res) << " above 1e-12";
    throw Error(ErrorCode::OracleFailure, msg.str());
  }
  Field out(state.grid);
  for (std::size_t k = 0; k < w.size(); ++k) out[k] = static_cast<double>(w[k]);
  return out;
}

}  // namespace thermistor
