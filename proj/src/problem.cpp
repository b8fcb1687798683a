#include "thermistor/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "thermistor/error.hpp"
#include "thermistor/random.hpp"

namespace thermistor {

const char* to_string(InitialFamily family) noexcept {
  switch (family) {
    case InitialFamily::zero: return "zero";
    case InitialFamily::constant: return "constant";
    case InitialFamily::sine: return "sine";
    case InitialFamily::bump: return "bump";
    case InitialFamily::fourier: return "fourier";
    case InitialFamily::step: return "step";
  }
  return "unknown";
}

double ManufacturedSolution::value(double x, double y, const Grid& grid, double s) const {
  double v = amplitude * std::exp(-s) * std::sin(std::numbers::pi * x / grid.extent(0));
  if (grid.dim() == 2) v *= std::sin(std::numbers::pi * y / grid.extent(1));
  return v;
}

void ProblemSpec::validate() const {
  std::ostringstream msg;
  if (!(m >= 2.0)) msg << "m must be >= 2 (got " << m << "); ";
  if (!(kappa >= 0.0)) msg << "kappa must be nonnegative (got " << kappa << "); ";
  if (!(reg_r >= 0.0)) msg << "reg_r must be >= 0 (got " << reg_r << "); ";
  if (!(horizon_M >= 0.0)) msg << "horizon must be >= 0 (got " << horizon_M << "); ";
  if (initial.family == InitialFamily::fourier &&
      initial.coefficients.size() !=
          static_cast<std::size_t>(grid.dim() == 1 ? initial.modes
                                                   : initial.modes * initial.modes))
    msg << "fourier coefficient count does not match modes; ";
  const auto text = msg.str();
  if (!text.empty()) throw Error(ErrorCode::InvalidArgument, text);
}

double nonlocal_coefficient_from_integral(const ProblemSpec& spec, double integral_f) {
  const double floor = 0.5 * spec.source.sigma() * spec.grid.measure();
  if (!(integral_f >= floor)) {
    std::ostringstream msg;
    msg << "integral of f is " << integral_f << ", below sigma|Omega|/2 = " << floor;
    throw Error(ErrorCode::DenominatorTooSmall, msg.str());
  }
  return spec.kappa / (integral_f * integral_f);
}

double nonlocal_coefficient(const ProblemSpec& spec, const Field& field) {
  std::vector<double> fv(field.size());
  for (std::size_t k = 0; k < field.size(); ++k) fv[k] = spec.source.value(field[k]);
  const double total = integrate(field.grid, fv, spec.source.value(0.0));
  return nonlocal_coefficient_from_integral(spec, total);
}

ProblemSpec regularize(const ProblemSpec& spec, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidR, "regularisation parameter must be positive");
  ProblemSpec out = spec;
  out.reg_r = r;
  out.initial.mollify_r = r;
  return out;
}

// ---------------------------------------------------------------------------

Field initial_field_raw(const InitialData& init, const Grid& grid) {
  const double pi = std::numbers::pi;
  const double lx = grid.extent(0);
  const double ly = grid.extent(1);
  const bool two_d = grid.dim() == 2;
  switch (init.family) {
    case InitialFamily::zero:
      return Field(grid);
    case InitialFamily::constant:
      return sample(grid, [&](double, double) { return init.amplitude; });
    case InitialFamily::sine:
      return sample(grid, [&](double x, double y) {
        double v = init.amplitude * std::sin(pi * x / lx);
        if (two_d) v *= std::sin(pi * y / ly);
        return v;
      });
    case InitialFamily::bump:
      return sample(grid, [&](double x, double y) {
        const double dx = (x / lx - init.center) / init.width;
        const double dy = two_d ? (y / ly - init.center) / init.width : 0.0;
        const double rho2 = dx * dx + dy * dy;
        if (rho2 >= 1.0) return 0.0;
        return init.amplitude * std::exp(1.0 - 1.0 / (1.0 - rho2));
      });
    case InitialFamily::fourier:
      return sample(grid, [&](double x, double y) {
        double v = 0.0;
        if (!two_d) {
          for (int k = 0; k < init.modes; ++k)
            v += init.coefficients[k] * std::sin((k + 1) * pi * x / lx);
          return v;
        }
        for (int b = 0; b < init.modes; ++b)
          for (int a = 0; a < init.modes; ++a)
            v += init.coefficients[static_cast<std::size_t>(b) * init.modes + a] *
                 std::sin((a + 1) * pi * x / lx) * std::sin((b + 1) * pi * y / ly);
        return v;
      });
    case InitialFamily::step:
      return sample(grid, [&](double x, double y) {
        const bool in_x = std::abs(x / lx - init.center) < init.width;
        const bool in_y = !two_d || std::abs(y / ly - init.center) < init.width;
        return in_x && in_y ? init.amplitude : 0.0;
      });
  }
  return Field(grid);
}

namespace {

std::vector<double> mollifier_weights(double radius, double h) {
  const int reach = static_cast<int>(std::floor(radius / h));
  std::vector<double> w(2 * static_cast<std::size_t>(reach) + 1, 0.0);
  double total = 0.0;
  for (int k = -reach; k <= reach; ++k) {
    const double x = k * h / radius;
    const double val = std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
    w[static_cast<std::size_t>(k + reach)] = val;
    total += val;
  }
  for (double& x : w) x /= total;
  return w;
}

}  // namespace

Field initial_field(const InitialData& init, const Grid& grid) {
  Field raw = initial_field_raw(init, grid);
  if (init.mollify_r <= 0.0) return raw;

  double sup = 0.0;
  for (double v : raw.values) sup = std::max(sup, std::abs(v));

  Field current = raw;
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const auto w = mollifier_weights(init.mollify_r * grid.extent(axis), grid.spacing(axis));
    const int reach = static_cast<int>(w.size() / 2);
    if (reach == 0) continue;
    Field next(grid);
    for (int j = 1; j <= grid.interior(1); ++j) {
      for (int i = 1; i <= grid.interior(0); ++i) {
        double acc = 0.0;
        for (int k = -reach; k <= reach; ++k) {
          const double wk = w[static_cast<std::size_t>(k + reach)];
          acc += wk * (axis == 0 ? current.at(i + k, j) : current.at(i, j + k));
        }
        next[grid.index(i, j)] = acc;
      }
    }
    current = std::move(next);
  }
  const double cap = sup + 1.0;
  for (double& v : current.values) v = std::clamp(v, -cap, cap);
  return current;
}

InitialData random_fourier(double amplitude, int modes, int dim, std::uint64_t seed) {
  InitialData init;
  init.family = InitialFamily::fourier;
  init.amplitude = amplitude;
  init.modes = modes;
  const std::size_t count = dim == 1 ? static_cast<std::size_t>(modes)
                                     : static_cast<std::size_t>(modes) * modes;
  std::mt19937_64 rng(seed);
  double total = 0.0;
  init.coefficients.resize(count);
  for (auto& c : init.coefficients) {
    c = uniform(rng, -1.0, 1.0);
    total += std::abs(c);
  }
  if (total > 0.0)
    for (auto& c : init.coefficients) c *= amplitude / total;
  return init;
}

}  // namespace thermistor
