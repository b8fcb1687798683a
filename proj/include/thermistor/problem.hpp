#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thermistor/grid.hpp"
#include "thermistor/model.hpp"

namespace thermistor {

enum class InitialFamily { zero, constant, sine, bump, fourier, step };

const char* to_string(InitialFamily family) noexcept;

/// Initial field descriptor. Shapes are evaluated at the grid nodes:
///   constant  amplitude on every interior node
///   sine      amplitude * prod_d sin(pi x_d / l_d)
///   bump      amplitude * exp(1 - 1/(1 - rho^2)), rho = |x - center| / width
///   fourier   sum_k coefficients[k] * sin(k1 pi x/lx) [* sin(k2 pi y/ly)],
///             modes enumerated row-major over modes x modes in 2D
///   step      amplitude on |x - center| < width (per axis), 0 elsewhere
struct InitialData {
  InitialFamily family = InitialFamily::sine;
  double amplitude = 1.0;
  double center = 0.5;  // relative to the extent, per axis
  double width = 0.25;  // relative to the extent
  std::vector<double> coefficients;
  int modes = 0;        // fourier modes per axis
  /// Mollification parameter; the convolution radius is mollify_r * extent.
  double mollify_r = 0.0;
};

/// Optional manufactured-solution forcing, v*(x, s) = amplitude * e^{-s} *
/// prod_d sin(pi x_d / l_d). When enabled the solver adds
/// g = d alpha(v*)/ds - Delta_m^r v* - c(v*) f(v*) to the source.
struct ManufacturedSolution {
  bool enabled = false;
  double amplitude = 1.0;

  double value(double x, double y, const Grid& grid, double s) const;
};

struct ProblemSpec {
  double m = 2.0;
  double kappa = 1.0;
  // Provenance for kappa = I^2 / B^2, when configured that way.
  std::optional<double> current_I;
  std::optional<double> area_B;
  Grid grid = Grid::interval(1.0, 64);
  double horizon_M = 1.0;
  MaterialLaw material = MaterialLaw::identity();
  SourceLaw source = SourceLaw::constant_floor(1.0);
  double reg_r = 0.0;
  InitialData initial;
  ManufacturedSolution mms;

  /// Throws Error(InvalidArgument) when m < 2, kappa < 0, reg_r < 0 or
  /// horizon_M < 0. kappa = 0 is admitted to switch the source off in tests.
  void validate() const;
};

/// kappa / (integral_Omega f(v) dx)^2. Throws DenominatorTooSmall when the
/// integral drops below sigma |Omega| / 2.
double nonlocal_coefficient(const ProblemSpec& spec, const Field& field);

/// Same coefficient computed from a precomputed integral of f(v).
double nonlocal_coefficient_from_integral(const ProblemSpec& spec, double integral_f);

/// Returns the problem with reg_r = r and mollified initial data. The built-in
/// laws already satisfy the C^1 / derivative-floor requirements, so they are
/// carried over unchanged. Throws InvalidR for r <= 0.
ProblemSpec regularize(const ProblemSpec& spec, double r);

/// Raw (unmollified) initial data on the grid.
Field initial_field_raw(const InitialData& initial, const Grid& grid);

/// Initial data on the grid with the descriptor's mollification applied:
/// discrete convolution with a normalised compact bump of radius
/// mollify_r * extent, zero extension outside Omega, clamped to
/// ||v0||_inf + 1.
Field initial_field(const InitialData& initial, const Grid& grid);

/// Random Fourier coefficients with sum |a_k| <= amplitude.
InitialData random_fourier(double amplitude, int modes, int dim, std::uint64_t seed);

}  // namespace thermistor
