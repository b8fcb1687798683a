#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "thermistor/grid.hpp"
#include "thermistor/model.hpp"
#include "thermistor/problem.hpp"
#include "thermistor/solver.hpp"

namespace thermistor {

// ---------------------------------------------------------------------------
// Monotonicity of the vector m-power map

struct TartarResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// C(m) = 2^{2-m} for m >= 2 and m - 1 for 1 < m < 2.
double tartar_constant(double m);

/// lhs = (|a|^{m-2} a - |b|^{m-2} b) . (a - b);
/// rhs = C(m)|a-b|^m (m >= 2) or C(m)|a-b|^2/(|a|+|b|)^{2-m} (1 < m < 2);
/// holds when lhs >= rhs - 1e-12 (1 + rhs).
TartarResult tartar_check(std::span<const double> a, std::span<const double> b, double m);

// ---------------------------------------------------------------------------
// Differential inequalities

struct GronwallResult {
  bool holds = false;
  double max_violation = 0.0;    // max of z - bound (<= 0 when it holds)
  std::size_t worst_index = 0;
};

/// Verifies z(s) <= exp(int_0^s h) (z(0) + int_0^s g) at every sample
/// (trapezoid quadrature), up to bound_tol relative slack. The hypothesis
/// z' <= h z + g is checked first on each interval, difference quotient
/// against the trapezoid average of the right-hand side; a violation beyond
/// hypothesis_tol (relative) throws HypothesisViolated.
GronwallResult gronwall_check(std::span<const double> times, std::span<const double> z,
                              std::span<const double> h, std::span<const double> g,
                              double hypothesis_tol = 1e-6, double bound_tol = 1e-10);

struct GhidagliaParams {
  double delta = 1.0;
  double eta = 0.0;
  double q = 2.0;
};

/// (eta/delta)^{1/q} + (delta (q-1) s)^{-1/(q-1)}.
double ghidaglia_envelope(const GhidagliaParams& params, double s);

// ---------------------------------------------------------------------------
// Constants of the absorbing-set estimate

struct TheoryConstants {
  double lambda = 0.0;  // alpha' lower bound
  double L1 = 0.0;      // alpha Lipschitz constant
  double C13 = 0.0;     // discrete Poincare constant for exponent m
  double C14 = 0.0;     // source bound kappa f_max / (sigma |Omega|)^2
  double C15 = 0.0;     // min(lambda C13 / L1, lambda)
  double eta = 0.0;     // transient cutoff used for rho
  double fitted_K = 0.0;

  struct Entry {
    std::string name;
    double value;
    std::string formula;
  };
  std::vector<Entry> entries() const;
};

/// C13 from poincare_constant(grid, m), C15 = min(lambda C13 / L1, lambda),
/// C14 = kappa f_max / (sigma |Omega|)^2.
TheoryConstants compute_theory_constants(const ProblemSpec& spec, const Grid& grid);

/// rho_s = (C14/C15)^{1/(m-1)} + (C15 (m-2) s)^{-1/(m-2)}, the Ghidaglia
/// envelope with q = m - 1. Throws InvalidExponent for m <= 2.
double absorbing_radius_rho_s(const TheoryConstants& consts, double m, double s);

/// max(|alpha^{-1}(C)|, |alpha^{-1}(-C)|).
double absorbing_radius(const MaterialLaw& law, double c_eta);

// ---------------------------------------------------------------------------
// L1 contraction

struct ContractionResult {
  std::vector<double> times;
  std::vector<double> distance;  // ||alpha(v(s)) - alpha(u(s))||_1
  bool degenerate = false;       // d(0) == 0
  double fitted_K = 0.0;         // minimal exponent with d(s) <= e^{K s} d(0)
  double least_squares_K = 0.0;  // slope of log(d/d0) against s
  double max_violation = 0.0;    // max of d(s) - e^{K s} d(0)
  bool holds = false;
};

/// Compares two runs record by record. With d(0) = 0 the fit is skipped and
/// the check requires d(s) <= degenerate_tol throughout. Otherwise fitted_K is
/// the smallest exponent for which d(s) <= e^{K s} d(0) at every record time
/// (floored at the least-squares slope and at 0), and the bound is verified
/// with it. Throws InvalidArgument when the runs do not line up.
ContractionResult contraction_estimate(const TrajectoryRecord& run_v,
                                       const TrajectoryRecord& run_u,
                                       const MaterialLaw& law, double degenerate_tol);

// ---------------------------------------------------------------------------
// Snapshot sets

enum class NormKind { linf, l1, l2 };

struct SnapshotSet {
  std::vector<Field> fields;
  std::vector<int> run_ids;
  std::vector<double> times;

  std::size_t size() const noexcept { return fields.size(); }
  void add(const Field& f, int run_id, double time);
};

double distance(const Field& a, const Field& b, NormKind norm);

/// sup_{a in A} inf_{b in B} ||a - b||. Throws EmptySet when either set is
/// empty, InvalidArgument when grids differ.
double hausdorff_semidistance(const SnapshotSet& a, const SnapshotSet& b,
                              NormKind norm = NormKind::linf);

/// Snapshots with time >= cutoff from every trajectory (in order), keeping a
/// snapshot only if it is farther than merge_tol (L-infinity) from all kept
/// ones. Throws EmptySet when nothing survives the cutoff.
SnapshotSet omega_limit_estimate(std::span<const TrajectoryRecord> ensemble, double cutoff,
                                 double merge_tol);

// ---------------------------------------------------------------------------
// Envelope fit for the absorbing-ball decay shape

struct EnvelopeFit {
  double A = 0.0;
  double B = 0.0;
  double exponent = 0.0;  // curve A + B s^{-exponent}
  double min_margin = 0.0;
  double mean_gap = 0.0;  // mean of curve - data
};

/// Tightest curve A + B s^{-exponent} with A, B >= 0 lying above every
/// sample (minimises the summed gap). times must be positive.
EnvelopeFit fit_upper_envelope(std::span<const double> times, std::span<const double> values,
                               double exponent);

}  // namespace thermistor
