#include "thermistor/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermistor/error.hpp"

namespace thermistor {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidR: return "InvalidR";
    case ErrorCode::DenominatorTooSmall: return "DenominatorTooSmall";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::OracleFailure: return "OracleFailure";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

const char* to_string(MaterialFamily family) noexcept {
  switch (family) {
    case MaterialFamily::identity: return "identity";
    case MaterialFamily::smoothed_piecewise: return "smoothed-piecewise";
    case MaterialFamily::cubic_affine: return "cubic-affine";
  }
  return "unknown";
}

const char* to_string(SourceFamily family) noexcept {
  switch (family) {
    case SourceFamily::constant_floor: return "constant-floor";
    case SourceFamily::gaussian_bump: return "gaussian-bump";
  }
  return "unknown";
}

namespace {

// Cubic smoothstep S and its first two antiderivatives, all vanishing for
// x <= 0.
double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * (3.0 - 2.0 * x);
}

double smoothstep_int1(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 0.5 + (x - 1.0);
  return x * x * x * (1.0 - 0.5 * x);
}

double smoothstep_int2(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) {
    const double y = x - 1.0;
    return 0.15 + 0.5 * y + 0.5 * y * y;
  }
  const double x4 = x * x * x * x;
  return x4 * (0.25 - 0.1 * x);
}

double bump(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

double bump_prime(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  const double d = 1.0 - x * x;
  return bump(x) * (-2.0 * x / (d * d));
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace

double bump_derivative_bound() {
  static const double bound = [] {
    // |b'| is unimodal on (0, 1); golden-section search for its maximum.
    auto g = [](double x) { return std::abs(bump_prime(x)); };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = 1.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      if (g(c) > g(d)) {
        b = d;
      } else {
        a = c;
      }
      c = b - phi * (b - a);
      d = a + phi * (b - a);
    }
    return g(0.5 * (a + b));
  }();
  return bound;
}

// ---------------------------------------------------------------------------
// MaterialLaw

MaterialLaw MaterialLaw::identity() { return MaterialLaw{}; }

MaterialLaw MaterialLaw::smoothed_piecewise(double slope_low, double slope_high,
                                            double center, double width) {
  require(slope_low > 0.0 && slope_high > 0.0,
          "smoothed-piecewise slopes must be positive");
  require(width > 0.0, "smoothed-piecewise width must be positive");
  MaterialLaw law;
  law.family_ = MaterialFamily::smoothed_piecewise;
  law.p0_ = slope_low;
  law.p1_ = slope_high;
  law.p2_ = center;
  law.p3_ = width;
  law.lambda_low_ = std::min(slope_low, slope_high);
  law.lip_L1_ = std::max(slope_low, slope_high);
  const double start = center - 0.5 * width;
  law.shift_ = (slope_high - slope_low) * width * smoothstep_int1(-start / width);
  return law;
}

MaterialLaw MaterialLaw::cubic_affine(double linear, double cubic, double knot) {
  require(linear > 0.0, "cubic-affine linear coefficient must be positive");
  require(cubic >= 0.0, "cubic-affine cubic coefficient must be nonnegative");
  require(knot > 0.0, "cubic-affine knot must be positive");
  MaterialLaw law;
  law.family_ = MaterialFamily::cubic_affine;
  law.p0_ = linear;
  law.p1_ = cubic;
  law.p2_ = knot;
  law.lambda_low_ = linear;
  law.lip_L1_ = linear + 3.0 * cubic * knot * knot;
  return law;
}

double MaterialLaw::alpha(double t) const {
  switch (family_) {
    case MaterialFamily::identity:
      return t;
    case MaterialFamily::smoothed_piecewise: {
      const double start = p2_ - 0.5 * p3_;
      return p0_ * t + (p1_ - p0_) * p3_ * smoothstep_int1((t - start) / p3_) -
             shift_;
    }
    case MaterialFamily::cubic_affine: {
      const double a = std::abs(t);
      const double sign = t < 0.0 ? -1.0 : 1.0;
      if (a <= p2_) return t * (p0_ + p1_ * t * t);
      const double at_knot = p2_ * (p0_ + p1_ * p2_ * p2_);
      return sign * (at_knot + lip_L1_ * (a - p2_));
    }
  }
  return t;
}

double MaterialLaw::alpha_prime(double t) const {
  switch (family_) {
    case MaterialFamily::identity:
      return 1.0;
    case MaterialFamily::smoothed_piecewise: {
      const double start = p2_ - 0.5 * p3_;
      return p0_ + (p1_ - p0_) * smoothstep((t - start) / p3_);
    }
    case MaterialFamily::cubic_affine:
      if (std::abs(t) <= p2_) return p0_ + 3.0 * p1_ * t * t;
      return lip_L1_;
  }
  return 1.0;
}

double MaterialLaw::psi(double t) const {
  switch (family_) {
    case MaterialFamily::identity:
      return 0.5 * t * t;
    case MaterialFamily::smoothed_piecewise: {
      const double start = p2_ - 0.5 * p3_;
      const double w2 = p3_ * p3_;
      return 0.5 * p0_ * t * t +
             (p1_ - p0_) * w2 *
                 (smoothstep_int2((t - start) / p3_) -
                  smoothstep_int2(-start / p3_)) -
             shift_ * t;
    }
    case MaterialFamily::cubic_affine: {
      // even function
      const double a = std::abs(t);
      if (a <= p2_) return a * a * (0.5 * p0_ + 0.25 * p1_ * a * a);
      const double k = p2_;
      const double psi_knot = k * k * (0.5 * p0_ + 0.25 * p1_ * k * k);
      const double alpha_knot = k * (p0_ + p1_ * k * k);
      const double y = a - k;
      return psi_knot + alpha_knot * y + 0.5 * lip_L1_ * y * y;
    }
  }
  return 0.5 * t * t;
}

double MaterialLaw::psi_star_of_alpha(double t) const {
  return t * alpha(t) - psi(t);
}

double MaterialLaw::inverse(double y) const {
  if (family_ == MaterialFamily::identity) return y;
  if (y == 0.0) return 0.0;
  // |alpha(t)| >= lambda |t| brackets the root.
  double lo = -std::abs(y) / lambda_low_;
  double hi = std::abs(y) / lambda_low_;
  double t = y / alpha_prime(0.0);
  t = std::clamp(t, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double res = alpha(t) - y;
    if (res == 0.0) return t;
    if (res > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    double next = t - res / alpha_prime(t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(1.0, std::abs(t))) {
      return next;
    }
    t = next;
  }
  return t;
}

double MaterialLaw::psi_star(double y) const {
  const double r = inverse(y);
  return r * y - psi(r);
}

NamedValues MaterialLaw::parameters() const {
  switch (family_) {
    case MaterialFamily::identity:
      return {};
    case MaterialFamily::smoothed_piecewise:
      return {{"slope_low", p0_}, {"slope_high", p1_}, {"center", p2_},
              {"width", p3_}};
    case MaterialFamily::cubic_affine:
      return {{"linear", p0_}, {"cubic", p1_}, {"knot", p2_}};
  }
  return {};
}

double legendre_psi(const MaterialLaw& law, double t) { return law.psi(t); }

double legendre_psi_star_of_alpha(const MaterialLaw& law, double t) {
  return law.psi_star_of_alpha(t);
}

// ---------------------------------------------------------------------------
// SourceLaw

SourceLaw SourceLaw::constant_floor(double sigma) {
  require(sigma > 0.0, "source floor sigma must be positive");
  SourceLaw law;
  law.sigma_ = sigma;
  return law;
}

SourceLaw SourceLaw::gaussian_bump(double sigma, double amplitude,
                                   double center, double width) {
  require(sigma > 0.0, "source floor sigma must be positive");
  require(amplitude >= 0.0, "bump amplitude must be nonnegative");
  require(width > 0.0, "bump width must be positive");
  SourceLaw law;
  law.family_ = SourceFamily::gaussian_bump;
  law.sigma_ = sigma;
  law.amplitude_ = amplitude;
  law.center_ = center;
  law.width_ = width;
  return law;
}

double SourceLaw::value(double s) const {
  if (family_ == SourceFamily::constant_floor) return sigma_;
  return sigma_ + amplitude_ * bump((s - center_) / width_);
}

double SourceLaw::derivative(double s) const {
  if (family_ == SourceFamily::constant_floor) return 0.0;
  return amplitude_ / width_ * bump_prime((s - center_) / width_);
}

double SourceLaw::lipschitz() const noexcept {
  if (family_ == SourceFamily::constant_floor) return 0.0;
  return amplitude_ / width_ * bump_derivative_bound();
}

NamedValues SourceLaw::parameters() const {
  if (family_ == SourceFamily::constant_floor) return {{"sigma", sigma_}};
  return {{"sigma", sigma_},
          {"amplitude", amplitude_},
          {"center", center_},
          {"width", width_}};
}

}  // namespace thermistor
