#pragma once

#include <string>
#include <utility>
#include <vector>

namespace thermistor {

enum class MaterialFamily { identity, smoothed_piecewise, cubic_affine };
enum class SourceFamily { constant_floor, gaussian_bump };

const char* to_string(MaterialFamily family) noexcept;
const char* to_string(SourceFamily family) noexcept;

using NamedValues = std::vector<std::pair<std::string, double>>;

/// Increasing C^1 constitutive law alpha with alpha(0) = 0 and
/// lambda_low <= alpha' <= lip_L1 everywhere.
///
/// Three closed-form families are provided:
///   identity            alpha(t) = t
///   smoothed-piecewise  alpha' ramps from slope_low to slope_high across
///                       [center - width/2, center + width/2] along a
///                       cubic smoothstep
///   cubic-affine        alpha(t) = linear*t + cubic*t^3 for |t| <= knot,
///                       continued affinely (C^1) beyond the knot
class MaterialLaw {
 public:
  static MaterialLaw identity();
  static MaterialLaw smoothed_piecewise(double slope_low, double slope_high,
                                        double center, double width);
  static MaterialLaw cubic_affine(double linear, double cubic, double knot);

  MaterialFamily family() const noexcept { return family_; }

  double alpha(double t) const;
  double alpha_prime(double t) const;
  /// Antiderivative of alpha vanishing at 0.
  double psi(double t) const;
  /// Legendre transform of psi evaluated at y: sup_r (r*y - psi(r)). Found
  /// from the maximiser r = alpha^{-1}(y), so it does not share a code path
  /// with psi_star_of_alpha.
  double psi_star(double y) const;
  /// Closed form t*alpha(t) - psi(t).
  double psi_star_of_alpha(double t) const;
  double inverse(double y) const;

  double lambda_low() const noexcept { return lambda_low_; }
  double lip_L1() const noexcept { return lip_L1_; }

  NamedValues parameters() const;

 private:
  MaterialLaw() = default;

  MaterialFamily family_ = MaterialFamily::identity;
  // identity: unused; smoothed-piecewise: slope_low, slope_high, center,
  // width; cubic-affine: linear, cubic, knot.
  double p0_ = 0.0, p1_ = 0.0, p2_ = 0.0, p3_ = 0.0;
  double shift_ = 0.0;  // smoothed-piecewise: raw antiderivative at 0
  double lambda_low_ = 1.0;
  double lip_L1_ = 1.0;
};

/// Source law f with floor sigma <= f <= f_max and f - sigma of compact
/// support.
///   constant-floor  f(s) = sigma
///   gaussian-bump   f(s) = sigma + amplitude * b((s - center)/width), where
///                   b(x) = exp(1 - 1/(1 - x^2)) on |x| < 1 and 0 elsewhere
class SourceLaw {
 public:
  static SourceLaw constant_floor(double sigma);
  static SourceLaw gaussian_bump(double sigma, double amplitude, double center,
                                 double width);

  SourceFamily family() const noexcept { return family_; }

  double value(double s) const;
  double derivative(double s) const;

  double sigma() const noexcept { return sigma_; }
  double f_max() const noexcept { return sigma_ + amplitude_; }
  /// Lipschitz constant of f in s.
  double lipschitz() const noexcept;
  /// Constant L2 with |f(u) - f(v)| <= L2 |alpha(u) - alpha(v)|.
  double lip_L2(const MaterialLaw& material) const noexcept {
    return lipschitz() / material.lambda_low();
  }

  NamedValues parameters() const;

 private:
  SourceLaw() = default;

  SourceFamily family_ = SourceFamily::constant_floor;
  double sigma_ = 1.0;
  double amplitude_ = 0.0;
  double center_ = 0.0;
  double width_ = 1.0;
};

double legendre_psi(const MaterialLaw& law, double t);
double legendre_psi_star_of_alpha(const MaterialLaw& law, double t);

/// sup over |x| < 1 of |b'(x)| for the compact bump used by gaussian-bump.
double bump_derivative_bound();

}  // namespace thermistor
