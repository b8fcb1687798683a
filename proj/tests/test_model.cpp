#include <doctest.h>

#include <cmath>
#include <random>

#include "thermistor/model.hpp"
#include "thermistor/random.hpp"

using namespace thermistor;

namespace {

std::vector<MaterialLaw> sample_laws() {
  return {MaterialLaw::identity(), MaterialLaw::smoothed_piecewise(1.0, 3.0, 0.5, 2.0),
          MaterialLaw::cubic_affine(1.0, 1.0, 3.0), MaterialLaw::smoothed_piecewise(2.0, 0.5, -1.0, 0.5)};
}

}  // namespace

TEST_CASE("psi closed forms") {
  const auto id = MaterialLaw::identity();
  CHECK(id.psi(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(id.psi(0.0) == 0.0);
  CHECK(id.psi_star_of_alpha(3.0) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(id.psi_star_of_alpha(0.0) == 0.0);

  // alpha(t) = t + t^3 below the knot
  const auto cubic = MaterialLaw::cubic_affine(1.0, 1.0, 3.0);
  CHECK(cubic.alpha(2.0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(cubic.psi(2.0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(cubic.psi_star_of_alpha(2.0) == doctest::Approx(14.0).epsilon(1e-12));
  for (const auto& law : sample_laws()) {
    CHECK(law.psi(0.0) == 0.0);
    CHECK(law.psi_star_of_alpha(0.0) == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("legendre identity on random t") {
  std::mt19937_64 rng(11);
  for (const auto& law : sample_laws()) {
    for (int k = 0; k < 2000; ++k) {
      const double t = uniform(rng, -10.0, 10.0);
      const double direct = t * law.alpha(t) - law.psi(t);
      const double via_max = law.psi_star(law.alpha(t));
      CHECK(std::abs(via_max - direct) <= 1e-10 * (1.0 + std::pow(t, 4)));
    }
  }
}

TEST_CASE("alpha is increasing with slopes in [lambda, L1]") {
  std::mt19937_64 rng(12);
  for (const auto& law : sample_laws()) {
    double prev_t = -10.0, prev = law.alpha(prev_t);
    for (int k = 1; k <= 4000; ++k) {
      const double t = -10.0 + 20.0 * k / 4000.0;
      const double a = law.alpha(t);
      REQUIRE(a > prev);
      prev = a;
      prev_t = t;
      const double d = law.alpha_prime(uniform(rng, -10.0, 10.0));
      CHECK(d >= law.lambda_low() * (1.0 - 1e-14));
      CHECK(d <= law.lip_L1() * (1.0 + 1e-14));
    }
  }
}

TEST_CASE("alpha inverse round-trips") {
  std::mt19937_64 rng(13);
  for (const auto& law : sample_laws()) {
    for (int k = 0; k < 500; ++k) {
      const double t = uniform(rng, -10.0, 10.0);
      CHECK(law.inverse(law.alpha(t)) == doctest::Approx(t).epsilon(1e-12));
    }
  }
}

TEST_CASE("source laws") {
  const auto flat = SourceLaw::constant_floor(2.0);
  CHECK(flat.value(-3.0) == 2.0);
  CHECK(flat.derivative(5.0) == 0.0);
  CHECK(flat.f_max() == 2.0);

  const auto bump = SourceLaw::gaussian_bump(1.0, 2.0, 0.5, 0.2);
  CHECK(bump.value(0.5) == doctest::Approx(3.0));
  CHECK(bump.value(0.71) == 1.0);
  CHECK(bump.value(0.29) == 1.0);
  std::mt19937_64 rng(14);
  for (int k = 0; k < 1000; ++k) {
    const double s = uniform(rng, -1.0, 2.0);
    CHECK(bump.value(s) >= bump.sigma());
    CHECK(bump.value(s) <= bump.f_max());
    const double h = 1e-6;
    const double fd = (bump.value(s + h) - bump.value(s - h)) / (2 * h);
    CHECK(std::abs(fd - bump.derivative(s)) <= 1e-5 * (1.0 + std::abs(fd)));
    CHECK(std::abs(bump.derivative(s)) <= bump.lipschitz() * (1.0 + 1e-12));
  }
}

TEST_CASE("invalid law parameters are rejected") {
  CHECK_THROWS(MaterialLaw::smoothed_piecewise(0.0, 1.0, 0.0, 1.0));
  CHECK_THROWS(MaterialLaw::cubic_affine(-1.0, 1.0, 1.0));
  CHECK_THROWS(SourceLaw::constant_floor(0.0));
  CHECK_THROWS(SourceLaw::gaussian_bump(1.0, 1.0, 0.0, 0.0));
}
