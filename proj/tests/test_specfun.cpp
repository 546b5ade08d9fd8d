#include "doctest.h"

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "shellfield/errors.hpp"
#include "shellfield/specfun.hpp"

using namespace shellfield;
namespace sf = shellfield::specfun;

TEST_CASE("erf values and symmetry") {
  CHECK(sf::erf(0.0) == 0.0);
  CHECK(sf::erf(0.7) == -sf::erf(-0.7));
  // frozen from the quadrature oracle: (2/sqrt(pi)) int_0^1 exp(-t^2) dt
  CHECK(std::abs(sf::erf(1.0) - 0.8427007929497149) < 1e-12);
  for (double x : oracle::log_grid(1e-6, 6.0, 200)) {
    CHECK(std::abs(sf::erf(x) - oracle::erf(x)) <= 1e-12);
    CHECK(sf::erf(-x) == -sf::erf(x));
  }
  CHECK_THROWS_AS(sf::erf(std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST_CASE("erf is strictly increasing inside (-1, 1)") {
  double prev = -1.0;
  for (double x = -5.0; x <= 5.0; x += 0.01) {
    const double v = sf::erf(x);
    CHECK(v > -1.0);
    CHECK(v < 1.0);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("sinc and sinhc") {
  CHECK(sf::sinc(0.0) == 1.0);
  CHECK(sf::sinhc(0.0) == 1.0);
  CHECK(std::abs(sf::sinc(sf::kPi)) < 1e-16);
  // series sum_k x^(2k) / (2k+1)! at x = 1
  double series = 0.0, term = 1.0;
  for (int k = 0; k < 20; ++k) {
    series += term;
    term /= (2.0 * k + 2.0) * (2.0 * k + 3.0);
  }
  CHECK(sf::sinhc(1.0) == doctest::Approx(series).epsilon(1e-15));
  CHECK(sf::sinhc(1.0) == doctest::Approx(1.1752011936438014).epsilon(1e-15));
  // branch continuity around the small-argument expansion
  CHECK(sf::sinc(0.99e-4) == doctest::Approx(std::sin(0.99e-4) / 0.99e-4).epsilon(1e-15));
  CHECK(sf::sinhc(-2.0) == sf::sinhc(2.0));
  CHECK(std::isfinite(sf::sinhc(700.0)));
  try {
    sf::sinhc(701.0);
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    CHECK(e.threshold == sf::kSinhcLimit);
  }
}

TEST_CASE("sine integral") {
  CHECK(sf::sine_integral(0.0) == 0.0);
  CHECK(std::abs(sf::sine_integral(1.0) - 0.9460830703671830) < 1e-10);
  CHECK(std::abs(sf::sine_integral(1000.0) - sf::kPi / 2) < 2e-3);
  CHECK(sf::sine_integral(-2.5) == -sf::sine_integral(2.5));
  for (double x : oracle::log_grid(1e-4, 200.0, 200))
    CHECK(std::abs(sf::sine_integral(x) - oracle::sine_integral(x)) <= 1e-10);
  double prev = 0.0;
  for (double x = 0.01; x <= sf::kPi; x += 0.01) {
    CHECK(sf::sine_integral(x) > prev);
    prev = sf::sine_integral(x);
  }
}

TEST_CASE("Bessel J0 and J1 against the integral representation") {
  CHECK(sf::bessel_j0(0.0) == 1.0);
  CHECK(sf::bessel_j1(0.0) == 0.0);
  for (double x : oracle::log_grid(1e-3, 500.0, 300)) {
    CHECK(std::abs(sf::bessel_j0(x) - oracle::bessel_j(0, x)) <= 1e-10);
    CHECK(std::abs(sf::bessel_j1(x) - oracle::bessel_j(1, x)) <= 1e-10);
    CHECK(sf::bessel_j0(-x) == sf::bessel_j0(x));
    CHECK(sf::bessel_j1(-x) == -sf::bessel_j1(x));
  }
  // straddle the series/asymptotic switch
  for (double x = 11.5; x <= 12.5; x += 0.01) {
    CHECK(std::abs(sf::bessel_j0(x) - oracle::bessel_j(0, x)) <= 1e-10);
    CHECK(std::abs(sf::bessel_j1(x) - oracle::bessel_j(1, x)) <= 1e-10);
  }
}

TEST_CASE("Bessel zeros located by bisection on the oracle") {
  const double j1_zero = oracle::bisect([](double x) { return oracle::bessel_j(1, x); }, 3.5, 4.0);
  CHECK(j1_zero == doctest::Approx(3.8317059702).epsilon(1e-10));
  CHECK(std::abs(sf::bessel_j1(3.8317059702075125)) < 1e-12);
  const double j0_zero = oracle::bisect([](double x) { return oracle::bessel_j(0, x); }, 2.0, 3.0);
  CHECK(j0_zero == doctest::Approx(2.4048255577).epsilon(1e-10));
  CHECK(std::abs(sf::bessel_j0(2.404825557695773)) < 1e-12);
}

TEST_CASE("scaled modified Bessel I0") {
  CHECK(sf::bessel_i0_scaled(0.0) == 1.0);
  CHECK(std::abs(sf::bessel_i0_scaled(1.0) - 0.4657596075936404) < 1e-12);
  double prev = 1.0;
  for (double x : oracle::log_grid(1e-4, 1e4, 250)) {
    const double v = sf::bessel_i0_scaled(x);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    CHECK(v < prev);
    prev = v;
    if (x < 3000) {
      CHECK(v == doctest::Approx(oracle::bessel_i_scaled(0, x)).epsilon(1e-10));
      CHECK(sf::bessel_i1_scaled(x) ==
            doctest::Approx(oracle::bessel_i_scaled(1, x)).epsilon(1e-10));
    }
  }
  const double x = 1e4;
  CHECK(std::abs(std::sqrt(2.0 * sf::kPi * x) * sf::bessel_i0_scaled(x) - 1.0) < 1e-3);
  CHECK_THROWS_AS(sf::bessel_i0_scaled(-1.0), DomainError);
}

TEST_CASE("no NaN or infinity for finite in-range input") {
  for (double x : oracle::log_grid(1e-300, 1e300, 400)) {
    CHECK(std::isfinite(sf::erf(x)));
    CHECK(std::isfinite(sf::sinc(x)));
    CHECK(std::isfinite(sf::sine_integral(x)));
    CHECK(std::isfinite(sf::bessel_j0(x)));
    CHECK(std::isfinite(sf::bessel_j1(x)));
    CHECK(std::isfinite(sf::bessel_i0_scaled(x)));
  }
}

TEST_CASE("AccuracySpec validation") {
  sf::AccuracySpec bad{0.0, 0.0, 10};
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  CHECK_THROWS_AS(sf::bessel_j0(1.0, bad), ArgumentError);
  sf::AccuracySpec loose{1e-6, 0.0, 100};
  CHECK(std::abs(sf::bessel_j0(1.0, loose) - oracle::bessel_j(0, 1.0)) < 1e-6);
}
