#include "doctest.h"
#include "fracma/special.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace fracma;

TEST_CASE("gamma_fn matches the Spouge reference across the working range") {
  for (double x = 0.05; x < 40.0; x *= 1.17) {
    CAPTURE(x);
    CHECK(gamma_fn(x) ==
          doctest::Approx(oracles::spouge_gamma(x)).epsilon(1e-12));
  }
}

TEST_CASE("gamma_fn reproduces exact values and the recurrence") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(gamma_fn(0.5) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(gamma_fn(1.5) ==
        doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
  for (double x : {0.13, 0.77, 1.9, 6.3, 21.0}) {
    CAPTURE(x);
    CHECK(gamma_fn(x + 1.0) == doctest::Approx(x * gamma_fn(x)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(gamma_fn(0.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_fn(-1.5), std::invalid_argument);
}

TEST_CASE("sphere areas and ball volumes") {
  CHECK(sphere_area(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sphere_area(2) ==
        doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(sphere_area(3) ==
        doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK(ball_volume(3) ==
        doctest::Approx(4.0 / 3.0 * std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("cns_constant recovers the classical Laplacian as s -> 1") {
  // For u = |x|^2, (1/2) Int delta(u,x,y) |y|^{-n-2s} dy over |y| < R equals
  // omega_n R^{2-2s} / (2 - 2s), so c_{n,s} times it must approach
  // Delta u = 2n when s -> 1 and R -> infinity in tandem.
  for (int n : {2, 3}) {
    const double s = 1.0 - 1e-8;
    const double R = 1e6;
    const double truncated =
        sphere_area(n) * std::pow(R, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    CHECK(cns_constant(n, s) * truncated ==
          doctest::Approx(2.0 * n).epsilon(1e-3));
  }
}

TEST_CASE("power-law coefficient is symmetric under g <-> n-2s-g") {
  for (int n : {2, 3}) {
    for (double s : {0.6, 0.75, 0.9}) {
      const double span = n - 2.0 * s;
      for (double frac : {0.2, 0.35, 0.45}) {
        const double g = frac * span;
        CAPTURE(n);
        CAPTURE(s);
        CAPTURE(g);
        CHECK(power_law_coefficient(n, s, g) ==
              doctest::Approx(power_law_coefficient(n, s, span - g))
                  .epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("power-law coefficient vanishes at both ends of its range") {
  const int n = 3;
  const double s = 0.7;
  const double span = n - 2.0 * s;
  CHECK(power_law_coefficient(n, s, 1e-9 * span) < 1e-6);
  CHECK(power_law_coefficient(n, s, (1.0 - 1e-9) * span) < 1e-6);
  CHECK_THROWS_AS(power_law_coefficient(n, s, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(power_law_coefficient(n, s, span + 0.1),
                  std::invalid_argument);
}

TEST_CASE("riesz_constant is positive and decreases with dimension") {
  for (double s : {0.6, 0.75, 0.9}) {
    CHECK(riesz_constant(3, s) > 0.0);
    if (2.0 * s < 2.0) {
      // n = 3 is the only dimension of use here with n > 2s for all s.
      CHECK(riesz_constant(3, s) < 1.0);
    }
  }
}
