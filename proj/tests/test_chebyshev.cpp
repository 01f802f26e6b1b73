#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "spl/chebyshev.hpp"

using spl::cheb::Series;
using spl::cheb::fit;

TEST_CASE("fit interpolates smooth functions to near machine precision") {
  const auto s = fit(0.0, 1.0, 24, [](double x) { return std::exp(x); });
  for (int i = 0; i <= 200; ++i) {
    const double x = i / 200.0;
    CHECK(s.eval(x) == doctest::Approx(std::exp(x)).epsilon(1e-14));
  }
  // Endpoints are interpolation nodes.
  CHECK(s.eval(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.eval(1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("fit reproduces polynomials exactly up to its degree") {
  const auto s = fit(1.0, 3.0, 8, [](double x) { return x * x * x - 2.0 * x + 5.0; });
  for (int i = 0; i <= 50; ++i) {
    const double x = 1.0 + 2.0 * i / 50.0;
    CHECK(s.eval(x) == doctest::Approx(x * x * x - 2.0 * x + 5.0).epsilon(1e-14));
  }
  // Degree-3 content only: trailing coefficients collapse to rounding noise.
  CHECK(s.tail_bound(3) < 1e-13);
}

TEST_CASE("antiderivative is exact for the integral of exp") {
  const auto s = fit(0.0, 1.0, 24, [](double x) { return std::exp(x); });
  const auto F = s.antiderivative();
  CHECK(F.eval(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    CHECK(F.eval(x) == doctest::Approx(std::exp(x) - 1.0).epsilon(1e-14));
  }
}

TEST_CASE("integrate over subintervals matches closed forms") {
  const auto cube = fit(1.0, 3.0, 10, [](double x) { return x * x * x; });
  CHECK(cube.integrate(1.0, 3.0) == doctest::Approx((81.0 - 1.0) / 4.0).epsilon(1e-14));
  CHECK(cube.integrate(1.5, 2.5) ==
        doctest::Approx((2.5 * 2.5 * 2.5 * 2.5 - 1.5 * 1.5 * 1.5 * 1.5) / 4.0).epsilon(1e-14));

  const auto inv = fit(1.0, 2.0, 30, [](double x) { return 1.0 / x; });
  CHECK(inv.integrate(1.0, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("tail_bound is small for analytic functions at high degree") {
  const auto s = fit(0.0, 2.0, 30, [](double x) { return std::cos(x); });
  CHECK(s.tail_bound(3) < 1e-14);
}

TEST_CASE("fit validates its arguments") {
  CHECK_THROWS_AS(fit(0.0, 1.0, 0, [](double) { return 0.0; }), std::invalid_argument);
  CHECK_THROWS_AS(fit(1.0, 1.0, 8, [](double) { return 0.0; }), std::invalid_argument);
  CHECK_THROWS_AS(fit(2.0, 1.0, 8, [](double) { return 0.0; }), std::invalid_argument);
}
