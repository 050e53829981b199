#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gapmm/quadrature.hpp"
#include "gapmm/radial_grid.hpp"

using namespace gapmm;

TEST_CASE("gauss rules integrate polynomials of degree 2n-1 exactly") {
  for (int n : {1, 2, 3, 5, 8, 16, 32}) {
    const GaussRule rule = gauss_legendre(n);
    REQUIRE(rule.size() == n);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      const double got = integrate(rule, 0.0, 1.0, [deg](double x) { return std::pow(x, deg); });
      CHECK(got == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("gauss weights are positive and sum to the interval length") {
  for (int n : {1, 7, 24, 64}) {
    const GaussRule rule = gauss_legendre(n);
    double sum = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
      CHECK(rule.weights[i] > 0.0);
      CHECK(std::abs(rule.nodes[i]) < 1.0);
      sum += rule.weights[i];
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("mapped integration over a shifted interval") {
  // 1/x^2 is analytic on [1,4]; the 16-point rule is converged to ~1e-14.
  const GaussRule rule = gauss_legendre(16);
  const double got = integrate(rule, 1.0, 4.0, [](double x) { return 1.0 / (x * x); });
  CHECK(got == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("rule order bounds are enforced") {
  CHECK_THROWS_AS((void)gauss_legendre(0), std::invalid_argument);
  CHECK_THROWS_AS((void)gauss_legendre(65), std::invalid_argument);
}

TEST_CASE("exponential grid is strictly increasing with exact endpoints") {
  const RadialGrid grid = RadialGrid::exponential(50.0, 40, 1.15);
  const auto breaks = grid.breakpoints();
  REQUIRE(breaks.size() == 41);
  CHECK(breaks.front() == 0.0);
  CHECK(breaks.back() == doctest::Approx(50.0).epsilon(1e-14));
  for (std::size_t i = 1; i < breaks.size(); ++i) CHECK(breaks[i] > breaks[i - 1]);
  // Consecutive interval lengths grow by the stretch factor.
  const double h0 = breaks[1] - breaks[0];
  const double h1 = breaks[2] - breaks[1];
  CHECK(h1 / h0 == doctest::Approx(1.15).epsilon(1e-9));
}

TEST_CASE("stretch one degenerates to the uniform grid") {
  const RadialGrid grid = RadialGrid::exponential(10.0, 10, 1.0);
  const auto breaks = grid.breakpoints();
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    CHECK(breaks[i] == doctest::Approx(double(i)).epsilon(1e-13));
  }
}

TEST_CASE("strong grading keeps the first interval tiny without overflow") {
  const RadialGrid grid = RadialGrid::exponential(45.0, 220, 1.18);
  const auto breaks = grid.breakpoints();
  CHECK(breaks[1] > 0.0);
  CHECK(breaks[1] < 1e-12);
  CHECK(std::isfinite(breaks[219]));
  CHECK(breaks.back() == doctest::Approx(45.0).epsilon(1e-12));
}
