#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "risim/quadrature.hpp"

using namespace risim::quad;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
  const GaussLegendre g4(4);
  // x^7 over [0, 1] = 1/8; degree 7 = 2*4 - 1.
  CHECK(g4.integrate([](double x) { return std::pow(x, 7); }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 8.0).epsilon(1e-14));
  // Weights sum to the interval length.
  double wsum = 0.0;
  for (double w : g4.weights()) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("gauss-legendre shared rules have the advertised sizes") {
  CHECK(GaussLegendre::rule256().size() == 256);
  CHECK(GaussLegendre::rule512().size() == 512);
  CHECK(GaussLegendre::rule256().integrate(
            [](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("adaptive_gk15 reaches tight tolerances on smooth integrands") {
  const double v = adaptive_gk15([](double x) { return 4.0 / (1.0 + x * x); },
                                 0.0, 1.0, 1e-12);
  CHECK(v == doctest::Approx(3.14159265358979323846).epsilon(1e-12));
  // Oscillatory but resolvable.
  const double w = adaptive_gk15([](double x) { return std::cos(50.0 * x); },
                                 0.0, 1.0, 1e-10);
  CHECK(w == doctest::Approx(std::sin(50.0) / 50.0).epsilon(1e-8));
}

TEST_CASE("adaptive_gk15 reports non-convergence with an error estimate") {
  // Step discontinuity with bisection disabled: the estimate cannot shrink.
  try {
    adaptive_gk15([](double x) { return x < 0.1234567 ? 1.0 : 0.0; }, 0.0, 1.0,
                  1e-12, 0);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(e.error_estimate() > 0.0);
  }
}

TEST_CASE("checked_gl256 matches analytic values and flags instability") {
  CHECK(checked_gl256([](double x) { return std::exp(x); }, 0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  // A step function disagrees between 256 and 512 nodes.
  CHECK_THROWS_AS(
      checked_gl256([](double x) { return x < 0.1234567 ? 1.0 : 0.0; }, 0.0, 1.0),
      NumericError);
}
