#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dxhog/special.hpp"

using namespace dxhog;
using Catch::Matchers::WithinRel;

// reference values computed at 50-digit precision

TEST_CASE("erfcx matches high-precision references", "[special]") {
  CHECK_THAT(erfcx(0.5), WithinRel(0.61569034419292587, 1e-13));
  CHECK_THAT(erfcx(1.0), WithinRel(0.42758357615580700, 1e-13));
  CHECK_THAT(erfcx(3.0), WithinRel(0.17900115118138995, 1e-13));
  CHECK_THAT(erfcx(10.0), WithinRel(0.056140992743822586, 1e-12));
  CHECK_THAT(erfcx(24.9), WithinRel(0.022639987776049506, 1e-12));
  CHECK_THAT(erfcx(25.1), WithinRel(0.022459875817581388, 1e-12));
  CHECK_THAT(erfcx(100.0), WithinRel(0.0056416137829894329, 1e-12));
  CHECK_THAT(erfcx(1000.0), WithinRel(0.00056418930145338765, 1e-12));
}

TEST_CASE("erfcx is continuous across the series switchover", "[special]") {
  const double lo = erfcx(std::nextafter(25.0, 0.0));
  const double hi = erfcx(std::nextafter(25.0, 100.0));
  REQUIRE(std::fabs(lo - hi) < 1e-12 * lo);
}

TEST_CASE("erfcx small-argument limits", "[special]") {
  CHECK_THAT(erfcx(0.0), WithinRel(1.0, 1e-15));
  // erfcx decreases monotonically toward 1/(x sqrt(pi))
  double prev = erfcx(0.0);
  for (double x = 0.25; x <= 50.0; x += 0.25) {
    const double v = erfcx(x);
    REQUIRE(v < prev);
    REQUIRE(v > 0.0);
    prev = v;
  }
  CHECK_THAT(erfcx(2000.0) * 2000.0 * std::sqrt(M_PI), WithinRel(1.0, 1e-6));
}

TEST_CASE("harmonic numbers, exact region", "[special]") {
  CHECK(harmonic_number(1) == 1.0);
  CHECK_THAT(harmonic_number(2), WithinRel(1.5, 1e-15));
  CHECK_THAT(harmonic_number(8), WithinRel(2.7178571428571429, 1e-14));
  CHECK_THAT(harmonic_number(16) / 16.0, WithinRel(0.21129556207681208, 1e-14));
  CHECK_THAT(harmonic_number(256) - 1.0, WithinRel(5.1243449628172804, 1e-13));
  CHECK_THAT(harmonic_number(4096), WithinRel(8.8951038969663229, 1e-13));
}

TEST_CASE("harmonic numbers agree across the series switchover", "[special]") {
  // 8192 sums directly; 8193 goes through Euler-Maclaurin
  const double direct = harmonic_number(8192);
  const double series = harmonic_number(8193);
  CHECK_THAT(series - direct, WithinRel(1.0 / 8193.0, 1e-9));
  CHECK_THAT(harmonic_number(1u << 20),
             WithinRel(std::log(double(1u << 20)) + 0.57721566490153286 +
                           0.5 / (1u << 20) - 1.0 / (12.0 * std::pow(2.0, 40)),
                       1e-14));
}

TEST_CASE("gaussian binomials count subspaces", "[special]") {
  CHECK(gaussian_binomial2(4, 2) == 35.0);
  CHECK(gaussian_binomial2(5, 2) == 155.0);
  CHECK(gaussian_binomial2(3, 1) == 7.0);
  CHECK(gaussian_binomial2(3, 2) == 7.0);
  CHECK(gaussian_binomial2(2, 1) == 3.0);
  CHECK(gaussian_binomial2(6, 0) == 1.0);
  CHECK(gaussian_binomial2(6, 6) == 1.0);
  CHECK_THAT(gaussian_binomial2(10, 5), WithinRel(109221651.0, 1e-12));
  // symmetry (n choose k) = (n choose n-k)
  for (int n = 1; n <= 10; ++n) {
    for (int k = 0; k <= n; ++k) {
      CHECK_THAT(gaussian_binomial2(n, k), WithinRel(gaussian_binomial2(n, n - k), 1e-12));
    }
  }
}

TEST_CASE("regularized lower incomplete gamma", "[special]") {
  // P(1, x) = 1 - e^{-x}
  CHECK_THAT(gamma_p(1.0, 2.0), WithinRel(1.0 - std::exp(-2.0), 1e-13));
  // P(1/2, x) = erf(sqrt(x))
  CHECK_THAT(gamma_p(0.5, 4.0), WithinRel(std::erf(2.0), 1e-13));
  CHECK(gamma_p(0.25, 1e6) == 1.0);
  CHECK(gamma_p(3.0, 0.0) == 0.0);
}
