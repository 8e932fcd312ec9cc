// Scalar special functions shared by the bounds and sampling code.
#pragma once

#include <cstdint>

namespace dxhog {

// exp(x^2) * erfc(x) for x >= 0, accurate to ~1e-13 relative.
// Direct evaluation overflows/underflows past x ~ 26; an asymptotic series
// takes over there.
double erfcx(double x);

// H_N = sum_{j=1}^{N} 1/j. Exact summation for N <= 8192, then the Euler-
// Maclaurin expansion, which at the switchover already agrees to ~2e-18.
double harmonic_number(std::uint64_t N);

// Gaussian binomial coefficient [n choose k]_2: the number of k-dimensional
// subspaces of F_2^n. Returned as double; relative error is a few ulps.
double gaussian_binomial2(int n, int k);

// regularized lower incomplete gamma P(s, x); thin wrapper kept here so the
// backing implementation is a single swap point
double gamma_p(double s, double x);

}  // namespace dxhog
