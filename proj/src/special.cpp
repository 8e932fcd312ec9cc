#include "dxhog/special.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace dxhog {

double erfcx(double x) {
  assert(x >= 0.0);
  if (x <= 25.0) {
    return std::exp(x * x) * std::erfc(x);
  }
  // asymptotic: erfcx(x) ~ (1/(x sqrt(pi))) * sum_k (-1)^k (2k-1)!! / (2x^2)^k
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    term *= -(2.0 * k - 1.0) * inv2x2;
    sum += term;
    if (std::abs(term) < 1e-18 * sum) break;
  }
  return sum / (x * 1.7724538509055160272981674833411);
}

double harmonic_number(std::uint64_t N) {
  if (N == 0) return 0.0;
  if (N <= 8192) {
    // ascend through the small addends first
    double h = 0.0;
    for (std::uint64_t j = N; j >= 1; --j) h += 1.0 / static_cast<double>(j);
    return h;
  }
  constexpr double euler_gamma = 0.57721566490153286060651209;
  const double Nd = static_cast<double>(N);
  return std::log(Nd) + euler_gamma + 1.0 / (2.0 * Nd) - 1.0 / (12.0 * Nd * Nd);
}

double gaussian_binomial2(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  // prod_{i=0}^{k-1} (2^{n-i} - 1) / (2^{k-i} - 1)
  double v = 1.0;
  for (int i = 0; i < k; ++i) {
    v *= (std::exp2(n - i) - 1.0) / (std::exp2(k - i) - 1.0);
  }
  return v;
}

double gamma_p(double s, double x) {
  if (!(s > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: bad arguments");
  return boost::math::gamma_p(s, x);
}

}  // namespace dxhog
