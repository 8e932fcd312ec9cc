#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include "dxhog/bounds.hpp"
#include "dxhog/rng.hpp"
#include "dxhog/special.hpp"

using namespace dxhog;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kLn2 = 0.69314718055994530941723212146;

double simpson(const std::function<double(double)>& f, double lo, double hi,
               int intervals) {
  // composite Simpson, intervals must be even
  const double h = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) {
    sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

// the quantity gamma_a equals: E[e^{|X-1|/a} - 1 - |X-1|/a] for X ~ Exp(1)
double gamma_a_integral(double a) {
  const auto f = [a](double x) {
    const double u = std::abs(x - 1.0) / a;
    return (std::expm1(u) - u) * std::exp(-x);
  };
  return simpson(f, 0.0, 1.0, 4000) + simpson(f, 1.0, 120.0, 20000);
}

}  // namespace

TEST_CASE("gamma_a frozen values", "[bounds]") {
  CHECK_THAT(gamma_a(1.5), WithinRel(0.56104516188234399, 1e-14));
  CHECK_THAT(gamma_a(2.0), WithinRel(0.22177399419056621, 1e-14));
  CHECK_THAT(gamma_a(1.53), WithinRel(0.5212126679389653, 1e-14));
  CHECK_THAT(gamma_a(1.47), WithinRel(0.60620166353373654, 1e-14));
  CHECK_THAT(gamma_a(1.0001), WithinRel(3678.6017298920472, 1e-12));
  CHECK(gamma_a(1.0001) > 1000.0 * gamma_a(2.0));
  CHECK_THROWS_AS(gamma_a(1.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_a(0.5), std::invalid_argument);
}

TEST_CASE("gamma_a equals its defining expectation", "[bounds]") {
  for (double a : {1.3, 1.5, 2.0, 3.0}) {
    REQUIRE_THAT(gamma_a(a), WithinRel(gamma_a_integral(a), 1e-8));
  }
}

TEST_CASE("norm bounds frozen values", "[bounds]") {
  const NormBounds cl = norm_bounds(Ensemble::clifford(), 12);
  CHECK_THAT(cl.A, WithinRel(0.022094390007582829, 1e-14));
  CHECK_THAT(cl.B, WithinRel(0.0039451809506729067, 1e-13));
  CHECK(cl.t_opt == 5);

  const NormBounds ha = norm_bounds(Ensemble::haar(), 12);
  CHECK_THAT(ha.A, WithinRel(0.022094390007582829, 1e-14));
  CHECK_THAT(ha.B, WithinRel(0.0021716562248452937, 1e-13));

  const NormBounds de = norm_bounds(Ensemble::design(10, 0.0), 12);
  CHECK_THAT(de.A, WithinRel(0.022094390007582829, 1e-14));
  CHECK_THAT(de.B, WithinRel(0.0025373220195142622, 1e-13));
  CHECK(de.t_opt == 10);

  const NormBounds pc = norm_bounds(Ensemble::product_clifford(), 2);
  CHECK_THAT(pc.A, WithinRel(2.0 / 3.0, 1e-15));
  CHECK_THAT(pc.B, WithinRel(2.0 / 3.0, 1e-15));
}

TEST_CASE("operator bound is clamped to the Frobenius bound", "[bounds]") {
  // at n = 1 the raw moment formulas exceed A and the clamp must engage
  const NormBounds cl1 = norm_bounds(Ensemble::clifford(), 1);
  CHECK(cl1.B == cl1.A);
  const NormBounds d1 = norm_bounds(Ensemble::design(1, 0.5), 4);
  CHECK(d1.B == d1.A);
  for (int n : {1, 2, 4, 8, 12, 16}) {
    for (const Ensemble& e :
         {Ensemble::product_clifford(), Ensemble::clifford(),
          Ensemble::design(10, 0.0), Ensemble::haar()}) {
      const NormBounds nb = norm_bounds(e, n);
      REQUIRE(nb.A > 0.0);
      REQUIRE(nb.B > 0.0);
      REQUIRE(nb.B <= nb.A);
    }
  }
  CHECK_THROWS_AS(norm_bounds(Ensemble::clifford(), 0), std::invalid_argument);
  CHECK_THROWS_AS(norm_bounds(Ensemble::design(0, 0.0), 4), std::invalid_argument);
  CHECK_THROWS_AS(norm_bounds(Ensemble::design(4, -0.1), 4), std::invalid_argument);
}

TEST_CASE("lower bound frozen spot values", "[bounds]") {
  const NormBounds nb = norm_bounds(Ensemble::clifford(), 12);
  CHECK_THAT(lb_eps(12, 61, 1.53, nb), WithinRel(0.35992968336273787, 1e-12));
  CHECK_THAT(lb_eps(12, 77, 1.47, nb), WithinRel(0.42559122369214262, 1e-12));
  CHECK_THAT(lb_eps(12, 20, 1.5, nb), WithinRel(0.19130714659196838, 1e-12));
  CHECK_THAT(lb_eps(12, 10, 1.5, nb), WithinRel(0.13957143164021341, 1e-12));
  CHECK_THAT(lb_eps(12, 24, 2.0, nb), WithinRel(0.19403371670596214, 1e-12));
  CHECK_THROWS_AS(lb_eps(12, 10, 1.0, nb), std::invalid_argument);
  CHECK_THROWS_AS(lb_eps(12, 0.5, 1.5, nb), std::invalid_argument);
}

TEST_CASE("lower bound is continuous across the branch seam", "[bounds]") {
  const NormBounds nb = norm_bounds(Ensemble::clifford(), 12);
  const double a = 1.5;
  const double m_star = gamma_a(a) * nb.A * nb.A / (kLn2 * nb.B * nb.B);
  REQUIRE_THAT(m_star, WithinRel(25.386482926263348, 1e-12));
  const double below = lb_eps(12, m_star - 1e-9, a, nb);
  const double above = lb_eps(12, m_star + 1e-9, a, nb);
  REQUIRE_THAT(below, WithinRel(above, 1e-6));
}

TEST_CASE("lower bound grows with the message size", "[bounds]") {
  const NormBounds nb = norm_bounds(Ensemble::clifford(), 12);
  double prev = 0.0;
  for (int m = 1; m <= 200; ++m) {
    const double v = lb_eps(12, m, 1.5, nb);  // spans both branches
    REQUIRE(v > prev);
    prev = v;
  }
  prev = 0.0;
  for (int m = 1; m <= 120; m += 7) {
    const double v = lb_eps_opt(12, m, nb).eps;
    REQUIRE(v > prev);
    prev = v;
  }
}

TEST_CASE("optimized lower bound frozen values", "[bounds]") {
  const NormBounds cl = norm_bounds(Ensemble::clifford(), 12);
  const OptLowerBound o61 = lb_eps_opt(12, 61, cl);
  CHECK_THAT(o61.eps, WithinRel(0.35992847318260715, 1e-9));
  CHECK_THAT(o61.a_star, WithinAbs(1.53197217934, 1e-3));
  const OptLowerBound o77 = lb_eps_opt(12, 77, cl);
  CHECK_THAT(o77.eps, WithinRel(0.42558776609842785, 1e-9));
  CHECK_THAT(o77.a_star, WithinAbs(1.47279668929, 1e-3));
  const OptLowerBound o80 = lb_eps_opt(12, 80, cl);
  CHECK_THAT(o80.eps, WithinRel(0.43763270005047237, 1e-9));
  CHECK_THAT(o80.a_star, WithinAbs(1.46372765224, 1e-3));

  const NormBounds ha = norm_bounds(Ensemble::haar(), 12);
  CHECK_THAT(lb_eps_opt(12, 61, ha).eps, WithinRel(0.28768423288811555, 1e-9));
  const NormBounds de = norm_bounds(Ensemble::design(10, 0.0), 12);
  CHECK_THAT(lb_eps_opt(12, 100, de).eps, WithinRel(0.42144869588613463, 1e-9));

  // the optimum never beats a pointwise evaluation
  for (int m : {5, 20, 61, 150}) {
    const double opt = lb_eps_opt(12, m, cl).eps;
    REQUIRE(opt <= lb_eps(12, m, 1.5, cl) + 1e-12);
    REQUIRE(opt <= lb_eps(12, m, 2.0, cl) + 1e-12);
  }
}

TEST_CASE("smallest message size reaching a target", "[bounds]") {
  CHECK(lb_min_m(12, Ensemble::clifford(), 0.362) == 62);
  CHECK(lb_min_m(12, Ensemble::clifford(), 0.427) == 78);
  CHECK(lb_min_m(12, Ensemble::clifford(), 1.0) == 234);
  CHECK(lb_min_m(12, Ensemble::design(10, 0.0), 1.0) == 325);
  CHECK(lb_min_m(12, Ensemble::haar(), 1.0) == 363);
  CHECK_THROWS_AS(lb_min_m(12, Ensemble::clifford(), 100.0), UnreachableTarget);
  CHECK_THROWS_AS(lb_min_m(12, Ensemble::clifford(), 0.0), std::invalid_argument);
}

TEST_CASE("classical cost first beats teleportation at n = 7", "[bounds]") {
  for (int n = 2; n <= 6; ++n) {
    REQUIRE(lb_min_m(n, Ensemble::clifford(), 1.0) <= n);
  }
  REQUIRE(lb_min_m(6, Ensemble::clifford(), 1.0) == 6);
  REQUIRE(lb_min_m(7, Ensemble::clifford(), 1.0) == 12);
}

TEST_CASE("upper bound frozen values", "[bounds]") {
  CHECK_THAT(ub_eps(12, 329), WithinRel(0.42687912760289869, 1e-10));
  CHECK_THAT(ub_eps(12, 330), WithinRel(0.42814314246398417, 1e-10));
  CHECK_THAT(ub_eps(12, 380), WithinRel(0.49107186769852468, 1e-10));
  CHECK_THAT(ub_eps(12, 381), WithinRel(0.4923250177851878, 1e-10));
  CHECK_THAT(ub_eps(12, 382), WithinRel(0.49357795577320879, 1e-10));
  CHECK_THAT(ub_eps(8, 640), WithinRel(4.2231177497670611, 1e-10));
  CHECK_THROWS_AS(ub_eps(12, 0), std::invalid_argument);
  CHECK_THROWS_AS(ub_eps(0, 10), std::invalid_argument);
}

TEST_CASE("upper bound exact variant frozen values", "[bounds]") {
  CHECK_THAT(ub_eps_exact(3, 6), WithinRel(0.70530827914873278, 1e-10));
  CHECK_THAT(ub_eps_exact(3, 4), WithinRel(0.48818225774468154, 1e-10));
  CHECK_THAT(ub_eps_exact(4, 6), WithinRel(0.52330012842377453, 1e-10));
  CHECK_THAT(ub_eps_exact(5, 8), WithinRel(0.46513900082497149, 1e-10));
  CHECK(ub_eps_exact(3, 0) == 0.0);
  CHECK_THROWS_AS(ub_eps_exact(3, -1), std::invalid_argument);
  CHECK_THROWS_AS(ub_eps_exact(3, 1001), std::invalid_argument);
}

TEST_CASE("exact variant dominates the exponential-inequality one", "[bounds]") {
  // 1 - x <= e^{-x} inside the integral, so the exact overlap integral is
  // smaller and the resulting score bound larger
  for (int n : {2, 4, 8, 12}) {
    for (int m : {1, 5, 10, 30, 60, 120}) {
      REQUIRE(ub_eps_exact(n, m) >= ub_eps(n, m) - 1e-12);
    }
  }
}

TEST_CASE("upper bound closed forms match direct quadrature", "[bounds][slow]") {
  constexpr int kIntervals = 1 << 17;
  for (int n : {4, 8}) {
    const double N = std::exp2(n);
    const double p = N - 1.0;
    const double H = harmonic_number(std::uint64_t{1} << n);
    for (int m : {10, 50}) {
      const double M = std::exp2(m);
      const double i_exp = simpson(
          [&](double u) { return std::exp(-M * std::pow(u, p)); }, 0.0, 1.0,
          kIntervals);
      const double from_exp = (H - 1.0) * (1.0 - N / (N - 1.0) * i_exp);
      REQUIRE_THAT(ub_eps(n, m), WithinRel(from_exp, 1e-8));

      const double i_exact = simpson(
          [&](double u) {
            const double t = std::pow(u, p);
            return t >= 1.0 ? 0.0 : std::exp(M * std::log1p(-t));
          },
          0.0, 1.0, kIntervals);
      const double from_exact = (H - 1.0) * (1.0 - N / (N - 1.0) * i_exact);
      REQUIRE_THAT(ub_eps_exact(n, m), WithinRel(from_exact, 1e-8));
    }
  }
}

TEST_CASE("upper bound saturates at the harmonic asymptote", "[bounds]") {
  const double asymptote = harmonic_number(256) - 1.0;
  REQUIRE_THAT(asymptote, WithinRel(5.1243449628172804, 1e-13));
  REQUIRE_THAT(ub_eps(8, 1700), WithinRel(asymptote, 0.01));
  double prev = 0.0;
  for (int m = 40; m <= 1700; m += 83) {
    const double v = ub_eps(8, m);
    REQUIRE(v > prev);
    REQUIRE(v < asymptote);
    prev = v;
  }
}

TEST_CASE("smallest codebook size reaching a target", "[bounds]") {
  CHECK(ub_min_m(12, 0.427) == 330);
  CHECK(ub_min_m(12, 0.492) == 381);
  CHECK(ub_min_m(12, 4095.0 / 4097.0) == 801);
  CHECK_THROWS_AS(ub_min_m(8, 5.2), UnreachableTarget);
  CHECK_THROWS_AS(ub_min_m(8, harmonic_number(256) - 1.0), UnreachableTarget);
  CHECK_THROWS_AS(ub_min_m(8, 0.0), std::invalid_argument);
  // returned m is minimal
  CHECK(ub_eps(12, 330) >= 0.427);
  CHECK(ub_eps(12, 329) < 0.427);
}

TEST_CASE("exponential-sum tail inequality holds empirically", "[bounds][slow]") {
  // the two-branch tail bound behind lb_eps: for independent exponentials
  // with means mu_i, sum mu_i^2 <= A^2 and max mu_i <= B,
  //   P[sum X_i >= sum mu_i + t] <= exp(-t^2 / (4 g a^2 A^2))   t <= 2 g a A^2/B
  //                                exp(-(t/(a B) - g A^2/B^2))  otherwise
  constexpr int kN = 64, kReps = 100000;
  double mu[kN], mu_sum = 0.0, a2 = 0.0, b = 0.0;
  for (int i = 0; i < kN; ++i) {
    mu[i] = 1.0 / (4.0 * (i + 1));
    mu_sum += mu[i];
    a2 += mu[i] * mu[i];
    b = std::max(b, mu[i]);
  }
  const double a = 1.5, g = gamma_a(a);
  const double t_split = 2.0 * g * a * a2 / b;
  const double probes[2] = {0.5, 1.5};  // one per branch
  REQUIRE(probes[0] < t_split);
  REQUIRE(probes[1] > t_split);

  RandomStream rng(301);
  int exceed[2] = {0, 0};
  for (int r = 0; r < kReps; ++r) {
    double s = 0.0;
    for (int i = 0; i < kN; ++i) s -= mu[i] * std::log(rng.uniform01_pos());
    for (int j = 0; j < 2; ++j) {
      if (s >= mu_sum + probes[j]) ++exceed[j];
    }
  }
  for (int j = 0; j < 2; ++j) {
    const double t = probes[j];
    const double bound = t <= t_split
                             ? std::exp(-t * t / (4.0 * g * a * a * a2))
                             : std::exp(-(t / (a * b) - g * a2 / (b * b)));
    const double empirical = static_cast<double>(exceed[j]) / kReps;
    REQUIRE(empirical > 0.0);  // probes sit in the observable tail
    REQUIRE(empirical <= bound);
  }
}

TEST_CASE("ensemble gap stays below 1.45", "[bounds][slow]") {
  const NormBounds cl = norm_bounds(Ensemble::clifford(), 12);
  const NormBounds ha = norm_bounds(Ensemble::haar(), 12);
  double worst = 0.0;
  for (int m = 10; m <= 400; m += 10) {
    const double ratio = lb_eps_opt(12, m, cl).eps / lb_eps_opt(12, m, ha).eps;
    worst = std::max(worst, ratio);
  }
  REQUIRE(worst <= 1.45);
  REQUIRE(worst >= 1.44);
}

TEST_CASE("hidden matching baseline", "[bounds]") {
  CHECK_THAT(hm_lb_bits(9, 1.0), WithinRel(9.8137084989847604, 1e-14));
  CHECK(hm_lb_bits(8, 1.0) == 6.5);
  CHECK(hm_lb_bits(12, 1.0) == 30.5);
  CHECK_THAT(hm_lb_bits(12, 0.362), WithinRel(0.362 * 31.5 - 1.0, 1e-14));
  // first n where a perfect score implies more than n bits
  for (int n = 2; n <= 8; ++n) REQUIRE(hm_lb_bits(n, 1.0) <= n);
  REQUIRE(hm_lb_bits(9, 1.0) > 9.0);
  CHECK_THROWS_AS(hm_lb_bits(9, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(hm_lb_bits(9, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(hm_lb_bits(0, 0.5), std::invalid_argument);
}

TEST_CASE("message-size sweep rows and csv", "[bounds][slow]") {
  const std::vector<Ensemble> es = {Ensemble::clifford(), Ensemble::haar()};
  const auto rows = sweep_m({12}, es, 10, 30, 10);
  REQUIRE(rows.size() == 6);
  // row order: ensemble outer, m inner
  const char* want_ens[6] = {"clifford", "clifford", "clifford",
                             "haar",     "haar",     "haar"};
  const int want_m[6] = {10, 20, 30, 10, 20, 30};
  for (int i = 0; i < 6; ++i) {
    REQUIRE(rows[i].n == 12);
    REQUIRE(rows[i].ensemble == want_ens[i]);
    REQUIRE(rows[i].m == want_m[i]);
    const NormBounds nb = norm_bounds(es[i / 3], 12);
    const OptLowerBound opt = lb_eps_opt(12, rows[i].m, nb);
    REQUIRE_THAT(rows[i].eps_lb_opt, WithinRel(opt.eps, 1e-12));
    REQUIRE_THAT(rows[i].a_star, WithinRel(opt.a_star, 1e-9));
    REQUIRE_THAT(rows[i].eps_ub, WithinRel(ub_eps(12, rows[i].m), 1e-12));
    REQUIRE_THAT(rows[i].hm_bits,
                 WithinRel(hm_lb_bits(12, rows[i].eps_lb_opt), 1e-12));
  }

  // above the m where eps_lb_opt crosses 1 the hm target clamps to 1
  const auto high = sweep_m({12}, {Ensemble::clifford()}, 800, 800, 1);
  REQUIRE(high.size() == 1);
  REQUIRE(high[0].eps_lb_opt > 1.0);
  REQUIRE(high[0].hm_bits == 30.5);

  const std::string csv = sweep_csv({SweepRow{12, "clifford", 62, 0.3625, 1.5,
                                              0.25, 10.403}});
  REQUIRE(csv ==
          "n,ensemble,m,eps_lb_opt,a_star,eps_ub,hm_bits\n"
          "12,clifford,62,0.3625,1.5,0.25,10.403\n");
  CHECK_THROWS_AS(sweep_m({12}, es, 0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sweep_m({12}, es, 10, 5, 1), std::invalid_argument);
}

TEST_CASE("target sweep picks the minimal m per ensemble", "[bounds][slow]") {
  const auto rows = sweep_eps({12}, {Ensemble::clifford()}, 0.362);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].m == 62);
  REQUIRE(rows[0].eps_lb_opt >= 0.362);
  REQUIRE_THAT(rows[0].hm_bits, WithinRel(hm_lb_bits(12, 0.362), 1e-12));
}
