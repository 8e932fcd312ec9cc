// Communication bounds: the exact lower-bound formula (how many classical
// bits any protocol needs to reach a given XEB score), the codebook upper
// bound (what a classical protocol can provably achieve), and the Hidden
// Matching baseline. All functions are pure.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dxhog {

enum class EnsembleKind { product_clifford, clifford, design, haar };

struct Ensemble {
  EnsembleKind kind = EnsembleKind::clifford;
  int t_max = 1;       // design only
  double delta = 0.0;  // design only

  static Ensemble product_clifford() { return {EnsembleKind::product_clifford}; }
  static Ensemble clifford() { return {EnsembleKind::clifford}; }
  static Ensemble design(int t_max, double delta) {
    return {EnsembleKind::design, t_max, delta};
  }
  static Ensemble haar() { return {EnsembleKind::haar}; }
};

// csv-safe tag, e.g. "clifford" or "design-t10-d0"
std::string ensemble_label(const Ensemble& e);

struct NormBounds {
  double A = 0.0;  // Frobenius-norm bound
  double B = 0.0;  // operator-norm bound, clamped to B <= A
  int t_opt = 0;   // optimizing moment order, 0 where not applicable
};

// a e^{1/a}/(a+1) + 2/(e (a^3 - a)) - 1; diverges as a -> 1+
double gamma_a(double a);

NormBounds norm_bounds(const Ensemble& e, int n);

// ceiling on classically achievable F_XEB with m bits, free parameter a > 1.
// Two branches split at m = gamma A^2 / (ln2 B^2); the small-m branch
// evaluates its erf difference through erfcx so no term ever sees 2^m.
// m is real-valued here so the branch seam can be probed directly.
double lb_eps(int n, double m, double a, const NormBounds& nb);

struct OptLowerBound {
  double eps;
  double a_star;
};

// min over a in (1, 64] of lb_eps, via 64-point log-grid scan plus
// golden-section refinement; eps tolerance 1e-6 absolute
OptLowerBound lb_eps_opt(int n, double m, const NormBounds& nb);

struct UnreachableTarget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// smallest m with lb_eps_opt(n, m) >= target_eps; integer bisection.
// throws UnreachableTarget if no m <= 2^{n+2} reaches the target
int lb_min_m(int n, const Ensemble& e, double target_eps);

// F_XEB the 2^m-codebook protocol achieves, exponential-inequality variant:
// (H_N - 1)(1 - N/(N-1) I) with I = Gamma(1+1/p) 2^{-m/p} P(1/p, 2^m),
// N = 2^n, p = N-1; the incomplete-gamma factor is 1 past m ln2 > 40
double ub_eps(int n, int m);

// same quantity with the exact Beta-integral I = Gamma(1+1/p) Gamma(M+1) /
// Gamma(M+1+1/p), M = 2^m; this is the reference value for spoof trials
double ub_eps_exact(int n, int m);

// smallest m with ub_eps(n, m) >= target_eps; throws UnreachableTarget when
// the target is at or above the asymptote H_N - 1
int ub_min_m(int n, double target_eps);

// Hidden Matching baseline: eps (sqrt(2^n) - 1)/2 - 1 bits, eps in [0, 1]
double hm_lb_bits(int n, double eps);

struct SweepRow {
  int n;
  std::string ensemble;
  int m;
  double eps_lb_opt;
  double a_star;
  double eps_ub;
  double hm_bits;
};

// one row per (n, ensemble, m in [m_min, m_max] step m_step), in that order
std::vector<SweepRow> sweep_m(const std::vector<int>& ns,
                              const std::vector<Ensemble>& ensembles, int m_min,
                              int m_max, int m_step);

// one row per (n, ensemble) at m = lb_min_m(n, ensemble, eps)
std::vector<SweepRow> sweep_eps(const std::vector<int>& ns,
                                const std::vector<Ensemble>& ensembles, double eps);

// header `n,ensemble,m,eps_lb_opt,a_star,eps_ub,hm_bits`, 10 significant
// digits for floats
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace dxhog
