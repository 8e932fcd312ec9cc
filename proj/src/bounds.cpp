#include "dxhog/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dxhog/special.hpp"

namespace dxhog {

namespace {
constexpr double kLn2 = 0.69314718055994530941723212146;
constexpr double kPi = 3.141592653589793238462643383280;

double pow2(double x) { return std::exp2(x); }

// log of the operator-norm product formula at moment order t, divided by t
double clifford_log_b(int n, int t) {
  // (prod_{i=0}^{t-2} (2^i + 1)/(2^n + 2^i))^{1/t}
  double log_num = 0.0, log_den = 0.0;
  for (int i = 0; i <= t - 2; ++i) {
    log_num += std::log(pow2(i) + 1.0);
    log_den += std::log(pow2(n) + pow2(i));
  }
  return (log_num - log_den) / t;
}

double design_log_b(int n, int t, double delta) {
  // ((1+delta) t! / ((2^n+1)(2^n+2)...(2^n+t-1)))^{1/t}
  double log_v = std::log1p(delta) + std::lgamma(t + 1.0);
  for (int j = 1; j <= t - 1; ++j) log_v -= std::log(pow2(n) + j);
  return log_v / t;
}
}  // namespace

std::string ensemble_label(const Ensemble& e) {
  switch (e.kind) {
    case EnsembleKind::product_clifford: return "product_clifford";
    case EnsembleKind::clifford: return "clifford";
    case EnsembleKind::haar: return "haar";
    case EnsembleKind::design: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "design-t%d-d%g", e.t_max, e.delta);
      return buf;
    }
  }
  return "?";
}

double gamma_a(double a) {
  if (!(a > 1.0)) throw std::invalid_argument("gamma_a: requires a > 1");
  return a * std::exp(1.0 / a) / (a + 1.0) +
         2.0 / (std::exp(1.0) * (a * a * a - a)) - 1.0;
}

NormBounds norm_bounds(const Ensemble& e, int n) {
  if (n < 1) throw std::invalid_argument("norm_bounds: n must be >= 1");
  NormBounds nb;
  switch (e.kind) {
    case EnsembleKind::product_clifford:
      nb.A = nb.B = std::pow(2.0 / 3.0, n / 2.0);
      nb.t_opt = 0;
      return nb;
    case EnsembleKind::clifford: {
      nb.A = std::sqrt(2.0 / (pow2(n) + 1.0));
      double best = std::numeric_limits<double>::infinity();
      for (int t = 1; t <= n; ++t) {
        const double v = clifford_log_b(n, t);
        if (v < best) {
          best = v;
          nb.t_opt = t;
        }
      }
      nb.B = std::exp(best);
      break;
    }
    case EnsembleKind::design: {
      if (e.t_max < 1) throw std::invalid_argument("norm_bounds: t_max must be >= 1");
      if (e.delta < 0.0) throw std::invalid_argument("norm_bounds: delta must be >= 0");
      nb.A = std::sqrt(2.0 / (pow2(n) + 1.0));
      double best = std::numeric_limits<double>::infinity();
      for (int t = 1; t <= e.t_max; ++t) {
        const double v = design_log_b(n, t, e.delta);
        if (v < best) {
          best = v;
          nb.t_opt = t;
        }
      }
      nb.B = std::exp(best);
      break;
    }
    case EnsembleKind::haar:
      nb.A = std::sqrt(2.0 / (pow2(n) + 1.0));
      nb.B = harmonic_number(std::uint64_t{1} << n) / pow2(n);
      nb.t_opt = 0;
      break;
  }
  // the operator norm never exceeds the Frobenius norm
  nb.B = std::min(nb.B, nb.A);
  return nb;
}

double lb_eps(int n, double m, double a, const NormBounds& nb) {
  if (n < 1) throw std::invalid_argument("lb_eps: n must be >= 1");
  if (!(a > 1.0)) throw std::invalid_argument("lb_eps: requires a > 1");
  if (!(m >= 1.0)) throw std::invalid_argument("lb_eps: requires m >= 1");
  const double g = gamma_a(a);
  const double A = nb.A, B = nb.B;
  const double m_star = g * A * A / (kLn2 * B * B);
  if (m <= m_star) {
    const double t_star = 2.0 * a * A * std::sqrt(g * kLn2 * m);
    // x1 = t*/(2 sqrt(g) a A) = sqrt(m ln2), so m ln2 - x1^2 vanishes exactly
    const double x1 = std::sqrt(m * kLn2);
    const double x2 = std::sqrt(g) * A / B;
    const double e2 = std::exp(m * kLn2 - x2 * x2);  // <= 1 on this branch
    return t_star + std::sqrt(kPi * g) * a * A * (erfcx(x1) - e2 * erfcx(x2)) +
           a * B * e2;
  }
  const double t_star = a * B * (kLn2 * m + g * A * A / (B * B));
  return t_star + a * B;
}

OptLowerBound lb_eps_opt(int n, double m, const NormBounds& nb) {
  // log-grid scan guards against non-unimodality, then golden-section refine
  constexpr int kGrid = 64;
  const double lo = 1.0 + 1e-6, hi = 64.0;
  const double log_lo = std::log(lo), log_hi = std::log(hi);
  double best_a = lo;
  double best_v = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < kGrid; ++i) {
    const double a = std::exp(log_lo + (log_hi - log_lo) * i / (kGrid - 1));
    const double v = lb_eps(n, m, a, nb);
    if (v < best_v) {
      best_v = v;
      best_a = a;
      best_i = i;
    }
  }
  double bl = std::exp(log_lo + (log_hi - log_lo) * std::max(0, best_i - 1) / (kGrid - 1));
  double br = std::exp(log_lo + (log_hi - log_lo) * std::min(kGrid - 1, best_i + 1) / (kGrid - 1));
  constexpr double kGolden = 0.61803398874989484820;
  double x1 = br - kGolden * (br - bl);
  double x2 = bl + kGolden * (br - bl);
  double f1 = lb_eps(n, m, x1, nb);
  double f2 = lb_eps(n, m, x2, nb);
  while (br - bl > 1e-10 * (1.0 + bl)) {
    if (f1 < f2) {
      br = x2;
      x2 = x1;
      f2 = f1;
      x1 = br - kGolden * (br - bl);
      f1 = lb_eps(n, m, x1, nb);
    } else {
      bl = x1;
      x1 = x2;
      f1 = f2;
      x2 = bl + kGolden * (br - bl);
      f2 = lb_eps(n, m, x2, nb);
    }
  }
  const double a_mid = 0.5 * (bl + br);
  const double v_mid = lb_eps(n, m, a_mid, nb);
  if (v_mid < best_v) {
    best_v = v_mid;
    best_a = a_mid;
  }
  return {best_v, best_a};
}

int lb_min_m(int n, const Ensemble& e, double target_eps) {
  if (!(target_eps > 0.0)) throw std::invalid_argument("lb_min_m: target must be > 0");
  const NormBounds nb = norm_bounds(e, n);
  int lo = 1;
  int hi = 1 << (n + 2);
  if (lb_eps_opt(n, hi, nb).eps < target_eps) {
    throw UnreachableTarget("lb_min_m: target eps " + std::to_string(target_eps) +
                            " unreachable for any m <= 2^(n+2)");
  }
  if (lb_eps_opt(n, lo, nb).eps >= target_eps) return lo;
  // invariant: eps_opt(lo) < target <= eps_opt(hi)
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (lb_eps_opt(n, mid, nb).eps >= target_eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double ub_eps(int n, int m) {
  if (n < 1 || m < 1) throw std::invalid_argument("ub_eps: requires n >= 1, m >= 1");
  const double N = pow2(n);
  const double p = N - 1.0;
  const double H = harmonic_number(std::uint64_t{1} << n);
  double I = std::tgamma(1.0 + 1.0 / p) * pow2(-static_cast<double>(m) / p);
  if (m * kLn2 <= 40.0) {
    I *= gamma_p(1.0 / p, pow2(m));
  }
  return (H - 1.0) * (1.0 - N / (N - 1.0) * I);
}

double ub_eps_exact(int n, int m) {
  if (n < 1 || m < 0 || m > 1000) {
    throw std::invalid_argument("ub_eps_exact: requires n >= 1, 0 <= m <= 1000");
  }
  const double N = pow2(n);
  const double p = N - 1.0;
  const double s = 1.0 / p;
  const double M = pow2(m);
  const double H = harmonic_number(std::uint64_t{1} << n);
  double log_ratio;  // lgamma(M+1) - lgamma(M+1+s)
  if (M < 1e8) {
    log_ratio = std::lgamma(M + 1.0) - std::lgamma(M + 1.0 + s);
  } else {
    // digamma expansion; direct lgamma subtraction would cancel
    const double x = M + 1.0;
    log_ratio = -s * (std::log(x) - 1.0 / (2.0 * x)) - s * s / (2.0 * x);
  }
  const double I = std::exp(std::lgamma(1.0 + s) + log_ratio);
  return (H - 1.0) * (1.0 - N / (N - 1.0) * I);
}

int ub_min_m(int n, double target_eps) {
  if (!(target_eps > 0.0)) throw std::invalid_argument("ub_min_m: target must be > 0");
  const double asymptote = harmonic_number(std::uint64_t{1} << n) - 1.0;
  if (target_eps >= asymptote) {
    throw UnreachableTarget("ub_min_m: target eps at or above the asymptote H_N - 1");
  }
  int hi = 64;
  while (ub_eps(n, hi) < target_eps) {
    hi *= 2;
    if (hi > (1 << 26)) throw UnreachableTarget("ub_min_m: no m found below 2^26");
  }
  int lo = 0;  // ub_eps(n, 0) conceptually 0 < target
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (mid >= 1 && ub_eps(n, mid) >= target_eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double hm_lb_bits(int n, double eps) {
  if (n < 1) throw std::invalid_argument("hm_lb_bits: n must be >= 1");
  if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("hm_lb_bits: eps must be in [0, 1]");
  return eps * (std::sqrt(pow2(n)) - 1.0) / 2.0 - 1.0;
}

namespace {
// hm_eps NaN means "use the row's own eps_lb_opt"; the HM formula saturates
// at eps = 1, so the target is clamped into its domain
SweepRow make_row(int n, const Ensemble& e, const NormBounds& nb, int m, double hm_eps) {
  const OptLowerBound opt = lb_eps_opt(n, m, nb);
  SweepRow row;
  row.n = n;
  row.ensemble = ensemble_label(e);
  row.m = m;
  row.eps_lb_opt = opt.eps;
  row.a_star = opt.a_star;
  row.eps_ub = ub_eps(n, m);
  const double he = std::isnan(hm_eps) ? opt.eps : hm_eps;
  row.hm_bits = hm_lb_bits(n, std::clamp(he, 0.0, 1.0));
  return row;
}
}  // namespace

std::vector<SweepRow> sweep_m(const std::vector<int>& ns,
                              const std::vector<Ensemble>& ensembles, int m_min,
                              int m_max, int m_step) {
  if (m_min < 1 || m_step < 1 || m_max < m_min) {
    throw std::invalid_argument("sweep_m: bad m range");
  }
  std::vector<SweepRow> rows;
  for (int n : ns) {
    for (const Ensemble& e : ensembles) {
      const NormBounds nb = norm_bounds(e, n);
      for (int m = m_min; m <= m_max; m += m_step) {
        rows.push_back(make_row(n, e, nb, m, std::numeric_limits<double>::quiet_NaN()));
      }
    }
  }
  return rows;
}

std::vector<SweepRow> sweep_eps(const std::vector<int>& ns,
                                const std::vector<Ensemble>& ensembles, double eps) {
  std::vector<SweepRow> rows;
  for (int n : ns) {
    for (const Ensemble& e : ensembles) {
      const int m = lb_min_m(n, e, eps);
      rows.push_back(make_row(n, e, norm_bounds(e, n), m, eps));
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "n,ensemble,m,eps_lb_opt,a_star,eps_ub,hm_bits\n";
  char buf[256];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%s,%d,%.10g,%.10g,%.10g,%.10g\n", r.n,
                  r.ensemble.c_str(), r.m, r.eps_lb_opt, r.a_star, r.eps_ub, r.hm_bits);
    out += buf;
  }
  return out;
}

}  // namespace dxhog
