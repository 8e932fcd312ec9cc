#include "dxhog/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace dxhog {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Pair {
  std::vector<double> s, y;
  double rho;
};

// cubic minimizer of the interpolant through (a, fa, da) and (b, fb);
// falls back to bisection when the cubic is degenerate or outside (a, b)
double cubic_step(double a, double fa, double da, double b, double fb, double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  if (disc < 0.0) return 0.5 * (a + b);
  const double d2 = std::sqrt(disc) * (b > a ? 1.0 : -1.0);
  const double denom = db - da + 2.0 * d2;
  if (denom == 0.0) return 0.5 * (a + b);
  double t = b - (b - a) * (db + d2 - d1) / denom;
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double margin = 0.1 * (hi - lo);
  if (!(t > lo + margin && t < hi - margin)) t = 0.5 * (a + b);
  return t;
}

struct LineSearchEnv {
  const ObjectiveFn& fg;
  const std::vector<double>& x0;
  const std::vector<double>& dir;
  std::vector<double> xt;
  std::vector<double>& grad;  // gradient at the accepted point
  int* evaluations;

  double phi(double alpha, double& dphi) {
    for (std::size_t i = 0; i < x0.size(); ++i) xt[i] = x0[i] + alpha * dir[i];
    const double f = fg(xt, grad);
    ++*evaluations;
    dphi = dot(grad, dir);
    return f;
  }
};

// strong Wolfe: f(a) <= f0 + c1 a d0 and |phi'(a)| <= c2 |d0|.
// returns the accepted alpha, or 0 on failure; on success env.xt/env.grad
// hold the accepted point and its gradient, and *f_out its value
double wolfe_search(LineSearchEnv& env, double f0, double d0, double alpha0,
                    const LbfgsOptions& opts, double* f_out) {
  const double c1 = opts.wolfe_c1, c2 = opts.wolfe_c2;
  double alpha_prev = 0.0, f_prev = f0, d_prev = d0;
  double alpha = alpha0;
  double lo = 0.0, f_lo = f0, d_lo = d0;
  double hi = 0.0, f_hi = 0.0, d_hi = 0.0;
  bool bracketed = false;

  int step = 0;
  for (; step < opts.max_line_search_steps && !bracketed; ++step) {
    double d;
    const double f = env.phi(alpha, d);
    if (f > f0 + c1 * alpha * d0 || (step > 0 && f >= f_prev)) {
      lo = alpha_prev; f_lo = f_prev; d_lo = d_prev;
      hi = alpha; f_hi = f; d_hi = d;
      bracketed = true;
      break;
    }
    if (std::abs(d) <= -c2 * d0) {
      *f_out = f;
      return alpha;
    }
    if (d >= 0.0) {
      lo = alpha; f_lo = f; d_lo = d;
      hi = alpha_prev; f_hi = f_prev; d_hi = d_prev;
      bracketed = true;
      break;
    }
    alpha_prev = alpha; f_prev = f; d_prev = d;
    alpha *= 2.0;
    if (alpha > 1e10) break;
  }
  if (!bracketed) return 0.0;

  // zoom
  for (; step < opts.max_line_search_steps; ++step) {
    const double alpha_j = cubic_step(lo, f_lo, d_lo, hi, f_hi, d_hi);
    if (!(std::abs(hi - lo) > 1e-16 * std::max(1.0, std::abs(lo)))) break;
    double d;
    const double f = env.phi(alpha_j, d);
    if (f > f0 + c1 * alpha_j * d0 || f >= f_lo) {
      hi = alpha_j; f_hi = f; d_hi = d;
    } else {
      if (std::abs(d) <= -c2 * d0) {
        *f_out = f;
        return alpha_j;
      }
      if (d * (hi - lo) >= 0.0) {
        hi = lo; f_hi = f_lo; d_hi = d_lo;
      }
      lo = alpha_j; f_lo = f; d_lo = d;
    }
  }
  // no Wolfe point found; salvage any strict decrease at lo
  if (lo > 0.0 && f_lo < f0) {
    double d;
    *f_out = env.phi(lo, d);
    return lo;
  }
  return 0.0;
}

}  // namespace

LbfgsResult lbfgs_minimize(std::vector<double> x0, const ObjectiveFn& fg,
                           const LbfgsOptions& opts) {
  const std::size_t dim = x0.size();
  LbfgsResult res;
  res.evaluations = 0;

  std::vector<double> x = std::move(x0);
  std::vector<double> g(dim), g_new(dim);
  double f = fg(x, g);
  ++res.evaluations;

  res.x = x;
  res.f = f;

  std::deque<Pair> hist;
  std::vector<double> dir(dim), q(dim);
  std::vector<double> alpha_buf;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    res.iterations = iter;
    if (inf_norm(g) < opts.grad_inf_tol) {
      res.converged = true;
      res.stop_reason = "gradient tolerance";
      return res;
    }

    // two-loop recursion for dir = -H g
    q = g;
    alpha_buf.assign(hist.size(), 0.0);
    for (int i = static_cast<int>(hist.size()) - 1; i >= 0; --i) {
      alpha_buf[i] = hist[i].rho * dot(hist[i].s, q);
      for (std::size_t j = 0; j < dim; ++j) q[j] -= alpha_buf[i] * hist[i].y[j];
    }
    double h0 = 1.0;
    if (!hist.empty()) {
      const double yy = dot(hist.back().y, hist.back().y);
      if (yy > 0.0) h0 = dot(hist.back().s, hist.back().y) / yy;
    }
    for (std::size_t j = 0; j < dim; ++j) q[j] *= h0;
    for (std::size_t i = 0; i < hist.size(); ++i) {
      const double beta = hist[i].rho * dot(hist[i].y, q);
      for (std::size_t j = 0; j < dim; ++j) {
        q[j] += (alpha_buf[i] - beta) * hist[i].s[j];
      }
    }
    for (std::size_t j = 0; j < dim; ++j) dir[j] = -q[j];

    double d0 = dot(g, dir);
    if (d0 >= 0.0) {
      // curvature information went stale; restart from steepest descent
      hist.clear();
      for (std::size_t j = 0; j < dim; ++j) dir[j] = -g[j];
      d0 = dot(g, dir);
      if (d0 >= 0.0) {
        res.converged = true;
        res.stop_reason = "zero gradient";
        return res;
      }
    }

    const double alpha0 =
        hist.empty() ? std::min(1.0, 1.0 / std::max(1e-12, inf_norm(g))) : 1.0;
    LineSearchEnv env{fg, x, dir, std::vector<double>(dim), g_new, &res.evaluations};
    double f_new = f;
    const double alpha = wolfe_search(env, f, d0, alpha0, opts, &f_new);
    if (alpha == 0.0) {
      res.stop_reason = "line search failed";
      return res;
    }

    Pair p;
    p.s.resize(dim);
    p.y.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      p.s[j] = env.xt[j] - x[j];
      p.y[j] = g_new[j] - g[j];
    }
    const double sy = dot(p.s, p.y);
    if (sy > 1e-16) {
      p.rho = 1.0 / sy;
      hist.push_back(std::move(p));
      if (static_cast<int>(hist.size()) > opts.memory) hist.pop_front();
    }

    const double f_prev = f;
    x = env.xt;
    g = g_new;
    f = f_new;
    if (f < res.f) {
      res.f = f;
      res.x = x;
    }
    if (std::abs(f_prev - f) <= opts.f_rel_tol * std::max(1.0, std::abs(f))) {
      res.iterations = iter + 1;
      res.converged = true;
      res.stop_reason = "function tolerance";
      return res;
    }
  }
  res.iterations = opts.max_iterations;
  res.stop_reason = "iteration limit";
  return res;
}

}  // namespace dxhog
