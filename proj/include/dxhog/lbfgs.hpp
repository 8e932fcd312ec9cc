// Limited-memory BFGS with a strong-Wolfe line search (Nocedal & Wright,
// Algorithms 3.5/3.6 and the standard two-loop recursion).
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace dxhog {

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 10000;
  double grad_inf_tol = 1e-8;   // stop when ||g||_inf drops below
  double f_rel_tol = 1e-12;     // stop when |f_k - f_{k+1}| <= tol * max(1, |f|)
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int max_line_search_steps = 60;
};

struct LbfgsResult {
  std::vector<double> x;  // best point seen across all evaluations
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string stop_reason;
};

// objective: fills grad (same length as x) and returns f
using ObjectiveFn =
    std::function<double(const std::vector<double>&, std::vector<double>&)>;

LbfgsResult lbfgs_minimize(std::vector<double> x0, const ObjectiveFn& fg,
                           const LbfgsOptions& opts = {});

}  // namespace dxhog
