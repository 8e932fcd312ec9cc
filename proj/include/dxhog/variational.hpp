// Brickwork ansatz with a noise-weighted fidelity objective and analytic
// gradients, plus the quasi-Newton driver that fits the ansatz to a target
// state.
#pragma once

#include <vector>

#include "dxhog/rng.hpp"
#include "dxhog/state.hpp"

namespace dxhog {

struct NoiseConstants {
  // two-qubit infidelity model eps2q(theta) = c_slope*|theta| + c_offset,
  // theta in pi units folded to [0, 1/2]; eps_mem is the per-gate idle error
  double c_slope = 14.8e-4;
  double c_offset = 2.7e-4;
  double eps_mem = 8e-5;
};

struct LayoutOp {
  bool is_zz = false;
  int q0 = 0;
  int q1 = -1;           // zz only
  int param_offset = 0;  // u3 owns 3 consecutive params, zz owns 1
};

struct AnsatzLayout {
  int n = 0;
  int depth = 0;  // number of zz layers
  int param_count = 0;
  std::vector<LayoutOp> ops;
};

// alternating layers: u3 on every qubit, then a brickwork zz layer; zz layers
// pair (0,1),(2,3),... on even layers and (1,2),...,(n-1,0) on odd layers;
// a final u3 layer closes the circuit. d+1 u3 layers, d zz layers,
// 3n(d+1) + (n/2)d parameters
AnsatzLayout build_layout(int n, int depth);

Circuit ansatz_circuit(const AnsatzLayout& layout, const std::vector<double>& params);
StateVector ansatz_state(const AnsatzLayout& layout, const std::vector<double>& params);

// distance from theta to the nearest integer, in [0, 1/2]; zz at integer
// theta is Clifford and costs nothing in this noise model
double noise_angle(double theta);

// prod over zz gates of (1 - 5/4 eps2q(theta_i) - 3 eps_mem)
double noise_product(const AnsatzLayout& layout, const std::vector<double>& params,
                     const NoiseConstants& nc);

// F = |<target|C(theta)|0^n>|^2 * noise_product; fills the full gradient.
// overlap gradient by reverse-pass adjoint (two sweeps, cost ~ gates * 2^n);
// noise term uses d|a|/da = sign with subgradient 0 at the kink
double objective_grad(const AnsatzLayout& layout, const std::vector<double>& params,
                      const StateVector& target, const NoiseConstants& nc,
                      std::vector<double>& grad);

struct OptimizeOptions {
  int max_iterations = 10000;
  double grad_inf_tol = 1e-8;
  double f_rel_tol = 1e-12;
};

struct OptResult {
  std::vector<double> params;
  double overlap = 0.0;           // |<target|C(theta)|0^n>|^2, noiseless
  double noise_factor = 1.0;
  double predicted_fidelity = 0.0;  // overlap * noise_factor
  int iterations = 0;
  bool converged = false;
};

// u3 angles start Haar-random, zz angles start at 0; maximizes F by
// quasi-Newton descent on -F; if the first attempt cannot move off the
// all-zero zz point, the zz angles are nudged to 1e-3 and the run restarts.
// best-seen parameters are returned, with zz angles wrapped to [-1/2, 1/2]
// (unit shifts absorbed into the following u3 layer's lambda angles)
OptResult optimize_ansatz(const AnsatzLayout& layout, const StateVector& target,
                          const NoiseConstants& nc, const OptimizeOptions& opts,
                          RandomStream& rng);

}  // namespace dxhog
