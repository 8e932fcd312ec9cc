#include "dxhog/variational.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "dxhog/lbfgs.hpp"

namespace dxhog {

namespace {
constexpr double kPi = 3.141592653589793238462643383280;

cplx polar_pi(double t) { return {std::cos(kPi * t), std::sin(kPi * t)}; }

Gate layout_gate(const LayoutOp& op, const std::vector<double>& p) {
  if (op.is_zz) return Gate::zz(op.q0, op.q1, p[op.param_offset]);
  return Gate::u3(op.q0, p[op.param_offset], p[op.param_offset + 1],
                  p[op.param_offset + 2]);
}

double noise_factor_one(double theta, const NoiseConstants& nc) {
  const double eps2q = nc.c_slope * noise_angle(theta) + nc.c_offset;
  return 1.0 - 1.25 * eps2q - 3.0 * nc.eps_mem;
}
}  // namespace

AnsatzLayout build_layout(int n, int depth) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("build_layout: n must be even and >= 2");
  }
  if (depth < 1) throw std::invalid_argument("build_layout: depth must be >= 1");
  AnsatzLayout layout;
  layout.n = n;
  layout.depth = depth;
  int off = 0;
  auto push_u3_layer = [&] {
    for (int q = 0; q < n; ++q) {
      layout.ops.push_back({false, q, -1, off});
      off += 3;
    }
  };
  push_u3_layer();
  for (int layer = 0; layer < depth; ++layer) {
    if (layer % 2 == 0) {
      for (int q = 0; q < n; q += 2) {
        layout.ops.push_back({true, q, q + 1, off});
        off += 1;
      }
    } else {
      for (int q = 1; q < n; q += 2) {
        layout.ops.push_back({true, q, (q + 1) % n, off});
        off += 1;
      }
    }
    push_u3_layer();
  }
  layout.param_count = off;
  assert(off == 3 * n * (depth + 1) + (n / 2) * depth);
  return layout;
}

Circuit ansatz_circuit(const AnsatzLayout& layout, const std::vector<double>& params) {
  if (static_cast<int>(params.size()) != layout.param_count) {
    throw std::invalid_argument("ansatz_circuit: parameter length mismatch");
  }
  Circuit c;
  c.n = layout.n;
  c.ops.reserve(layout.ops.size());
  for (const LayoutOp& op : layout.ops) c.ops.push_back(layout_gate(op, params));
  return c;
}

StateVector ansatz_state(const AnsatzLayout& layout, const std::vector<double>& params) {
  StateVector sv = zero_state(layout.n);
  apply_circuit(sv, ansatz_circuit(layout, params));
  return sv;
}

double noise_angle(double theta) {
  const double r = theta - std::nearbyint(theta);
  return std::abs(r);
}

double noise_product(const AnsatzLayout& layout, const std::vector<double>& params,
                     const NoiseConstants& nc) {
  if (static_cast<int>(params.size()) != layout.param_count) {
    throw std::invalid_argument("noise_product: parameter length mismatch");
  }
  double p = 1.0;
  for (const LayoutOp& op : layout.ops) {
    if (op.is_zz) p *= noise_factor_one(params[op.param_offset], nc);
  }
  return p;
}

double objective_grad(const AnsatzLayout& layout, const std::vector<double>& params,
                      const StateVector& target, const NoiseConstants& nc,
                      std::vector<double>& grad) {
  if (static_cast<int>(params.size()) != layout.param_count) {
    throw std::invalid_argument("objective_grad: parameter length mismatch");
  }
  if (target.n != layout.n) throw std::invalid_argument("objective_grad: target width");
  grad.assign(layout.param_count, 0.0);

  StateVector ket = zero_state(layout.n);
  for (const LayoutOp& op : layout.ops) apply_gate(ket, layout_gate(op, params));
  const cplx O = inner_product(target, ket);
  const double overlap = std::norm(O);
  const double P = noise_product(layout, params, nc);
  const double F = overlap * P;

  // reverse pass: lam_j = G_{j+1}^dag ... G_L^dag |target>, ket_j = phi_{j-1};
  // dO/dp = <lam_j| dG_j/dp |phi_{j-1}>
  StateVector lam = target;
  for (auto it = layout.ops.rbegin(); it != layout.ops.rend(); ++it) {
    const LayoutOp& op = *it;
    const Gate g = layout_gate(op, params);
    apply_gate(ket, inverse_gate(g));
    if (op.is_zz) {
      const double th = params[op.param_offset];
      const auto [s_eq, s_diff] = zz_sums(lam, ket, op.q0, op.q1);
      const cplx d_eq = cplx{0.0, -kPi / 2.0} * polar_pi(-th / 2.0);
      const cplx d_diff = cplx{0.0, kPi / 2.0} * polar_pi(th / 2.0);
      const cplx dO = d_eq * s_eq + d_diff * s_diff;
      grad[op.param_offset] += P * 2.0 * (std::conj(O) * dO).real();
      // noise term: d a(theta)/d theta = sign(theta - nearest int), 0 at the kink
      const double r = th - std::nearbyint(th);
      if (r != 0.0) {
        const double f = noise_factor_one(th, nc);
        const double sg = (r > 0.0) ? 1.0 : -1.0;
        // dP/dtheta = P/f * (-5/4 c_slope sign)
        if (f != 0.0) {
          grad[op.param_offset] += overlap * (P / f) * (-1.25 * nc.c_slope * sg);
        }
      }
    } else {
      const double th = params[op.param_offset];
      const double ph = params[op.param_offset + 1];
      const double la = params[op.param_offset + 2];
      const double c = std::cos(kPi * th / 2.0);
      const double s = std::sin(kPi * th / 2.0);
      const cplx e_la = polar_pi(la);
      const cplx e_ph = polar_pi(ph);
      const cplx e_pl = polar_pi(ph + la);
      const auto [s00, s01, s10, s11] = pair_sums(lam, ket, op.q0);
      const double half_pi = kPi / 2.0;
      const cplx ipi{0.0, kPi};
      const cplx dO_th = half_pi * (-s * s00 - e_la * c * s01 + e_ph * c * s10 -
                                    e_pl * s * s11);
      const cplx dO_ph = ipi * (e_ph * s * s10 + e_pl * c * s11);
      const cplx dO_la = ipi * (-e_la * s * s01 + e_pl * c * s11);
      grad[op.param_offset] += P * 2.0 * (std::conj(O) * dO_th).real();
      grad[op.param_offset + 1] += P * 2.0 * (std::conj(O) * dO_ph).real();
      grad[op.param_offset + 2] += P * 2.0 * (std::conj(O) * dO_la).real();
    }
    apply_gate(lam, inverse_gate(g));
  }
  return F;
}

namespace {

// wrap zz angles into [-1/2, 1/2]; each odd unit shift is a Z on both qubits,
// absorbed into the lambda of the next u3 layer (which always exists)
void wrap_zz_params(const AnsatzLayout& layout, std::vector<double>& p) {
  for (std::size_t i = 0; i < layout.ops.size(); ++i) {
    const LayoutOp& op = layout.ops[i];
    if (!op.is_zz) continue;
    const double shift = std::nearbyint(p[op.param_offset]);
    if (shift == 0.0) continue;
    p[op.param_offset] -= shift;
    if (std::fmod(std::abs(shift), 2.0) == 1.0) {
      for (int q : {op.q0, op.q1}) {
        for (std::size_t j = i + 1; j < layout.ops.size(); ++j) {
          if (!layout.ops[j].is_zz && layout.ops[j].q0 == q) {
            double& la = p[layout.ops[j].param_offset + 2];
            la = la + 1.0;
            la -= 2.0 * std::floor(la / 2.0);  // keep in [0, 2)
            break;
          }
        }
      }
    }
  }
}

}  // namespace

OptResult optimize_ansatz(const AnsatzLayout& layout, const StateVector& target,
                          const NoiseConstants& nc, const OptimizeOptions& opts,
                          RandomStream& rng) {
  std::vector<double> x0(layout.param_count, 0.0);
  for (const LayoutOp& op : layout.ops) {
    if (op.is_zz) continue;
    const SU2Angles a = sample_haar_su2_angles(rng);
    x0[op.param_offset] = a.theta;
    x0[op.param_offset + 1] = a.phi;
    x0[op.param_offset + 2] = a.lambda;
  }

  const ObjectiveFn fg = [&](const std::vector<double>& p, std::vector<double>& g) {
    const double F = objective_grad(layout, p, target, nc, g);
    for (double& v : g) v = -v;
    return -F;
  };

  LbfgsOptions lopts;
  lopts.max_iterations = opts.max_iterations;
  lopts.grad_inf_tol = opts.grad_inf_tol;
  lopts.f_rel_tol = opts.f_rel_tol;

  std::vector<double> g0(layout.param_count);
  const double f0 = fg(x0, g0);
  LbfgsResult res = lbfgs_minimize(x0, fg, lopts);
  if (res.f >= f0 - 1e-12) {
    // stalled at the all-zero zz kink; nudge and retry
    std::vector<double> x1 = x0;
    for (const LayoutOp& op : layout.ops) {
      if (op.is_zz) x1[op.param_offset] = 1e-3;
    }
    LbfgsResult res2 = lbfgs_minimize(std::move(x1), fg, lopts);
    if (res2.f < res.f) res = std::move(res2);
  }

  OptResult out;
  out.params = std::move(res.x);
  wrap_zz_params(layout, out.params);
  out.overlap = std::norm(inner_product(target, ansatz_state(layout, out.params)));
  out.noise_factor = noise_product(layout, out.params, nc);
  out.predicted_fidelity = out.overlap * out.noise_factor;
  out.iterations = res.iterations;
  out.converged = res.converged;
  return out;
}

}  // namespace dxhog
