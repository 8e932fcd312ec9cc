#include "dxhog/state.hpp"

#include <Eigen/Dense>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace dxhog {

namespace {
constexpr double kPi = 3.141592653589793238462643383280;
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

cplx polar_pi(double turns_of_pi) {
  // e^{i pi t}
  return {std::cos(kPi * turns_of_pi), std::sin(kPi * turns_of_pi)};
}
}  // namespace

StateVector zero_state(int n) {
  if (n < 0 || n > 30) throw std::invalid_argument("zero_state: n out of range");
  StateVector sv;
  sv.n = n;
  sv.amps.assign(std::uint64_t{1} << n, cplx{0.0, 0.0});
  sv.amps[0] = 1.0;
  return sv;
}

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::h: return "h";
    case GateKind::s: return "s";
    case GateKind::sdg: return "sdg";
    case GateKind::x: return "x";
    case GateKind::z: return "z";
    case GateKind::cz: return "cz";
    case GateKind::cnot: return "cnot";
    case GateKind::u3: return "u3";
    case GateKind::zz: return "zz";
  }
  return "?";
}

GateKind gate_kind_from_name(const std::string& name) {
  if (name == "h") return GateKind::h;
  if (name == "s") return GateKind::s;
  if (name == "sdg") return GateKind::sdg;
  if (name == "x") return GateKind::x;
  if (name == "z") return GateKind::z;
  if (name == "cz") return GateKind::cz;
  if (name == "cnot") return GateKind::cnot;
  if (name == "u3") return GateKind::u3;
  if (name == "zz") return GateKind::zz;
  throw std::invalid_argument("unknown gate kind: " + name);
}

bool gate_is_two_qubit(GateKind k) {
  return k == GateKind::cz || k == GateKind::cnot || k == GateKind::zz;
}

int gate_angle_count(GateKind k) {
  if (k == GateKind::u3) return 3;
  if (k == GateKind::zz) return 1;
  return 0;
}

Gate inverse_gate(const Gate& g) {
  switch (g.kind) {
    case GateKind::h:
    case GateKind::x:
    case GateKind::z:
    case GateKind::cz:
    case GateKind::cnot:
      return g;
    case GateKind::s: return Gate::sdg(g.q0);
    case GateKind::sdg: return Gate::s(g.q0);
    case GateKind::u3: return Gate::u3(g.q0, -g.theta, -g.lambda, -g.phi);
    case GateKind::zz: return Gate::zz(g.q0, g.q1, -g.theta);
  }
  throw std::logic_error("inverse_gate: unreachable");
}

Circuit inverse_circuit(const Circuit& c) {
  Circuit inv;
  inv.n = c.n;
  inv.ops.reserve(c.ops.size());
  for (auto it = c.ops.rbegin(); it != c.ops.rend(); ++it) {
    inv.ops.push_back(inverse_gate(*it));
  }
  return inv;
}

std::array<cplx, 4> u3_matrix(double theta, double phi, double lambda) {
  const double c = std::cos(kPi * theta / 2.0);
  const double s = std::sin(kPi * theta / 2.0);
  return {cplx{c, 0.0}, -polar_pi(lambda) * s, polar_pi(phi) * s,
          polar_pi(phi + lambda) * c};
}

void apply_matrix2(StateVector& sv, int q, const std::array<cplx, 4>& m) {
  assert(q >= 0 && q < sv.n);
  const std::uint64_t step = std::uint64_t{1} << q;
  const std::uint64_t N = sv.dim();
  cplx* a = sv.amps.data();
  for (std::uint64_t base = 0; base < N; base += 2 * step) {
    for (std::uint64_t i = base; i < base + step; ++i) {
      const cplx a0 = a[i];
      const cplx a1 = a[i + step];
      a[i] = m[0] * a0 + m[1] * a1;
      a[i + step] = m[2] * a0 + m[3] * a1;
    }
  }
}

void apply_zz_phase(StateVector& sv, int qa, int qb, cplx f_equal, cplx f_diff) {
  assert(qa != qb && qa >= 0 && qb >= 0 && qa < sv.n && qb < sv.n);
  const std::uint64_t ma = std::uint64_t{1} << qa;
  const std::uint64_t mb = std::uint64_t{1} << qb;
  const std::uint64_t N = sv.dim();
  cplx* a = sv.amps.data();
  for (std::uint64_t i = 0; i < N; ++i) {
    const bool ba = (i & ma) != 0;
    const bool bb = (i & mb) != 0;
    a[i] *= (ba == bb) ? f_equal : f_diff;
  }
}

namespace {

void apply_h(StateVector& sv, int q) {
  const std::uint64_t step = std::uint64_t{1} << q;
  const std::uint64_t N = sv.dim();
  cplx* a = sv.amps.data();
  for (std::uint64_t base = 0; base < N; base += 2 * step) {
    for (std::uint64_t i = base; i < base + step; ++i) {
      const cplx a0 = a[i];
      const cplx a1 = a[i + step];
      a[i] = (a0 + a1) * kInvSqrt2;
      a[i + step] = (a0 - a1) * kInvSqrt2;
    }
  }
}

void apply_phase_if_set(StateVector& sv, int q, cplx f) {
  const std::uint64_t m = std::uint64_t{1} << q;
  const std::uint64_t N = sv.dim();
  cplx* a = sv.amps.data();
  for (std::uint64_t i = 0; i < N; ++i) {
    if (i & m) a[i] *= f;
  }
}

void apply_x(StateVector& sv, int q) {
  const std::uint64_t step = std::uint64_t{1} << q;
  const std::uint64_t N = sv.dim();
  cplx* a = sv.amps.data();
  for (std::uint64_t base = 0; base < N; base += 2 * step) {
    for (std::uint64_t i = base; i < base + step; ++i) {
      std::swap(a[i], a[i + step]);
    }
  }
}

void apply_cz(StateVector& sv, int qa, int qb) {
  const std::uint64_t m = (std::uint64_t{1} << qa) | (std::uint64_t{1} << qb);
  const std::uint64_t N = sv.dim();
  cplx* a = sv.amps.data();
  for (std::uint64_t i = 0; i < N; ++i) {
    if ((i & m) == m) a[i] = -a[i];
  }
}

void apply_cnot(StateVector& sv, int control, int target) {
  const std::uint64_t mc = std::uint64_t{1} << control;
  const std::uint64_t mt = std::uint64_t{1} << target;
  const std::uint64_t N = sv.dim();
  cplx* a = sv.amps.data();
  for (std::uint64_t i = 0; i < N; ++i) {
    if ((i & mc) && !(i & mt)) std::swap(a[i], a[i | mt]);
  }
}

}  // namespace

void apply_gate(StateVector& sv, const Gate& g) {
  switch (g.kind) {
    case GateKind::h:
      apply_h(sv, g.q0);
      return;
    case GateKind::s:
      apply_phase_if_set(sv, g.q0, cplx{0.0, 1.0});
      return;
    case GateKind::sdg:
      apply_phase_if_set(sv, g.q0, cplx{0.0, -1.0});
      return;
    case GateKind::x:
      apply_x(sv, g.q0);
      return;
    case GateKind::z:
      apply_phase_if_set(sv, g.q0, cplx{-1.0, 0.0});
      return;
    case GateKind::cz:
      apply_cz(sv, g.q0, g.q1);
      return;
    case GateKind::cnot:
      apply_cnot(sv, g.q0, g.q1);
      return;
    case GateKind::u3:
      apply_matrix2(sv, g.q0, u3_matrix(g.theta, g.phi, g.lambda));
      return;
    case GateKind::zz:
      // exp(-i pi theta Z Z / 2)
      apply_zz_phase(sv, g.q0, g.q1, polar_pi(-g.theta / 2.0), polar_pi(g.theta / 2.0));
      return;
  }
  throw std::logic_error("apply_gate: unreachable");
}

void apply_circuit(StateVector& sv, const Circuit& c) {
  if (c.n != sv.n) throw std::invalid_argument("apply_circuit: width mismatch");
  for (const Gate& g : c.ops) apply_gate(sv, g);
}

cplx inner_product(const StateVector& a, const StateVector& b) {
  if (a.n != b.n) throw std::invalid_argument("inner_product: width mismatch");
  cplx acc{0.0, 0.0};
  const std::uint64_t N = a.dim();
  for (std::uint64_t i = 0; i < N; ++i) acc += std::conj(a.amps[i]) * b.amps[i];
  return acc;
}

std::array<cplx, 4> pair_sums(const StateVector& a, const StateVector& b, int q) {
  assert(a.n == b.n && q >= 0 && q < a.n);
  const std::uint64_t step = std::uint64_t{1} << q;
  const std::uint64_t N = a.dim();
  const cplx* pa = a.amps.data();
  const cplx* pb = b.amps.data();
  cplx s00{}, s01{}, s10{}, s11{};
  for (std::uint64_t base = 0; base < N; base += 2 * step) {
    for (std::uint64_t i = base; i < base + step; ++i) {
      const cplx a0 = std::conj(pa[i]);
      const cplx a1 = std::conj(pa[i + step]);
      s00 += a0 * pb[i];
      s01 += a0 * pb[i + step];
      s10 += a1 * pb[i];
      s11 += a1 * pb[i + step];
    }
  }
  return {s00, s01, s10, s11};
}

std::array<cplx, 2> zz_sums(const StateVector& a, const StateVector& b, int qa, int qb) {
  assert(a.n == b.n && qa != qb);
  const std::uint64_t ma = std::uint64_t{1} << qa;
  const std::uint64_t mb = std::uint64_t{1} << qb;
  const std::uint64_t N = a.dim();
  cplx s_eq{}, s_diff{};
  for (std::uint64_t i = 0; i < N; ++i) {
    const cplx v = std::conj(a.amps[i]) * b.amps[i];
    if (((i & ma) != 0) == ((i & mb) != 0)) {
      s_eq += v;
    } else {
      s_diff += v;
    }
  }
  return {s_eq, s_diff};
}

double norm2(const StateVector& sv) {
  double acc = 0.0;
  for (const cplx& v : sv.amps) acc += std::norm(v);
  return acc;
}

void normalize(StateVector& sv) {
  const double n2 = norm2(sv);
  if (n2 <= 0.0) throw std::runtime_error("normalize: zero state");
  const double inv = 1.0 / std::sqrt(n2);
  for (cplx& v : sv.amps) v *= inv;
}

StateVector canonical_phase(StateVector sv) {
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t i = 0; i < sv.amps.size(); ++i) {
    const double m = std::norm(sv.amps[i]);
    if (m > best_mag) {
      best_mag = m;
      best = i;
    }
  }
  if (best_mag <= 0.0) return sv;
  const cplx ref = sv.amps[best];
  const cplx rot = std::conj(ref) / std::abs(ref);
  for (cplx& v : sv.amps) v *= rot;
  return sv;
}

std::uint64_t born_sample(const StateVector& sv, RandomStream& rng) {
  const double u = rng.uniform01() * norm2(sv);
  double acc = 0.0;
  const std::uint64_t N = sv.dim();
  for (std::uint64_t i = 0; i < N; ++i) {
    acc += std::norm(sv.amps[i]);
    if (u < acc) return i;
  }
  return N - 1;  // u landed past the accumulated total (rounding)
}

StateVector sample_gaussian_state(int n, RandomStream& rng) {
  StateVector sv;
  sv.n = n;
  const std::uint64_t N = std::uint64_t{1} << n;
  sv.amps.resize(N);
  const double scale = std::exp2(-(n + 1) / 2.0);
  for (std::uint64_t i = 0; i < N; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    sv.amps[i] = cplx{re * scale, im * scale};
  }
  return sv;
}

StateVector sample_haar_state(int n, RandomStream& rng) {
  StateVector sv = sample_gaussian_state(n, rng);
  normalize(sv);
  return sv;
}

SU2Angles sample_haar_su2_angles(RandomStream& rng) {
  // |<0|U|0>|^2 is uniform on [0,1] for Haar U; phases are independent uniform
  const double u = rng.uniform01_pos();
  const double theta = 2.0 * std::acos(std::sqrt(u)) / kPi;
  const double phi = 2.0 * rng.uniform01();
  const double lambda = 2.0 * rng.uniform01();
  return {theta, phi, lambda};
}

DenseMatrix sample_haar_unitary(int n, RandomStream& rng) {
  if (n < 1 || n > 6) throw std::invalid_argument("sample_haar_unitary: n must be 1..6");
  const int dim = 1 << n;
  Eigen::MatrixXcd g(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(r, c) = cplx{re, im};
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // multiply column j by phase(r_jj) so the distribution is exactly Haar
  for (int j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  DenseMatrix out;
  out.dim = dim;
  out.a.resize(static_cast<std::size_t>(dim) * dim);
  for (int rr = 0; rr < dim; ++rr) {
    for (int cc = 0; cc < dim; ++cc) out.at(rr, cc) = q(rr, cc);
  }
  return out;
}

void apply_unitary(StateVector& sv, const DenseMatrix& u) {
  if (static_cast<std::uint64_t>(u.dim) != sv.dim()) {
    throw std::invalid_argument("apply_unitary: dimension mismatch");
  }
  std::vector<cplx> out(sv.amps.size(), cplx{0.0, 0.0});
  for (int r = 0; r < u.dim; ++r) {
    cplx acc{0.0, 0.0};
    for (int c = 0; c < u.dim; ++c) acc += u.at(r, c) * sv.amps[c];
    out[r] = acc;
  }
  sv.amps = std::move(out);
}

}  // namespace dxhog
