// Dense statevector simulator.
//
// Basis states are indexed by integers; qubit q is bit q of the index
// (qubit 0 is the least significant bit). All gate angles are in units of
// pi, so zz(a, b, 1.0) means exp(-i pi Z_a Z_b / 2).
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dxhog/rng.hpp"

namespace dxhog {

using cplx = std::complex<double>;

struct StateVector {
  int n = 0;
  std::vector<cplx> amps;

  std::uint64_t dim() const { return std::uint64_t{1} << n; }
};

StateVector zero_state(int n);

enum class GateKind { h, s, sdg, x, z, cz, cnot, u3, zz };

const char* gate_name(GateKind k);
GateKind gate_kind_from_name(const std::string& name);
bool gate_is_two_qubit(GateKind k);
int gate_angle_count(GateKind k);

struct Gate {
  GateKind kind;
  int q0 = -1;
  int q1 = -1;                                // two-qubit kinds only
  double theta = 0.0, phi = 0.0, lambda = 0.0;  // pi units; zz uses theta

  static Gate h(int q) { return {GateKind::h, q}; }
  static Gate s(int q) { return {GateKind::s, q}; }
  static Gate sdg(int q) { return {GateKind::sdg, q}; }
  static Gate x(int q) { return {GateKind::x, q}; }
  static Gate z(int q) { return {GateKind::z, q}; }
  static Gate cz(int a, int b) { return {GateKind::cz, a, b}; }
  static Gate cnot(int control, int target) { return {GateKind::cnot, control, target}; }
  static Gate u3(int q, double th, double ph, double la) {
    return {GateKind::u3, q, -1, th, ph, la};
  }
  static Gate zz(int a, int b, double th) { return {GateKind::zz, a, b, th}; }
};

struct Circuit {
  int n = 0;
  std::vector<Gate> ops;
};

Gate inverse_gate(const Gate& g);
Circuit inverse_circuit(const Circuit& c);

// row-major 2x2 of u3(theta, phi, lambda):
//   [ cos(pi th/2)              -e^{i pi la} sin(pi th/2)      ]
//   [ e^{i pi ph} sin(pi th/2)   e^{i pi (ph+la)} cos(pi th/2) ]
std::array<cplx, 4> u3_matrix(double theta, double phi, double lambda);

// low-level kernels; gates route through these
void apply_matrix2(StateVector& sv, int q, const std::array<cplx, 4>& m);
// diagonal two-qubit phase: amp *= f_equal when bits a,b agree, else f_diff
void apply_zz_phase(StateVector& sv, int a, int b, cplx f_equal, cplx f_diff);

void apply_gate(StateVector& sv, const Gate& g);
void apply_circuit(StateVector& sv, const Circuit& c);

cplx inner_product(const StateVector& a, const StateVector& b);  // <a|b>

// contraction helpers for adjoint-mode gradients. pair_sums returns S_kl =
// sum over index pairs of conj(a | bit q = k) * (b | bit q = l), so that
// <a|M_q|b> = sum_kl m_kl S_kl for any single-qubit M. zz_sums splits
// sum conj(a_i) b_i by whether bits qa and qb agree.
std::array<cplx, 4> pair_sums(const StateVector& a, const StateVector& b, int q);
std::array<cplx, 2> zz_sums(const StateVector& a, const StateVector& b, int qa, int qb);
double norm2(const StateVector& sv);
void normalize(StateVector& sv);

// fixes the global phase: the largest-magnitude amplitude (lowest index on
// ties) is rotated onto the positive real axis
StateVector canonical_phase(StateVector sv);

// single uniform draw, inverse-CDF walk over |amps|^2
std::uint64_t born_sample(const StateVector& sv, RandomStream& rng);

// amplitudes are (a + ib)/sqrt(2^{n+1}) with a, b standard normal; the
// squared norm concentrates at 1 but the state is not normalized
StateVector sample_gaussian_state(int n, RandomStream& rng);
// normalized gaussian state, i.e. Haar on the unit sphere
StateVector sample_haar_state(int n, RandomStream& rng);

struct SU2Angles {
  double theta, phi, lambda;
};
// u3 angles of a Haar-random SU(2) element (up to global phase)
SU2Angles sample_haar_su2_angles(RandomStream& rng);

struct DenseMatrix {
  int dim = 0;
  std::vector<cplx> a;  // row-major

  cplx& at(int r, int c) { return a[static_cast<std::size_t>(r) * dim + c]; }
  const cplx& at(int r, int c) const { return a[static_cast<std::size_t>(r) * dim + c]; }
};

// Haar unitary on n qubits via Ginibre + QR with the R-diagonal phase fix;
// meant as a reference oracle, so n is capped at 6
DenseMatrix sample_haar_unitary(int n, RandomStream& rng);
void apply_unitary(StateVector& sv, const DenseMatrix& u);

}  // namespace dxhog
