// Uniform stabilizer-state sampling as layered circuits, the rewrite into the
// X-H-S-CZ-H measurement template, and exact enumeration oracles for small n.
//
// Qubit sets are stored as bitmasks (bit q = qubit q), which caps this module
// at 32 qubits; everything downstream uses n <= 20.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dxhog/rng.hpp"
#include "dxhog/state.hpp"

namespace dxhog {

struct RrefMatrix {
  int n = 0;                    // columns
  int k = 0;                    // rows = subspace dimension
  std::vector<std::uint32_t> bits;  // row r, bit j = entry (r, j)
  std::vector<int> pivots;      // strictly increasing pivot columns
};

struct RawStabilizerCircuit {
  int n = 0;
  std::vector<int> T;  // pivot qubits, ascending
  std::vector<std::pair<int, int>> cnot_edges;  // (control in T, target not in T)
  std::uint32_t x_mask = 0;  // subset of complement of T
  std::uint32_t s_mask = 0;  // subset of T
  std::uint32_t z_mask = 0;  // subset of T
  std::vector<std::pair<int, int>> cz_edges;  // unordered pairs within T, lex order
};

struct MeasurementTemplate {
  int n = 0;
  std::vector<int> T;
  std::uint32_t x_mask = 0;  // any subset of [n]
  std::uint32_t s_mask = 0;  // subset of T
  std::vector<std::pair<int, int>> cz_edges;  // within T or crossing T/complement
  std::uint32_t final_h = 0;  // complement of T
};

// relative weight of support codimension d: 2^{-d(d+1)/2} *
// prod_{a=1..d} (1 - 2^{d-n-a}) / (1 - 2^{-a}); eta(n, 0) = 1
double eta(int n, int d);

// support dimension k, distributed as GaussianBinomial2(n, k) * 2^{k(k+1)/2},
// i.e. k = n - d with d drawn from the eta weights
int sample_support_dim(int n, RandomStream& rng);

// uniform over k-dimensional subspaces of F_2^n, returned in RREF; rejection
// sampling of full-rank k x n matrices (acceptance > 0.288 for every n)
RrefMatrix sample_rref_subspace(int n, int k, RandomStream& rng);

// layered preparation of a uniformly random stabilizer state:
// H(T) -> CNOT -> X -> S -> Z -> CZ applied to |0^n>.
// coin order is pinned (x ascending, s ascending, z ascending, cz pairs lex)
// so a given rng stream always yields the same circuit
RawStabilizerCircuit sample_stabilizer_preparation(int n, RandomStream& rng);

// number of n-qubit stabilizer states, 2^n * prod_{k=1..n} (2^k + 1);
// throws std::overflow_error once the value exceeds 64 bits (n = 10)
std::uint64_t stabilizer_count(int n);

// rewrites the raw layers into X(x_mask) -> H(all) -> S(s_mask) ->
// CZ(cz_edges) -> H(final_h), equal to the raw circuit up to global phase:
// CNOT(c, t) = H_t CZ(c, t) H_t, the Z layer pulled through H turns into X on
// T, and the raw X layer commutes to the front unchanged
MeasurementTemplate to_measurement_template(const RawStabilizerCircuit& raw);

Circuit raw_circuit(const RawStabilizerCircuit& raw);
Circuit template_circuit(const MeasurementTemplate& tpl);

// H(final_h) -> CZ(cz_edges) -> Sdg(s_mask) -> H(all) -> X(x_mask);
// template followed by this is the identity up to global phase
Circuit inverse_measurement_circuit(const MeasurementTemplate& tpl);

// state prepared by the template, |psi> = template_circuit|0^n>
StateVector template_state(const MeasurementTemplate& tpl);

// all stabilizer states for n <= 3, one canonical representative per ray:
// every affine subspace paired with every linear/imaginary/quadratic phase
// polynomial, then canonical_phase applied
std::vector<StateVector> enumerate_stabilizer_states(int n);

// rounds amplitudes to a 1e-6 grid and prints them; equal keys iff equal
// canonical states at stabilizer precision
std::string canonical_key(const StateVector& sv);

// all RREF matrices of rank k in F_2^{k x n}, enumeration order fixed
std::vector<RrefMatrix> enumerate_rref(int n, int k);

}  // namespace dxhog
