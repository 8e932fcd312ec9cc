#include "dxhog/stabilizer.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace dxhog {

namespace {

std::uint32_t full_mask(int n) { return (n >= 32) ? ~0u : ((1u << n) - 1u); }

std::uint32_t set_to_mask(const std::vector<int>& qs) {
  std::uint32_t m = 0;
  for (int q : qs) m |= 1u << q;
  return m;
}

// in-place reduction to RREF; returns rank, rows end ordered by pivot
int rref_in_place(std::vector<std::uint32_t>& rows, int n) {
  int r = 0;
  const int k = static_cast<int>(rows.size());
  for (int j = 0; j < n && r < k; ++j) {
    int src = -1;
    for (int i = r; i < k; ++i) {
      if (rows[i] & (1u << j)) {
        src = i;
        break;
      }
    }
    if (src < 0) continue;
    std::swap(rows[r], rows[src]);
    for (int i = 0; i < k; ++i) {
      if (i != r && (rows[i] & (1u << j))) rows[i] ^= rows[r];
    }
    ++r;
  }
  return r;
}

std::vector<int> pivot_columns(const std::vector<std::uint32_t>& rows) {
  std::vector<int> piv;
  piv.reserve(rows.size());
  for (std::uint32_t row : rows) piv.push_back(std::countr_zero(row));
  return piv;
}

}  // namespace

double eta(int n, int d) {
  if (d < 0 || d > n) throw std::invalid_argument("eta: d out of range");
  if (d == 0) return 1.0;
  double v = std::exp2(-0.5 * d * (d + 1));
  for (int a = 1; a <= d; ++a) {
    v *= (1.0 - std::exp2(d - n - a)) / (1.0 - std::exp2(-a));
  }
  return v;
}

int sample_support_dim(int n, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_support_dim: n must be >= 1");
  // weight of dimension k is eta(n, n - k)
  double total = 0.0;
  std::vector<double> w(n + 1);
  for (int d = 0; d <= n; ++d) {
    w[d] = eta(n, d);
    total += w[d];
  }
  const double u = rng.uniform01() * total;
  double acc = 0.0;
  for (int d = 0; d <= n; ++d) {
    acc += w[d];
    if (u < acc) return n - d;
  }
  return 0;
}

RrefMatrix sample_rref_subspace(int n, int k, RandomStream& rng) {
  if (n < 1 || n > 32 || k < 0 || k > n) {
    throw std::invalid_argument("sample_rref_subspace: bad n or k");
  }
  RrefMatrix m;
  m.n = n;
  m.k = k;
  if (k == 0) return m;
  const std::uint32_t mask = full_mask(n);
  std::vector<std::uint32_t> rows(k);
  for (;;) {
    for (auto& r : rows) r = static_cast<std::uint32_t>(rng.next_u64()) & mask;
    std::vector<std::uint32_t> reduced = rows;
    if (rref_in_place(reduced, n) == k) {
      m.bits = std::move(reduced);
      m.pivots = pivot_columns(m.bits);
      return m;
    }
  }
}

RawStabilizerCircuit sample_stabilizer_preparation(int n, RandomStream& rng) {
  const int k = sample_support_dim(n, rng);
  const RrefMatrix rref = sample_rref_subspace(n, std::max(k, 0), rng);

  RawStabilizerCircuit raw;
  raw.n = n;
  raw.T = rref.pivots;
  for (int r = 0; r < rref.k; ++r) {
    const int control = rref.pivots[r];
    for (int j = control + 1; j < n; ++j) {
      if ((rref.bits[r] & (1u << j)) && j != control) {
        raw.cnot_edges.emplace_back(control, j);  // j is never a pivot column
      }
    }
  }
  const std::uint32_t t_mask = set_to_mask(raw.T);
  const std::uint32_t comp = full_mask(n) & ~t_mask;
  for (int q = 0; q < n; ++q) {
    if ((comp & (1u << q)) && rng.coin(0.5)) raw.x_mask |= 1u << q;
  }
  for (int t : raw.T) {
    if (rng.coin(0.5)) raw.s_mask |= 1u << t;
  }
  for (int t : raw.T) {
    if (rng.coin(0.5)) raw.z_mask |= 1u << t;
  }
  for (std::size_t i = 0; i < raw.T.size(); ++i) {
    for (std::size_t j = i + 1; j < raw.T.size(); ++j) {
      if (rng.coin(0.5)) raw.cz_edges.emplace_back(raw.T[i], raw.T[j]);
    }
  }
  return raw;
}

std::uint64_t stabilizer_count(int n) {
  if (n < 1 || n > 10) throw std::invalid_argument("stabilizer_count: n must be 1..10");
  unsigned __int128 acc = std::uint64_t{1} << n;
  for (int k = 1; k <= n; ++k) {
    acc *= (std::uint64_t{1} << k) + 1;
    if (acc > static_cast<unsigned __int128>(~std::uint64_t{0})) {
      throw std::overflow_error("stabilizer_count: exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

MeasurementTemplate to_measurement_template(const RawStabilizerCircuit& raw) {
  MeasurementTemplate tpl;
  tpl.n = raw.n;
  tpl.T = raw.T;
  // z on t, pulled right through the H layer, becomes x on t; the raw x layer
  // commutes through the cnot blocks untouched (x on a cnot target)
  tpl.x_mask = raw.x_mask | raw.z_mask;
  tpl.s_mask = raw.s_mask;
  tpl.cz_edges = raw.cz_edges;
  tpl.cz_edges.insert(tpl.cz_edges.end(), raw.cnot_edges.begin(), raw.cnot_edges.end());
  std::sort(tpl.cz_edges.begin(), tpl.cz_edges.end());
  tpl.final_h = full_mask(raw.n) & ~set_to_mask(raw.T);
  return tpl;
}

Circuit raw_circuit(const RawStabilizerCircuit& raw) {
  Circuit c;
  c.n = raw.n;
  for (int t : raw.T) c.ops.push_back(Gate::h(t));
  for (const auto& [control, target] : raw.cnot_edges) {
    c.ops.push_back(Gate::cnot(control, target));
  }
  for (int q = 0; q < raw.n; ++q) {
    if (raw.x_mask & (1u << q)) c.ops.push_back(Gate::x(q));
  }
  for (int q = 0; q < raw.n; ++q) {
    if (raw.s_mask & (1u << q)) c.ops.push_back(Gate::s(q));
  }
  for (int q = 0; q < raw.n; ++q) {
    if (raw.z_mask & (1u << q)) c.ops.push_back(Gate::z(q));
  }
  for (const auto& [a, b] : raw.cz_edges) c.ops.push_back(Gate::cz(a, b));
  return c;
}

Circuit template_circuit(const MeasurementTemplate& tpl) {
  Circuit c;
  c.n = tpl.n;
  for (int q = 0; q < tpl.n; ++q) {
    if (tpl.x_mask & (1u << q)) c.ops.push_back(Gate::x(q));
  }
  for (int q = 0; q < tpl.n; ++q) c.ops.push_back(Gate::h(q));
  for (int q = 0; q < tpl.n; ++q) {
    if (tpl.s_mask & (1u << q)) c.ops.push_back(Gate::s(q));
  }
  for (const auto& [a, b] : tpl.cz_edges) c.ops.push_back(Gate::cz(a, b));
  for (int q = 0; q < tpl.n; ++q) {
    if (tpl.final_h & (1u << q)) c.ops.push_back(Gate::h(q));
  }
  return c;
}

Circuit inverse_measurement_circuit(const MeasurementTemplate& tpl) {
  Circuit c;
  c.n = tpl.n;
  for (int q = 0; q < tpl.n; ++q) {
    if (tpl.final_h & (1u << q)) c.ops.push_back(Gate::h(q));
  }
  for (const auto& [a, b] : tpl.cz_edges) c.ops.push_back(Gate::cz(a, b));
  for (int q = 0; q < tpl.n; ++q) {
    if (tpl.s_mask & (1u << q)) c.ops.push_back(Gate::sdg(q));
  }
  for (int q = 0; q < tpl.n; ++q) c.ops.push_back(Gate::h(q));
  for (int q = 0; q < tpl.n; ++q) {
    if (tpl.x_mask & (1u << q)) c.ops.push_back(Gate::x(q));
  }
  return c;
}

StateVector template_state(const MeasurementTemplate& tpl) {
  StateVector sv = zero_state(tpl.n);
  apply_circuit(sv, template_circuit(tpl));
  return sv;
}

std::vector<RrefMatrix> enumerate_rref(int n, int k) {
  if (n < 1 || n > 16 || k < 0 || k > n) throw std::invalid_argument("enumerate_rref: bad n or k");
  std::vector<RrefMatrix> out;
  if (k == 0) {
    out.push_back(RrefMatrix{n, 0, {}, {}});
    return out;
  }
  // walk pivot combinations in lexicographic order
  std::vector<int> piv(k);
  for (int i = 0; i < k; ++i) piv[i] = i;
  for (;;) {
    // free entries: non-pivot columns to the right of each row's pivot
    std::vector<std::pair<int, int>> free_pos;  // (row, column)
    const std::uint32_t piv_mask = set_to_mask(piv);
    for (int r = 0; r < k; ++r) {
      for (int j = piv[r] + 1; j < n; ++j) {
        if (!(piv_mask & (1u << j))) free_pos.emplace_back(r, j);
      }
    }
    const std::uint64_t combos = std::uint64_t{1} << free_pos.size();
    for (std::uint64_t bits = 0; bits < combos; ++bits) {
      RrefMatrix m;
      m.n = n;
      m.k = k;
      m.pivots = piv;
      m.bits.assign(k, 0);
      for (int r = 0; r < k; ++r) m.bits[r] = 1u << piv[r];
      for (std::size_t f = 0; f < free_pos.size(); ++f) {
        if (bits & (std::uint64_t{1} << f)) {
          m.bits[free_pos[f].first] |= 1u << free_pos[f].second;
        }
      }
      out.push_back(std::move(m));
    }
    // next combination
    int i = k - 1;
    while (i >= 0 && piv[i] == n - k + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
  return out;
}

std::vector<StateVector> enumerate_stabilizer_states(int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("enumerate_stabilizer_states: n must be 1..3");
  const double sqrt_half = std::sqrt(0.5);
  static const cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

  std::vector<StateVector> out;
  for (int k = 0; k <= n; ++k) {
    for (const RrefMatrix& m : enumerate_rref(n, k)) {
      const std::uint32_t piv_mask = set_to_mask(m.pivots);
      std::vector<int> comp;
      for (int q = 0; q < n; ++q) {
        if (!(piv_mask & (1u << q))) comp.push_back(q);
      }
      const double mag = std::pow(sqrt_half, k);
      const int qpairs = k * (k - 1) / 2;
      // coset representative y supported on the complement of the pivots
      for (std::uint32_t ybits = 0; ybits < (1u << comp.size()); ++ybits) {
        std::uint32_t y = 0;
        for (std::size_t c = 0; c < comp.size(); ++c) {
          if (ybits & (1u << c)) y |= 1u << comp[c];
        }
        for (std::uint32_t s = 0; s < (1u << k); ++s) {
          for (std::uint32_t z = 0; z < (1u << k); ++z) {
            for (std::uint32_t quad = 0; quad < (1u << qpairs); ++quad) {
              StateVector sv = zero_state(n);
              sv.amps[0] = 0.0;
              for (std::uint32_t a = 0; a < (1u << k); ++a) {
                std::uint32_t idx = y;
                for (int r = 0; r < k; ++r) {
                  if (a & (1u << r)) idx ^= m.bits[r];
                }
                int ipow = std::popcount(a & s) + 2 * std::popcount(a & z);
                int qbit = 0;
                for (int r = 0; r < k; ++r) {
                  for (int r2 = r + 1; r2 < k; ++r2, ++qbit) {
                    if ((quad & (1u << qbit)) && (a & (1u << r)) && (a & (1u << r2))) {
                      ipow += 2;
                    }
                  }
                }
                sv.amps[idx] = i_pow[ipow & 3] * mag;
              }
              out.push_back(canonical_phase(std::move(sv)));
            }
          }
        }
      }
    }
  }
  assert(out.size() == stabilizer_count(n));
  return out;
}

std::string canonical_key(const StateVector& sv) {
  std::string key;
  key.reserve(sv.amps.size() * 8);
  char buf[48];
  for (const cplx& v : sv.amps) {
    const long long re = llround(v.real() * 1e6);
    const long long im = llround(v.imag() * 1e6);
    std::snprintf(buf, sizeof buf, "%lld,%lld;", re, im);
    key += buf;
  }
  return key;
}

}  // namespace dxhog
