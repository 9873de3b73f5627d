// Copyright 2026 The qunary Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qunary/gate.hpp"

namespace qunary {

// Amplitude index bit j is qubit j (qubit 0 is least significant).
namespace kernels {

inline std::size_t insert_zero(std::size_t x, int bit) {
  std::size_t low = x & ((std::size_t{1} << bit) - 1);
  return ((x >> bit) << (bit + 1)) | low;
}

inline void apply_1q(cplx* d, int nq, int q, const cplx* m) {
  const std::size_t n = std::size_t{1} << nq, stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t j = base; j < base + stride; ++j) {
      cplx a = d[j], b = d[j + stride];
      d[j] = m[0] * a + m[1] * b;
      d[j + stride] = m[2] * a + m[3] * b;
    }
  }
}

inline void apply_x(cplx* d, int nq, int q) {
  const std::size_t n = std::size_t{1} << nq, stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < n; base += 2 * stride)
    for (std::size_t j = base; j < base + stride; ++j) std::swap(d[j], d[j + stride]);
}

inline void apply_diag_1q(cplx* d, int nq, int q, cplx d0, cplx d1) {
  const std::size_t n = std::size_t{1} << nq, stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t j = base; j < base + stride; ++j) {
      d[j] *= d0;
      d[j + stride] *= d1;
    }
  }
}

// m is 4x4 row-major in the local basis 2*bit(a) + bit(b).
inline void apply_2q(cplx* d, int nq, int a, int b, const cplx* m) {
  const std::size_t quarter = std::size_t{1} << (nq - 2);
  const std::size_t ma = std::size_t{1} << a, mb = std::size_t{1} << b;
  const int lo = std::min(a, b), hi = std::max(a, b);
  for (std::size_t r = 0; r < quarter; ++r) {
    std::size_t i0 = insert_zero(insert_zero(r, lo), hi);
    std::size_t idx[4] = {i0, i0 | mb, i0 | ma, i0 | ma | mb};
    cplx v[4] = {d[idx[0]], d[idx[1]], d[idx[2]], d[idx[3]]};
    for (int row = 0; row < 4; ++row) {
      const cplx* mr = m + 4 * row;
      d[idx[row]] = mr[0] * v[0] + mr[1] * v[1] + mr[2] * v[2] + mr[3] * v[3];
    }
  }
}

inline void apply_cnot(cplx* d, int nq, int c, int t) {
  const std::size_t quarter = std::size_t{1} << (nq - 2);
  const std::size_t mc = std::size_t{1} << c, mt = std::size_t{1} << t;
  const int lo = std::min(c, t), hi = std::max(c, t);
  for (std::size_t r = 0; r < quarter; ++r) {
    std::size_t i0 = insert_zero(insert_zero(r, lo), hi) | mc;
    std::swap(d[i0], d[i0 | mt]);
  }
}

inline void apply_cz(cplx* d, int nq, int a, int b) {
  const std::size_t quarter = std::size_t{1} << (nq - 2);
  const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
  const int lo = std::min(a, b), hi = std::max(a, b);
  for (std::size_t r = 0; r < quarter; ++r) d[insert_zero(insert_zero(r, lo), hi) | mask] *= -1.0;
}

inline void apply_swap(cplx* d, int nq, int a, int b) {
  const std::size_t quarter = std::size_t{1} << (nq - 2);
  const std::size_t ma = std::size_t{1} << a, mb = std::size_t{1} << b;
  const int lo = std::min(a, b), hi = std::max(a, b);
  for (std::size_t r = 0; r < quarter; ++r) {
    std::size_t i0 = insert_zero(insert_zero(r, lo), hi);
    std::swap(d[i0 | ma], d[i0 | mb]);
  }
}

inline void apply_toffoli(cplx* d, int nq, int a, int b, int t) {
  const std::size_t eighth = std::size_t{1} << (nq - 3);
  int bits[3] = {a, b, t};
  std::sort(bits, bits + 3);
  const std::size_t ctrl = (std::size_t{1} << a) | (std::size_t{1} << b), mt = std::size_t{1} << t;
  for (std::size_t r = 0; r < eighth; ++r) {
    std::size_t i0 = insert_zero(insert_zero(insert_zero(r, bits[0]), bits[1]), bits[2]) | ctrl;
    std::swap(d[i0], d[i0 | mt]);
  }
}

// Applies `m` (2^k square, row-major, qubits[0] most significant) on k qubits.
inline void apply_matrix(cplx* d, int nq, const std::vector<int>& qubits, const std::vector<cplx>& m) {
  const int k = static_cast<int>(qubits.size());
  const std::size_t dim = std::size_t{1} << k;
  std::vector<int> sorted(qubits);
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> offs(dim, 0);
  for (std::size_t li = 0; li < dim; ++li)
    for (int j = 0; j < k; ++j)
      if ((li >> (k - 1 - j)) & 1) offs[li] |= std::size_t{1} << qubits[j];
  std::vector<cplx> v(dim);
  const std::size_t blocks = std::size_t{1} << (nq - k);
  for (std::size_t r = 0; r < blocks; ++r) {
    std::size_t i0 = r;
    for (int bit : sorted) i0 = insert_zero(i0, bit);
    for (std::size_t li = 0; li < dim; ++li) v[li] = d[i0 | offs[li]];
    for (std::size_t row = 0; row < dim; ++row) {
      cplx acc = 0;
      for (std::size_t col = 0; col < dim; ++col) acc += m[row * dim + col] * v[col];
      d[i0 | offs[row]] = acc;
    }
  }
}

inline void apply_gate(cplx* d, int nq, const Gate& g) {
  const auto& q = g.qubits;
  switch (g.kind) {
    case GateKind::I: return;
    case GateKind::X: apply_x(d, nq, q[0]); return;
    case GateKind::Z: apply_diag_1q(d, nq, q[0], 1, -1); return;
    case GateKind::S: apply_diag_1q(d, nq, q[0], 1, cplx(0, 1)); return;
    case GateKind::Sdg: apply_diag_1q(d, nq, q[0], 1, cplx(0, -1)); return;
    case GateKind::CNOT: apply_cnot(d, nq, q[0], q[1]); return;
    case GateKind::CZ: apply_cz(d, nq, q[0], q[1]); return;
    case GateKind::SWAP: apply_swap(d, nq, q[0], q[1]); return;
    case GateKind::Toffoli: apply_toffoli(d, nq, q[0], q[1], q[2]); return;
    default: break;
  }
  auto m = gate_matrix(g);
  if (g.arity() == 1) apply_1q(d, nq, q[0], m.data());
  else apply_2q(d, nq, q[0], q[1], m.data());
}

// Pauli code 1 = X, 2 = Y, 3 = Z.
inline void apply_pauli(cplx* d, int nq, int q, int code) {
  switch (code) {
    case 1: apply_x(d, nq, q); break;
    case 2: {
      const cplx m[4] = {0, cplx(0, -1), cplx(0, 1), 0};
      apply_1q(d, nq, q, m);
      break;
    }
    case 3: apply_diag_1q(d, nq, q, 1, -1); break;
    default: break;
  }
}

}  // namespace kernels

class StateVector {
 public:
  explicit StateVector(int num_qubits) : nq_(num_qubits) {
    if (num_qubits < 1 || num_qubits > 30) throw std::invalid_argument("unsupported register size");
    amps_.assign(std::size_t{1} << num_qubits, 0);
    amps_[0] = 1;
  }

  int num_qubits() const { return nq_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  std::vector<cplx>& amplitudes() { return amps_; }

  void apply(const Gate& g) {
    validate_gate(g, nq_);
    kernels::apply_gate(amps_.data(), nq_, g);
  }

  void apply(const Circuit& c) {
    for (const auto& g : c) apply(g);
  }

  void apply_pauli(int q, int code) { kernels::apply_pauli(amps_.data(), nq_, q, code); }

  std::vector<double> probabilities() const {
    std::vector<double> p(amps_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(amps_[i]);
    return p;
  }

  double norm_squared() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

 private:
  int nq_;
  std::vector<cplx> amps_;
};

inline StateVector apply_gate(StateVector state, const Gate& g) {
  state.apply(g);
  return state;
}

inline std::vector<double> run_exact(const Circuit& c, int q) {
  StateVector s(q);
  s.apply(c);
  return s.probabilities();
}

// Cumulative sums used by every shot sampler so that the same state yields
// the same outcome for the same uniform draw.
inline std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  return cdf;
}

inline std::uint64_t sample_index(const std::vector<double>& cdf, double u) {
  double target = u * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  if (it == cdf.end()) it = std::lower_bound(cdf.begin(), cdf.end(), cdf.back());
  return static_cast<std::uint64_t>(it - cdf.begin());
}

}  // namespace qunary
