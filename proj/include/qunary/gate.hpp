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
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qunary {

using cplx = std::complex<double>;

enum class GateKind {
  I, X, Y, Z, H, S, Sdg, T, Tdg, RX, RY, RZ, U3,
  CNOT, CZ, CRY, SWAP, PartialSwap, PartialISwap,
  Toffoli,
};

// qubits[0] is the most significant bit of the gate's local matrix index.
// For controlled kinds the controls come first.
struct Gate {
  GateKind kind = GateKind::I;
  std::array<int, 3> qubits{-1, -1, -1};
  double theta = 0;
  double phi = 0;
  double lambda = 0;

  int arity() const {
    switch (kind) {
      case GateKind::CNOT: case GateKind::CZ: case GateKind::CRY: case GateKind::SWAP:
      case GateKind::PartialSwap: case GateKind::PartialISwap:
        return 2;
      case GateKind::Toffoli:
        return 3;
      default:
        return 1;
    }
  }

  bool operator==(const Gate&) const = default;
};

using Circuit = std::vector<Gate>;

namespace gates {

inline Gate one(GateKind k, int q, double theta = 0) { return {k, {q, -1, -1}, theta}; }
inline Gate two(GateKind k, int a, int b, double theta = 0) { return {k, {a, b, -1}, theta}; }

inline Gate x(int q) { return one(GateKind::X, q); }
inline Gate y(int q) { return one(GateKind::Y, q); }
inline Gate z(int q) { return one(GateKind::Z, q); }
inline Gate h(int q) { return one(GateKind::H, q); }
inline Gate s(int q) { return one(GateKind::S, q); }
inline Gate sdg(int q) { return one(GateKind::Sdg, q); }
inline Gate t(int q) { return one(GateKind::T, q); }
inline Gate tdg(int q) { return one(GateKind::Tdg, q); }
inline Gate rx(int q, double th) { return one(GateKind::RX, q, th); }
inline Gate ry(int q, double th) { return one(GateKind::RY, q, th); }
inline Gate rz(int q, double th) { return one(GateKind::RZ, q, th); }
inline Gate u3(int q, double th, double ph, double la) {
  return {GateKind::U3, {q, -1, -1}, th, ph, la};
}
inline Gate cnot(int c, int tq) { return two(GateKind::CNOT, c, tq); }
inline Gate cz(int a, int b) { return two(GateKind::CZ, a, b); }
inline Gate cry(int c, int tq, double th) { return two(GateKind::CRY, c, tq, th); }
inline Gate swap(int a, int b) { return two(GateKind::SWAP, a, b); }
// Moves sin(theta/2) of an excitation on `from` onto `to`.
inline Gate partial_swap(int from, int to, double th) { return two(GateKind::PartialSwap, from, to, th); }
inline Gate partial_iswap(int a, int b, double th) { return two(GateKind::PartialISwap, a, b, th); }
inline Gate toffoli(int a, int b, int tq) { return {GateKind::Toffoli, {a, b, tq}}; }

}  // namespace gates

inline std::string gate_name(GateKind k) {
  switch (k) {
    case GateKind::I: return "I";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "Sdg";
    case GateKind::T: return "T";
    case GateKind::Tdg: return "Tdg";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::U3: return "U3";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::CRY: return "CRY";
    case GateKind::SWAP: return "SWAP";
    case GateKind::PartialSwap: return "PartialSwap";
    case GateKind::PartialISwap: return "PartialISwap";
    case GateKind::Toffoli: return "Toffoli";
  }
  return "?";
}

inline bool is_single_qubit(const Gate& g) { return g.arity() == 1; }

// Row-major dense matrix of dimension 2^arity.
inline std::vector<cplx> gate_matrix(const Gate& g) {
  const cplx i1(0, 1);
  const double c = std::cos(g.theta / 2), s = std::sin(g.theta / 2);
  const double r = 1 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::I: return {1, 0, 0, 1};
    case GateKind::X: return {0, 1, 1, 0};
    case GateKind::Y: return {0, -i1, i1, 0};
    case GateKind::Z: return {1, 0, 0, -1};
    case GateKind::H: return {r, r, r, -r};
    case GateKind::S: return {1, 0, 0, i1};
    case GateKind::Sdg: return {1, 0, 0, -i1};
    case GateKind::T: return {1, 0, 0, std::polar(1.0, M_PI / 4)};
    case GateKind::Tdg: return {1, 0, 0, std::polar(1.0, -M_PI / 4)};
    case GateKind::RX: return {c, -i1 * s, -i1 * s, c};
    case GateKind::RY: return {c, -s, s, c};
    case GateKind::RZ: return {std::polar(1.0, -g.theta / 2), 0, 0, std::polar(1.0, g.theta / 2)};
    case GateKind::U3:
      return {c, -std::polar(s, g.lambda), std::polar(s, g.phi), std::polar(c, g.phi + g.lambda)};
    case GateKind::CNOT:
      return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};
    case GateKind::CZ:
      return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1};
    case GateKind::CRY:
      return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, c, -s, 0, 0, s, c};
    case GateKind::SWAP:
      return {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1};
    case GateKind::PartialSwap:
      return {1, 0, 0, 0, 0, c, s, 0, 0, -s, c, 0, 0, 0, 0, 1};
    case GateKind::PartialISwap:
      return {1, 0, 0, 0, 0, c, -i1 * s, 0, 0, -i1 * s, c, 0, 0, 0, 0, 1};
    case GateKind::Toffoli: {
      std::vector<cplx> m(64, 0);
      for (int k = 0; k < 6; ++k) m[k * 8 + k] = 1;
      m[6 * 8 + 7] = 1;
      m[7 * 8 + 6] = 1;
      return m;
    }
  }
  throw std::logic_error("unknown gate kind");
}

inline Gate inverse(const Gate& g) {
  Gate r = g;
  switch (g.kind) {
    case GateKind::S: r.kind = GateKind::Sdg; break;
    case GateKind::Sdg: r.kind = GateKind::S; break;
    case GateKind::T: r.kind = GateKind::Tdg; break;
    case GateKind::Tdg: r.kind = GateKind::T; break;
    case GateKind::RX: case GateKind::RY: case GateKind::RZ: case GateKind::CRY:
    case GateKind::PartialSwap: case GateKind::PartialISwap:
      r.theta = -g.theta;
      break;
    case GateKind::U3:
      r.theta = -g.theta;
      r.phi = -g.lambda;
      r.lambda = -g.phi;
      break;
    default: break;
  }
  return r;
}

inline Circuit inverse(const Circuit& c) {
  Circuit r;
  r.reserve(c.size());
  for (auto it = c.rbegin(); it != c.rend(); ++it) r.push_back(inverse(*it));
  return r;
}

inline void append(Circuit& dst, const Circuit& src) { dst.insert(dst.end(), src.begin(), src.end()); }

inline void validate_gate(const Gate& g, int num_qubits) {
  int k = g.arity();
  for (int i = 0; i < k; ++i) {
    if (g.qubits[i] < 0 || g.qubits[i] >= num_qubits)
      throw std::out_of_range("gate " + gate_name(g.kind) + " qubit index out of range");
    for (int j = 0; j < i; ++j)
      if (g.qubits[i] == g.qubits[j])
        throw std::invalid_argument("gate " + gate_name(g.kind) + " repeats a qubit");
  }
}

inline int register_size(const Circuit& c) {
  int m = 0;
  for (const auto& g : c)
    for (int i = 0; i < g.arity(); ++i) m = std::max(m, g.qubits[i] + 1);
  return m;
}

}  // namespace qunary
