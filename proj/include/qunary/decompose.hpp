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

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qunary/gate.hpp"

namespace qunary {

// Entangling gates a device offers natively. Single-qubit gates are always
// native. Mixed allows partial-iSWAP between neighbours and CNOT elsewhere:
// partial-SWAP type gates use the former, everything else the latter.
enum class NativeSet { cnot, partial_iswap, mixed };

inline std::string to_string(NativeSet n) {
  switch (n) {
    case NativeSet::cnot: return "cnot";
    case NativeSet::partial_iswap: return "iswap";
    case NativeSet::mixed: return "mixed";
  }
  return "?";
}

inline NativeSet parse_native(const std::string& s) {
  if (s == "cnot") return NativeSet::cnot;
  if (s == "iswap" || s == "partial_iswap") return NativeSet::partial_iswap;
  if (s == "mixed") return NativeSet::mixed;
  throw std::invalid_argument("unknown native set: " + s);
}

// compact: 9 single-qubit gates, ends on a CNOT pair between the controls.
// textbook: 10 single-qubit gates, ends with T and S on the controls.
enum class ToffoliNetwork { compact, textbook };

namespace decomp {

using namespace gates;

inline Circuit cnot(int c, int t, NativeSet native) {
  if (native != NativeSet::partial_iswap) return {gates::cnot(c, t)};
  return {x(t), partial_iswap(c, t, M_PI), h(c), sdg(t), partial_iswap(c, t, M_PI),
          z(c), rx(t, M_PI / 2)};
}

inline Gate fuse(const Gate& first, const Gate& second);

inline Circuit cry(int c, int t, double theta, NativeSet native) {
  if (native != NativeSet::partial_iswap)
    return {ry(t, theta / 2), gates::cnot(c, t), ry(t, -theta / 2), gates::cnot(c, t)};
  // CNOT(t,c) . partial-SWAP(c,t) . CNOT(t,c), with the partial-SWAP written as
  // a partial-iSWAP conjugated by S on c and those S gates folded into the
  // neighbouring single-qubit gates of the two CNOT networks.
  Circuit a = cnot(t, c, NativeSet::partial_iswap);
  Circuit b = cnot(t, c, NativeSet::partial_iswap);
  Circuit out(a.begin(), a.end() - 1);
  out.push_back(fuse(a.back(), s(c)));
  out.push_back(partial_iswap(c, t, theta));
  out.push_back(fuse(sdg(c), b.front()));
  out.insert(out.end(), b.begin() + 1, b.end());
  return out;
}

inline Circuit partial_swap(int from, int to, double theta, NativeSet native) {
  if (native == NativeSet::cnot)
    return {gates::cnot(to, from), ry(to, theta / 2), gates::cnot(from, to), ry(to, -theta / 2),
            gates::cnot(from, to), gates::cnot(to, from)};
  return {s(from), partial_iswap(from, to, theta), sdg(from)};
}

inline Circuit toffoli(int a, int b, int t, NativeSet native,
                       ToffoliNetwork net = ToffoliNetwork::compact) {
  Circuit base;
  if (net == ToffoliNetwork::compact) {
    base = {h(t), gates::cnot(b, t), tdg(t), gates::cnot(a, t), gates::t(t), gates::cnot(b, t),
            tdg(t), gates::cnot(a, t), gates::t(b), gates::t(t), h(t), gates::cnot(a, b),
            gates::t(a), tdg(b), gates::cnot(a, b)};
  } else {
    base = {h(t), gates::cnot(b, t), tdg(t), gates::cnot(a, t), gates::t(t), gates::cnot(b, t),
            tdg(t), gates::cnot(a, t), tdg(b), gates::t(t), h(t), gates::cnot(a, b),
            tdg(b), gates::cnot(a, b), gates::t(a), s(b)};
  }
  if (native != NativeSet::partial_iswap) return base;
  Circuit out;
  for (const auto& g : base) {
    if (g.kind == GateKind::CNOT) append(out, cnot(g.qubits[0], g.qubits[1], native));
    else out.push_back(g);
  }
  return out;
}

// t ^= (a OR b)
inline Circuit or_gate(int a, int b, int t, NativeSet native,
                       ToffoliNetwork net = ToffoliNetwork::compact) {
  Circuit out = {x(a), x(b)};
  append(out, toffoli(a, b, t, native, net));
  out.push_back(x(a));
  out.push_back(x(b));
  out.push_back(x(t));
  return out;
}

// RY(theta) on t when both a and b are set.
inline Circuit ccry(int a, int b, int t, double theta, NativeSet native) {
  Circuit out = cry(b, t, theta / 2, native);
  append(out, cnot(a, b, native));
  append(out, cry(b, t, -theta / 2, native));
  append(out, cnot(a, b, native));
  append(out, cry(a, t, theta / 2, native));
  return out;
}

// U3 angles for any 2x2 unitary, global phase dropped.
inline Gate u3_from_matrix(int q, const std::vector<cplx>& m) {
  double a00 = std::abs(m[0]), a10 = std::abs(m[2]);
  double theta = 2 * std::atan2(a10, a00);
  double phi, lambda;
  if (a10 < 1e-14) {
    phi = 0;
    lambda = std::arg(m[3]) - std::arg(m[0]);
  } else if (a00 < 1e-14) {
    phi = 0;
    lambda = std::arg(-m[1]) - std::arg(m[2]);
  } else {
    double alpha = std::arg(m[0]);
    phi = std::arg(m[2]) - alpha;
    lambda = std::arg(-m[1]) - alpha;
  }
  return gates::u3(q, theta, phi, lambda);
}

inline std::vector<cplx> matmul2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// Single gate equal to `first` followed by `second` on the same qubit.
inline Gate fuse(const Gate& first, const Gate& second) {
  if (first.arity() != 1 || second.arity() != 1 || first.qubits[0] != second.qubits[0])
    throw std::invalid_argument("fuse needs two single-qubit gates on one wire");
  return u3_from_matrix(first.qubits[0], matmul2(gate_matrix(second), gate_matrix(first)));
}

}  // namespace decomp

// Lowers one gate to the native set; the product equals the input up to a
// global phase.
inline Circuit decompose(const Gate& g, NativeSet native,
                         ToffoliNetwork net = ToffoliNetwork::compact) {
  using namespace gates;
  const auto& q = g.qubits;
  switch (g.kind) {
    case GateKind::CNOT: return decomp::cnot(q[0], q[1], native);
    case GateKind::CZ: {
      Circuit out = {h(q[1])};
      append(out, decomp::cnot(q[0], q[1], native));
      out.push_back(h(q[1]));
      return out;
    }
    case GateKind::SWAP: {
      Circuit out = decomp::cnot(q[0], q[1], native);
      append(out, decomp::cnot(q[1], q[0], native));
      append(out, decomp::cnot(q[0], q[1], native));
      return out;
    }
    case GateKind::CRY: return decomp::cry(q[0], q[1], g.theta, native);
    case GateKind::PartialSwap: return decomp::partial_swap(q[0], q[1], g.theta, native);
    case GateKind::PartialISwap: {
      if (native != NativeSet::cnot) return {g};
      Circuit out = {sdg(q[0])};
      append(out, decomp::partial_swap(q[0], q[1], g.theta, native));
      out.push_back(s(q[0]));
      return out;
    }
    case GateKind::Toffoli: return decomp::toffoli(q[0], q[1], q[2], native, net);
    default: return {g};
  }
}

inline Circuit decompose(const Circuit& c, NativeSet native,
                         ToffoliNetwork net = ToffoliNetwork::compact) {
  Circuit out;
  for (const auto& g : c) append(out, decompose(g, native, net));
  return out;
}

// Merges runs of consecutive single-qubit gates on the same wire.
inline Circuit fuse_single_qubit_runs(const Circuit& c) {
  Circuit out;
  std::vector<int> pending;  // per wire: index into out of the trailing 1q gate, or -1
  for (const auto& g : c) {
    int need = 0;
    for (int i = 0; i < g.arity(); ++i) need = std::max(need, g.qubits[i] + 1);
    if (static_cast<int>(pending.size()) < need) pending.resize(need, -1);
    if (g.arity() == 1) {
      int& p = pending[g.qubits[0]];
      if (p >= 0) {
        out[p] = decomp::fuse(out[p], g);
      } else {
        p = static_cast<int>(out.size());
        out.push_back(g);
      }
    } else {
      for (int i = 0; i < g.arity(); ++i) pending[g.qubits[i]] = -1;
      out.push_back(g);
    }
  }
  return out;
}

}  // namespace qunary
