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
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qunary/binary.hpp"
#include "qunary/decompose.hpp"
#include "qunary/gate.hpp"
#include "qunary/unary.hpp"

namespace qunary {

enum class Encoding { unary, binary };

inline std::string to_string(Encoding e) { return e == Encoding::unary ? "unary" : "binary"; }

inline Encoding parse_encoding(const std::string& s) {
  if (s == "unary") return Encoding::unary;
  if (s == "binary") return Encoding::binary;
  throw std::invalid_argument("unknown encoding: " + s);
}

struct GateCount {
  long one_qubit = 0;
  long two_qubit = 0;
  long three_qubit = 0;
  long depth = 0;
  long total() const { return one_qubit + two_qubit + three_qubit; }
  bool operator==(const GateCount&) const = default;
};

// Gates by arity as emitted and the ASAP layer depth.
inline GateCount count_gates(const Circuit& c) {
  GateCount g;
  std::vector<long> level;
  for (const auto& gate : c) {
    int k = gate.arity();
    (k == 1 ? g.one_qubit : k == 2 ? g.two_qubit : g.three_qubit)++;
    long top = 0;
    for (int i = 0; i < k; ++i) {
      int q = gate.qubits[i];
      if (q >= static_cast<int>(level.size())) level.resize(q + 1, 0);
      top = std::max(top, level[q]);
    }
    for (int i = 0; i < k; ++i) level[gate.qubits[i]] = top + 1;
    g.depth = std::max(g.depth, top + 1);
  }
  return g;
}

// Real-valued closed-form counts; compared after rounding to nearest.
struct FormulaCount {
  double one_qubit = 0;
  double two_qubit = 0;
  double depth = 0;
};

enum class Block { distributor, payoff, s_psi0, s0 };

inline std::string to_string(Block b) {
  switch (b) {
    case Block::distributor: return "D";
    case Block::payoff: return "C+R";
    case Block::s_psi0: return "S_psi0";
    case Block::s0: return "S_0";
  }
  return "?";
}

inline constexpr Block kBlocks[] = {Block::distributor, Block::payoff, Block::s_psi0, Block::s0};

struct GateBudget {
  Encoding encoding = Encoding::unary;
  NativeSet native = NativeSet::cnot;
  double n = 0;
  double kappa = 0;
  double layers = 1;
  FormulaCount d, cr, s_psi0, s0;

  const FormulaCount& block(Block b) const {
    switch (b) {
      case Block::distributor: return d;
      case Block::payoff: return cr;
      case Block::s_psi0: return s_psi0;
      default: return s0;
    }
  }

  // One A followed by one Q = S_psi0 A^dagger S_0 A.
  double total_with_one_q() const {
    auto sum = [](const FormulaCount& f) { return f.one_qubit + f.two_qubit; };
    return 3 * (sum(d) + sum(cr)) + sum(s_psi0) + sum(s0);
  }
};

// Per-block gate and depth scaling. Mixed uses partial-iSWAP for the unary
// distributor and CNOT elsewhere; binary circuits contain no partial-SWAP
// gates, so their mixed column is the CNOT one.
inline GateBudget budget(Encoding enc, NativeSet native, double n, double kappa, double layers = 1) {
  if (n < 2) throw std::invalid_argument("budget needs n >= 2");
  if (kappa < 0 || kappa > 1) throw std::invalid_argument("kappa must lie in [0, 1]");
  if (enc == Encoding::binary && layers < 1) throw std::invalid_argument("binary budget needs l >= 1");
  GateBudget b;
  b.encoding = enc;
  b.native = native;
  b.n = n;
  b.kappa = kappa;
  b.layers = layers;
  const double k = kappa, l = layers;
  b.s_psi0 = {1, 0, 1};
  if (enc == Encoding::unary) {
    FormulaCount d_cnot{2 * n, 4 * n, 3 * n}, d_isw{1, n, n / 2};
    FormulaCount cr_cnot{2 * k * n, 2 * k * n, 4 * k * n}, cr_isw{10 * k * n, 5 * k * n, 15 * k * n};
    FormulaCount s0_cnot{4, 1, 5}, s0_isw{9, 2, 10};
    switch (native) {
      case NativeSet::cnot: b.d = d_cnot; b.cr = cr_cnot; b.s0 = s0_cnot; break;
      case NativeSet::partial_iswap: b.d = d_isw; b.cr = cr_isw; b.s0 = s0_isw; break;
      case NativeSet::mixed: b.d = d_isw; b.cr = cr_cnot; b.s0 = s0_cnot; break;
    }
  } else {
    if (native == NativeSet::partial_iswap) {
      b.d = {8 * n * l, 2 * n * l, 6 * n * l + l};
      b.cr = {(86 + 5 * k) * n, 28 * n, (97 + 2 * k) * n};
      b.s0 = {80 * n - 113, 24 * n - 36, 90 * n - 129};
    } else {
      b.d = {3 * n * l, n * l, n * l + l};
      b.cr = {(16 + 5 * k) * n, 14 * n, (27 + 2 * k) * n};
      b.s0 = {20 * n - 23, 12 * n - 18, 24 * n - 30};
    }
  }
  return b;
}

struct BlockCheck {
  Block block;
  GateCount built;
  long expected_one = 0;
  long expected_two = 0;
  long expected_depth = 0;
  long one_offset() const { return built.one_qubit - expected_one; }
  long two_offset() const { return built.two_qubit - expected_two; }
  bool counts_match() const { return one_offset() == 0 && two_offset() == 0; }
};

struct BudgetReport {
  std::vector<BlockCheck> blocks;
  bool all_match() const {
    for (const auto& b : blocks)
      if (!b.counts_match()) return false;
    return true;
  }
  std::string describe() const {
    std::ostringstream os;
    for (const auto& b : blocks) {
      os << to_string(b.block) << ": 1q " << b.built.one_qubit << "/" << b.expected_one << ", 2q "
         << b.built.two_qubit << "/" << b.expected_two << ", depth " << b.built.depth << "/"
         << b.expected_depth;
      if (!b.counts_match()) os << " (offset " << b.one_offset() << ", " << b.two_offset() << ")";
      os << "\n";
    }
    return os.str();
  }
};

inline long round_count(double v) { return std::lround(v); }

// Counts are compared as emitted: the builders already fold the
// single-qubit corrections they introduce, and folding across CNOT networks
// would undercount the per-CNOT cost the formulas assume.
inline BlockCheck check_block(Block b, const Circuit& built, const GateBudget& budget) {
  const auto& f = budget.block(b);
  BlockCheck c{b, count_gates(built), round_count(f.one_qubit), round_count(f.two_qubit),
               round_count(f.depth)};
  return c;
}

struct BlockCircuits {
  Circuit d, cr, s_psi0, s0;
  const Circuit& block(Block b) const {
    switch (b) {
      case Block::distributor: return d;
      case Block::payoff: return cr;
      case Block::s_psi0: return s_psi0;
      default: return s0;
    }
  }
};

inline BudgetReport verify_budget(const BlockCircuits& built, const GateBudget& budget) {
  BudgetReport r;
  for (Block b : kBlocks) r.blocks.push_back(check_block(b, built.block(b), budget));
  return r;
}

// D includes the seed X on the start qubit.
inline BlockCircuits unary_blocks(const UnaryCircuits& u, NativeSet native) {
  BlockCircuits b;
  b.d = {gates::x(u.layout.start)};
  append(b.d, u.distributor);
  b.cr = u.payoff;
  b.s_psi0 = build_s_psi0(u.layout);
  b.s0 = build_s0(u.layout, native);
  return b;
}

// D is the exact loader, which the qGAN rows of the table do not describe.
inline BlockCircuits binary_blocks(const BinaryCircuits& bc, NativeSet native) {
  NativeSet nat = native == NativeSet::mixed ? NativeSet::cnot : native;
  BlockCircuits b;
  b.d = bc.loader;
  b.cr = bc.comparator;
  append(b.cr, bc.payoff);
  b.s_psi0 = {gates::z(bc.layout.payoff())};
  b.s0 = build_s0_binary(bc.layout, nat);
  return b;
}

inline GateBudget unary_budget(const UnaryLayout& l, NativeSet native) {
  return budget(Encoding::unary, native, l.n, l.kappa());
}

inline GateBudget binary_budget(const BinaryLayout& l, NativeSet native, double layers = 1) {
  return budget(Encoding::binary, native, l.n, l.kappa(), layers);
}

struct BlockOffset {
  long one_qubit = 0;
  long two_qubit = 0;
};

// Built minus table counts for the binary C+R block. The comparator's first
// stage carries no incoming carry, so the table's per-qubit cost is short by
// a fixed amount that depends only on the lowest bit t0 of the two's
// complement of K'.
// Defined for 0 < K' < 2^n; the clamped comparators are a single X or empty.
inline BlockOffset binary_cr_offset(const BinaryLayout& l, NativeSet native) {
  if (l.threshold <= 0 || l.threshold >= l.bins()) throw std::invalid_argument("offset needs 0 < K' < 2^n");
  long t0 = l.twos_complement() & 1u;
  if (native == NativeSet::partial_iswap) return {-22, -6 + 2 * t0};
  return {-7 - 5 * t0, -3 + t0};
}

struct CrossoverPoint {
  int bins = 0;
  double unary_total = 0;
  double binary_total = 0;
};

// Totals over bins with kappa = 1/2 and l = log2(bins) / 2: n = bins unary
// qubits against log2(bins) binary qubits.
inline CrossoverPoint crossover_totals(int bins, NativeSet native) {
  double nb = std::log2(static_cast<double>(bins));
  double l = std::max(1.0, nb / 2);
  double u = budget(Encoding::unary, native, bins, 0.5).total_with_one_q();
  double b = budget(Encoding::binary, native, std::max(2.0, nb), 0.5, l).total_with_one_q();
  return {bins, u, b};
}

// First bin count at which the binary total does not exceed the unary one.
inline int crossover(NativeSet native, int max_bins = 4096) {
  for (int bins = 4; bins <= max_bins; ++bins) {
    auto p = crossover_totals(bins, native);
    if (p.binary_total <= p.unary_total) return bins;
  }
  return -1;
}

}  // namespace qunary
