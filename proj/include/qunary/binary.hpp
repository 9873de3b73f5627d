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

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qunary/decompose.hpp"
#include "qunary/gate.hpp"
#include "qunary/market.hpp"
#include "qunary/noise.hpp"
#include "qunary/unary.hpp"

namespace qunary {

// Register: precision q_0..q_{n-1} (q_0 least significant), carries
// a_0..a_{n-1}, comparator flag, payoff ancilla.
struct BinaryLayout {
  int n = 0;
  int threshold = 0;           // K': flag = (e >= K')
  double strike_offset = 0;    // (K - S_min) / h on the bin index scale
  double c = 0.1;
  double s_min = 0;
  double spacing = 0;          // h, distance between bin centers
  bool strike_clamped = false;

  int precision(int j) const { return j; }
  int carry(int j) const { return n + j; }
  int flag() const { return 2 * n; }
  int payoff() const { return 2 * n + 1; }
  int num_qubits() const { return 2 * n + 2; }
  int bins() const { return 1 << n; }
  int e_max() const { return (1 << n) - 1; }

  // Two's complement of K' on n bits.
  std::uint32_t twos_complement() const {
    return static_cast<std::uint32_t>((bins() - threshold) & (bins() - 1));
  }
  double kappa() const { return static_cast<double>(std::popcount(twos_complement())) / n; }
  double g0() const { return M_PI / 4 - c; }
  double rotation_denominator() const { return e_max() - strike_offset; }
};

inline int qubits_for_bins(std::size_t bins) {
  if (bins < 2 || !std::has_single_bit(bins))
    throw std::invalid_argument("binary encoding needs a power-of-two bin count");
  return std::countr_zero(bins);
}

// Smallest e with S_e > K; 0 when K <= S_min and 2^n when K >= S_max.
inline int rescale_strike(const BinnedDistribution& d, double strike, bool* clamped = nullptr) {
  const int bins = static_cast<int>(d.size());
  qubits_for_bins(d.size());
  if (clamped) *clamped = strike < d.s_min() || strike > d.s_max();
  if (strike <= d.s_min()) return 0;
  if (strike >= d.s_max()) return bins;
  return first_bin_above(d, strike);
}

inline BinaryLayout make_binary_layout(const BinnedDistribution& d, double strike, double c = 0.1) {
  if (!(c > 0 && c < 1)) throw std::invalid_argument("approximation constant c must lie in (0, 1)");
  BinaryLayout l;
  l.n = qubits_for_bins(d.size());
  if (l.n < 2) throw std::invalid_argument("binary encoding needs at least two precision qubits");
  l.threshold = rescale_strike(d, strike, &l.strike_clamped);
  l.c = c;
  l.s_min = d.s_min();
  l.spacing = d.spacing();
  double k = std::clamp(strike, d.s_min(), d.s_max());
  l.strike_offset = (k - d.s_min()) / l.spacing;
  return l;
}

// Uniformly controlled RY tree, most significant qubit first. Controls of
// level k are the k higher qubits; the Gray-code network realises each
// multiplexor with 2^k RY and 2^k CNOT.
inline Circuit load_distribution_exact(const std::vector<double>& p, NativeSet native) {
  const int n = qubits_for_bins(p.size());
  const std::size_t bins = p.size();
  Circuit c;
  auto gray = [](std::size_t i) { return i ^ (i >> 1); };
  for (int k = 0; k < n; ++k) {
    const int t = n - 1 - k;
    const std::size_t patterns = std::size_t{1} << k;
    std::vector<double> alpha(patterns, 0.0), m0(patterns, 0.0), m1(patterns, 0.0);
    for (std::size_t e = 0; e < bins; ++e) ((e >> t) & 1 ? m1 : m0)[e >> (t + 1)] += p[e];
    for (std::size_t v = 0; v < patterns; ++v)
      alpha[v] = 2 * std::atan2(std::sqrt(std::max(0.0, m1[v])), std::sqrt(std::max(0.0, m0[v])));
    if (k == 0) {
      c.push_back(gates::ry(t, alpha[0]));
      continue;
    }
    std::vector<double> beta(patterns, 0.0);
    bool plain = true;
    for (std::size_t i = 0; i < patterns; ++i) {
      for (std::size_t j = 0; j < patterns; ++j)
        beta[i] += (std::popcount(j & gray(i)) & 1 ? -1.0 : 1.0) * alpha[j];
      beta[i] /= static_cast<double>(patterns);
      if (i > 0 && std::abs(beta[i]) > 1e-15) plain = false;
    }
    if (plain) {
      c.push_back(gates::ry(t, beta[0]));
      continue;
    }
    for (std::size_t i = 0; i < patterns; ++i) {
      c.push_back(gates::ry(t, beta[i]));
      std::size_t diff = gray(i) ^ gray((i + 1) % patterns);
      int control = t + 1 + std::countr_zero(diff);
      append(c, decomp::cnot(control, t, native));
    }
  }
  return c;
}

// Two's-complement carry chain: a_j is the carry of e + t at bit j, so the
// final carry is (e >= K'). Carries are left computed.
inline Circuit build_comparator(const BinaryLayout& l, NativeSet native) {
  if (native == NativeSet::mixed) native = NativeSet::cnot;
  Circuit c;
  if (l.threshold <= 0) return {gates::x(l.flag())};
  if (l.threshold >= l.bins()) return c;
  const std::uint32_t t = l.twos_complement();
  if (t & 1) append(c, decomp::cnot(l.precision(0), l.carry(0), native));
  for (int j = 1; j < l.n; ++j) {
    if ((t >> j) & 1)
      append(c, decomp::or_gate(l.precision(j), l.carry(j - 1), l.carry(j), native, ToffoliNetwork::textbook));
    else
      append(c, decomp::toffoli(l.precision(j), l.carry(j - 1), l.carry(j), native, ToffoliNetwork::textbook));
  }
  append(c, decomp::cnot(l.carry(l.n - 1), l.flag(), native));
  return c;
}

// g(e) = 2c (e - offset) / (e_max - offset) for flagged bins, 0 otherwise.
inline double binary_rotation(const BinaryLayout& l, int e) {
  if (e < l.threshold || l.threshold >= l.bins()) return 0.0;
  return 2 * l.c * (e - l.strike_offset) / l.rotation_denominator();
}

// Replaces every CNOT by its native network.
inline Circuit lower_cnots(const Circuit& c, NativeSet native) {
  if (native != NativeSet::partial_iswap) return c;
  Circuit out;
  for (const auto& g : c) {
    if (g.kind == GateKind::CNOT) append(out, decomp::cnot(g.qubits[0], g.qubits[1], native));
    else out.push_back(g);
  }
  return out;
}

// RY(2 g0) on the payoff qubit, then the flag-controlled affine rotation
// split into a constant CRY and one ccRY per precision bit. The controlled
// rotations are built from CNOTs first and each CNOT is then lowered on its
// own, as the binary gate budget assumes.
inline Circuit build_payoff_binary(const BinaryLayout& l, NativeSet native) {
  if (native == NativeSet::mixed) native = NativeSet::cnot;
  if (native == NativeSet::partial_iswap) return lower_cnots(build_payoff_binary(l, NativeSet::cnot), native);
  Circuit c = {gates::ry(l.payoff(), 2 * l.g0())};
  if (l.threshold >= l.bins()) return c;
  const double denom = l.rotation_denominator();
  append(c, decomp::cry(l.flag(), l.payoff(), 2 * (-2 * l.c * l.strike_offset / denom), native));
  for (int j = 0; j < l.n; ++j)
    append(c, decomp::ccry(l.flag(), l.precision(j), l.payoff(), 2 * (2 * l.c * std::ldexp(1.0, j) / denom), native));
  return c;
}

// Closed form of P(payoff = 1) after A, without the small-angle expansion.
inline double exact_p1(const BinaryLayout& l, const std::vector<double>& p) {
  double sum = 0;
  for (int e = 0; e < l.bins(); ++e) {
    double s = std::sin(l.g0() + binary_rotation(l, e));
    sum += p[e] * s * s;
  }
  return sum;
}

// First-order inversion of sin^2(pi/4 - c + g) around pi/4.
inline double invert_payoff(double p1, const BinaryLayout& l) {
  if (l.threshold >= l.bins()) return 0.0;
  return (p1 - 0.5 + l.c) / (2 * l.c) * l.rotation_denominator() * l.spacing;
}

// d payoff / d P1 of the inversion, used to map amplitude uncertainty.
inline double payoff_per_p1(const BinaryLayout& l) {
  if (l.threshold >= l.bins()) return 0.0;
  return l.rotation_denominator() * l.spacing / (2 * l.c);
}

// Reflection about |0> on precision + payoff: X layer, H-conjugated
// multi-controlled X with a Toffoli ladder on the (clean) carry qubits.
inline Circuit build_s0_binary(const BinaryLayout& l, NativeSet native) {
  if (native == NativeSet::mixed) native = NativeSet::cnot;
  Circuit c;
  for (int j = 0; j < l.n; ++j) c.push_back(gates::x(l.precision(j)));
  c.push_back(gates::x(l.payoff()));
  c.push_back(gates::h(l.payoff()));
  auto tof = [&](int a, int b, int t) { append(c, decomp::toffoli(a, b, t, native, ToffoliNetwork::compact)); };
  if (l.n == 2) {
    tof(l.precision(0), l.precision(1), l.payoff());
  } else {
    std::vector<std::array<int, 3>> ladder = {{l.precision(0), l.precision(1), l.carry(0)}};
    for (int j = 2; j <= l.n - 2; ++j) ladder.push_back({l.precision(j), l.carry(j - 2), l.carry(j - 1)});
    for (const auto& g : ladder) tof(g[0], g[1], g[2]);
    tof(l.precision(l.n - 1), l.carry(l.n - 3), l.payoff());
    for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) tof((*it)[0], (*it)[1], (*it)[2]);
  }
  c.push_back(gates::h(l.payoff()));
  c.push_back(gates::x(l.payoff()));
  for (int j = 0; j < l.n; ++j) c.push_back(gates::x(l.precision(j)));
  return c;
}

struct BinaryCircuits {
  BinaryLayout layout;
  Circuit loader;
  Circuit comparator;
  Circuit payoff;
  Circuit a;  // loader + comparator + payoff
  Circuit q;  // S_psi0, A^dagger, S_0, A
};

inline Circuit build_Q_binary(const BinaryLayout& l, const Circuit& a, NativeSet native) {
  Circuit q = {gates::z(l.payoff())};
  append(q, inverse(a));
  append(q, build_s0_binary(l, native));
  append(q, a);
  return q;
}

inline BinaryCircuits build_binary(const BinnedDistribution& d, double strike, double c, NativeSet native) {
  d.validate();
  BinaryCircuits b;
  b.layout = make_binary_layout(d, strike, c);
  NativeSet nat = native == NativeSet::mixed ? NativeSet::cnot : native;
  b.loader = load_distribution_exact(d.probabilities, nat);
  b.comparator = build_comparator(b.layout, nat);
  b.payoff = build_payoff_binary(b.layout, nat);
  b.a = b.loader;
  append(b.a, b.comparator);
  append(b.a, b.payoff);
  b.q = build_Q_binary(b.layout, b.a, nat);
  return b;
}

inline Circuit build_ae_circuit(const BinaryCircuits& b, int m) {
  Circuit c = b.a;
  for (int i = 0; i < m; ++i) append(c, b.q);
  return c;
}

struct BinaryTally {
  std::vector<std::uint64_t> bin_counts;
  std::uint64_t ones = 0;
  std::uint64_t total = 0;
  double p1() const { return total ? static_cast<double>(ones) / static_cast<double>(total) : 0.0; }
};

inline BinaryTally tally_binary(const Counts& counts, const BinaryLayout& l) {
  BinaryTally t;
  t.bin_counts.assign(l.bins(), 0);
  for (std::size_t o = 0; o < counts.size(); ++o) {
    if (!counts[o]) continue;
    t.total += counts[o];
    t.bin_counts[o & (l.bins() - 1)] += counts[o];
    if ((o >> l.payoff()) & 1) t.ones += counts[o];
  }
  return t;
}

struct BinaryPayoffResult {
  double payoff = 0;
  double p1 = 0;
  BinaryTally tally;
};

inline BinaryPayoffResult estimate_payoff_binary(const MarketScenario& s, int n, const NoiseModel& noise,
                                                 std::size_t shots, std::uint64_t seed, double c = 0.1,
                                                 const RunOptions& opt = {}) {
  if (shots == 0) throw std::invalid_argument("shots must be positive");
  auto d = discretize(s, std::size_t{1} << n, opt.width_sigmas);
  auto b = build_binary(d, s.strike, c, opt.native);
  OutcomeSampler sampler(b.a, b.layout.num_qubits(), noise, opt.engine);
  BinaryPayoffResult r;
  r.tally = tally_binary(sampler.sample(shots, seed), b.layout);
  r.p1 = r.tally.p1();
  r.payoff = invert_payoff(r.p1, b.layout);
  return r;
}

}  // namespace qunary
