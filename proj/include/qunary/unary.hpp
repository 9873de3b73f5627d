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
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qunary/decompose.hpp"
#include "qunary/gate.hpp"
#include "qunary/market.hpp"
#include "qunary/noise.hpp"

namespace qunary {

// Qubit i holds bin i; the ancilla sits after the n distribution qubits.
struct UnaryLayout {
  int n = 0;
  int ancilla = 0;
  int start = 0;
  int strike_index = 0;  // smallest i with S_i > K, n if none

  int num_qubits() const { return n + 1; }
  int bins_above_strike() const { return n - strike_index; }
  double kappa() const { return static_cast<double>(n - strike_index) / n; }
};

inline int first_bin_above(const BinnedDistribution& d, double strike) {
  int k = 0;
  while (k < static_cast<int>(d.size()) && !(d.bin_centers[k] > strike)) ++k;
  return k;
}

inline UnaryLayout make_unary_layout(const BinnedDistribution& d, double strike) {
  int n = static_cast<int>(d.size());
  if (n < 2) throw std::invalid_argument("unary layout needs at least two bins");
  return {n, n, n / 2, first_bin_above(d, strike)};
}

// theta[j - 1] drives the partial-SWAP between qubits j - 1 and j.
struct DistributorAngles {
  std::vector<double> theta;
  int n() const { return static_cast<int>(theta.size()) + 1; }
};

// Stick-breaking from the centre: each gate keeps the local bin's mass and
// passes the rest of its arm outward. atan2 keeps empty arms at angle 0.
inline DistributorAngles solve_angles(const std::vector<double>& p) {
  const int n = static_cast<int>(p.size());
  if (n < 2) throw std::invalid_argument("solve_angles needs at least two bins");
  for (double v : p)
    if (v < 0) throw std::invalid_argument("negative probability");
  const int s = n / 2;
  std::vector<double> prefix(n, 0.0), suffix(n + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i] = (i ? prefix[i - 1] : 0.0) + p[i];
  for (int i = n - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + p[i];
  auto angle = [](double move, double keep) {
    return 2 * std::atan2(std::sqrt(std::max(0.0, move)), std::sqrt(std::max(0.0, keep)));
  };
  DistributorAngles a;
  a.theta.assign(n - 1, 0.0);
  a.theta[s - 1] = angle(prefix[s - 1], suffix[s]);
  for (int j = s - 1; j >= 1; --j) a.theta[j - 1] = angle(prefix[j - 1], p[j]);
  if (s + 1 <= n - 1) a.theta[s] = angle(suffix[s + 1], p[s]);
  for (int j = s + 1; j <= n - 2; ++j) a.theta[j] = angle(suffix[j + 1], p[j]);
  return a;
}

inline DistributorAngles solve_angles(const BinnedDistribution& d) {
  d.validate();
  return solve_angles(d.probabilities);
}

// Cascade from the start qubit: (s -> s-1) first, then both arms in parallel.
// Under partial_iswap and mixed natives each hop is a bare partial-iSWAP; the
// extra -i per hop is a phase on each unary amplitude and leaves every
// measured probability unchanged.
inline Circuit build_distributor(const DistributorAngles& angles, NativeSet native,
                                 bool seed_x = true) {
  const int n = angles.n();
  const int s = n / 2;
  Circuit c;
  if (seed_x) c.push_back(gates::x(s));
  auto hop = [&](int from, int to) {
    double th = angles.theta[std::min(from, to)];
    if (native == NativeSet::cnot) append(c, decomp::partial_swap(from, to, th, native));
    else c.push_back(gates::partial_iswap(from, to, th));
  };
  hop(s, s - 1);
  for (int k = 1;; ++k) {
    bool any = false;
    if (s + k <= n - 1) {
      hop(s + k - 1, s + k);
      any = true;
    }
    if (s - 1 - k >= 0) {
      hop(s - k, s - k - 1);
      any = true;
    }
    if (!any) break;
  }
  return c;
}

inline double unary_rotation_angle(double s_i, double strike, double s_max) {
  double r = std::clamp((s_i - strike) / (s_max - strike), 0.0, 1.0);
  return 2 * std::asin(std::sqrt(r));
}

// Controlled-RY from every bin strictly above the strike onto the ancilla.
inline Circuit build_payoff(const UnaryLayout& layout, const BinnedDistribution& d, double strike,
                            NativeSet native) {
  Circuit c;
  const double s_max = d.s_max();
  if (!(s_max > strike)) return c;
  NativeSet cr = native == NativeSet::partial_iswap ? native : NativeSet::cnot;
  for (int i = layout.strike_index; i < layout.n; ++i)
    append(c, decomp::cry(i, layout.ancilla, unary_rotation_angle(d.bin_centers[i], strike, s_max), cr));
  return c;
}

inline Circuit build_s_psi0(const UnaryLayout& layout) { return {gates::z(layout.ancilla)}; }

// Phase flip on (start = 1, ancilla = 0): the reflection about the seed state
// restricted to the unary subspace.
inline Circuit build_s0(const UnaryLayout& layout, NativeSet native) {
  NativeSet cx = native == NativeSet::partial_iswap ? native : NativeSet::cnot;
  Circuit c = {gates::x(layout.ancilla), gates::h(layout.ancilla)};
  append(c, decomp::cnot(layout.start, layout.ancilla, cx));
  c.push_back(gates::h(layout.ancilla));
  c.push_back(gates::x(layout.ancilla));
  return c;
}

struct UnaryCircuits {
  UnaryLayout layout;
  DistributorAngles angles;
  Circuit distributor;  // without the seed X
  Circuit payoff;
  Circuit a;            // distributor + payoff
  Circuit q;            // S_psi0, A^dagger, S_0, A
};

// Q = A S_0 A^dagger S_psi0 as built equals -A S_0 A^dagger S_psi0 with the
// textbook sign conventions; the sign is global and dropped.
inline Circuit build_Q(const UnaryLayout& layout, const Circuit& a, NativeSet native) {
  Circuit q = build_s_psi0(layout);
  append(q, inverse(a));
  append(q, build_s0(layout, native));
  append(q, a);
  return q;
}

inline UnaryCircuits build_unary(const BinnedDistribution& d, double strike, NativeSet native) {
  UnaryCircuits u;
  u.layout = make_unary_layout(d, strike);
  u.angles = solve_angles(d);
  u.distributor = build_distributor(u.angles, native, false);
  u.payoff = build_payoff(u.layout, d, strike, native);
  u.a = u.distributor;
  append(u.a, u.payoff);
  u.q = build_Q(u.layout, u.a, native);
  return u;
}

// Seed X, A, then m applications of Q.
inline Circuit build_ae_circuit(const UnaryCircuits& u, int m) {
  Circuit c = {gates::x(u.layout.start)};
  append(c, u.a);
  for (int i = 0; i < m; ++i) append(c, u.q);
  return c;
}

// Text form lists qubit 0 first; '|' and spaces are ignored.
inline std::string to_bitstring(std::uint64_t outcome, int q) {
  std::string s(q, '0');
  for (int i = 0; i < q; ++i)
    if ((outcome >> i) & 1) s[i] = '1';
  return s;
}

inline std::uint64_t from_bitstring(const std::string& text) {
  std::uint64_t v = 0;
  int i = 0;
  for (char ch : text) {
    if (ch == '|' || ch == ' ') continue;
    if (ch != '0' && ch != '1') throw std::invalid_argument("bitstring must contain only 0 and 1");
    if (ch == '1') v |= std::uint64_t{1} << i;
    ++i;
  }
  return v;
}

struct UnaryShot {
  int bin;
  int ancilla;
};

// Bin index of a valid one-hot register, nullopt otherwise.
inline std::optional<UnaryShot> decode_unary(std::uint64_t outcome, const UnaryLayout& layout) {
  std::uint64_t reg = outcome & ((std::uint64_t{1} << layout.n) - 1);
  if (std::popcount(reg) != 1) return std::nullopt;
  return UnaryShot{std::countr_zero(reg), static_cast<int>((outcome >> layout.ancilla) & 1)};
}

struct PostSelection {
  std::vector<UnaryShot> accepted;
  std::uint64_t total = 0;
  double acceptance_rate() const {
    return total ? static_cast<double>(accepted.size()) / static_cast<double>(total) : 0.0;
  }
  bool all_rejected() const { return accepted.empty(); }
};

inline PostSelection postselect(const std::vector<std::uint64_t>& shots, const UnaryLayout& layout) {
  PostSelection r;
  r.total = shots.size();
  for (auto s : shots)
    if (auto u = decode_unary(s, layout)) r.accepted.push_back(*u);
  return r;
}

inline PostSelection postselect(const std::vector<std::string>& shots, const UnaryLayout& layout) {
  std::vector<std::uint64_t> v;
  v.reserve(shots.size());
  for (const auto& s : shots) v.push_back(from_bitstring(s));
  return postselect(v, layout);
}

// Aggregated post-selection over a histogram of outcomes.
struct UnaryTally {
  std::vector<std::uint64_t> bin_counts;
  std::uint64_t ones = 0;
  std::uint64_t accepted = 0;
  std::uint64_t total = 0;

  double acceptance_rate() const {
    return total ? static_cast<double>(accepted) / static_cast<double>(total) : 0.0;
  }
  bool all_rejected() const { return accepted == 0; }
  double ancilla_fraction() const {
    return accepted ? static_cast<double>(ones) / static_cast<double>(accepted) : 0.0;
  }
};

inline UnaryTally tally_unary(const Counts& counts, const UnaryLayout& layout) {
  UnaryTally t;
  t.bin_counts.assign(layout.n, 0);
  for (std::size_t o = 0; o < counts.size(); ++o) {
    if (!counts[o]) continue;
    t.total += counts[o];
    if (auto u = decode_unary(o, layout)) {
      t.bin_counts[u->bin] += counts[o];
      t.accepted += counts[o];
      if (u->ancilla) t.ones += counts[o];
    }
  }
  return t;
}

struct RunOptions {
  NativeSet native = NativeSet::cnot;
  Engine engine = Engine::automatic;
  double width_sigmas = 3.0;
};

struct UnaryPayoffResult {
  double payoff = 0;
  double acceptance = 0;
  UnaryTally tally;
  bool all_rejected() const { return tally.all_rejected(); }
};

inline UnaryPayoffResult unary_payoff_from_tally(const UnaryTally& t, const BinnedDistribution& d,
                                                 double strike) {
  UnaryPayoffResult r;
  r.tally = t;
  r.acceptance = t.acceptance_rate();
  r.payoff = t.ancilla_fraction() * std::max(0.0, d.s_max() - strike);
  return r;
}

// Distributor and payoff circuit, post-selected; payoff = P(ancilla = 1 | accepted) (S_max - K).
inline UnaryPayoffResult estimate_payoff_unary(const MarketScenario& s, int n, const NoiseModel& noise,
                                               std::size_t shots, std::uint64_t seed,
                                               const RunOptions& opt = {}) {
  if (shots == 0) throw std::invalid_argument("shots must be positive");
  auto d = discretize(s, n, opt.width_sigmas);
  auto u = build_unary(d, s.strike, opt.native);
  OutcomeSampler sampler(build_ae_circuit(u, 0), u.layout.num_qubits(), noise, opt.engine);
  auto t = tally_unary(sampler.sample(shots, seed), u.layout);
  return unary_payoff_from_tally(t, d, s.strike);
}

}  // namespace qunary
