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
#include <map>
#include <string>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qunary/gate.hpp"
#include "qunary/statevector.hpp"

namespace qunary {

// Depolarizing probability per 1- and 2-qubit gate plus a per-bit readout flip.
struct NoiseModel {
  double eps1 = 0;
  double eps2 = 0;
  double eps_meas = 0;

  // eps2 = 2 eps1 and eps_meas = 10 eps1.
  static NoiseModel from_single(double eps1) { return {eps1, 2 * eps1, 10 * eps1}; }

  bool gate_noiseless() const { return eps1 == 0 && eps2 == 0; }
  bool noiseless() const { return gate_noiseless() && eps_meas == 0; }

  double gate_eps(int arity) const { return arity == 1 ? eps1 : eps2; }

  // Total weight of the non-identity Paulis: eps (d^2 - 1) / d^2.
  double pauli_probability(int arity) const {
    double d2 = arity == 1 ? 4.0 : 16.0;
    return gate_eps(arity) * (d2 - 1) / d2;
  }

  void validate() const {
    for (double e : {eps1, eps2, eps_meas})
      if (!(e >= 0 && e <= 1)) throw std::invalid_argument("noise probabilities must lie in [0, 1]");
  }
};

// Counter-based stream split: splitmix64 finalizer over (master, stream).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using Counts = std::vector<std::uint64_t>;

namespace detail {

inline double uniform(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline void check_noisy_arity(const Gate& g, const NoiseModel& noise) {
  if (g.arity() > 2 && !noise.gate_noiseless())
    throw std::invalid_argument("noisy execution needs circuits lowered to 1- and 2-qubit gates");
}

// Pauli code drawn after gate `g`, or 0. Consumes one uniform when the gate's
// error probability is positive.
inline int draw_pauli(const Gate& g, const NoiseModel& noise, std::mt19937_64& rng) {
  int k = g.arity();
  double p = noise.pauli_probability(k);
  if (p <= 0) return 0;
  double u = uniform(rng);
  if (u >= p) return 0;
  int options = k == 1 ? 3 : 15;
  return 1 + std::min(options - 1, static_cast<int>(u / p * options));
}

inline void apply_pauli_code(StateVector& s, const Gate& g, int code) {
  if (g.arity() == 1) {
    s.apply_pauli(g.qubits[0], code);
  } else {
    s.apply_pauli(g.qubits[0], code >> 2);
    s.apply_pauli(g.qubits[1], code & 3);
  }
}

inline std::uint64_t readout(std::uint64_t outcome, int q, double eps, std::mt19937_64& rng) {
  if (eps <= 0) return outcome;
  for (int b = 0; b < q; ++b)
    if (uniform(rng) < eps) outcome ^= std::uint64_t{1} << b;
  return outcome;
}

}  // namespace detail

// One shot of the noisy circuit: a random non-identity Pauli string after each
// gate with the depolarizing weight, a projective sample, then readout flips.
inline std::uint64_t run_trajectory(const Circuit& circuit, int q, const NoiseModel& noise,
                                    std::uint64_t seed) {
  noise.validate();
  std::mt19937_64 rng(seed);
  StateVector s(q);
  for (const auto& g : circuit) {
    detail::check_noisy_arity(g, noise);
    s.apply(g);
    if (int code = detail::draw_pauli(g, noise, rng)) detail::apply_pauli_code(s, g, code);
  }
  auto cdf = cumulative(s.probabilities());
  std::uint64_t outcome = sample_index(cdf, detail::uniform(rng));
  return detail::readout(outcome, q, noise.eps_meas, rng);
}

// Batched trajectories. Shot i of counts(shots, seed) is bit-identical to
// run_trajectory(circuit, q, noise, derive_seed(seed, i)); error patterns are
// drawn first and the state is resumed from a noiseless checkpoint.
class TrajectorySampler {
 public:
  TrajectorySampler(Circuit circuit, int q, NoiseModel noise,
                    std::size_t memory_budget_bytes = std::size_t{64} << 20)
      : circuit_(std::move(circuit)), q_(q), noise_(noise) {
    noise_.validate();
    for (const auto& g : circuit_) {
      validate_gate(g, q_);
      detail::check_noisy_arity(g, noise_);
    }
    const std::size_t state_bytes = sizeof(cplx) << q_;
    const std::size_t g_count = circuit_.size();
    std::size_t max_checkpoints = std::max<std::size_t>(1, memory_budget_bytes / state_bytes);
    stride_ = std::max<std::size_t>(1, (g_count + max_checkpoints - 1) / max_checkpoints);
    StateVector s(q_);
    for (std::size_t i = 0; i < g_count; ++i) {
      if (i % stride_ == 0) checkpoints_.push_back(s.amplitudes());
      s.apply(circuit_[i]);
    }
    if (g_count == 0) checkpoints_.push_back(s.amplitudes());
    clean_cdf_ = cumulative(s.probabilities());
    cache_limit_ = std::max<std::size_t>(16, memory_budget_bytes / (sizeof(double) << q_));
  }

  std::uint64_t shot(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    pattern_.clear();
    for (std::size_t i = 0; i < circuit_.size(); ++i)
      if (int code = detail::draw_pauli(circuit_[i], noise_, rng)) pattern_.emplace_back(i, code);
    const std::vector<double>& cdf = cdf_for_pattern();
    std::uint64_t outcome = sample_index(cdf, detail::uniform(rng));
    return detail::readout(outcome, q_, noise_.eps_meas, rng);
  }

  Counts counts(std::size_t shots, std::uint64_t seed) {
    Counts c(std::size_t{1} << q_, 0);
    for (std::size_t i = 0; i < shots; ++i) ++c[shot(derive_seed(seed, i))];
    return c;
  }

 private:
  const std::vector<double>& cdf_for_pattern() {
    if (pattern_.empty()) return clean_cdf_;
    std::uint64_t key = 0;
    bool cacheable = pattern_.size() == 1;
    if (cacheable) {
      key = pattern_[0].first * 16 + static_cast<std::uint64_t>(pattern_[0].second);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    std::size_t first = pattern_[0].first;
    std::size_t cp = first / stride_;
    StateVector s(q_);
    s.amplitudes() = checkpoints_[cp];
    std::size_t next = 0;
    for (std::size_t i = cp * stride_; i < circuit_.size(); ++i) {
      s.apply(circuit_[i]);
      if (next < pattern_.size() && pattern_[next].first == i) {
        detail::apply_pauli_code(s, circuit_[i], pattern_[next].second);
        ++next;
      }
    }
    scratch_ = cumulative(s.probabilities());
    if (cacheable && cache_.size() < cache_limit_) return cache_.emplace(key, scratch_).first->second;
    return scratch_;
  }

  Circuit circuit_;
  int q_;
  NoiseModel noise_;
  std::size_t stride_ = 1;
  std::vector<std::vector<cplx>> checkpoints_;
  std::vector<double> clean_cdf_;
  std::vector<double> scratch_;
  std::vector<std::pair<std::size_t, int>> pattern_;
  std::map<std::uint64_t, std::vector<double>> cache_;
  std::size_t cache_limit_ = 16;
};

// Exact density-matrix evolution under the same per-gate depolarizing channel.
// rho is stored as a 2q-qubit vector: low q bits index rows, high q bits columns.
class DensityMatrix {
 public:
  explicit DensityMatrix(int q) : q_(q) {
    if (q < 1 || q > 13) throw std::invalid_argument("density matrix register too large");
    rho_.assign(std::size_t{1} << (2 * q), 0);
    rho_[0] = 1;
  }

  int num_qubits() const { return q_; }

  void apply(const Gate& g) {
    validate_gate(g, q_);
    kernels::apply_gate(rho_.data(), 2 * q_, g);
    Gate col = g;
    for (int i = 0; i < g.arity(); ++i) col.qubits[i] += q_;
    if (real_matrix(g.kind)) {
      kernels::apply_gate(rho_.data(), 2 * q_, col);
      return;
    }
    auto m = gate_matrix(g);
    for (auto& v : m) v = std::conj(v);
    if (g.arity() == 1) kernels::apply_1q(rho_.data(), 2 * q_, col.qubits[0], m.data());
    else if (g.arity() == 2) kernels::apply_2q(rho_.data(), 2 * q_, col.qubits[0], col.qubits[1], m.data());
    else kernels::apply_matrix(rho_.data(), 2 * q_, {col.qubits[0], col.qubits[1], col.qubits[2]}, m);
  }

  // Gate followed by its depolarizing channel.
  void apply(const Gate& g, const NoiseModel& noise) {
    apply(g);
    double eps = noise.gate_eps(g.arity());
    if (eps <= 0) return;
    detail::check_noisy_arity(g, noise);
    if (g.arity() == 1) depolarize1(g.qubits[0], eps);
    else depolarize2(g.qubits[0], g.qubits[1], eps);
  }

  void apply(const Circuit& c, const NoiseModel& noise) {
    for (const auto& g : c) apply(g, noise);
  }

  // rho -> (1 - eps) rho + eps Tr_a(rho) (x) I/2
  void depolarize1(int a, double eps) {
    const std::size_t r = std::size_t{1} << a, c = std::size_t{1} << (a + q_);
    const std::size_t blocks = rho_.size() >> 2;
    const int lo = a, hi = a + q_;
    for (std::size_t k = 0; k < blocks; ++k) {
      std::size_t i = kernels::insert_zero(kernels::insert_zero(k, lo), hi);
      cplx d0 = rho_[i], d1 = rho_[i | r | c];
      cplx mix = 0.5 * eps * (d0 + d1);
      rho_[i] = (1 - eps) * d0 + mix;
      rho_[i | r | c] = (1 - eps) * d1 + mix;
      rho_[i | r] *= (1 - eps);
      rho_[i | c] *= (1 - eps);
    }
  }

  // Joint channel on the 4-dimensional space of (a, b).
  void depolarize2(int a, int b, double eps) {
    std::size_t roff[4], coff[4];
    for (int l = 0; l < 4; ++l) {
      roff[l] = ((l >> 1) ? std::size_t{1} << a : 0) | ((l & 1) ? std::size_t{1} << b : 0);
      coff[l] = roff[l] << q_;
    }
    int bits[4] = {a, b, a + q_, b + q_};
    std::sort(bits, bits + 4);
    const std::size_t blocks = rho_.size() >> 4;
    for (std::size_t k = 0; k < blocks; ++k) {
      std::size_t i = k;
      for (int bit : bits) i = kernels::insert_zero(i, bit);
      cplx trace = 0;
      for (int l = 0; l < 4; ++l) trace += rho_[i | roff[l] | coff[l]];
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
          cplx& v = rho_[i | roff[r] | coff[c]];
          v *= (1 - eps);
          if (r == c) v += 0.25 * eps * trace;
        }
    }
  }

  std::vector<double> diagonal() const {
    std::vector<double> p(std::size_t{1} << q_);
    const std::size_t stride = (std::size_t{1} << q_) + 1;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::max(0.0, rho_[i * stride].real());
    return p;
  }

  const std::vector<cplx>& data() const { return rho_; }

  cplx element(std::size_t row, std::size_t col) const { return rho_[row | (col << q_)]; }

 private:
  static bool real_matrix(GateKind k) {
    switch (k) {
      case GateKind::I: case GateKind::X: case GateKind::Z: case GateKind::H: case GateKind::RY:
      case GateKind::CNOT: case GateKind::CZ: case GateKind::CRY: case GateKind::SWAP:
      case GateKind::PartialSwap: case GateKind::Toffoli:
        return true;
      default:
        return false;
    }
  }

  int q_;
  std::vector<cplx> rho_;
};

// Independent per-bit readout flips applied to an outcome distribution.
inline void apply_readout_noise(std::vector<double>& p, int q, double eps) {
  if (eps <= 0) return;
  for (int b = 0; b < q; ++b) {
    const std::size_t m = std::size_t{1} << b;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i & m) continue;
      double p0 = p[i], p1 = p[i | m];
      p[i] = (1 - eps) * p0 + eps * p1;
      p[i | m] = eps * p0 + (1 - eps) * p1;
    }
  }
}

// i.i.d. shots from a fixed outcome distribution, as sequential binomials.
inline Counts sample_counts(const std::vector<double>& p, std::size_t shots, std::uint64_t seed) {
  Counts c(p.size(), 0);
  std::mt19937_64 rng(seed);
  std::size_t last = 0;
  double total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    total += p[i];
    if (p[i] > 0) last = i;
  }
  std::uint64_t remaining = shots;
  double left = total;
  for (std::size_t i = 0; i < p.size() && remaining > 0; ++i) {
    if (p[i] <= 0) continue;
    if (i == last) {
      c[i] = remaining;
      break;
    }
    double frac = std::clamp(p[i] / left, 0.0, 1.0);
    std::uint64_t k = std::binomial_distribution<std::uint64_t>(remaining, frac)(rng);
    c[i] = k;
    remaining -= k;
    left -= p[i];
  }
  return c;
}

enum class Engine { automatic, trajectory, density };

inline constexpr int kDensityMaxQubits = 12;

inline std::string to_string(Engine e) {
  switch (e) {
    case Engine::automatic: return "auto";
    case Engine::trajectory: return "trajectory";
    case Engine::density: return "density";
  }
  return "?";
}

inline Engine parse_engine(const std::string& s) {
  if (s == "auto") return Engine::automatic;
  if (s == "trajectory") return Engine::trajectory;
  if (s == "density") return Engine::density;
  throw std::invalid_argument("unknown engine: " + s);
}

// Automatic picks the exact distribution whenever it is cheap: statevector
// when gates are noiseless, density matrix up to kDensityMaxQubits.
inline Engine resolve_engine(Engine e, int q, const NoiseModel& noise) {
  if (e != Engine::automatic) return e;
  if (noise.gate_noiseless() || q <= kDensityMaxQubits) return Engine::density;
  return Engine::trajectory;
}

// Exact outcome distribution of the noisy circuit including readout error.
inline std::vector<double> noisy_distribution(const Circuit& c, int q, const NoiseModel& noise) {
  noise.validate();
  std::vector<double> p;
  if (noise.gate_noiseless()) {
    p = run_exact(c, q);
  } else {
    DensityMatrix rho(q);
    rho.apply(c, noise);
    p = rho.diagonal();
  }
  apply_readout_noise(p, q, noise.eps_meas);
  return p;
}

// Shot source for one circuit, reusable across repetitions.
class OutcomeSampler {
 public:
  OutcomeSampler(Circuit circuit, int q, NoiseModel noise, Engine engine = Engine::automatic)
      : q_(q), engine_(resolve_engine(engine, q, noise)) {
    if (engine_ == Engine::density) dist_ = noisy_distribution(circuit, q, noise);
    else traj_.emplace_back(std::move(circuit), q, noise);
  }

  // Builds a density-engine sampler from a precomputed distribution.
  static OutcomeSampler from_distribution(std::vector<double> p, int q) {
    OutcomeSampler s;
    s.q_ = q;
    s.engine_ = Engine::density;
    s.dist_ = std::move(p);
    return s;
  }

  Engine engine() const { return engine_; }
  int num_qubits() const { return q_; }
  const std::vector<double>& distribution() const { return dist_; }

  Counts sample(std::size_t shots, std::uint64_t seed) {
    if (engine_ == Engine::density) return sample_counts(dist_, shots, seed);
    return traj_.front().counts(shots, seed);
  }

 private:
  OutcomeSampler() = default;
  int q_ = 0;
  Engine engine_ = Engine::density;
  std::vector<double> dist_;
  std::vector<TrajectorySampler> traj_;
};

}  // namespace qunary
