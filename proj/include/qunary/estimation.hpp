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
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qunary/market.hpp"

namespace qunary {

enum class ScheduleKind { linear, exponential };

inline ScheduleKind parse_schedule(const std::string& s) {
  if (s == "linear") return ScheduleKind::linear;
  if (s == "exp" || s == "exponential") return ScheduleKind::exponential;
  throw std::invalid_argument("unknown schedule: " + s);
}

inline std::string to_string(ScheduleKind k) { return k == ScheduleKind::linear ? "linear" : "exp"; }

// linear: 0, 1, ..., J. exponential: 0, 1, 2, 4, ..., 2^J.
inline std::vector<int> schedule(ScheduleKind kind, int J) {
  if (J < 0) throw std::invalid_argument("schedule needs J >= 0");
  std::vector<int> m = {0};
  if (kind == ScheduleKind::linear)
    for (int j = 1; j <= J; ++j) m.push_back(j);
  else if (J > 0)
    for (int j = 0; j <= J; ++j) m.push_back(1 << j);
  return m;
}

inline double z_value(double alpha) { return normal_quantile(1 - alpha / 2); }

// The 2m + 1 angles in [0, pi/2] whose (2m + 1)-fold multiple has sin^2 = a.
inline std::vector<double> multiple_values_arcsin(double a, int m) {
  if (m < 0) throw std::invalid_argument("m must be non-negative");
  double t0 = std::asin(std::sqrt(std::clamp(a, 0.0, 1.0)));
  std::vector<double> v = {t0};
  for (int k = 1; k <= m; ++k) {
    v.push_back(k * M_PI - t0);
    v.push_back(k * M_PI + t0);
  }
  for (auto& x : v) x /= (2 * m + 1);
  return v;
}

struct AERound {
  int m = 0;
  std::uint64_t ones = 0;
  std::uint64_t shots = 0;  // accepted shots when post-selection is active
  double a_hat = 0;
  double theta = 0;         // selected candidate
  double dtheta = 0;        // z / (2 (2m + 1) sqrt(shots))
  bool skipped = false;
};

struct AEEstimate {
  double a = 0;
  double theta = 0;
  double dtheta = 0;
  double confidence = 0.95;
  bool valid = false;
  std::vector<AERound> rounds;
  std::vector<std::string> warnings;

  double z() const { return z_value(1 - confidence); }
  double da() const { return std::sin(2 * theta) * dtheta; }
};

inline AERound measured_round(int m, std::uint64_t ones, std::uint64_t shots) {
  AERound r;
  r.m = m;
  r.ones = ones;
  r.shots = shots;
  r.skipped = shots == 0;
  r.a_hat = shots ? static_cast<double>(ones) / static_cast<double>(shots) : 0.0;
  return r;
}

// Mandatory m = 0 round.
inline AEEstimate ae_start(std::uint64_t ones, std::uint64_t shots, double alpha = 0.05) {
  AEEstimate e;
  e.confidence = 1 - alpha;
  AERound r = measured_round(0, ones, shots);
  if (r.skipped) {
    e.warnings.push_back("round m=0: all shots rejected");
    e.rounds.push_back(r);
    return e;
  }
  r.theta = std::asin(std::sqrt(r.a_hat));
  r.dtheta = e.z() / (2 * std::sqrt(static_cast<double>(shots)));
  e.theta = r.theta;
  e.dtheta = r.dtheta;
  e.a = std::pow(std::sin(e.theta), 2);
  e.valid = true;
  e.rounds.push_back(r);
  return e;
}

// Picks the candidate nearest the running angle (ties to the smaller angle)
// and merges it by inverse-variance weighting.
inline AEEstimate ae_round(const AEEstimate& prev, int m, std::uint64_t ones, std::uint64_t shots) {
  AEEstimate e = prev;
  AERound r = measured_round(m, ones, shots);
  if (r.skipped || !prev.valid) {
    r.skipped = true;
    e.warnings.push_back("round m=" + std::to_string(m) +
                         (shots ? ": no anchor from earlier rounds" : ": all shots rejected"));
    e.rounds.push_back(r);
    return e;
  }
  auto cand = multiple_values_arcsin(r.a_hat, m);
  double best = cand[0];
  for (double c : cand) {
    double dc = std::abs(c - prev.theta), db = std::abs(best - prev.theta);
    if (dc < db || (dc == db && c < best)) best = c;
  }
  r.theta = best;
  r.dtheta = prev.z() / (2 * (2 * m + 1) * std::sqrt(static_cast<double>(shots)));
  double w0 = 1 / (prev.dtheta * prev.dtheta), w1 = 1 / (r.dtheta * r.dtheta);
  e.theta = std::clamp((prev.theta * w0 + r.theta * w1) / (w0 + w1), 0.0, M_PI / 2);
  e.dtheta = 1 / std::sqrt(w0 + w1);
  e.a = std::pow(std::sin(e.theta), 2);
  e.rounds.push_back(r);
  return e;
}

// Runs every round of `ms` (which must start at 0); measure(m, round) returns
// {ones, shots} for that round.
struct RoundOutcome {
  std::uint64_t ones;
  std::uint64_t shots;
};

inline AEEstimate run_iterative_ae(const std::vector<int>& ms, double alpha,
                                   const std::function<RoundOutcome(int m, std::size_t round)>& measure) {
  if (ms.empty() || ms[0] != 0) throw std::invalid_argument("schedule must start with m = 0");
  auto r0 = measure(0, 0);
  AEEstimate e = ae_start(r0.ones, r0.shots, alpha);
  for (std::size_t j = 1; j < ms.size(); ++j) {
    auto r = measure(ms[j], j);
    e = ae_round(e, ms[j], r.ones, r.shots);
  }
  return e;
}

inline double sum_square_multiples(const std::vector<int>& ms) {
  double s = 0;
  for (int m : ms) s += std::pow(2.0 * m + 1, 2);
  return s;
}

inline double oracle_calls_per_shot(const std::vector<int>& ms) {
  double s = 0;
  for (int m : ms) s += 2.0 * m + 1;
  return s;
}

// z / sqrt(N) (sum (2m_j + 1)^2)^(-1/2)
inline double theoretical_uncertainty(const std::vector<int>& ms, double shots, double alpha = 0.05) {
  if (ms.empty() || ms[0] != 0) throw std::invalid_argument("schedule must start with m = 0");
  return z_value(alpha) / std::sqrt(shots) / std::sqrt(sum_square_multiples(ms));
}

// Standard deviation of a from plain sampling with the same number of A calls.
inline double sampling_bound(const std::vector<int>& ms, double shots, double a) {
  return std::sqrt(a * (1 - a) / (shots * oracle_calls_per_shot(ms)));
}

// Heisenberg-limited standard deviation of a for the same A calls; equals the
// sampling bound for the schedule {0}.
inline double optimal_bound(const std::vector<int>& ms, double shots, double a) {
  return std::sqrt(a * (1 - a)) / (std::sqrt(shots) * oracle_calls_per_shot(ms));
}

// Largest per-gate error keeping an advantage for a circuit of (a n + b)
// gates per A: 1 - m_J^((2 - 4 alpha) / ((a n + b) m_J)).
inline double mitigation_bound(int n, int m_J, double gate_a, double gate_b, ScheduleKind kind) {
  if (m_J < 1) throw std::invalid_argument("m_J must be at least 1");
  double alpha_hat = kind == ScheduleKind::linear ? 0.75 : 1.0;
  double gates = gate_a * n + gate_b;
  return 1 - std::pow(static_cast<double>(m_J), (2 - 4 * alpha_hat) / (gates * m_J));
}

}  // namespace qunary
