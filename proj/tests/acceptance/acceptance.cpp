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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "qunary.hpp"
#include "support/oracle.hpp"

using namespace qunary;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

const MarketScenario kScenario{};

double ancilla_one(const std::vector<double>& full, int q) {
  double s = 0;
  for (std::size_t o = 0; o < full.size(); ++o)
    if ((o >> q) & 1) s += full[o];
  return s;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Outcome payoff_reference() {
  double v = binned_payoff(discretize(kScenario, 10000), kScenario.strike);
  return {std::abs(v - 0.1595) <= 0.0005, fmt("binned payoff at 10^4 bins = %.10f", v)};
}

Outcome binning_error() {
  double ref = binned_payoff(discretize(kScenario, 10000), kScenario.strike);
  auto rel = [&](int n) { return std::abs(binned_payoff(discretize(kScenario, n), kScenario.strike) - ref) / ref; };
  double e100 = rel(100), best = INFINITY;
  int best_n = 0;
  for (int n = 2; n <= 64; ++n)
    if (rel(n) < best) {
      best = rel(n);
      best_n = n;
    }
  return {e100 < 0.01 && best < 0.005, fmt("rel error %.4g at 100 bins; best n<=64 is %.0f with %.4g", e100, best_n, best)};
}

Outcome distributor_round_trip() {
  std::mt19937_64 rng(2026);
  std::exponential_distribution<double> ex(1.0);
  double worst = 0, outside = 0;
  for (auto native : {NativeSet::cnot, NativeSet::partial_iswap})
    for (int n = 2; n <= 12; ++n)
      for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> p(n);
        for (auto& v : p) v = ex(rng);
        double s = std::accumulate(p.begin(), p.end(), 0.0);
        for (auto& v : p) v /= s;
        auto full = run_exact(build_distributor(solve_angles(p), native), n);
        std::vector<double> m(n, 0.0);
        for (std::size_t o = 0; o < full.size(); ++o) {
          if (std::popcount(o) == 1) m[std::countr_zero(o)] += full[o];
          else outside += full[o];
        }
        for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(m[i] - p[i]));
      }
  return {worst < 1e-9, fmt("max abs error %.3g over 2200 distributions, mass outside unary %.3g", worst, outside)};
}

Outcome payoff_identity() {
  auto d8 = discretize(kScenario, 8);
  auto u = build_unary(d8, kScenario.strike, NativeSet::cnot);
  double pu = ancilla_one(run_exact(build_ae_circuit(u, 0), 9), 8) * (d8.s_max() - kScenario.strike);
  double eu = std::abs(pu - binned_payoff(d8, kScenario.strike));
  auto b = build_binary(d8, kScenario.strike, 0.1, NativeSet::cnot);
  double eb = std::abs(ancilla_one(run_exact(b.a, 8), 7) - exact_p1(b.layout, d8.probabilities));
  return {eu < 1e-9 && eb < 1e-9, fmt("unary |diff| %.3g, binary |diff| %.3g", eu, eb)};
}

Outcome comparator_equivalence() {
  long checked = 0, mismatches = 0;
  for (auto native : {NativeSet::cnot, NativeSet::partial_iswap})
    for (int n = 2; n <= 4; ++n)
      for (int k = 0; k <= (1 << n); ++k) {
        BinaryLayout l;
        l.n = n;
        l.threshold = k;
        auto comp = build_comparator(l, native);
        for (int e = 0; e < (1 << n); ++e) {
          Circuit c;
          for (int j = 0; j < n; ++j)
            if ((e >> j) & 1) c.push_back(gates::x(j));
          append(c, comp);
          double f = ancilla_one(run_exact(c, l.num_qubits()), l.flag());
          ++checked;
          if (std::abs(f - (e >= k ? 1.0 : 0.0)) > 1e-9) ++mismatches;
        }
      }
  return {mismatches == 0, fmt("%.0f mismatches over %.0f (native, n, K', e) cases", mismatches, checked)};
}

Outcome q_power_law() {
  auto d8 = discretize(kScenario, 8);
  double worst = 0;
  for (auto native : {NativeSet::cnot, NativeSet::partial_iswap}) {
    auto u = build_unary(d8, kScenario.strike, native);
    auto b = build_binary(d8, kScenario.strike, 0.1, native);
    double tu = std::asin(std::sqrt(binned_payoff(d8, kScenario.strike) / (d8.s_max() - kScenario.strike)));
    double tb = std::asin(std::sqrt(exact_p1(b.layout, d8.probabilities)));
    for (int m = 0; m <= 4; ++m) {
      worst = std::max(worst, std::abs(ancilla_one(run_exact(build_ae_circuit(u, m), 9), 8) -
                                       std::pow(std::sin((2 * m + 1) * tu), 2)));
      worst = std::max(worst, std::abs(ancilla_one(run_exact(build_ae_circuit(b, m), 8), 7) -
                                       std::pow(std::sin((2 * m + 1) * tb), 2)));
    }
  }
  return {worst < 1e-8, fmt("max |P(1) - sin^2((2m+1)theta)| = %.3g for m = 0..4", worst)};
}

Outcome ae_convergence() {
  ExperimentConfig cfg;
  auto ms = schedule(ScheduleKind::linear, 4);
  Outcome o;
  std::ostringstream os;
  for (auto enc : {Encoding::unary, Encoding::binary}) {
    AEProblem p(cfg, enc, 8, 0.0, 4);
    auto st = repeat_ae(p, ms, 10000, 100, 0.05, job_seed(cfg.seed, enc, 0));
    const auto& last = st.back();
    bool ok = last.covered >= 90;
    double prev = INFINITY;
    std::vector<int> partial;
    for (const auto& s : st) {
      partial.push_back(s.m);
      double sd = stddev(s.a);
      double hi = sampling_bound(partial, 1e4, p.exact_amplitude()), lo = optimal_bound(partial, 1e4, p.exact_amplitude());
      ok = ok && sd < prev && sd <= 2 * hi && sd >= lo / 2;
      prev = sd;
    }
    o.pass = o.pass && ok;
    os << to_string(enc) << ": coverage " << last.covered << "/100, std(a) by J";
    for (const auto& s : st) os << " " << fmt("%.3g", stddev(s.a));
    os << (ok ? " ok" : " FAIL") << "; ";
  }
  o.detail = os.str();
  return o;
}

Outcome table_exactness() {
  const MarketScenario s{};
  std::ostringstream os;
  bool unary_ok = true;
  for (auto native : {NativeSet::cnot, NativeSet::partial_iswap, NativeSet::mixed}) {
    std::vector<std::string> bad;
    for (int n = 4; n <= 12; ++n) {
      auto u = build_unary(discretize(s, n), s.strike, native);
      auto r = verify_budget(unary_blocks(u, native), unary_budget(u.layout, native));
      for (const auto& b : r.blocks)
        if (!b.counts_match()) {
          std::ostringstream e;
          e << to_string(b.block) << "@" << n << "(" << b.built.one_qubit << "/" << b.expected_one << ","
            << b.built.two_qubit << "/" << b.expected_two << ")";
          bad.push_back(e.str());
        }
    }
    if (!bad.empty()) {
      unary_ok = false;
      os << "unary " << to_string(native) << " mismatches:";
      for (std::size_t i = 0; i < bad.size() && i < 3; ++i) os << " " << bad[i];
      if (bad.size() > 3) os << " ... (" << bad.size() << " total)";
      os << "; ";
    }
  }
  // Binary: C+R offset per (native, t0) must be the same for every n; S_psi0 and S_0 exact.
  bool binary_ok = true;
  for (auto native : {NativeSet::cnot, NativeSet::partial_iswap}) {
    std::map<int, std::set<std::pair<long, long>>> offsets;
    for (int n = 2; n <= 6; ++n)
      for (int k = 1; k < (1 << n); ++k) {
        BinnedDistribution d;
        for (int i = 0; i < (1 << n); ++i) {
          d.bin_centers.push_back(i);
          d.probabilities.push_back(1.0 / (1 << n));
        }
        auto b = build_binary(d, k - 0.5, 0.1, native);
        auto r = verify_budget(binary_blocks(b, native), binary_budget(b.layout, native));
        for (const auto& blk : r.blocks) {
          if (blk.block == Block::payoff)
            offsets[b.layout.twos_complement() & 1].insert({blk.one_offset(), blk.two_offset()});
          if ((blk.block == Block::s0 && n >= 3) || blk.block == Block::s_psi0) binary_ok = binary_ok && blk.counts_match();
        }
      }
    os << "binary " << to_string(native) << " C+R offsets";
    for (const auto& [t0, set] : offsets) {
      binary_ok = binary_ok && set.size() == 1;
      os << " t0=" << t0 << ":";
      for (const auto& [a, b] : set) os << "(" << a << "," << b << ")";
    }
    os << "; ";
  }
  os << (unary_ok ? "unary exact" : "unary NOT exact") << ", " << (binary_ok ? "binary offsets constant" : "binary offsets vary");
  return {unary_ok && binary_ok, os.str()};
}

Outcome crossover_point() {
  int x = crossover(NativeSet::mixed);
  return {x >= 50 && x <= 200, fmt("mixed native crossover at %.0f bins", x)};
}

Outcome noise_robustness() {
  ExperimentConfig cfg;
  cfg.eps = {0.005};
  auto u = sample_payoff_runs(cfg, Encoding::unary, 0.005, job_seed(cfg.seed, Encoding::unary, 5));
  auto b = sample_payoff_runs(cfg, Encoding::binary, 0.005, job_seed(cfg.seed, Encoding::binary, 5));
  const double target = binned_payoff(discretize(kScenario, 8), kScenario.strike);
  std::vector<double> ku, kb, eu, eb;
  for (const auto& r : u) {
    ku.push_back(r.kl);
    eu.push_back(std::abs(r.payoff - target) / target);
  }
  for (const auto& r : b) {
    kb.push_back(r.kl);
    eb.push_back(std::abs(r.payoff - target) / target);
  }
  bool a_ok = median(kb) >= 3 * median(ku);
  bool b_ok = median(eu) < median(eb);

  // (c) AE with schedule m = 0..M, M = 2, 100 reps x 10^4 shots; deviation of
  // the mean payoff from the noiseless mean against 3 combined reported sigmas.
  const int M = 2;
  auto ms = schedule(ScheduleKind::linear, M);
  auto mean_ae = [&](Encoding enc, double eps, std::size_t point) {
    AEProblem p(cfg, enc, 8, eps, M);
    return repeat_ae(p, ms, 10000, 100, 0.05, job_seed(cfg.seed, enc, 100 + point));
  };
  std::ostringstream os;
  os << fmt("(a) KL median binary/unary = %.3g/%.3g = %.3gx; ", median(kb), median(ku), median(kb) / median(ku));
  os << fmt("(b) rel error median unary %.3g vs binary %.3g; ", median(eu), median(eb));
  bool c_ok = true;
  os << "(c)";
  for (auto enc : {Encoding::unary, Encoding::binary}) {
    auto clean = mean_ae(enc, 0.0, 0);
    const std::vector<double> grid = enc == Encoding::unary ? std::vector<double>{0.001, 0.002, 0.003}
                                                            : std::vector<double>{0.002, 0.003, 0.004, 0.005};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto noisy = mean_ae(enc, grid[i], i + 1);
      for (int j = enc == Encoding::unary ? M : 1; j <= M; ++j) {
        double dev = std::abs(mean(noisy[j].payoff) - mean(clean[j].payoff));
        double sig = std::sqrt(std::pow(mean(noisy[j].dpayoff), 2) + std::pow(mean(clean[j].dpayoff), 2));
        bool within = dev <= 3 * sig;
        bool ok = enc == Encoding::unary ? within : !within;
        c_ok = c_ok && ok;
        os << " " << to_string(enc)[0] << fmt("[eps=%.3g,M=%.0f] %.3g/%.3g", grid[i], j, dev, 3 * sig)
           << (ok ? "" : "!");
      }
    }
  }
  return {a_ok && b_ok && c_ok, os.str()};
}

Outcome post_selection() {
  ExperimentConfig cfg;
  auto u = build_unary(discretize(kScenario, 8), kScenario.strike, NativeSet::cnot);
  bool ok = true;
  std::ostringstream os;
  {
    OutcomeSampler s(build_ae_circuit(u, 0), 9, NoiseModel{});
    double acc = tally_unary(s.sample(10000, 1), u.layout).acceptance_rate();
    ok = ok && acc == 1.0;
    os << "noiseless acceptance " << acc << "; ";
  }
  // Spearman correlation of acceptance with eps over a 6-point grid, 100 reps.
  std::vector<double> xs, ys;
  for (int k = 0; k <= 5; ++k) {
    OutcomeSampler s(build_ae_circuit(u, 0), 9, NoiseModel::from_single(0.001 * k));
    for (int r = 0; r < 100; ++r) {
      xs.push_back(k);
      ys.push_back(tally_unary(s.sample(10000, derive_seed(k, r)), u.layout).acceptance_rate());
    }
  }
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
      i = j + 1;
    }
    return r;
  };
  auto rx = ranks(xs), ry = ranks(ys);
  double mx = mean(rx), my = mean(ry), sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  double rho = sxy / std::sqrt(sxx * syy);
  double t = rho * std::sqrt((rx.size() - 2) / (1 - rho * rho));
  ok = ok && rho < 0 && t < -2.33;
  os << fmt("Spearman rho %.3f (t = %.1f); ", rho, t);
  // Uncertainties use accepted counts.
  AEProblem p(cfg, Encoding::unary, 8, 0.003, 2);
  auto run = run_ae_once(p, {0, 1, 2}, 10000, 0.05, 11);
  const double z = z_value(0.05);
  bool used = true;
  const auto& e = run.prefix.back();
  for (std::size_t j = 0; j < e.rounds.size(); ++j) {
    const auto& r = e.rounds[j];
    double want = z / (2 * (2 * r.m + 1) * std::sqrt(static_cast<double>(run.accepted[j])));
    used = used && r.shots == run.accepted[j] && run.accepted[j] < run.total[j] && std::abs(r.dtheta - want) < 1e-15;
  }
  ok = ok && used;
  os << "round shots = accepted (" << run.accepted[0] << "/" << run.total[0] << " at m=0), dtheta from accepted: "
     << (used ? "yes" : "no");
  return {ok, os.str()};
}

Outcome channel_oracle() {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  double worst = 0;
  int outcomes = 0;
  for (int nq : {2, 3, 4}) {
    Circuit c;
    for (int g = 0; g < 6 * nq; ++g) {
      int a = static_cast<int>(rng() % nq), b = static_cast<int>((a + 1 + rng() % (nq - 1)) % nq);
      switch (rng() % 4) {
        case 0: c.push_back(gates::u3(a, ang(rng), ang(rng), ang(rng))); break;
        case 1: c.push_back(gates::cnot(a, b)); break;
        case 2: c.push_back(gates::partial_iswap(a, b, ang(rng))); break;
        default: c.push_back(gates::ry(a, ang(rng))); break;
      }
    }
    NoiseModel nm{0.01, 0.02, 0.02};
    auto want = oracle::measured_distribution(c, nq, {nm.eps1, nm.eps2, nm.eps_meas});
    TrajectorySampler ts(c, nq, nm);
    auto counts = ts.counts(1000000, 77 + nq);
    for (std::size_t i = 0; i < want.size(); ++i) {
      double f = static_cast<double>(counts[i]) / 1e6;
      double sd = std::sqrt(want[i] * (1 - want[i]) / 1e6);
      worst = std::max(worst, sd > 0 ? std::abs(f - want[i]) / sd : (counts[i] ? INFINITY : 0.0));
      ++outcomes;
    }
  }
  return {worst < 4, fmt("max |z| = %.2f over %.0f outcomes (2-4 qubits, 10^6 trajectories each)", worst, outcomes)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 = no runtime bound
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "payoff reference", 1, payoff_reference},
      {2, "binning error", 1, binning_error},
      {3, "distributor round trip", 0, distributor_round_trip},
      {4, "payoff circuit identity", 0, payoff_identity},
      {5, "comparator equivalence", 0, comparator_equivalence},
      {6, "Q power law", 0, q_power_law},
      {7, "AE convergence", 300, ae_convergence},
      {8, "gate budget exactness", 0, table_exactness},
      {9, "gate crossover", 0, crossover_point},
      {10, "noise robustness", 1800, noise_robustness},
      {11, "post-selection", 0, post_selection},
      {12, "depolarizing channel oracle", 0, channel_oracle},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool slow = c.limit_s > 0 && secs >= c.limit_s;
    bool pass = o.pass && !slow;
    failed += !pass;
    std::printf("%s %2d %s: %s%s (%.2f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                slow ? " [over runtime limit]" : "", secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed ? 1 : 0;
}
