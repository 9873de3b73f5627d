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
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "qunary/binary.hpp"
#include "qunary/estimation.hpp"
#include "qunary/market.hpp"
#include "qunary/noise.hpp"
#include "qunary/resources.hpp"
#include "qunary/unary.hpp"

namespace qunary {

enum class Figure { kl_vs_noise, payoff_vs_noise, bins_error, ae_convergence, ae_noise, ae_bins_sweep, gate_crossover };

inline constexpr Figure kFigures[] = {Figure::kl_vs_noise,    Figure::payoff_vs_noise, Figure::bins_error,
                                      Figure::ae_convergence, Figure::ae_noise,        Figure::ae_bins_sweep,
                                      Figure::gate_crossover};

inline std::string to_string(Figure f) {
  switch (f) {
    case Figure::kl_vs_noise: return "kl_vs_noise";
    case Figure::payoff_vs_noise: return "payoff_vs_noise";
    case Figure::bins_error: return "bins_error";
    case Figure::ae_convergence: return "ae_convergence";
    case Figure::ae_noise: return "ae_noise";
    case Figure::ae_bins_sweep: return "ae_bins_sweep";
    case Figure::gate_crossover: return "gate_crossover";
  }
  return "?";
}

inline Figure parse_figure(const std::string& s) {
  for (Figure f : kFigures)
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown figure: " + s);
}

struct ExperimentConfig {
  MarketScenario scenario;
  std::vector<Encoding> encodings = {Encoding::unary, Encoding::binary};
  int bins = 8;
  std::vector<int> bins_list;  // sweeps; empty selects the figure default
  std::vector<double> eps = {0, 0.001, 0.002, 0.003, 0.004, 0.005};
  std::size_t shots = 10000;
  int reps = 100;
  ScheduleKind schedule = ScheduleKind::linear;
  int rounds = 4;
  double alpha = 0.05;
  double c = 0.1;
  std::uint64_t seed = 1234;
  NativeSet native = NativeSet::cnot;
  Engine engine = Engine::automatic;
  double width_sigmas = 3.0;
  int threads = 0;  // 0 = hardware concurrency
  std::string out;
  // Set when eps, reps or encoding were given explicitly; figures with their own
  // defaults honour explicit values only.
  bool eps_set = false;
  bool reps_set = false;
  bool encoding_set = false;

  void validate() const {
    scenario.validate();
    if (reps < 1) throw std::invalid_argument("reps must be at least 1");
    if (shots < 1) throw std::invalid_argument("shots must be at least 1");
    if (bins < 2) throw std::invalid_argument("bins must be at least 2");
    if (rounds < 0) throw std::invalid_argument("rounds must be non-negative");
    if (encodings.empty()) throw std::invalid_argument("no encoding selected");
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!(c > 0 && c < M_PI / 4)) throw std::invalid_argument("c must lie in (0, pi/4)");
    for (double e : eps) NoiseModel::from_single(e).validate();
    for (int b : bins_list)
      if (b < 2) throw std::invalid_argument("bins must be at least 2");
  }

  RunOptions run_options() const { return {native, engine, width_sigmas}; }
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw std::invalid_argument("bad number for " + key + ": " + v);
  return x;
}

inline long long to_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw std::invalid_argument("bad integer for " + key + ": " + v);
  return x;
}

}  // namespace detail

// Keys mirror the CLI flags without the leading dashes.
inline void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  using detail::to_double;
  using detail::to_integer;
  const std::string v = detail::trim(value);
  if (key == "encoding") {
    if (v == "both") cfg.encodings = {Encoding::unary, Encoding::binary};
    else cfg.encodings = {parse_encoding(v)};
    cfg.encoding_set = true;
  } else if (key == "bins") {
    auto items = detail::split_list(v);
    if (items.size() == 1) {
      cfg.bins = static_cast<int>(to_integer(key, items[0]));
      cfg.bins_list.clear();
    } else {
      cfg.bins_list.clear();
      for (const auto& it : items) cfg.bins_list.push_back(static_cast<int>(to_integer(key, it)));
      if (!cfg.bins_list.empty()) cfg.bins = cfg.bins_list.front();
    }
  } else if (key == "shots") {
    long long s = to_integer(key, v);
    if (s < 1) throw std::invalid_argument("shots must be at least 1");
    cfg.shots = static_cast<std::size_t>(s);
  } else if (key == "reps") {
    cfg.reps = static_cast<int>(to_integer(key, v));
    cfg.reps_set = true;
  } else if (key == "eps") {
    cfg.eps.clear();
    for (const auto& it : detail::split_list(v)) cfg.eps.push_back(to_double(key, it));
    cfg.eps_set = true;
  } else if (key == "schedule") {
    cfg.schedule = parse_schedule(v);
  } else if (key == "rounds") {
    cfg.rounds = static_cast<int>(to_integer(key, v));
  } else if (key == "alpha") {
    cfg.alpha = to_double(key, v);
  } else if (key == "c") {
    cfg.c = to_double(key, v);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(to_integer(key, v));
  } else if (key == "native") {
    cfg.native = parse_native(v);
  } else if (key == "engine") {
    cfg.engine = parse_engine(v);
  } else if (key == "width") {
    cfg.width_sigmas = to_double(key, v);
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(to_integer(key, v));
  } else if (key == "out") {
    cfg.out = v;
  } else if (key == "spot") {
    cfg.scenario.spot = to_double(key, v);
  } else if (key == "volatility") {
    cfg.scenario.volatility = to_double(key, v);
  } else if (key == "rate") {
    cfg.scenario.rate = to_double(key, v);
  } else if (key == "maturity") {
    cfg.scenario.maturity = to_double(key, v);
  } else if (key == "strike") {
    cfg.scenario.strike = to_double(key, v);
  } else {
    throw std::invalid_argument("unknown setting: " + key);
  }
}

// One "key = value" per line; '#' starts a comment.
inline void apply_config_text(ExperimentConfig& cfg, const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(cfg, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

inline void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str());
}

// Statistics

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return NAN;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sample standard deviation.
inline double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  double m = mean(v), s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Linear interpolation between order statistics, q in [0, 1].
inline double percentile(std::vector<double> v, double q) {
  if (v.empty()) return NAN;
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

inline double median(const std::vector<double>& v) { return percentile(v, 0.5); }

// Sum of target_i ln(target_i / empirical_i); target bins with zero mass
// contribute nothing.
inline double kl_divergence(const std::vector<double>& target, const std::vector<double>& empirical) {
  if (target.size() != empirical.size()) throw std::invalid_argument("kl_divergence: bin counts differ");
  double kl = 0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] <= 0) continue;
    if (empirical[i] <= 0) return INFINITY;
    kl += target[i] * std::log(target[i] / empirical[i]);
  }
  return std::max(0.0, kl);
}

// Histogram version: empty bins are floored at 1 / (10 N) and the result
// renormalized before the divergence is taken.
inline double kl_divergence(const std::vector<double>& target, const std::vector<std::uint64_t>& counts) {
  if (target.size() != counts.size()) throw std::invalid_argument("kl_divergence: bin counts differ");
  double n = 0;
  for (auto c : counts) n += static_cast<double>(c);
  if (n <= 0) return INFINITY;
  std::vector<double> emp(counts.size());
  double total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    emp[i] = counts[i] ? static_cast<double>(counts[i]) / n : 1 / (10 * n);
    total += emp[i];
  }
  for (auto& x : emp) x /= total;
  return kl_divergence(target, emp);
}

inline double kl_divergence(const BinnedDistribution& target, const BinnedDistribution& empirical) {
  return kl_divergence(target.probabilities, empirical.probabilities);
}

// CSV

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  using Cell = std::variant<std::string, double, long long>;

  void add(std::vector<Cell> row) {
    if (row.size() != header_.size()) throw std::logic_error("csv row width mismatch");
    std::vector<std::string> r;
    r.reserve(row.size());
    for (const auto& c : row) r.push_back(format(c));
    rows_.push_back(std::move(r));
  }

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
      if (header_[i] == name) return i;
    throw std::out_of_range("no column " + name);
  }

  void write(std::ostream& os) const {
    write_row(os, header_);
    for (const auto& r : rows_) write_row(os, r);
  }

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

  static std::string format(const Cell& c) {
    if (auto s = std::get_if<std::string>(&c)) return *s;
    if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
    double x = std::get<double>(c);
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
  }

 private:
  static void write_row(std::ostream& os, const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Runs jobs on a fixed pool; job i writes only its own slot, so results are
// independent of scheduling.
template <class T>
std::vector<T> parallel_map(std::size_t count, int threads, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(count);
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t workers = std::min<std::size_t>(count, threads > 0 ? threads : hw);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) {
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

// Experiment primitives

// Seed for a grid point, independent of which other points are run.
inline std::uint64_t job_seed(std::uint64_t master, Encoding enc, std::size_t point) {
  return derive_seed(derive_seed(master, enc == Encoding::unary ? 1 : 2), point);
}

inline int binary_qubits_for(int bins) {
  if (bins < 4 || (bins & (bins - 1)))
    throw std::invalid_argument("binary encoding needs a power-of-two bin count >= 4");
  return std::countr_zero(static_cast<unsigned>(bins));
}

struct SampledRun {
  double payoff = 0;
  double kl = 0;
  double acceptance = 1;
};

// Distribution loading plus payoff circuit at one noise level, sampled reps times.
inline std::vector<SampledRun> sample_payoff_runs(const ExperimentConfig& cfg, Encoding enc, double eps,
                                                  std::uint64_t seed) {
  auto noise = NoiseModel::from_single(eps);
  auto d = discretize(cfg.scenario, static_cast<std::size_t>(cfg.bins), cfg.width_sigmas);
  std::vector<SampledRun> runs(cfg.reps);
  if (enc == Encoding::unary) {
    auto u = build_unary(d, cfg.scenario.strike, cfg.native);
    OutcomeSampler sampler(build_ae_circuit(u, 0), u.layout.num_qubits(), noise, cfg.engine);
    for (int r = 0; r < cfg.reps; ++r) {
      auto t = tally_unary(sampler.sample(cfg.shots, derive_seed(seed, r)), u.layout);
      auto res = unary_payoff_from_tally(t, d, cfg.scenario.strike);
      runs[r] = {res.payoff, kl_divergence(d.probabilities, t.bin_counts), res.acceptance};
    }
  } else {
    binary_qubits_for(cfg.bins);
    auto b = build_binary(d, cfg.scenario.strike, cfg.c, cfg.native);
    OutcomeSampler sampler(b.a, b.layout.num_qubits(), noise, cfg.engine);
    for (int r = 0; r < cfg.reps; ++r) {
      auto t = tally_binary(sampler.sample(cfg.shots, derive_seed(seed, r)), b.layout);
      runs[r] = {invert_payoff(t.p1(), b.layout), kl_divergence(d.probabilities, t.bin_counts), 1.0};
    }
  }
  return runs;
}

// Outcome distributions of A Q^m for m = 0..m_max, built incrementally.
inline std::vector<std::vector<double>> ae_distributions(const Circuit& prefix, const Circuit& q_op, int q,
                                                         const NoiseModel& noise, int m_max, Engine engine) {
  std::vector<std::vector<double>> out;
  Engine e = resolve_engine(engine, q, noise);
  if (e == Engine::density && noise.gate_noiseless()) {
    StateVector sv(q);
    for (const auto& g : prefix) sv.apply(g);
    for (int m = 0; m <= m_max; ++m) {
      if (m) for (const auto& g : q_op) sv.apply(g);
      auto p = sv.probabilities();
      apply_readout_noise(p, q, noise.eps_meas);
      out.push_back(std::move(p));
    }
  } else if (e == Engine::density) {
    DensityMatrix rho(q);
    rho.apply(prefix, noise);
    for (int m = 0; m <= m_max; ++m) {
      if (m) rho.apply(q_op, noise);
      auto p = rho.diagonal();
      apply_readout_noise(p, q, noise.eps_meas);
      out.push_back(std::move(p));
    }
  }
  return out;
}

// Shot source for every Q power of one AE problem.
class AEProblem {
 public:
  AEProblem(const ExperimentConfig& cfg, Encoding enc, int bins, double eps, int m_max)
      : enc_(enc), noise_(NoiseModel::from_single(eps)) {
    dist_ = discretize(cfg.scenario, static_cast<std::size_t>(bins), cfg.width_sigmas);
    strike_ = cfg.scenario.strike;
    Circuit prefix, q_op;
    if (enc == Encoding::unary) {
      unary_ = build_unary(dist_, strike_, cfg.native);
      q_ = unary_.layout.num_qubits();
      prefix = {gates::x(unary_.layout.start)};
      append(prefix, unary_.a);
      q_op = unary_.q;
      payoff_scale_ = std::max(0.0, dist_.s_max() - strike_);
      exact_a_ = binned_payoff(dist_, strike_) / payoff_scale_;
    } else {
      binary_qubits_for(bins);
      binary_ = build_binary(dist_, strike_, cfg.c, cfg.native);
      q_ = binary_.layout.num_qubits();
      prefix = binary_.a;
      q_op = binary_.q;
      exact_a_ = exact_p1(binary_.layout, dist_.probabilities);
    }
    Engine e = resolve_engine(cfg.engine, q_, noise_);
    if (e == Engine::density) {
      for (auto& p : ae_distributions(prefix, q_op, q_, noise_, m_max, cfg.engine))
        samplers_.push_back(OutcomeSampler::from_distribution(std::move(p), q_));
    } else {
      for (int m = 0; m <= m_max; ++m) {
        Circuit c = prefix;
        for (int i = 0; i < m; ++i) append(c, q_op);
        samplers_.emplace_back(std::move(c), q_, noise_, Engine::trajectory);
      }
    }
  }

  Encoding encoding() const { return enc_; }
  int num_qubits() const { return q_; }
  const BinnedDistribution& distribution() const { return dist_; }
  // Noiseless target amplitude of the built circuit.
  double exact_amplitude() const { return exact_a_; }
  double target_payoff() const { return binned_payoff(dist_, strike_); }

  double payoff_from_amplitude(double a) const {
    return enc_ == Encoding::unary ? a * payoff_scale_ : invert_payoff(a, binary_.layout);
  }
  double payoff_uncertainty(double da) const {
    return enc_ == Encoding::unary ? da * payoff_scale_ : da * payoff_per_p1(binary_.layout);
  }

  // Ones and (accepted) shots for one round.
  RoundOutcome measure(int m, std::size_t shots, std::uint64_t seed) {
    auto counts = samplers_.at(m).sample(shots, seed);
    if (enc_ == Encoding::unary) {
      auto t = tally_unary(counts, unary_.layout);
      return {t.ones, t.accepted};
    }
    auto t = tally_binary(counts, binary_.layout);
    return {t.ones, t.total};
  }

  // Acceptance of the m-th circuit (1 for binary).
  double acceptance(int m, std::size_t shots, std::uint64_t seed) {
    if (enc_ == Encoding::binary) return 1;
    auto t = tally_unary(samplers_.at(m).sample(shots, seed), unary_.layout);
    return t.acceptance_rate();
  }

 private:
  Encoding enc_;
  NoiseModel noise_;
  BinnedDistribution dist_;
  double strike_ = 0;
  UnaryCircuits unary_;
  BinaryCircuits binary_;
  int q_ = 0;
  double payoff_scale_ = 1;
  double exact_a_ = 0;
  std::vector<OutcomeSampler> samplers_;
};

struct AERun {
  // Running estimate after each round of the schedule.
  std::vector<AEEstimate> prefix;
  std::vector<std::uint64_t> accepted;
  std::vector<std::uint64_t> total;
};

inline AERun run_ae_once(AEProblem& p, const std::vector<int>& ms, std::size_t shots, double alpha,
                         std::uint64_t seed) {
  AERun run;
  AEEstimate e;
  for (std::size_t j = 0; j < ms.size(); ++j) {
    auto r = p.measure(ms[j], shots, derive_seed(seed, j));
    e = j == 0 ? ae_start(r.ones, r.shots, alpha) : ae_round(e, ms[j], r.ones, r.shots);
    run.prefix.push_back(e);
    run.accepted.push_back(r.shots);
    run.total.push_back(shots);
  }
  return run;
}

// Summary of repeated AE runs at every schedule prefix.
struct AEPrefixStats {
  int j = 0;
  int m = 0;
  long long m_total = 0;
  double oracle_calls = 0;
  std::vector<double> payoff, dpayoff, a, da;
  int covered = 0;
  int valid = 0;
  double accepted_fraction = 0;
};

inline std::vector<AEPrefixStats> repeat_ae(AEProblem& p, const std::vector<int>& ms, std::size_t shots,
                                            int reps, double alpha, std::uint64_t seed) {
  std::vector<AEPrefixStats> st(ms.size());
  long long mt = 0;
  std::vector<int> partial;
  for (std::size_t j = 0; j < ms.size(); ++j) {
    mt += ms[j];
    partial.push_back(ms[j]);
    st[j].j = static_cast<int>(j);
    st[j].m = ms[j];
    st[j].m_total = mt;
    st[j].oracle_calls = oracle_calls_per_shot(partial);
  }
  const double truth = p.exact_amplitude();
  std::vector<double> acc_sum(ms.size(), 0);
  for (int r = 0; r < reps; ++r) {
    auto run = run_ae_once(p, ms, shots, alpha, derive_seed(seed, r));
    for (std::size_t j = 0; j < ms.size(); ++j) {
      const auto& e = run.prefix[j];
      acc_sum[j] += static_cast<double>(run.accepted[j]) / static_cast<double>(run.total[j]);
      if (!e.valid) continue;
      st[j].valid++;
      st[j].a.push_back(e.a);
      st[j].da.push_back(e.da());
      st[j].payoff.push_back(p.payoff_from_amplitude(e.a));
      st[j].dpayoff.push_back(p.payoff_uncertainty(e.da()));
      if (std::abs(e.a - truth) <= e.da()) st[j].covered++;
    }
  }
  for (std::size_t j = 0; j < ms.size(); ++j) st[j].accepted_fraction = acc_sum[j] / reps;
  return st;
}

// Figure runners

inline CsvTable figure_kl_vs_noise(const ExperimentConfig& cfg) {
  CsvTable t({"encoding", "bins", "eps", "reps", "shots", "kl_median", "kl_p15", "kl_p85", "kl_mean",
              "acceptance_mean"});
  struct Job {
    Encoding enc;
    std::size_t point;
  };
  std::vector<Job> jobs;
  for (auto enc : cfg.encodings)
    for (std::size_t i = 0; i < cfg.eps.size(); ++i) jobs.push_back({enc, i});
  auto res = parallel_map<std::vector<SampledRun>>(jobs.size(), cfg.threads, [&](std::size_t k) {
    return sample_payoff_runs(cfg, jobs[k].enc, cfg.eps[jobs[k].point],
                              job_seed(cfg.seed, jobs[k].enc, jobs[k].point));
  });
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    std::vector<double> kl, acc;
    for (const auto& r : res[k]) {
      kl.push_back(r.kl);
      acc.push_back(r.acceptance);
    }
    t.add({to_string(jobs[k].enc), (long long)cfg.bins, cfg.eps[jobs[k].point], (long long)cfg.reps,
           (long long)cfg.shots, median(kl), percentile(kl, 0.15), percentile(kl, 0.85), mean(kl), mean(acc)});
  }
  return t;
}

inline CsvTable figure_payoff_vs_noise(const ExperimentConfig& cfg) {
  CsvTable t({"encoding", "bins", "eps", "reps", "shots", "target", "analytical", "payoff_median",
              "payoff_p15", "payoff_p85", "payoff_mean", "payoff_std", "rel_error_median", "rel_error_p15",
              "rel_error_p85", "acceptance_mean"});
  struct Job {
    Encoding enc;
    std::size_t point;
  };
  std::vector<Job> jobs;
  for (auto enc : cfg.encodings)
    for (std::size_t i = 0; i < cfg.eps.size(); ++i) jobs.push_back({enc, i});
  auto res = parallel_map<std::vector<SampledRun>>(jobs.size(), cfg.threads, [&](std::size_t k) {
    return sample_payoff_runs(cfg, jobs[k].enc, cfg.eps[jobs[k].point],
                              job_seed(cfg.seed, jobs[k].enc, jobs[k].point));
  });
  auto d = discretize(cfg.scenario, static_cast<std::size_t>(cfg.bins), cfg.width_sigmas);
  const double target = binned_payoff(d, cfg.scenario.strike);
  const double analytical = analytical_payoff(cfg.scenario);
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    std::vector<double> pay, err, acc;
    for (const auto& r : res[k]) {
      pay.push_back(r.payoff);
      err.push_back(std::abs(r.payoff - target) / target);
      acc.push_back(r.acceptance);
    }
    t.add({to_string(jobs[k].enc), (long long)cfg.bins, cfg.eps[jobs[k].point], (long long)cfg.reps,
           (long long)cfg.shots, target, analytical, median(pay), percentile(pay, 0.15), percentile(pay, 0.85),
           mean(pay), stddev(pay), median(err), percentile(err, 0.15), percentile(err, 0.85), mean(acc)});
  }
  return t;
}

inline constexpr std::size_t kReferenceBins = 10000;

inline std::vector<int> default_bins_error_list() {
  return {4, 8, 16, 24, 32, 48, 64, 100, 128, 256, 512, 1000};
}

inline CsvTable figure_bins_error(const ExperimentConfig& cfg) {
  CsvTable t({"bins", "binned_payoff", "reference", "analytical", "rel_error_reference", "rel_error_analytical"});
  const double ref = binned_payoff(discretize(cfg.scenario, kReferenceBins, cfg.width_sigmas), cfg.scenario.strike);
  const double an = analytical_payoff(cfg.scenario);
  auto list = cfg.bins_list.empty() ? default_bins_error_list() : cfg.bins_list;
  for (int n : list) {
    double v = binned_payoff(discretize(cfg.scenario, static_cast<std::size_t>(n), cfg.width_sigmas),
                             cfg.scenario.strike);
    t.add({(long long)n, v, ref, an, std::abs(v - ref) / ref, std::abs(v - an) / an});
  }
  return t;
}

inline std::vector<std::string> ae_columns() {
  return {"encoding", "bins", "eps",           "schedule",    "j",          "m",          "m_total",
          "oracle_calls", "reps", "shots",     "target_payoff", "exact_amplitude", "payoff_mean", "payoff_std",
          "payoff_p15", "payoff_p85", "dpayoff_mean", "a_mean", "a_std", "da_mean", "coverage",
          "sampling_bound", "optimal_bound", "theoretical_dtheta", "acceptance_mean", "valid_runs"};
}

inline void add_ae_rows(CsvTable& t, const ExperimentConfig& cfg, const AEProblem& p, int bins, double eps,
                        const std::vector<int>& ms, const std::vector<AEPrefixStats>& st) {
  const double a = p.exact_amplitude();
  for (std::size_t j = 0; j < st.size(); ++j) {
    std::vector<int> partial(ms.begin(), ms.begin() + j + 1);
    const auto& s = st[j];
    t.add({to_string(p.encoding()), (long long)bins, eps, to_string(cfg.schedule), (long long)s.j,
           (long long)s.m, s.m_total, s.oracle_calls, (long long)cfg.reps, (long long)cfg.shots,
           p.target_payoff(), a, mean(s.payoff), stddev(s.payoff), percentile(s.payoff, 0.15),
           percentile(s.payoff, 0.85), mean(s.dpayoff), mean(s.a), stddev(s.a), mean(s.da),
           s.valid ? static_cast<double>(s.covered) / s.valid : NAN,
           sampling_bound(partial, static_cast<double>(cfg.shots), a),
           optimal_bound(partial, static_cast<double>(cfg.shots), a),
           theoretical_uncertainty(partial, static_cast<double>(cfg.shots), cfg.alpha), s.accepted_fraction,
           (long long)s.valid});
  }
}

struct AEJob {
  Encoding enc;
  int bins;
  std::size_t eps_index;
  std::size_t point;
};

inline CsvTable run_ae_jobs(const ExperimentConfig& cfg, const std::vector<AEJob>& jobs) {
  auto ms = schedule(cfg.schedule, cfg.rounds);
  int m_max = *std::max_element(ms.begin(), ms.end());
  struct Result {
    std::vector<AEPrefixStats> stats;
    std::shared_ptr<AEProblem> problem;
  };
  auto res = parallel_map<Result>(jobs.size(), cfg.threads, [&](std::size_t k) {
    const auto& jb = jobs[k];
    auto p = std::make_shared<AEProblem>(cfg, jb.enc, jb.bins, cfg.eps[jb.eps_index], m_max);
    auto st = repeat_ae(*p, ms, cfg.shots, cfg.reps, cfg.alpha, job_seed(cfg.seed, jb.enc, jb.point));
    return Result{std::move(st), std::move(p)};
  });
  CsvTable t(ae_columns());
  for (std::size_t k = 0; k < jobs.size(); ++k)
    add_ae_rows(t, cfg, *res[k].problem, jobs[k].bins, cfg.eps[jobs[k].eps_index], ms, res[k].stats);
  return t;
}

inline CsvTable figure_ae_convergence(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.eps = {0};
  std::vector<AEJob> jobs;
  for (auto enc : c.encodings) jobs.push_back({enc, c.bins, 0, 0});
  return run_ae_jobs(c, jobs);
}

inline CsvTable figure_ae_noise(const ExperimentConfig& cfg) {
  std::vector<AEJob> jobs;
  for (auto enc : cfg.encodings)
    for (std::size_t i = 0; i < cfg.eps.size(); ++i) jobs.push_back({enc, cfg.bins, i, i});
  return run_ae_jobs(cfg, jobs);
}

inline std::vector<int> default_sweep_bins() { return {4, 5, 6, 7, 8, 9, 10}; }

inline constexpr double kSweepEps = 0.003;
inline constexpr int kSweepReps = 10;

// Unary by default, at eps = 0.3% and 10 repetitions unless given. Binary
// rows appear only for power-of-two bin counts.
inline CsvTable figure_ae_bins_sweep(const ExperimentConfig& in) {
  ExperimentConfig cfg = in;
  if (!cfg.eps_set) cfg.eps = {kSweepEps};
  if (!cfg.reps_set) cfg.reps = kSweepReps;
  if (!cfg.encoding_set) cfg.encodings = {Encoding::unary};
  auto list = cfg.bins_list.empty() ? default_sweep_bins() : cfg.bins_list;
  std::vector<AEJob> jobs;
  for (auto enc : cfg.encodings)
    for (std::size_t b = 0; b < list.size(); ++b) {
      int bins = list[b];
      if (enc == Encoding::binary && (bins < 4 || (bins & (bins - 1)))) continue;
      for (std::size_t i = 0; i < cfg.eps.size(); ++i)
        jobs.push_back({enc, bins, i, static_cast<std::size_t>(bins) * 1000 + i});
    }
  return run_ae_jobs(cfg, jobs);
}

inline std::vector<int> default_crossover_bins() {
  std::vector<int> v;
  for (int b = 4; b <= 256; ++b) v.push_back(b);
  return v;
}

inline CsvTable figure_gate_crossover(const ExperimentConfig& cfg) {
  CsvTable t({"native", "bins", "unary_total", "binary_total"});
  auto list = cfg.bins_list.empty() ? default_crossover_bins() : cfg.bins_list;
  for (NativeSet nat : {NativeSet::cnot, NativeSet::partial_iswap, NativeSet::mixed})
    for (int b : list) {
      if (b < 4) throw std::invalid_argument("gate_crossover needs bins >= 4");
      auto p = crossover_totals(b, nat);
      t.add({to_string(nat), (long long)b, p.unary_total, p.binary_total});
    }
  return t;
}

inline CsvTable run_figure(Figure f, const ExperimentConfig& cfg) {
  cfg.validate();
  switch (f) {
    case Figure::kl_vs_noise: return figure_kl_vs_noise(cfg);
    case Figure::payoff_vs_noise: return figure_payoff_vs_noise(cfg);
    case Figure::bins_error: return figure_bins_error(cfg);
    case Figure::ae_convergence: return figure_ae_convergence(cfg);
    case Figure::ae_noise: return figure_ae_noise(cfg);
    case Figure::ae_bins_sweep: return figure_ae_bins_sweep(cfg);
    case Figure::gate_crossover: return figure_gate_crossover(cfg);
  }
  throw std::invalid_argument("unknown figure");
}

inline void write_csv(const CsvTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  t.write(out);
}

}  // namespace qunary
