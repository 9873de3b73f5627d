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

// Command-line front end: price, figure, gatecount, ae.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qunary.hpp"

using namespace qunary;

namespace {

// Flag values collected as text and applied after the config file.
struct FlagSet {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void add(CLI::App& app, const std::string& key, const std::string& help) {
    options.emplace_back(key, app.add_option("--" + key, values[key], help));
  }

  void apply(ExperimentConfig& cfg) const {
    for (const auto& [key, opt] : options)
      if (opt->count()) apply_setting(cfg, key, values.at(key));
  }
};

void add_common(CLI::App& app, FlagSet& f, std::string& config) {
  app.add_option("--config", config, "key = value settings file; flags override it");
  f.add(app, "encoding", "unary | binary | both");
  f.add(app, "bins", "bin count, or a comma-separated list for sweeps");
  f.add(app, "shots", "shots per circuit execution");
  f.add(app, "reps", "repetitions");
  f.add(app, "eps", "single-qubit error rate(s), comma-separated");
  f.add(app, "schedule", "linear | exp");
  f.add(app, "rounds", "AE schedule length J");
  f.add(app, "alpha", "AE significance level");
  f.add(app, "c", "binary payoff rotation scale");
  f.add(app, "seed", "master seed");
  f.add(app, "native", "cnot | iswap | mixed");
  f.add(app, "engine", "auto | trajectory | density");
  f.add(app, "threads", "worker threads (0 = all cores)");
  f.add(app, "out", "output path (stdout when empty)");
  f.add(app, "spot", "initial asset price");
  f.add(app, "volatility", "annual volatility");
  f.add(app, "rate", "risk-free rate");
  f.add(app, "maturity", "time to maturity in years");
  f.add(app, "strike", "strike price");
}

ExperimentConfig build_config(const FlagSet& f, const std::string& config) {
  ExperimentConfig cfg;
  if (!config.empty()) apply_config_file(cfg, config);
  f.apply(cfg);
  cfg.validate();
  return cfg;
}

void emit(const CsvTable& t, const std::string& out) {
  if (out.empty()) t.write(std::cout);
  else write_csv(t, out);
}

int run_price(const ExperimentConfig& cfg) {
  auto d = discretize(cfg.scenario, static_cast<std::size_t>(cfg.bins), cfg.width_sigmas);
  std::printf("analytical     %.8f\n", analytical_payoff(cfg.scenario));
  std::printf("binned (%4d)  %.8f\n", cfg.bins, binned_payoff(d, cfg.scenario.strike));
  CsvTable t({"encoding", "eps", "payoff_mean", "payoff_std", "acceptance_mean"});
  for (auto enc : cfg.encodings)
    for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
      auto runs = sample_payoff_runs(cfg, enc, cfg.eps[i], job_seed(cfg.seed, enc, i));
      std::vector<double> pay, acc;
      for (const auto& r : runs) {
        pay.push_back(r.payoff);
        acc.push_back(r.acceptance);
      }
      t.add({to_string(enc), cfg.eps[i], mean(pay), stddev(pay), mean(acc)});
    }
  emit(t, cfg.out);
  return 0;
}

void print_counts(const std::string& title, const BudgetReport& r, const GateBudget& b) {
  std::cout << title << " (built/table)\n" << r.describe();
  long one = 0, two = 0;
  for (const auto& blk : r.blocks) {
    long w = blk.block == Block::distributor || blk.block == Block::payoff ? 3 : 1;
    one += w * blk.built.one_qubit;
    two += w * blk.built.two_qubit;
  }
  std::printf("total with one Q: built %ld, table %.1f\n\n", one + two, b.total_with_one_q());
}

int run_gatecount(const ExperimentConfig& cfg) {
  auto d = discretize(cfg.scenario, static_cast<std::size_t>(cfg.bins), cfg.width_sigmas);
  for (auto enc : cfg.encodings) {
    if (enc == Encoding::unary) {
      auto u = build_unary(d, cfg.scenario.strike, cfg.native);
      auto b = unary_budget(u.layout, cfg.native);
      print_counts("unary, " + to_string(cfg.native) + ", n=" + std::to_string(u.layout.n) +
                       ", kappa=" + std::to_string(u.layout.kappa()),
                   verify_budget(unary_blocks(u, cfg.native), b), b);
    } else {
      binary_qubits_for(cfg.bins);
      auto bc = build_binary(d, cfg.scenario.strike, cfg.c, cfg.native);
      auto b = binary_budget(bc.layout, cfg.native);
      print_counts("binary, " + to_string(cfg.native) + ", n=" + std::to_string(bc.layout.n) +
                       ", K'=" + std::to_string(bc.layout.threshold),
                   verify_budget(binary_blocks(bc, cfg.native), b), b);
    }
  }
  return 0;
}

int run_ae(const ExperimentConfig& cfg) {
  auto ms = schedule(cfg.schedule, cfg.rounds);
  int m_max = *std::max_element(ms.begin(), ms.end());
  CsvTable t({"encoding", "eps", "j", "m", "ones", "accepted", "round_theta", "a", "theta", "dtheta", "payoff",
              "dpayoff", "target_payoff"});
  for (auto enc : cfg.encodings)
    for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
      AEProblem p(cfg, enc, cfg.bins, cfg.eps[i], m_max);
      auto run = run_ae_once(p, ms, cfg.shots, cfg.alpha, job_seed(cfg.seed, enc, i));
      for (std::size_t j = 0; j < ms.size(); ++j) {
        const auto& e = run.prefix[j];
        const auto& r = e.rounds.back();
        t.add({to_string(enc), cfg.eps[i], (long long)j, (long long)ms[j], (long long)r.ones,
               (long long)r.shots, r.theta, e.a, e.theta, e.dtheta, p.payoff_from_amplitude(e.a),
               p.payoff_uncertainty(e.da()), p.target_payoff()});
        for (const auto& w : e.warnings)
          if (j + 1 == ms.size()) std::cerr << "warning: " << w << "\n";
      }
    }
  emit(t, cfg.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unary and binary quantum option-pricing simulator"};
  app.require_subcommand(1);

  FlagSet price_flags, figure_flags, count_flags, ae_flags;
  std::string price_cfg, figure_cfg, count_cfg, ae_cfg, figure_name;

  auto* price = app.add_subcommand("price", "Estimate the expected payoff by sampling");
  add_common(*price, price_flags, price_cfg);
  auto* figure = app.add_subcommand("figure", "Run a figure experiment and write CSV");
  std::string names;
  for (Figure f : kFigures) names += (names.empty() ? "" : " | ") + to_string(f);
  figure->add_option("name", figure_name, names)->required();
  add_common(*figure, figure_flags, figure_cfg);
  auto* count = app.add_subcommand("gatecount", "Compare built gate counts with the closed-form budget");
  add_common(*count, count_flags, count_cfg);
  auto* ae = app.add_subcommand("ae", "Run iterative amplitude estimation once and print every round");
  add_common(*ae, ae_flags, ae_cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (price->parsed()) return run_price(build_config(price_flags, price_cfg));
    if (count->parsed()) return run_gatecount(build_config(count_flags, count_cfg));
    if (ae->parsed()) return run_ae(build_config(ae_flags, ae_cfg));
    if (figure->parsed()) {
      auto cfg = build_config(figure_flags, figure_cfg);
      auto f = parse_figure(figure_name);
      auto t0 = std::chrono::steady_clock::now();
      auto table = run_figure(f, cfg);
      emit(table, cfg.out);
      std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
      std::cerr << to_string(f) << ": " << table.rows().size() << " rows in " << dt.count() << " s\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
