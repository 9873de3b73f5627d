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
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qunary {

// Black-Scholes parameters of a European call.
struct MarketScenario {
  double spot = 2.0;
  double volatility = 0.4;
  double rate = 0.05;
  double maturity = 0.1;
  double strike = 1.9;

  void validate() const {
    if (!(spot > 0)) throw std::invalid_argument("spot must be positive");
    if (!(volatility >= 0)) throw std::invalid_argument("volatility must be non-negative");
    if (!(maturity > 0)) throw std::invalid_argument("maturity must be positive");
    if (!(strike >= 0)) throw std::invalid_argument("strike must be non-negative");
  }
};

struct BinnedDistribution {
  std::vector<double> bin_centers;
  std::vector<double> probabilities;

  std::size_t size() const { return bin_centers.size(); }
  double s_min() const { return bin_centers.front(); }
  double s_max() const { return bin_centers.back(); }
  double spacing() const {
    return (bin_centers.back() - bin_centers.front()) / static_cast<double>(size() - 1);
  }

  void validate() const {
    if (bin_centers.size() < 2 || bin_centers.size() != probabilities.size())
      throw std::invalid_argument("distribution needs n >= 2 matching centers and probabilities");
    double sum = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      if (probabilities[i] < 0) throw std::invalid_argument("negative probability");
      if (i > 0 && !(bin_centers[i] > bin_centers[i - 1]))
        throw std::invalid_argument("bin centers must be strictly increasing");
      sum += probabilities[i];
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("probabilities must sum to 1");
  }
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Upper tail 1 - normal_cdf(x) without cancellation.
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Acklam's rational approximation followed by one Halley step.
inline double normal_quantile(double p) {
  if (!(p > 0 && p < 1)) {
    if (p == 0) return -INFINITY;
    if (p == 1) return INFINITY;
    throw std::invalid_argument("normal_quantile needs p in [0, 1]");
  }
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    double q = std::sqrt(-2 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  double e = (p < 0.5) ? normal_cdf(x) - p : (1 - p) - normal_sf(x);
  double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

struct LognormalParams {
  double mu;
  double sigma;
};

inline LognormalParams lognormal_params(const MarketScenario& s) {
  s.validate();
  double v = s.volatility;
  return {std::log(s.spot) + (s.rate - v * v / 2) * s.maturity, v * std::sqrt(s.maturity)};
}

inline double lognormal_mean(const LognormalParams& p) {
  return std::exp(p.mu + p.sigma * p.sigma / 2);
}

inline double lognormal_std(const LognormalParams& p) {
  return lognormal_mean(p) * std::sqrt(std::expm1(p.sigma * p.sigma));
}

// P(lo < S_T <= hi) for the log-normal law.
inline double lognormal_mass(const LognormalParams& p, double lo, double hi) {
  auto z = [&](double x) { return x <= 0 ? -INFINITY : (std::log(x) - p.mu) / p.sigma; };
  double zl = z(lo), zh = z(hi);
  if (zl > 0) return normal_sf(zl) - normal_sf(zh);
  return normal_cdf(zh) - normal_cdf(zl);
}

// Closed-form terminal prices; one std::mt19937_64 stream per seed.
inline std::vector<double> sample_paths(const MarketScenario& s, std::size_t count,
                                        std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("count must be positive");
  auto lp = lognormal_params(s);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(count);
  for (auto& v : out) v = std::exp(lp.mu + lp.sigma * normal(rng));
  return out;
}

inline constexpr double kPriceFloor = 1e-12;

// Equispaced centers over mean +- width_sigmas * std, mass = CDF difference over
// each bin of width equal to the center spacing, renormalized.
inline BinnedDistribution discretize(const MarketScenario& s, std::size_t n_bins,
                                     double width_sigmas = 3.0) {
  if (n_bins < 2) throw std::invalid_argument("n_bins must be at least 2");
  if (!(s.volatility > 0)) throw std::invalid_argument("discretize needs volatility > 0");
  auto lp = lognormal_params(s);
  double mean = lognormal_mean(lp), sd = lognormal_std(lp);
  double lo = std::max(kPriceFloor, mean - width_sigmas * sd);
  double hi = mean + width_sigmas * sd;
  BinnedDistribution d;
  d.bin_centers.resize(n_bins);
  d.probabilities.resize(n_bins);
  double h = (hi - lo) / static_cast<double>(n_bins - 1);
  for (std::size_t i = 0; i < n_bins; ++i) d.bin_centers[i] = lo + h * static_cast<double>(i);
  d.bin_centers.back() = hi;
  double total = 0;
  for (std::size_t i = 0; i < n_bins; ++i) {
    double m = lognormal_mass(lp, d.bin_centers[i] - h / 2, d.bin_centers[i] + h / 2);
    d.probabilities[i] = m;
    total += m;
  }
  for (auto& p : d.probabilities) p /= total;
  return d;
}

inline double analytical_payoff(const MarketScenario& s) {
  s.validate();
  if (s.strike == 0) return s.spot;
  double vt = s.volatility * std::sqrt(s.maturity);
  if (vt == 0) return std::max(0.0, s.spot - s.strike * std::exp(-s.rate * s.maturity));
  double d1 = (std::log(s.spot / s.strike) + (s.rate + s.volatility * s.volatility / 2) * s.maturity) / vt;
  double d2 = d1 - vt;
  return s.spot * normal_cdf(d1) - s.strike * std::exp(-s.rate * s.maturity) * normal_cdf(d2);
}

inline double binned_payoff(const BinnedDistribution& d, double strike) {
  double sum = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    sum += d.probabilities[i] * std::max(0.0, d.bin_centers[i] - strike);
  return sum;
}

struct MonteCarloEstimate {
  double mean;
  double standard_error;
};

inline MonteCarloEstimate monte_carlo_payoff(const MarketScenario& s, std::size_t count,
                                             std::uint64_t seed, bool discounted = true) {
  auto paths = sample_paths(s, count, seed);
  double df = discounted ? std::exp(-s.rate * s.maturity) : 1.0;
  double sum = 0, sq = 0;
  for (double st : paths) {
    double v = df * std::max(0.0, st - s.strike);
    sum += v;
    sq += v * v;
  }
  double n = static_cast<double>(count);
  double mean = sum / n;
  double var = std::max(0.0, sq / n - mean * mean) * n / std::max(1.0, n - 1);
  return {mean, std::sqrt(var / n)};
}

}  // namespace qunary
