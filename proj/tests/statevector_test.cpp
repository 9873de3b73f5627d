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

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "qunary/statevector.hpp"
#include "support/oracle.hpp"
#include "support/random_circuit.hpp"

using namespace qunary;

namespace {

double max_amp_diff(const StateVector& s, const oracle::Vec& v) {
  double d = 0;
  for (std::size_t i = 0; i < s.dim(); ++i) d = std::max(d, std::abs(s.amplitudes()[i] - v(i)));
  return d;
}

}  // namespace

TEST(ApplyGate, PartialSwapAtZeroIsIdentity) {
  std::mt19937_64 rng(4);
  StateVector s(3);
  s.apply(testing_support::random_circuit(3, 20, rng));
  auto before = s.amplitudes();
  s.apply(gates::partial_swap(0, 2, 0.0));
  for (std::size_t i = 0; i < s.dim(); ++i) EXPECT_LT(std::abs(s.amplitudes()[i] - before[i]), 1e-15);
}

TEST(ApplyGate, PartialSwapAtPiMovesExcitation) {
  // |from=0, to=1> -> -|from=1, to=0>; qubit 1 carries the excitation first.
  StateVector s(2);
  s.apply(gates::x(1));
  s.apply(gates::partial_swap(0, 1, M_PI));
  EXPECT_NEAR(std::abs(s.amplitudes()[1]), 1.0, 1e-15);
  EXPECT_NEAR(s.amplitudes()[1].real(), -1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitudes()[2]), 0.0, 1e-15);
}

TEST(ApplyGate, RandomCircuitsMatchMatrixChain) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    auto c = testing_support::random_circuit(4, 40, rng);
    StateVector s(4);
    s.apply(c);
    EXPECT_LT(max_amp_diff(s, oracle::final_state(c, 4)), 1e-10) << rep;
  }
}

TEST(ApplyGate, GenericKernelAgreesWithFastPaths) {
  std::mt19937_64 rng(6);
  for (auto k : testing_support::all_kinds()) {
    auto g = testing_support::random_gate(k, 5, rng);
    StateVector a(5), b(5);
    auto prep = testing_support::random_circuit(5, 30, rng);
    a.apply(prep);
    b.apply(prep);
    a.apply(g);
    std::vector<int> qs(g.qubits.begin(), g.qubits.begin() + g.arity());
    kernels::apply_matrix(b.amplitudes().data(), 5, qs, gate_matrix(g));
    for (std::size_t i = 0; i < a.dim(); ++i)
      EXPECT_LT(std::abs(a.amplitudes()[i] - b.amplitudes()[i]), 1e-12) << gate_name(k);
  }
}

TEST(ApplyGate, NormPreserved) {
  std::mt19937_64 rng(7);
  StateVector s(6);
  for (const auto& g : testing_support::random_circuit(6, 500, rng)) {
    s.apply(g);
    ASSERT_NEAR(s.norm_squared(), 1.0, 1e-10);
  }
}

TEST(ApplyGate, OutOfRangeThrows) {
  StateVector s(2);
  EXPECT_THROW(s.apply(gates::x(2)), std::out_of_range);
  EXPECT_THROW(s.apply(gates::cnot(0, 0)), std::invalid_argument);
  EXPECT_THROW(apply_gate(StateVector(2), gates::toffoli(0, 1, 2)), std::out_of_range);
}

TEST(RunExact, EmptyCircuitIsDeltaOnZero) {
  auto p = run_exact({}, 3);
  EXPECT_EQ(p[0], 1.0);
  EXPECT_EQ(std::accumulate(p.begin(), p.end(), 0.0), 1.0);
}

TEST(RunExact, XSetsOneBit) {
  for (int j = 0; j < 4; ++j) {
    auto p = run_exact({gates::x(j)}, 4);
    EXPECT_EQ(p[std::size_t{1} << j], 1.0) << j;
  }
}

TEST(RunExact, ProbabilitiesSumToOne) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    auto p = run_exact(testing_support::random_circuit(5, 60, rng), 5);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-10);
  }
}

TEST(Pauli, CodesMatchGates) {
  std::mt19937_64 rng(9);
  auto prep = testing_support::random_circuit(3, 20, rng);
  const GateKind kinds[] = {GateKind::X, GateKind::Y, GateKind::Z};
  for (int code = 1; code <= 3; ++code) {
    StateVector a(3), b(3);
    a.apply(prep);
    b.apply(prep);
    a.apply_pauli(1, code);
    b.apply(Gate{kinds[code - 1], {1, -1, -1}});
    for (std::size_t i = 0; i < a.dim(); ++i) EXPECT_LT(std::abs(a.amplitudes()[i] - b.amplitudes()[i]), 1e-15);
  }
}

TEST(Sampling, IndexFollowsCumulative) {
  auto cdf = cumulative({0.25, 0.0, 0.5, 0.25});
  EXPECT_EQ(sample_index(cdf, 0.0), 0u);
  EXPECT_EQ(sample_index(cdf, 0.2), 0u);
  EXPECT_EQ(sample_index(cdf, 0.3), 2u);
  EXPECT_EQ(sample_index(cdf, 0.8), 3u);
  EXPECT_EQ(sample_index(cdf, 1.0), 3u);
}

TEST(StateVectorCtor, RejectsBadSizes) {
  EXPECT_THROW(StateVector(0), std::invalid_argument);
  EXPECT_THROW(StateVector(31), std::invalid_argument);
}
