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

// Dense reference evaluation for tests: full operator matrices built from
// textbook gate definitions and the depolarizing channel in partial-trace
// form. Deliberately slow and independent of the simulator kernels.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "qunary/gate.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using cd = std::complex<double>;

// Local matrix with the first listed qubit as the most significant index bit.
inline Mat local_matrix(const qunary::Gate& g) {
  using K = qunary::GateKind;
  const cd i(0, 1);
  const double c = std::cos(g.theta / 2), s = std::sin(g.theta / 2);
  Mat m;
  auto m2 = [&](cd a, cd b, cd cc, cd d) {
    Mat r(2, 2);
    r << a, b, cc, d;
    return r;
  };
  switch (g.kind) {
    case K::I: return Mat::Identity(2, 2);
    case K::X: return m2(0, 1, 1, 0);
    case K::Y: return m2(0, -i, i, 0);
    case K::Z: return m2(1, 0, 0, -1);
    case K::H: return m2(1, 1, 1, -1) / std::sqrt(2.0);
    case K::S: return m2(1, 0, 0, i);
    case K::Sdg: return m2(1, 0, 0, -i);
    case K::T: return m2(1, 0, 0, std::exp(i * M_PI / 4.0));
    case K::Tdg: return m2(1, 0, 0, std::exp(-i * M_PI / 4.0));
    case K::RX: return m2(c, -i * s, -i * s, c);
    case K::RY: return m2(c, -s, s, c);
    case K::RZ: return m2(std::exp(-i * g.theta / 2.0), 0, 0, std::exp(i * g.theta / 2.0));
    case K::U3:
      return m2(c, -std::exp(i * g.lambda) * s, std::exp(i * g.phi) * s, std::exp(i * (g.phi + g.lambda)) * c);
    default: break;
  }
  if (g.kind == K::Toffoli) {
    m = Mat::Identity(8, 8);
    m(6, 6) = m(7, 7) = 0;
    m(6, 7) = m(7, 6) = 1;
    return m;
  }
  m = Mat::Identity(4, 4);
  switch (g.kind) {
    case K::CNOT:
      m(2, 2) = m(3, 3) = 0;
      m(2, 3) = m(3, 2) = 1;
      break;
    case K::CZ: m(3, 3) = -1; break;
    case K::CRY: m.block(2, 2, 2, 2) = m2(c, -s, s, c); break;
    case K::SWAP:
      m(1, 1) = m(2, 2) = 0;
      m(1, 2) = m(2, 1) = 1;
      break;
    case K::PartialSwap: m.block(1, 1, 2, 2) = m2(c, s, -s, c); break;
    case K::PartialISwap: m.block(1, 1, 2, 2) = m2(c, -i * s, -i * s, c); break;
    default: break;
  }
  return m;
}

inline std::size_t sub_index(std::size_t basis, const std::vector<int>& qubits) {
  std::size_t v = 0;
  for (int q : qubits) v = (v << 1) | ((basis >> q) & 1);
  return v;
}

// Full operator of a local matrix on the given qubits (qubit 0 = LSB).
inline Mat embed(const Mat& local, const std::vector<int>& qubits, int nq) {
  const std::size_t dim = std::size_t{1} << nq;
  std::size_t mask = 0;
  for (int q : qubits) mask |= std::size_t{1} << q;
  Mat full = Mat::Zero(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t col = 0; col < dim; ++col)
      if ((r & ~mask) == (col & ~mask)) full(r, col) = local(sub_index(r, qubits), sub_index(col, qubits));
  return full;
}

inline std::vector<int> qubits_of(const qunary::Gate& g) {
  return std::vector<int>(g.qubits.begin(), g.qubits.begin() + g.arity());
}

inline Mat gate_operator(const qunary::Gate& g, int nq) { return embed(local_matrix(g), qubits_of(g), nq); }

inline Mat unitary(const qunary::Circuit& c, int nq) {
  Mat u = Mat::Identity(std::size_t{1} << nq, std::size_t{1} << nq);
  for (const auto& g : c) u = gate_operator(g, nq) * u;
  return u;
}

inline Vec final_state(const qunary::Circuit& c, int nq) {
  Vec v = Vec::Zero(std::size_t{1} << nq);
  v(0) = 1;
  for (const auto& g : c) v = gate_operator(g, nq) * v;
  return v;
}

inline std::vector<double> probabilities(const Vec& v) {
  std::vector<double> p(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) p[i] = std::norm(v(i));
  return p;
}

// max |a - e^{i phi} b| over entries, with phi taken from the largest entry.
inline double phase_distance(const Mat& a, const Mat& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  cd phase = a(r, c) / b(r, c);
  phase /= std::abs(phase);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

// rho -> (1 - eps) rho + eps Tr_S(rho) (x) I_S / d on the qubit set S.
inline Mat depolarize(const Mat& rho, const std::vector<int>& qubits, double eps) {
  if (eps <= 0) return rho;
  const std::size_t dim = rho.rows();
  std::size_t mask = 0;
  for (int q : qubits) mask |= std::size_t{1} << q;
  const double d = static_cast<double>(std::size_t{1} << qubits.size());
  Mat out = (1 - eps) * rho;
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & mask) != (c & mask)) continue;
      cd tr = 0;
      for (std::size_t k = 0; k < dim; ++k) {
        if (k & ~mask) continue;
        tr += rho((r & ~mask) | k, (c & ~mask) | k);
      }
      out(r, c) += eps * tr / d;
    }
  return out;
}

struct Noise {
  double eps1 = 0, eps2 = 0, eps_meas = 0;
};

inline Mat density(const qunary::Circuit& c, int nq, const Noise& n) {
  const std::size_t dim = std::size_t{1} << nq;
  Mat rho = Mat::Zero(dim, dim);
  rho(0, 0) = 1;
  for (const auto& g : c) {
    Mat u = gate_operator(g, nq);
    rho = u * rho * u.adjoint();
    rho = depolarize(rho, qubits_of(g), g.arity() == 1 ? n.eps1 : n.eps2);
  }
  return rho;
}

// Measured distribution including symmetric per-qubit readout flips.
inline std::vector<double> measured_distribution(const qunary::Circuit& c, int nq, const Noise& n) {
  Mat rho = density(c, nq, n);
  const std::size_t dim = rho.rows();
  std::vector<double> p(dim, 0);
  for (std::size_t true_out = 0; true_out < dim; ++true_out) {
    double pt = rho(true_out, true_out).real();
    for (std::size_t seen = 0; seen < dim; ++seen) {
      double w = 1;
      for (int q = 0; q < nq; ++q) w *= (((true_out ^ seen) >> q) & 1) ? n.eps_meas : 1 - n.eps_meas;
      p[seen] += pt * w;
    }
  }
  return p;
}

}  // namespace oracle
