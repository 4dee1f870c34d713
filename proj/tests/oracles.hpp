// Copyright 2026 The qbnwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Test-only reference implementations. They follow the defining formulas
// literally (set algebra, dense matrices, O(N^2) sums) and share no code
// paths with the library's fast kernels.

#include <algorithm>
#include <cmath>
#include <complex>
#include <iterator>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "qbnwalk/coin.hpp"
#include "qbnwalk/walk.hpp"

namespace qbnwalk::oracle {

using Set = std::set<int>;

inline Set to_set(unsigned mask) {
  Set s;
  for (int k = 0; k < 32; ++k) {
    if (mask & (1u << k)) s.insert(k);
  }
  return s;
}

inline unsigned to_mask(const Set& s) {
  unsigned m = 0;
  for (int k : s) m += 1u << k;
  return m;
}

inline Set set_minus(const Set& a, const Set& b) {
  Set out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
  return out;
}

inline Set sym_diff(const Set& a, const Set& b) {
  Set out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::inserter(out, out.begin()));
  return out;
}

inline int vertex_count(int n) { return 1 << (n + 1); }

/// Dense matrix of d_k on the Z basis: d_k Z_s = 1_s(k) Z_{s \ k}.
inline Matrix annihilation_matrix(int n, int k) {
  const int count = vertex_count(n);
  Matrix m = Matrix::Zero(count, count);
  for (int s = 0; s < count; ++s) {
    Set sigma = to_set(s);
    if (sigma.count(k)) {
      sigma.erase(k);
      m(to_mask(sigma), s) = 1.0;
    }
  }
  return m;
}

inline Matrix shift_matrix(int n, int k) {
  const Matrix a = annihilation_matrix(n, k);
  return a + a.adjoint();
}

/// K(tau, sigma) = (-1)^{#(sigma \ tau)} / sqrt(N), from set differences.
inline Matrix signed_kernel(int n) {
  const int count = vertex_count(n);
  Matrix k(count, count);
  const double scale = 1.0 / std::sqrt(static_cast<double>(count));
  for (int tau = 0; tau < count; ++tau) {
    for (int s = 0; s < count; ++s) {
      const auto diff = set_minus(to_set(s), to_set(tau));
      k(tau, s) = (diff.size() % 2 ? -1.0 : 1.0) * scale;
    }
  }
  return k;
}

inline Vector to_eigen(const PositionVector& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (VertexIndex s = 0; s < v.size(); ++s) out(s) = v[s];
  return out;
}

inline Vector to_eigen(const WalkState& state) {
  const auto amps = state.amplitudes();
  Vector out(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) out(static_cast<Eigen::Index>(i)) = amps[i];
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// W = sum_k (d_k^* + d_k) (x) C_k, vertex-major to match WalkState.
inline Matrix walk_operator(const CoinSystem& system) {
  const int count = vertex_count(system.n());
  Matrix w = Matrix::Zero(count * system.dim(), count * system.dim());
  for (int k = 0; k < system.modes(); ++k) w += kron(shift_matrix(system.n(), k), system.coin(k));
  return w;
}

/// P_t(sigma) = 2^{-(n+1)} ||sum_tau (-1)^{#(sigma\tau)} U_tau^t u_tau||^2,
/// evaluated as the literal double sum.
inline std::vector<double> closed_form_double_sum(const CoinSystem& system,
                                                  const ComponentDecomposition& decomp, int t) {
  const int count = vertex_count(system.n());
  std::vector<Vector> evolved;
  for (int tau = 0; tau < count; ++tau) {
    Matrix u = Matrix::Zero(system.dim(), system.dim());
    const Set members = to_set(tau);
    for (int k = 0; k < system.modes(); ++k) u += (members.count(k) ? 1.0 : -1.0) * system.coin(k);
    Vector v = decomp.components[tau];
    for (int i = 0; i < t; ++i) v = u * v;
    evolved.push_back(v);
  }
  std::vector<double> p(count);
  for (int s = 0; s < count; ++s) {
    Vector acc = Vector::Zero(system.dim());
    for (int tau = 0; tau < count; ++tau) {
      const auto diff = set_minus(to_set(s), to_set(tau));
      acc += (diff.size() % 2 ? -1.0 : 1.0) * evolved[tau];
    }
    p[s] = acc.squaredNorm() / count;
  }
  return p;
}

template <class Rng>
Complex random_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

template <class Rng>
PositionVector random_position(int n, Rng& rng) {
  PositionVector v(n);
  for (auto& a : v.amplitudes()) a = random_complex(rng);
  return v;
}

template <class Rng>
Vector random_vector(int d, Rng& rng) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = random_complex(rng);
  return v;
}

template <class Rng>
WalkState random_unit_state(int n, int d, Rng& rng) {
  WalkState s(n, d);
  for (auto& a : s.amplitudes()) a = random_complex(rng);
  const double norm = s.norm();
  for (auto& a : s.amplitudes()) a /= norm;
  return s;
}

}  // namespace qbnwalk::oracle
