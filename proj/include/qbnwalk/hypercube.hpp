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

// Powerset hypercube on {0, ..., n}. A vertex (subset sigma) is stored as a
// bitmask: bit k is set iff k is in sigma. Vertices are ordered by their
// integer value.

#include <cstdint>
#include <string>
#include <vector>

namespace qbnwalk {

using VertexIndex = std::uint32_t;

/// Largest supported n; the state space has 2^(n+1) vertices.
inline constexpr int kMaxN = 24;

class Hypercube {
 public:
  /// Throws DomainError unless 0 <= n <= kMaxN.
  explicit Hypercube(int n);

  int n() const { return n_; }
  int modes() const { return n_ + 1; }
  std::uint64_t vertex_count() const { return std::uint64_t{1} << (n_ + 1); }
  std::uint64_t edge_count() const {
    return static_cast<std::uint64_t>(n_ + 1) << n_;
  }
  /// The full set {0, ..., n}.
  VertexIndex full() const {
    return static_cast<VertexIndex>(vertex_count() - 1);
  }

  bool contains(VertexIndex v) const { return v < vertex_count(); }
  /// Throws DomainError if v is not a vertex of this graph.
  void check(VertexIndex v) const;
  void check_mode(int k) const;

 private:
  int n_;
};

/// Throws DomainError unless 0 <= n <= kMaxN.
void check_n(int n);

inline int popcount(VertexIndex v) { return __builtin_popcount(v); }

/// True iff the subsets differ in exactly one element.
bool adjacent(const Hypercube& g, VertexIndex sigma, VertexIndex tau);

/// sigma with bit k flipped, for k = 0..n in order.
std::vector<VertexIndex> neighbors(const Hypercube& g, VertexIndex sigma);

/// Indicator tuple (1_sigma(0), ..., 1_sigma(n)).
std::vector<int> to_binary_tuple(const Hypercube& g, VertexIndex sigma);

/// (-1)^{#(sigma \ tau)}.
inline int diff_parity_sign(VertexIndex sigma, VertexIndex tau) {
  return (popcount(sigma & ~tau) & 1) ? -1 : 1;
}

/// epsilon_tau(k) = 2 * 1_tau(k) - 1.
inline int membership_sign(VertexIndex tau, int k) {
  return ((tau >> k) & 1u) ? 1 : -1;
}

/// "{}", "{0}", "{0,2}", ...
std::string subset_notation(VertexIndex sigma);

}  // namespace qbnwalk
