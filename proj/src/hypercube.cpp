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

#include "qbnwalk/hypercube.hpp"

#include <string>

#include "qbnwalk/errors.hpp"

namespace qbnwalk {

void check_n(int n) {
  if (n < 0 || n > kMaxN) {
    throw DomainError("n must lie in [0, " + std::to_string(kMaxN) +
                      "], got " + std::to_string(n));
  }
}

Hypercube::Hypercube(int n) : n_(n) { check_n(n); }

void Hypercube::check(VertexIndex v) const {
  if (!contains(v)) {
    throw DomainError("vertex " + std::to_string(v) +
                      " is not in the hypercube of n=" + std::to_string(n_));
  }
}

void Hypercube::check_mode(int k) const {
  if (k < 0 || k > n_) {
    throw DomainError("mode index " + std::to_string(k) +
                      " outside [0, " + std::to_string(n_) + "]");
  }
}

bool adjacent(const Hypercube& g, VertexIndex sigma, VertexIndex tau) {
  g.check(sigma);
  g.check(tau);
  return popcount(sigma ^ tau) == 1;
}

std::vector<VertexIndex> neighbors(const Hypercube& g, VertexIndex sigma) {
  g.check(sigma);
  std::vector<VertexIndex> out;
  out.reserve(g.modes());
  for (int k = 0; k < g.modes(); ++k) out.push_back(sigma ^ (1u << k));
  return out;
}

std::vector<int> to_binary_tuple(const Hypercube& g, VertexIndex sigma) {
  g.check(sigma);
  std::vector<int> out(g.modes());
  for (int k = 0; k < g.modes(); ++k) out[k] = (sigma >> k) & 1u;
  return out;
}

std::string subset_notation(VertexIndex sigma) {
  std::string s = "{";
  bool first = true;
  for (int k = 0; sigma >> k; ++k) {
    if (!((sigma >> k) & 1u)) continue;
    if (!first) s += ',';
    s += std::to_string(k);
    first = false;
  }
  return s + "}";
}

}  // namespace qbnwalk
