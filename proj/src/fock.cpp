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

#include "qbnwalk/fock.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qbnwalk/errors.hpp"

namespace qbnwalk {

namespace {

std::size_t dimension(int n) {
  check_n(n);
  return std::size_t{1} << (n + 1);
}

void check_same_space(const PositionVector& a, const PositionVector& b) {
  if (a.n() != b.n()) {
    throw DomainError("position vectors live in different spaces (n=" +
                      std::to_string(a.n()) + " vs n=" + std::to_string(b.n()) +
                      ")");
  }
}

// Multiplies row s by (-1)^{|s|}.
void apply_parity_signs(std::span<Complex> data, std::size_t rows,
                        std::size_t row_len) {
  for (std::size_t s = 0; s < rows; ++s) {
    if (popcount(static_cast<VertexIndex>(s)) & 1) {
      for (std::size_t j = 0; j < row_len; ++j) data[s * row_len + j] = -data[s * row_len + j];
    }
  }
}

// Unnormalized Walsh-Hadamard butterfly on rows.
void butterfly(std::span<Complex> data, std::size_t rows, std::size_t row_len) {
  for (std::size_t h = 1; h < rows; h <<= 1) {
    for (std::size_t block = 0; block < rows; block += 2 * h) {
      for (std::size_t s = block; s < block + h; ++s) {
        Complex* a = &data[s * row_len];
        Complex* b = &data[(s + h) * row_len];
        for (std::size_t j = 0; j < row_len; ++j) {
          const Complex x = a[j];
          const Complex y = b[j];
          a[j] = x + y;
          b[j] = x - y;
        }
      }
    }
  }
}

}  // namespace

PositionVector::PositionVector(int n) : n_(n), amp_(dimension(n)) {}

PositionVector::PositionVector(int n, std::vector<Complex> amp)
    : n_(n), amp_(std::move(amp)) {
  if (amp_.size() != dimension(n)) {
    throw DomainError("position vector for n=" + std::to_string(n) +
                      " needs " + std::to_string(dimension(n)) +
                      " amplitudes, got " + std::to_string(amp_.size()));
  }
}

PositionVector PositionVector::basis(int n, VertexIndex sigma) {
  Hypercube(n).check(sigma);
  PositionVector v(n);
  v[sigma] = 1.0;
  return v;
}

double PositionVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amp_) sum += std::norm(a);
  return std::sqrt(sum);
}

double PositionVector::max_distance(const PositionVector& other) const {
  check_same_space(*this, other);
  double worst = 0.0;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    worst = std::max(worst, std::abs(amp_[i] - other.amp_[i]));
  }
  return worst;
}

PositionVector& PositionVector::operator+=(const PositionVector& other) {
  check_same_space(*this, other);
  for (std::size_t i = 0; i < amp_.size(); ++i) amp_[i] += other.amp_[i];
  return *this;
}

PositionVector& PositionVector::operator-=(const PositionVector& other) {
  check_same_space(*this, other);
  for (std::size_t i = 0; i < amp_.size(); ++i) amp_[i] -= other.amp_[i];
  return *this;
}

PositionVector& PositionVector::operator*=(Complex c) {
  for (auto& a : amp_) a *= c;
  return *this;
}

PositionVector operator+(PositionVector a, const PositionVector& b) { return a += b; }
PositionVector operator-(PositionVector a, const PositionVector& b) { return a -= b; }
PositionVector operator*(Complex c, PositionVector v) { return v *= c; }

Complex inner(const PositionVector& x, const PositionVector& y) {
  check_same_space(x, y);
  Complex sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += std::conj(x[static_cast<VertexIndex>(i)]) * y[static_cast<VertexIndex>(i)];
  }
  return sum;
}

PositionVector apply_annihilation(int k, const PositionVector& v) {
  Hypercube(v.n()).check_mode(k);
  const VertexIndex bit = 1u << k;
  PositionVector out(v.n());
  for (VertexIndex s = 0; s < v.size(); ++s) {
    if (s & bit) out[s ^ bit] += v[s];
  }
  return out;
}

PositionVector apply_creation(int k, const PositionVector& v) {
  Hypercube(v.n()).check_mode(k);
  const VertexIndex bit = 1u << k;
  PositionVector out(v.n());
  for (VertexIndex s = 0; s < v.size(); ++s) {
    if (!(s & bit)) out[s | bit] += v[s];
  }
  return out;
}

PositionVector apply_shift(int k, const PositionVector& v) {
  Hypercube(v.n()).check_mode(k);
  const VertexIndex bit = 1u << k;
  PositionVector out(v.n());
  for (VertexIndex s = 0; s < v.size(); ++s) out[s] = v[s ^ bit];
  return out;
}

CarReport verify_car(int n, double tol) {
  if (n < 0 || n > 8) throw DomainError("verify_car supports 0 <= n <= 8");
  CarReport report;
  report.n = n;
  report.tolerance = tol;
  report.relations = {
      {"annihilators commute", 0.0},
      {"creators commute", 0.0},
      {"mixed pair commutes (k != l)", 0.0},
      {"nilpotent (d_k d_k = d_k^* d_k^* = 0)", 0.0},
      {"anticommutator d_k d_k^* + d_k^* d_k = I", 0.0},
  };
  auto note = [&](std::size_t which, double dev) {
    report.relations[which].max_deviation =
        std::max(report.relations[which].max_deviation, dev);
  };

  const int modes = n + 1;
  const auto count = static_cast<VertexIndex>(dimension(n));
  for (VertexIndex s = 0; s < count; ++s) {
    const auto z = PositionVector::basis(n, s);
    std::vector<PositionVector> ann, cre;
    for (int k = 0; k < modes; ++k) {
      ann.push_back(apply_annihilation(k, z));
      cre.push_back(apply_creation(k, z));
    }
    for (int k = 0; k < modes; ++k) {
      for (int l = 0; l < modes; ++l) {
        note(0, apply_annihilation(k, ann[l]).max_distance(apply_annihilation(l, ann[k])));
        note(1, apply_creation(k, cre[l]).max_distance(apply_creation(l, cre[k])));
        if (k != l) {
          note(2, apply_creation(k, ann[l]).max_distance(apply_annihilation(l, cre[k])));
        }
      }
      note(3, apply_annihilation(k, ann[k]).norm());
      note(3, apply_creation(k, cre[k]).norm());
      note(4, (apply_annihilation(k, cre[k]) + apply_creation(k, ann[k])).max_distance(z));
    }
  }
  for (const auto& r : report.relations) {
    report.max_deviation = std::max(report.max_deviation, r.max_deviation);
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

PositionVector hadamard_vector(int n, VertexIndex sigma) {
  Hypercube g(n);
  g.check(sigma);
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.vertex_count()));
  PositionVector out(n);
  for (VertexIndex tau = 0; tau < g.vertex_count(); ++tau) {
    // prod_{k in tau} eps_sigma(k) = (-1)^{#(tau \ sigma)}
    out[tau] = scale * diff_parity_sign(tau, sigma);
  }
  return out;
}

void signed_wht_rows(std::span<Complex> data, int n, std::size_t row_len,
                     Direction direction) {
  const std::size_t rows = dimension(n);
  if (data.size() != rows * row_len) {
    throw DomainError("signed_wht_rows: buffer holds " +
                      std::to_string(data.size()) + " entries, expected " +
                      std::to_string(rows * row_len));
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  if (direction == Direction::kForward) apply_parity_signs(data, rows, row_len);
  butterfly(data, rows, row_len);
  for (auto& x : data) x *= scale;
  if (direction == Direction::kInverse) apply_parity_signs(data, rows, row_len);
}

PositionVector signed_wht(const PositionVector& v, Direction direction) {
  PositionVector out = v;
  signed_wht_rows(out.amplitudes(), v.n(), 1, direction);
  return out;
}

PositionVector apply_A(VertexIndex sigma, const PositionVector& v) {
  Hypercube g(v.n());
  g.check(sigma);
  PositionVector out = v;
  for (int k = 0; k < g.modes(); ++k) {
    out += static_cast<double>(membership_sign(sigma, k)) * apply_shift(k, out);
  }
  return out;
}

}  // namespace qbnwalk
