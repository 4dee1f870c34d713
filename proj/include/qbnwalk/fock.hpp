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

// The truncated position space spanned by {Z_sigma : sigma subset of
// {0..n}}, the annihilation/creation/shift operators acting on it, and the
// signed Hadamard basis {Zhat_sigma}.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qbnwalk/hypercube.hpp"

namespace qbnwalk {

using Complex = std::complex<double>;

/// Absolute tolerance for amplitude equality checks.
inline constexpr double kAmplitudeTol = 1e-12;

/// Dense amplitude vector over the canonical basis {Z_sigma}, indexed by
/// vertex bitmask.
class PositionVector {
 public:
  /// Zero vector.
  explicit PositionVector(int n);
  /// Throws DomainError if amp.size() != 2^(n+1).
  PositionVector(int n, std::vector<Complex> amp);

  /// Z_sigma.
  static PositionVector basis(int n, VertexIndex sigma);

  int n() const { return n_; }
  std::size_t size() const { return amp_.size(); }
  Complex& operator[](VertexIndex s) { return amp_[s]; }
  const Complex& operator[](VertexIndex s) const { return amp_[s]; }
  std::span<Complex> amplitudes() { return amp_; }
  std::span<const Complex> amplitudes() const { return amp_; }

  double norm() const;
  /// Largest |a_i - b_i|; throws DomainError on size mismatch.
  double max_distance(const PositionVector& other) const;

  PositionVector& operator+=(const PositionVector& other);
  PositionVector& operator-=(const PositionVector& other);
  PositionVector& operator*=(Complex c);

 private:
  int n_;
  std::vector<Complex> amp_;
};

PositionVector operator+(PositionVector a, const PositionVector& b);
PositionVector operator-(PositionVector a, const PositionVector& b);
PositionVector operator*(Complex c, PositionVector v);

/// <x, y>, conjugate-linear in x.
Complex inner(const PositionVector& x, const PositionVector& y);

/// d_k Z_sigma = 1_sigma(k) Z_{sigma \ k}.
PositionVector apply_annihilation(int k, const PositionVector& v);
/// d_k^* Z_sigma = (1 - 1_sigma(k)) Z_{sigma u k}.
PositionVector apply_creation(int k, const PositionVector& v);
/// (d_k^* + d_k) Z_sigma = Z_{sigma xor k}.
PositionVector apply_shift(int k, const PositionVector& v);

struct RelationCheck {
  std::string name;
  double max_deviation = 0.0;
};

struct CarReport {
  int n = 0;
  double tolerance = kAmplitudeTol;
  std::vector<RelationCheck> relations;
  double max_deviation = 0.0;
  bool pass = false;
};

/// Sweeps every basis vector of the n-space and every mode pair through the
/// equal-time anticommutation relations. Requires n <= 8.
CarReport verify_car(int n, double tol = kAmplitudeTol);

/// Zhat_sigma, amplitude at tau = 2^{-(n+1)/2} prod_{k in tau} eps_sigma(k).
PositionVector hadamard_vector(int n, VertexIndex sigma);

enum class Direction { kForward, kInverse };

/// Change of basis between canonical coordinates and Zhat coordinates:
///   forward: c_tau = 2^{-(n+1)/2} sum_sigma (-1)^{#(sigma \ tau)} phi_sigma
///   inverse: the adjoint (the kernel is real and orthogonal).
/// O(N log N) via (-1)^{#(sigma\tau)} = (-1)^{|sigma|} (-1)^{|sigma & tau|}.
PositionVector signed_wht(const PositionVector& v, Direction direction);

/// Same transform applied to `data` viewed as 2^(n+1) consecutive rows of
/// `row_len` entries; each row moves as a unit. Used for walk states where a
/// row is the coin fiber at one vertex.
void signed_wht_rows(std::span<Complex> data, int n, std::size_t row_len,
                     Direction direction);

/// A_sigma = prod_{k=0}^{n} (I + eps_sigma(k) (d_k^* + d_k)), factors
/// applied in order k = 0..n.
PositionVector apply_A(VertexIndex sigma, const PositionVector& v);

}  // namespace qbnwalk
