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

// Coin operator systems {C_0, ..., C_n} on a d-dimensional coin space:
//   C_j^* C_k = C_j C_k^* = 0 for j != k, and sum_k C_k unitary.
// Equivalently C_k = P_k U with U unitary and {P_k} a resolution of the
// identity.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qbnwalk/fock.hpp"
#include "qbnwalk/hypercube.hpp"

namespace qbnwalk {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Default tolerance for validating matrix identities.
inline constexpr double kValidationTol = 1e-10;
/// Complex distance below which two eigenvalues are treated as equal.
inline constexpr double kEigenGroupingTol = 1e-9;

class CoinSystem {
 public:
  /// Checks shapes only: n+1 square matrices of a common dimension d >= n+1.
  CoinSystem(int n, std::vector<Matrix> coins);

  int n() const { return n_; }
  int modes() const { return n_ + 1; }
  int dim() const { return dim_; }
  const std::vector<Matrix>& coins() const { return coins_; }
  const Matrix& coin(int k) const { return coins_.at(k); }

 private:
  int n_;
  int dim_;
  std::vector<Matrix> coins_;
};

struct Check {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<Check> checks;
  bool pass = false;

  /// Largest deviation across all checks.
  double max_deviation() const;
};

/// Largest |a_ij| of a matrix.
double max_abs(const Matrix& m);
/// max |U^* U - I| and max |U U^* - I|, whichever is larger.
double unitarity_deviation(const Matrix& u);

ValidationReport validate(const CoinSystem& system, double tol = kValidationTol);

struct ResolutionOfIdentity {
  std::vector<Matrix> projections;
};

/// Idempotence, self-adjointness, pairwise orthogonality, completeness.
ValidationReport validate(const ResolutionOfIdentity& r, double tol = kValidationTol);

struct CoinFactorization {
  Matrix unitary;
  ResolutionOfIdentity resolution;
};

/// U = sum_k C_k, P_k = C_k C_k^*. Throws DomainError if the system fails
/// validation.
CoinFactorization factor(const CoinSystem& system, double tol = kValidationTol);

/// {P_k U}. Throws DomainError if U is not unitary or R is not a resolution
/// of the identity.
CoinSystem build(const Matrix& unitary, const ResolutionOfIdentity& r,
                 double tol = kValidationTol);

struct WeightedCoinSum {
  VertexIndex tau = 0;
  Matrix matrix;
};

/// U_tau = sum_k eps_tau(k) C_k.
WeightedCoinSum weighted_sum(const CoinSystem& system, VertexIndex tau);

struct EigenPair {
  Complex value;
  Vector vector;
};

struct EigenDecomposition {
  /// Sorted by eigenvalue argument in (-pi, pi].
  std::vector<EigenPair> pairs;
  double max_residual = 0.0;
  double max_circle_deviation = 0.0;
  double max_orthonormality_deviation = 0.0;
};

/// Full spectral decomposition of a unitary matrix. Eigenvectors are
/// orthonormal, including inside degenerate eigenspaces. Throws
/// NumericalError with residual diagnostics if any contract exceeds tol.
EigenDecomposition eigendecompose(const WeightedCoinSum& w,
                                  double tol = kValidationTol);

/// Haar-distributed d x d unitary: QR of a complex Gaussian matrix with the
/// phases of R's diagonal absorbed into Q.
template <class Rng>
Matrix haar_unitary(int d, Rng& rng);

/// n+1 block sizes summing to d, as equal as possible, larger blocks first.
std::vector<int> default_partition(int modes, int d);

/// Seeded random system build(U, {P_k}) with U Haar and P_k projecting onto
/// consecutive blocks of the standard basis.
CoinSystem random_system(int n, int d, std::uint64_t seed,
                         std::optional<std::vector<int>> partition_sizes = std::nullopt);

/// The coin systems of the two worked examples: "3.1" (C^2) and "3.2" (C^4).
CoinSystem builtin_example(std::string_view id);

}  // namespace qbnwalk

#include <cmath>
#include <random>

namespace qbnwalk {

template <class Rng>
Matrix haar_unitary(int d, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix z(d, d);
  const double s = 1.0 / std::sqrt(2.0);
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z(r, c) = Complex(re * s, im * s);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix& packed = qr.matrixQR();
  for (int c = 0; c < d; ++c) {
    const Complex diag = packed(c, c);
    const double mag = std::abs(diag);
    q.col(c) *= mag > 0.0 ? diag / mag : Complex(1.0);
  }
  return q;
}

}  // namespace qbnwalk
