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

// The coined walk on the hypercube: W = sum_k (d_k^* + d_k) (x) C_k acting on
// position (x) coin space, its direct simulation, the closed-form
// distribution in the Zhat basis, Cesaro averages and their limits, and
// stationarity checks.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "qbnwalk/coin.hpp"
#include "qbnwalk/fock.hpp"

namespace qbnwalk {

/// Tolerance for norm and probability-sum checks on walk states.
inline constexpr double kNormTol = 1e-10;

/// Amplitudes amp(sigma, j) = <Z_sigma (x) e_j, Phi>, stored vertex-major:
/// the d coin amplitudes of vertex sigma are contiguous.
class WalkState {
 public:
  /// Zero state.
  WalkState(int n, int dim);
  /// Throws DomainError unless amp.size() == 2^(n+1) * dim.
  WalkState(int n, int dim, std::vector<Complex> amp);

  int n() const { return n_; }
  int dim() const { return dim_; }
  std::size_t vertex_count() const { return amp_.size() / static_cast<std::size_t>(dim_); }

  Complex& operator()(VertexIndex sigma, int j) { return amp_[sigma * static_cast<std::size_t>(dim_) + j]; }
  const Complex& operator()(VertexIndex sigma, int j) const {
    return amp_[sigma * static_cast<std::size_t>(dim_) + j];
  }
  std::span<Complex> amplitudes() { return amp_; }
  std::span<const Complex> amplitudes() const { return amp_; }
  /// The coin fiber at sigma.
  Vector fiber(VertexIndex sigma) const;

  double norm() const;
  double max_distance(const WalkState& other) const;

 private:
  int n_;
  int dim_;
  std::vector<Complex> amp_;
};

/// v (x) u, rescaled to unit norm. Throws DomainError if either factor is 0.
WalkState product_state(const PositionVector& v, const Vector& u);

/// One application of W: out(sigma) = sum_{k=0}^{n} C_k in(sigma xor k),
/// accumulated for k ascending. Never forms W.
WalkState step(const WalkState& state, const CoinSystem& system);

/// W^t state.
WalkState evolve(WalkState state, const CoinSystem& system, std::uint64_t t);

struct Distribution {
  int n = 0;
  std::vector<double> probs;
  /// Sum of the raw (unclamped) probabilities.
  double total = 0.0;
  /// |total - 1| <= tolerance at construction time.
  bool normalized = false;

  /// max_sigma |probs(sigma) - other(sigma)|.
  double max_distance(const Distribution& other) const;
  /// max_sigma |probs(sigma) - 2^{-(n+1)}|.
  double uniform_deviation() const;
};

/// Records the sum and normalization flag from the raw values, then clamps
/// negatives to zero.
Distribution make_distribution(int n, std::vector<double> raw, double tol = kNormTol);

/// P(sigma) = sum_j |amp(sigma, j)|^2.
Distribution distribution(const WalkState& state, double tol = kNormTol);

/// Coin components of Phi = sum_tau Zhat_tau (x) u_tau.
struct ComponentDecomposition {
  int n = 0;
  int dim = 0;
  std::vector<Vector> components;  // indexed by tau
};

ComponentDecomposition decompose(const WalkState& state);
WalkState recompose(const ComponentDecomposition& decomp);

enum class PowerMethod {
  /// (U_tau)^t u_tau by t matrix-vector products.
  kIterated,
  /// sum_i b_i^t <v_i, u_tau> v_i from the spectral decomposition.
  kSpectral,
};

/// u_tau -> (U_tau)^t u_tau for every tau.
ComponentDecomposition advance_components(const CoinSystem& system,
                                          const ComponentDecomposition& decomp,
                                          std::int64_t t,
                                          PowerMethod method = PowerMethod::kIterated);

/// P_t(sigma) = 2^{-(n+1)} || sum_tau (-1)^{#(sigma\tau)} (U_tau)^t u_tau ||^2.
/// Each (U_tau)^t u_tau is computed once; the signed sum over tau for all
/// sigma is the inverse signed transform. Throws DomainError for t < 0.
Distribution distribution_closed_form(const CoinSystem& system,
                                      const ComponentDecomposition& decomp,
                                      std::int64_t t,
                                      PowerMethod method = PowerMethod::kIterated);

/// Pbar_T = (1/T) sum_{t<T} P_t, by streaming direct evolution.
Distribution averaged_distribution(const CoinSystem& system, const WalkState& initial,
                                   std::uint64_t horizon);

/// Pbar_T for every T in `horizons` (ascending, >= 1) from a single pass.
std::vector<Distribution> averaged_distributions(const CoinSystem& system,
                                                 const WalkState& initial,
                                                 std::span<const std::uint64_t> horizons);

/// Choice of the coin component attached to Zhat_tau: an explicit vector or
/// the index of an eigenpair of U_tau (in eigendecompose order).
struct ComponentChoice {
  std::variant<Vector, std::size_t> choice;
  std::optional<Complex> eigenvalue;
};

struct EigenComponentSpec {
  int n = 0;
  int dim = 0;
  std::vector<ComponentChoice> components;  // indexed by tau, size 2^(n+1)
};

struct ResolvedComponents {
  std::vector<Vector> vectors;
  /// Empty for zero vectors, which place no constraint.
  std::vector<std::optional<Complex>> eigenvalues;
  double max_residual = 0.0;
};

/// Materializes a spec and checks each nonzero vector against its weighted
/// sum: ||U_tau v - b v|| <= tol ||v||, with b the stated eigenvalue or the
/// Rayleigh quotient. Throws HypothesisError naming the offending tau.
ResolvedComponents resolve_components(const CoinSystem& system,
                                      const EigenComponentSpec& spec,
                                      double tol = kNormTol);

/// M0^{-1/2} sum_gamma Zhat_gamma (x) v_gamma with M0 = sum ||v_gamma||^2.
WalkState build_eigenmix_state(const CoinSystem& system, const EigenComponentSpec& spec);

struct LimitOptions {
  double grouping_tol = kEigenGroupingTol;
  double residual_tol = kNormTol;
  double imaginary_tol = kNormTol;
};

/// lim_T Pbar_T(sigma) for an eigen-component initial state:
///   2^{-(n+1)} [1 + sum_{tau1 != tau2, b1 == b2} (-1)^{#(sigma\tau1)+#(sigma\tau2)} <u1, u2>]
/// with u = v / sqrt(M0). Throws NumericalError if the imaginary residue
/// exceeds imaginary_tol.
Distribution limit_distribution(const CoinSystem& system, const EigenComponentSpec& spec,
                                const LimitOptions& options = {});

struct StationaryReport {
  std::uint64_t t_max = 0;
  double tolerance = 0.0;
  /// max_{t <= t_max, sigma} |P_t(sigma) - P_0(sigma)|
  double max_deviation = 0.0;
  bool stationary = false;
  /// max_sigma |P_0(sigma) - 2^{-(n+1)}|
  double uniform_deviation = 0.0;
  bool uniform = false;
  bool initial_normalized = false;
};

StationaryReport stationary_check(const CoinSystem& system, const WalkState& initial,
                                  std::uint64_t t_max, double tol);

/// Component specs of the worked examples. "3.1": eigenvalues -1, -i, i, 1
/// on {}, {0}, {1}, {0,1}. "3.2": the orthonormal v vectors, Psi = (1/2)
/// sum Zhat_gamma (x) v_gamma.
EigenComponentSpec builtin_eigenmix(std::string_view id);

/// For each tau, a random unit vector inside a randomly chosen eigenspace
/// of U_tau. Deterministic given the seed.
EigenComponentSpec random_eigenmix(const CoinSystem& system, std::uint64_t seed);

}  // namespace qbnwalk
