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

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qbnwalk/errors.hpp"
#include "qbnwalk/walk.hpp"

using namespace qbnwalk;

namespace {

Vector basis_coin(int d, int j) {
  Vector v = Vector::Zero(d);
  v(j) = 1.0;
  return v;
}

// Zhat_gamma (x) u
WalkState hat_state(int n, VertexIndex gamma, const Vector& u) {
  return product_state(hadamard_vector(n, gamma), u);
}

CoinSystem flip_walk() { return CoinSystem(0, {Matrix::Identity(1, 1)}); }

}  // namespace

TEST_CASE("walk state: shapes") {
  CHECK(WalkState(1, 3).amplitudes().size() == 12);
  CHECK_THROWS_AS(WalkState(1, 2, std::vector<Complex>(7)), DomainError);
  CHECK_THROWS_AS(WalkState(1, 0), DomainError);
  CHECK_THROWS_AS(WalkState(1, 2).fiber(4), DomainError);
}

TEST_CASE("product_state") {
  const auto p = product_state(PositionVector::basis(2, 0), basis_coin(3, 0));
  CHECK(p(0, 0) == Complex(1.0));
  CHECK(p.norm() == doctest::Approx(1.0));
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = product_state(oracle::random_position(3, rng), oracle::random_vector(4, rng));
    CHECK(std::abs(s.norm() - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(product_state(PositionVector(1), basis_coin(2, 0)), DomainError);
  CHECK_THROWS_AS(product_state(PositionVector::basis(1, 0), Vector::Zero(2)), DomainError);
}

TEST_CASE("step: single-mode flip walk") {
  const auto s0 = product_state(PositionVector::basis(0, 0), basis_coin(1, 0));
  const auto s1 = step(s0, flip_walk());
  CHECK(s1(1, 0) == Complex(1.0));
  CHECK(s1(0, 0) == Complex(0.0));
  CHECK(evolve(s0, flip_walk(), 2).max_distance(s0) == 0.0);
  CHECK(evolve(s0, flip_walk(), 0).max_distance(s0) == 0.0);
  CHECK_THROWS_AS(step(WalkState(1, 2), flip_walk()), DomainError);
}

TEST_CASE("step: hadamard blocks evolve by the weighted coin sum") {
  const auto system = builtin_example("3.1");
  std::mt19937_64 rng(8);
  for (VertexIndex tau = 0; tau < 4; ++tau) {
    const Vector u = oracle::random_vector(2, rng).normalized();
    const Vector moved = weighted_sum(system, tau).matrix * u;
    CHECK(step(hat_state(1, tau, u), system).max_distance(hat_state(1, tau, moved)) <= 1e-12);
  }
  // Repeated: W^t (Zhat (x) u) = Zhat (x) U^t u.
  const auto r = random_system(2, 5, 77);
  for (VertexIndex tau = 0; tau < 8; ++tau) {
    Vector u = oracle::random_vector(5, rng).normalized();
    const auto start = hat_state(2, tau, u);
    const Matrix w = weighted_sum(r, tau).matrix;
    for (int t = 0; t < 50; ++t) u = w * u;
    CHECK(evolve(start, r, 50).max_distance(hat_state(2, tau, u)) <= 1e-10);
  }
}

TEST_CASE("step: agrees with the assembled dense operator, which is unitary") {
  std::mt19937_64 rng(12);
  for (int n = 0; n <= 3; ++n) {
    for (int d : {n + 1, n + 3}) {
      const auto system = random_system(n, d, 100 + n * 10 + d);
      const Matrix w = oracle::walk_operator(system);
      CHECK(max_abs(w.adjoint() * w - Matrix::Identity(w.rows(), w.cols())) <= 1e-10);
      const auto state = oracle::random_unit_state(n, d, rng);
      const Vector expected = w * oracle::to_eigen(state);
      CHECK((oracle::to_eigen(step(state, system)) - expected).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("evolve: norm is preserved over long runs") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 3; ++trial) {
    const auto system = random_system(2, 4, 300 + trial);
    auto state = oracle::random_unit_state(2, 4, rng);
    for (int t = 1; t <= 1024; ++t) {
      state = step(state, system);
      if (std::abs(state.norm() - 1.0) > 1e-10) FAIL("norm drift at t=" << t);
    }
    CHECK(std::abs(evolve(state, system, 1000).norm() - 1.0) <= 1e-9);
  }
}

TEST_CASE("distribution") {
  const auto point = distribution(product_state(PositionVector::basis(2, 5), basis_coin(3, 1)));
  for (VertexIndex s = 0; s < 8; ++s) CHECK(point.probs[s] == (s == 5 ? 1.0 : 0.0));
  CHECK(point.normalized);

  const auto uniform = distribution(hat_state(1, 2, Vector::Ones(2)));
  CHECK(uniform.uniform_deviation() <= 1e-15);

  std::mt19937_64 rng(2);
  const auto random = distribution(oracle::random_unit_state(3, 4, rng));
  CHECK(std::abs(random.total - 1.0) <= 1e-12);

  WalkState half(1, 2);
  half(0, 0) = 0.5;
  const auto warn = distribution(half);
  CHECK_FALSE(warn.normalized);
  CHECK(warn.probs[0] == 0.25);

  const auto clamped = make_distribution(0, {1.0 + 1e-13, -1e-13});
  CHECK(clamped.normalized);
  CHECK(clamped.probs[1] == 0.0);
}

TEST_CASE("decompose / recompose") {
  std::mt19937_64 rng(9);
  const Vector u = oracle::random_vector(3, rng).normalized();
  const auto d = decompose(hat_state(2, 6, u));
  for (VertexIndex tau = 0; tau < 8; ++tau) {
    CHECK((d.components[tau] - (tau == 6 ? u : Vector::Zero(3))).norm() <= 1e-12);
  }

  const auto spec = builtin_eigenmix("3.2");
  WalkState psi(1, 4);
  for (VertexIndex g = 0; g < 4; ++g) {
    const auto& v = std::get<Vector>(spec.components[g].choice);
    const auto h = hadamard_vector(1, g);
    for (VertexIndex s = 0; s < 4; ++s) {
      for (int j = 0; j < 4; ++j) psi(s, j) += 0.5 * h[s] * v(j);
    }
  }
  const auto dp = decompose(psi);
  for (VertexIndex tau = 0; tau < 4; ++tau) {
    CHECK((dp.components[tau] - 0.5 * std::get<Vector>(spec.components[tau].choice)).norm() <= 1e-12);
  }

  for (int trial = 0; trial < 5; ++trial) {
    const auto state = oracle::random_unit_state(4, 3, rng);
    const auto dd = decompose(state);
    double mass = 0.0;
    for (const auto& c : dd.components) mass += c.squaredNorm();
    CHECK(std::abs(mass - 1.0) <= 1e-12);
    CHECK(recompose(dd).max_distance(state) <= 1e-12);
  }
}

TEST_CASE("closed form: matches direct evolution and the literal double sum") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = trial % 5;
    const int d = n + 1 + trial % 4;
    const auto system = random_system(n, d, 500 + trial);
    const auto start = oracle::random_unit_state(n, d, rng);
    const auto decomp = decompose(start);
    CHECK(distribution_closed_form(system, decomp, 0).max_distance(distribution(start)) <= 1e-12);
    auto state = start;
    for (int t = 1; t <= 64; ++t) {
      state = step(state, system);
      if (t % 9 != 1 && t != 64) continue;
      const auto closed = distribution_closed_form(system, decomp, t);
      CHECK(closed.max_distance(distribution(state)) <= 1e-9);
      const auto literal = oracle::closed_form_double_sum(system, decomp, t);
      for (std::size_t s = 0; s < literal.size(); ++s) CHECK(std::abs(closed.probs[s] - literal[s]) <= 1e-9);
      const auto spectral = distribution_closed_form(system, decomp, t, PowerMethod::kSpectral);
      CHECK(spectral.max_distance(closed) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(distribution_closed_form(builtin_example("3.1"), decompose(WalkState(1, 2)), -1), DomainError);
  CHECK_THROWS_AS(distribution_closed_form(builtin_example("3.1"), decompose(WalkState(1, 3)), 1), DomainError);
}

TEST_CASE("closed form: hadamard product states stay uniform") {
  const auto system = random_system(3, 5, 8);
  std::mt19937_64 rng(3);
  const auto decomp = decompose(hat_state(3, 11, oracle::random_vector(5, rng)));
  for (int t : {0, 1, 5, 40}) CHECK(distribution_closed_form(system, decomp, t).uniform_deviation() <= 1e-12);
}

TEST_CASE("averaged distribution") {
  const auto system = random_system(2, 4, 41);
  std::mt19937_64 rng(41);
  const auto start = oracle::random_unit_state(2, 4, rng);
  CHECK(averaged_distribution(system, start, 1).max_distance(distribution(start)) == 0.0);

  const auto decomp = decompose(start);
  std::vector<double> oracle_avg(8, 0.0);
  for (int t = 0; t < 32; ++t) {
    const auto p = distribution_closed_form(system, decomp, t);
    for (int s = 0; s < 8; ++s) oracle_avg[s] += p.probs[s] / 32.0;
  }
  const auto avg = averaged_distribution(system, start, 32);
  for (int s = 0; s < 8; ++s) CHECK(std::abs(avg.probs[s] - oracle_avg[s]) <= 1e-9);
  CHECK(avg.normalized);

  const std::uint64_t ladder[] = {1, 4, 32};
  const auto many = averaged_distributions(system, start, ladder);
  REQUIRE(many.size() == 3);
  CHECK(many[2].max_distance(avg) == 0.0);
  const std::uint64_t bad[] = {4, 2};
  CHECK_THROWS_AS(averaged_distributions(system, start, bad), DomainError);
  CHECK_THROWS_AS(averaged_distribution(system, start, 0), DomainError);

  const auto ex = builtin_example("3.1");
  const auto mix = build_eigenmix_state(ex, builtin_eigenmix("3.1"));
  CHECK(averaged_distribution(ex, mix, 1024).uniform_deviation() <= 1e-2);
}

TEST_CASE("eigenmix states") {
  const auto ex1 = builtin_example("3.1");
  const auto mix1 = build_eigenmix_state(ex1, builtin_eigenmix("3.1"));
  CHECK(std::abs(mix1.norm() - 1.0) <= 1e-12);
  const auto resolved = resolve_components(ex1, builtin_eigenmix("3.1"));
  const Complex i(0, 1);
  const Complex expected_b[] = {-1.0, -i, i, 1.0};
  for (int tau = 0; tau < 4; ++tau) CHECK(std::abs(*resolved.eigenvalues[tau] - expected_b[tau]) <= 1e-12);

  const auto ex2 = builtin_example("3.2");
  const auto spec2 = builtin_eigenmix("3.2");
  const auto psi = build_eigenmix_state(ex2, spec2);
  const auto comps = decompose(psi);
  for (int tau = 0; tau < 4; ++tau) {
    CHECK((comps.components[tau] - 0.5 * std::get<Vector>(spec2.components[tau].choice)).norm() <= 1e-12);
  }

  // A single nonzero component gives a hadamard product state.
  EigenComponentSpec single{1, 2, {}};
  const auto full = builtin_eigenmix("3.1");
  for (int tau = 0; tau < 4; ++tau) {
    single.components.push_back({tau == 2 ? std::get<Vector>(full.components[2].choice) : Vector::Zero(2), std::nullopt});
  }
  const auto one = build_eigenmix_state(ex1, single);
  CHECK(one.max_distance(hat_state(1, 2, std::get<Vector>(full.components[2].choice))) <= 1e-12);

  EigenComponentSpec zeros{1, 2, std::vector<ComponentChoice>(4, {Vector::Zero(2), std::nullopt})};
  CHECK_THROWS_AS(build_eigenmix_state(ex1, zeros), DomainError);
  EigenComponentSpec wrong_shape{2, 2, {}};
  CHECK_THROWS_AS(build_eigenmix_state(ex1, wrong_shape), DomainError);

  // Index choices pick eigendecompose pairs.
  EigenComponentSpec by_index{1, 2, std::vector<ComponentChoice>(4, {std::size_t{1}, std::nullopt})};
  CHECK(std::abs(build_eigenmix_state(ex1, by_index).norm() - 1.0) <= 1e-12);
  EigenComponentSpec out_of_range{1, 2, std::vector<ComponentChoice>(4, {std::size_t{2}, std::nullopt})};
  CHECK_THROWS_AS(build_eigenmix_state(ex1, out_of_range), HypothesisError);
}

TEST_CASE("eigen-component hypothesis violations name the component") {
  auto spec = builtin_eigenmix("3.1");
  spec.components[2].choice = Vector(Vector::Unit(2, 0));
  spec.components[2].eigenvalue = std::nullopt;
  try {
    limit_distribution(builtin_example("3.1"), spec);
    FAIL("expected HypothesisError");
  } catch (const HypothesisError& e) {
    CHECK(e.tau() == 2);
  }
  // Right vector, wrong stated eigenvalue.
  auto wrong_b = builtin_eigenmix("3.1");
  wrong_b.components[0].eigenvalue = Complex(1.0);
  CHECK_THROWS_AS(resolve_components(builtin_example("3.1"), wrong_b), HypothesisError);
}

TEST_CASE("limit distribution") {
  const auto ex1 = builtin_example("3.1");
  const auto lim1 = limit_distribution(ex1, builtin_eigenmix("3.1"));
  for (double p : lim1.probs) CHECK(p == 0.25);

  const auto ex2 = builtin_example("3.2");
  CHECK(limit_distribution(ex2, builtin_eigenmix("3.2")).uniform_deviation() <= 1e-12);

  // Coincident eigenvalues with overlapping components: the limit is not
  // uniform, and the Cesaro average converges to it.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto spec = random_eigenmix(ex2, seed);
    const auto lim = limit_distribution(ex2, spec);
    CHECK(lim.normalized);
    CHECK(lim.uniform_deviation() > 1e-3);
    const auto avg = averaged_distribution(ex2, build_eigenmix_state(ex2, spec), 4096);
    CHECK(avg.max_distance(lim) <= 2e-2);
  }
}

TEST_CASE("limit distribution: Cesaro error is O(1/T)") {
  // |Pbar_T - limit| <= (1/T) 2^{-(n+1)} sum_{b1 != b2} |<u1,u2>| 2 / |1 - conj(b1) b2|.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto system = random_system(1, 3, seed);
    const auto spec = random_eigenmix(system, seed);
    const auto resolved = resolve_components(system, spec);
    double mass = 0.0;
    for (const auto& v : resolved.vectors) mass += v.squaredNorm();
    double bound = 0.0;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const Complex z = std::conj(*resolved.eigenvalues[a]) * *resolved.eigenvalues[b];
        if (a == b || std::abs(1.0 - z) <= kEigenGroupingTol) continue;
        bound += std::abs(resolved.vectors[a].dot(resolved.vectors[b])) / mass * 2.0 / std::abs(1.0 - z) / 4.0;
      }
    }
    const auto lim = limit_distribution(system, spec);
    const auto start = build_eigenmix_state(system, spec);
    const std::uint64_t ladder[] = {64, 256, 1024, 2048, 4096};
    const auto avgs = averaged_distributions(system, start, ladder);
    for (std::size_t i = 0; i < avgs.size(); ++i) {
      CHECK(avgs[i].max_distance(lim) * static_cast<double>(ladder[i]) <= bound + 1e-9);
    }
  }

  // Example eigenvalues are fourth roots of unity: the oscillating terms
  // cancel exactly when 4 divides T.
  const auto ex1 = builtin_example("3.1");
  const auto mix = build_eigenmix_state(ex1, builtin_eigenmix("3.1"));
  const auto lim = limit_distribution(ex1, builtin_eigenmix("3.1"));
  const double e2048 = averaged_distribution(ex1, mix, 2048).max_distance(lim);
  const double e4096 = averaged_distribution(ex1, mix, 4096).max_distance(lim);
  CHECK(e4096 <= 0.5 * e2048 + 1e-12);
}

TEST_CASE("stationary check") {
  std::mt19937_64 rng(77);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto system = random_system(2, 4, seed);
    const auto start = hat_state(2, static_cast<VertexIndex>(seed * 3 % 8), oracle::random_vector(4, rng));
    const auto r = stationary_check(system, start, 128, 1e-12);
    CHECK(r.stationary);
    CHECK(r.uniform);
    CHECK(r.max_deviation <= 1e-12);
  }
  const auto ex2 = builtin_example("3.2");
  const auto r2 = stationary_check(ex2, build_eigenmix_state(ex2, builtin_eigenmix("3.2")), 128, 1e-12);
  CHECK(r2.stationary);
  CHECK(r2.uniform);

  const auto ex1 = builtin_example("3.1");
  const auto r3 = stationary_check(ex1, product_state(PositionVector::basis(1, 0), basis_coin(2, 0)), 8, 1e-12);
  CHECK_FALSE(r3.stationary);
  CHECK_FALSE(r3.uniform);
  CHECK(r3.initial_normalized);
}
