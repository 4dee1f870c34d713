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

#include "qbnwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <utility>

#include "qbnwalk/errors.hpp"

namespace qbnwalk {

namespace {

std::size_t state_size(int n, int dim) {
  check_n(n);
  if (dim < 1) throw DomainError("coin dimension must be positive");
  return (std::size_t{1} << (n + 1)) * static_cast<std::size_t>(dim);
}

void check_compatible(const WalkState& state, const CoinSystem& system) {
  if (state.n() != system.n() || state.dim() != system.dim()) {
    std::ostringstream os;
    os << "state (n=" << state.n() << ", dim=" << state.dim()
       << ") does not match coin system (n=" << system.n() << ", dim=" << system.dim() << ")";
    throw DomainError(os.str());
  }
}

void check_spec_shape(const CoinSystem& system, const EigenComponentSpec& spec) {
  const std::size_t count = std::size_t{1} << (system.n() + 1);
  if (spec.n != system.n() || spec.dim != system.dim() || spec.components.size() != count) {
    std::ostringstream os;
    os << "component spec (n=" << spec.n << ", dim=" << spec.dim << ", "
       << spec.components.size() << " components) does not match coin system (n="
       << system.n() << ", dim=" << system.dim() << ", " << count << " components)";
    throw DomainError(os.str());
  }
}

// Contiguous runs of eigenpairs whose eigenvalues agree within tolerance.
std::vector<std::pair<std::size_t, std::size_t>> eigen_clusters(const EigenDecomposition& e) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t begin = 0; begin < e.pairs.size();) {
    std::size_t end = begin + 1;
    while (end < e.pairs.size() &&
           std::abs(e.pairs[end].value - e.pairs[end - 1].value) <= kEigenGroupingTol) {
      ++end;
    }
    runs.emplace_back(begin, end);
    begin = end;
  }
  return runs;
}

Vector unit_vector(int dim, std::initializer_list<Complex> entries) {
  Vector v(dim);
  int i = 0;
  for (const auto& e : entries) v(i++) = e;
  return v.normalized();
}

}  // namespace

WalkState::WalkState(int n, int dim) : n_(n), dim_(dim), amp_(state_size(n, dim)) {}

WalkState::WalkState(int n, int dim, std::vector<Complex> amp)
    : n_(n), dim_(dim), amp_(std::move(amp)) {
  if (amp_.size() != state_size(n, dim)) {
    throw DomainError("walk state for n=" + std::to_string(n) + ", dim=" + std::to_string(dim) +
                      " needs " + std::to_string(state_size(n, dim)) + " amplitudes, got " +
                      std::to_string(amp_.size()));
  }
}

Vector WalkState::fiber(VertexIndex sigma) const {
  Hypercube(n_).check(sigma);
  Vector v(dim_);
  for (int j = 0; j < dim_; ++j) v(j) = (*this)(sigma, j);
  return v;
}

double WalkState::norm() const {
  double sum = 0.0;
  for (const auto& a : amp_) sum += std::norm(a);
  return std::sqrt(sum);
}

double WalkState::max_distance(const WalkState& other) const {
  if (other.n_ != n_ || other.dim_ != dim_) throw DomainError("walk states have different shapes");
  double worst = 0.0;
  for (std::size_t i = 0; i < amp_.size(); ++i) worst = std::max(worst, std::abs(amp_[i] - other.amp_[i]));
  return worst;
}

WalkState product_state(const PositionVector& v, const Vector& u) {
  const double scale = v.norm() * u.norm();
  if (!(scale > 0.0)) throw DomainError("product_state: zero factor");
  const int dim = static_cast<int>(u.size());
  WalkState out(v.n(), dim);
  for (VertexIndex s = 0; s < v.size(); ++s) {
    for (int j = 0; j < dim; ++j) out(s, j) = v[s] * u(j) / scale;
  }
  return out;
}

WalkState step(const WalkState& state, const CoinSystem& system) {
  check_compatible(state, system);
  const int d = system.dim();
  const int modes = system.modes();

  // Row-major copies so the inner loop order is explicit.
  std::vector<Complex> coins(static_cast<std::size_t>(modes) * d * d);
  for (int k = 0; k < modes; ++k) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) coins[(static_cast<std::size_t>(k) * d + i) * d + j] = system.coin(k)(i, j);
    }
  }

  WalkState out(state.n(), d);
  const auto in = state.amplitudes();
  auto dst = out.amplitudes();
  const auto vertices = static_cast<VertexIndex>(state.vertex_count());
  for (VertexIndex s = 0; s < vertices; ++s) {
    Complex* row = &dst[static_cast<std::size_t>(s) * d];
    for (int k = 0; k < modes; ++k) {
      const Complex* src = &in[static_cast<std::size_t>(s ^ (1u << k)) * d];
      const Complex* c = &coins[static_cast<std::size_t>(k) * d * d];
      for (int i = 0; i < d; ++i) {
        Complex acc = 0.0;
        for (int j = 0; j < d; ++j) acc += c[i * d + j] * src[j];
        row[i] += acc;
      }
    }
  }
  return out;
}

WalkState evolve(WalkState state, const CoinSystem& system, std::uint64_t t) {
  check_compatible(state, system);
  for (std::uint64_t i = 0; i < t; ++i) state = step(state, system);
  return state;
}

double Distribution::max_distance(const Distribution& other) const {
  if (other.probs.size() != probs.size()) throw DomainError("distributions have different sizes");
  double worst = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) worst = std::max(worst, std::abs(probs[i] - other.probs[i]));
  return worst;
}

double Distribution::uniform_deviation() const {
  const double uniform = 1.0 / static_cast<double>(probs.size());
  double worst = 0.0;
  for (double p : probs) worst = std::max(worst, std::abs(p - uniform));
  return worst;
}

Distribution make_distribution(int n, std::vector<double> raw, double tol) {
  Distribution d;
  d.n = n;
  d.total = 0.0;
  for (double p : raw) d.total += p;
  d.normalized = std::abs(d.total - 1.0) <= tol;
  for (double& p : raw) p = std::max(p, 0.0);
  d.probs = std::move(raw);
  return d;
}

Distribution distribution(const WalkState& state, double tol) {
  std::vector<double> raw(state.vertex_count(), 0.0);
  for (VertexIndex s = 0; s < raw.size(); ++s) {
    for (int j = 0; j < state.dim(); ++j) raw[s] += std::norm(state(s, j));
  }
  return make_distribution(state.n(), std::move(raw), tol);
}

ComponentDecomposition decompose(const WalkState& state) {
  std::vector<Complex> buffer(state.amplitudes().begin(), state.amplitudes().end());
  signed_wht_rows(buffer, state.n(), static_cast<std::size_t>(state.dim()), Direction::kForward);
  ComponentDecomposition out{state.n(), state.dim(), {}};
  out.components.reserve(state.vertex_count());
  for (std::size_t tau = 0; tau < state.vertex_count(); ++tau) {
    out.components.push_back(Eigen::Map<const Vector>(&buffer[tau * state.dim()], state.dim()));
  }
  return out;
}

WalkState recompose(const ComponentDecomposition& decomp) {
  WalkState out(decomp.n, decomp.dim);
  if (decomp.components.size() != out.vertex_count()) {
    throw DomainError("decomposition has " + std::to_string(decomp.components.size()) +
                      " components, expected " + std::to_string(out.vertex_count()));
  }
  auto buffer = out.amplitudes();
  for (std::size_t tau = 0; tau < decomp.components.size(); ++tau) {
    const Vector& u = decomp.components[tau];
    if (u.size() != decomp.dim) throw DomainError("component has wrong coin dimension");
    for (int j = 0; j < decomp.dim; ++j) buffer[tau * decomp.dim + j] = u(j);
  }
  signed_wht_rows(buffer, decomp.n, static_cast<std::size_t>(decomp.dim), Direction::kInverse);
  return out;
}

ComponentDecomposition advance_components(const CoinSystem& system,
                                          const ComponentDecomposition& decomp,
                                          std::int64_t t, PowerMethod method) {
  if (t < 0) throw DomainError("negative time " + std::to_string(t));
  if (decomp.n != system.n() || decomp.dim != system.dim() ||
      decomp.components.size() != (std::size_t{1} << (system.n() + 1))) {
    throw DomainError("decomposition does not match the coin system");
  }
  ComponentDecomposition evolved{decomp.n, decomp.dim, {}};
  evolved.components.reserve(decomp.components.size());
  for (std::size_t tau = 0; tau < decomp.components.size(); ++tau) {
    const auto w = weighted_sum(system, static_cast<VertexIndex>(tau));
    Vector u = decomp.components[tau];
    if (method == PowerMethod::kIterated) {
      for (std::int64_t i = 0; i < t; ++i) u = w.matrix * u;
    } else {
      const auto eig = eigendecompose(w);
      Vector acc = Vector::Zero(u.size());
      for (const auto& p : eig.pairs) {
        acc += std::pow(p.value, static_cast<double>(t)) * p.vector.dot(u) * p.vector;
      }
      u = std::move(acc);
    }
    evolved.components.push_back(std::move(u));
  }
  return evolved;
}

Distribution distribution_closed_form(const CoinSystem& system,
                                      const ComponentDecomposition& decomp,
                                      std::int64_t t, PowerMethod method) {
  if (t < 0) throw DomainError("distribution_closed_form: negative time " + std::to_string(t));
  // ||sum_tau <Z_sigma, Zhat_tau> (U_tau)^t u_tau||^2 for every sigma at once.
  return distribution(recompose(advance_components(system, decomp, t, method)));
}

std::vector<Distribution> averaged_distributions(const CoinSystem& system,
                                                 const WalkState& initial,
                                                 std::span<const std::uint64_t> horizons) {
  check_compatible(initial, system);
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < 1) throw DomainError("averaging horizon must be at least 1");
    if (i > 0 && horizons[i] <= horizons[i - 1]) throw DomainError("horizons must be strictly ascending");
  }
  std::vector<Distribution> out;
  if (horizons.empty()) return out;

  std::vector<double> sum(initial.vertex_count(), 0.0);
  WalkState state = initial;
  std::size_t next = 0;
  for (std::uint64_t t = 0; next < horizons.size(); ++t) {
    if (t > 0) state = step(state, system);
    const auto p = distribution(state);
    for (std::size_t s = 0; s < sum.size(); ++s) sum[s] += p.probs[s];
    if (t + 1 == horizons[next]) {
      std::vector<double> avg(sum);
      for (double& a : avg) a /= static_cast<double>(t + 1);
      out.push_back(make_distribution(initial.n(), std::move(avg)));
      ++next;
    }
  }
  return out;
}

Distribution averaged_distribution(const CoinSystem& system, const WalkState& initial,
                                   std::uint64_t horizon) {
  const std::uint64_t horizons[] = {horizon};
  return std::move(averaged_distributions(system, initial, horizons).front());
}

ResolvedComponents resolve_components(const CoinSystem& system, const EigenComponentSpec& spec,
                                      double tol) {
  check_spec_shape(system, spec);
  ResolvedComponents out;
  for (std::size_t tau = 0; tau < spec.components.size(); ++tau) {
    const auto mask = static_cast<VertexIndex>(tau);
    const auto w = weighted_sum(system, mask);
    const auto& choice = spec.components[tau];
    Vector v;
    std::optional<Complex> b = choice.eigenvalue;
    if (const auto* index = std::get_if<std::size_t>(&choice.choice)) {
      const auto eig = eigendecompose(w);
      if (*index >= eig.pairs.size()) {
        throw HypothesisError(mask, "component " + subset_notation(mask) + ": eigenpair index " +
                                        std::to_string(*index) + " out of range");
      }
      v = eig.pairs[*index].vector;
      if (!b) b = eig.pairs[*index].value;
    } else {
      v = std::get<Vector>(choice.choice);
      if (v.size() != system.dim()) {
        throw DomainError("component " + subset_notation(mask) + " has dimension " +
                          std::to_string(v.size()) + ", expected " + std::to_string(system.dim()));
      }
    }

    const double len = v.norm();
    if (len == 0.0) {
      out.vectors.push_back(std::move(v));
      out.eigenvalues.push_back(std::nullopt);
      continue;
    }
    const Vector uv = w.matrix * v;
    if (!b) b = v.dot(uv) / (len * len);
    const double residual = (uv - *b * v).norm() / len;
    out.max_residual = std::max(out.max_residual, residual);
    if (!(residual <= tol)) {
      std::ostringstream os;
      os << "component " << subset_notation(mask) << " (tau=" << tau
         << ") is not an eigenvector of U_" << subset_notation(mask) << " for eigenvalue "
         << *b << ": relative residual " << residual << " > " << tol;
      throw HypothesisError(mask, os.str());
    }
    out.vectors.push_back(std::move(v));
    out.eigenvalues.push_back(b);
  }
  return out;
}

WalkState build_eigenmix_state(const CoinSystem& system, const EigenComponentSpec& spec) {
  auto resolved = resolve_components(system, spec);
  double mass = 0.0;
  for (const auto& v : resolved.vectors) mass += v.squaredNorm();
  if (!(mass > 0.0)) throw DomainError("eigenmix state: every component is zero");
  ComponentDecomposition decomp{system.n(), system.dim(), {}};
  for (auto& v : resolved.vectors) decomp.components.push_back(v / std::sqrt(mass));
  return recompose(decomp);
}

Distribution limit_distribution(const CoinSystem& system, const EigenComponentSpec& spec,
                                const LimitOptions& options) {
  const auto resolved = resolve_components(system, spec, options.residual_tol);
  double mass = 0.0;
  for (const auto& v : resolved.vectors) mass += v.squaredNorm();
  if (!(mass > 0.0)) throw DomainError("limit_distribution: every component is zero");

  struct Pair {
    VertexIndex a, b;
    Complex overlap;
  };
  // Ordered pairs tau1 != tau2 sharing an eigenvalue.
  std::vector<Pair> pairs;
  const auto count = static_cast<VertexIndex>(resolved.vectors.size());
  for (VertexIndex a = 0; a < count; ++a) {
    if (!resolved.eigenvalues[a]) continue;
    for (VertexIndex b = 0; b < count; ++b) {
      if (a == b || !resolved.eigenvalues[b]) continue;
      if (std::abs(*resolved.eigenvalues[a] - *resolved.eigenvalues[b]) > options.grouping_tol) continue;
      pairs.push_back({a, b, resolved.vectors[a].dot(resolved.vectors[b]) / mass});
    }
  }

  const double scale = 1.0 / static_cast<double>(count);
  std::vector<double> raw(count);
  double worst_imag = 0.0;
  for (VertexIndex s = 0; s < count; ++s) {
    Complex acc = 1.0;
    for (const auto& p : pairs) {
      acc += static_cast<double>(diff_parity_sign(s, p.a) * diff_parity_sign(s, p.b)) * p.overlap;
    }
    worst_imag = std::max(worst_imag, std::abs(acc.imag()) * scale);
    raw[s] = acc.real() * scale;
  }
  if (worst_imag > options.imaginary_tol) {
    std::ostringstream os;
    os << "limit_distribution: imaginary residue " << worst_imag << " exceeds "
       << options.imaginary_tol;
    throw NumericalError(os.str());
  }
  return make_distribution(system.n(), std::move(raw));
}

StationaryReport stationary_check(const CoinSystem& system, const WalkState& initial,
                                  std::uint64_t t_max, double tol) {
  check_compatible(initial, system);
  StationaryReport report;
  report.t_max = t_max;
  report.tolerance = tol;
  report.initial_normalized = std::abs(initial.norm() - 1.0) <= kNormTol;

  const auto p0 = distribution(initial);
  report.uniform_deviation = p0.uniform_deviation();
  WalkState state = initial;
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    state = step(state, system);
    report.max_deviation = std::max(report.max_deviation, distribution(state).max_distance(p0));
  }
  report.stationary = report.max_deviation <= tol;
  report.uniform = report.uniform_deviation <= tol;
  return report;
}

EigenComponentSpec builtin_eigenmix(std::string_view id) {
  const Complex i(0.0, 1.0);
  if (id == "3.1") {
    EigenComponentSpec spec{1, 2, {}};
    // U_{} = -swap, U_{0} = [[0,1],[-1,0]], U_{1} = [[0,-1],[1,0]], U_{0,1} = swap.
    spec.components = {
        {unit_vector(2, {1.0, 1.0}), Complex(-1.0, 0.0)},
        {unit_vector(2, {1.0, -i}), -i},
        {unit_vector(2, {1.0, -i}), i},
        {unit_vector(2, {1.0, 1.0}), Complex(1.0, 0.0)},
    };
    return spec;
  }
  if (id == "3.2") {
    EigenComponentSpec spec{1, 4, {}};
    spec.components = {
        {unit_vector(4, {0.0, 0.0, 1.0, 1.0}), Complex(1.0, 0.0)},
        {unit_vector(4, {0.0, 0.0, 1.0, -1.0}), Complex(1.0, 0.0)},
        {unit_vector(4, {1.0, 1.0, 0.0, 0.0}), Complex(-1.0, 0.0)},
        {unit_vector(4, {1.0, -1.0, 0.0, 0.0}), Complex(1.0, 0.0)},
    };
    return spec;
  }
  throw DomainError("unknown built-in example '" + std::string(id) + "' (expected 3.1 or 3.2)");
}

EigenComponentSpec random_eigenmix(const CoinSystem& system, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  EigenComponentSpec spec{system.n(), system.dim(), {}};
  const auto count = static_cast<VertexIndex>(Hypercube(system.n()).vertex_count());
  for (VertexIndex tau = 0; tau < count; ++tau) {
    const auto w = weighted_sum(system, tau);
    const auto eig = eigendecompose(w);
    const auto clusters = eigen_clusters(eig);
    std::uniform_int_distribution<std::size_t> pick(0, clusters.size() - 1);
    const auto [begin, end] = clusters[pick(rng)];
    Vector v = Vector::Zero(system.dim());
    for (std::size_t i = begin; i < end; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v += Complex(re, im) * eig.pairs[i].vector;
    }
    v.normalize();
    const Complex b = v.dot(w.matrix * v);
    spec.components.push_back({std::move(v), b});
  }
  return spec;
}

}  // namespace qbnwalk
