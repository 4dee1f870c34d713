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

#include "qbnwalk/coin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qbnwalk/errors.hpp"

namespace qbnwalk {

namespace {

constexpr double kPi = 3.14159265358979323846;

Matrix identity(int d) { return Matrix::Identity(d, d); }

Check make_check(std::string name, double deviation, double tol) {
  return Check{std::move(name), deviation, tol, deviation <= tol};
}

ValidationReport finish(std::vector<Check> checks) {
  ValidationReport report;
  report.checks = std::move(checks);
  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const Check& c) { return c.pass; });
  return report;
}

std::string describe_failures(const ValidationReport& report) {
  std::ostringstream os;
  for (const auto& c : report.checks) {
    if (!c.pass) os << " [" << c.name << ": deviation " << c.deviation << " > " << c.tolerance << "]";
  }
  return os.str();
}

// Argument in (-pi, pi], with values just above -pi folded onto pi.
double canonical_arg(Complex z) {
  double a = std::arg(z);
  if (a <= -kPi + 1e-9) a = kPi;
  return a;
}

// Rotates v so that its first substantial component is real and positive.
void fix_phase(Vector& v) {
  const double threshold = 1.0 / (2.0 * static_cast<double>(v.size()));
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double mag = std::abs(v(j));
    if (mag * mag >= threshold) {
      v *= std::conj(v(j)) / mag;
      return;
    }
  }
}

}  // namespace

CoinSystem::CoinSystem(int n, std::vector<Matrix> coins)
    : n_(n), dim_(0), coins_(std::move(coins)) {
  check_n(n);
  if (static_cast<int>(coins_.size()) != n + 1) {
    throw DomainError("coin system for n=" + std::to_string(n) + " needs " +
                      std::to_string(n + 1) + " coins, got " +
                      std::to_string(coins_.size()));
  }
  dim_ = static_cast<int>(coins_.front().rows());
  for (const auto& c : coins_) {
    if (c.rows() != dim_ || c.cols() != dim_) {
      throw DomainError("coins must all be square matrices of the same size");
    }
  }
  if (dim_ < n + 1) {
    throw DomainError("coin dimension " + std::to_string(dim_) +
                      " is smaller than n+1 = " + std::to_string(n + 1));
  }
}

double ValidationReport::max_deviation() const {
  double worst = 0.0;
  for (const auto& c : checks) worst = std::max(worst, c.deviation);
  return worst;
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double unitarity_deviation(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const Matrix id = identity(static_cast<int>(u.rows()));
  return std::max(max_abs(u.adjoint() * u - id), max_abs(u * u.adjoint() - id));
}

ValidationReport validate(const CoinSystem& system, double tol) {
  double cross_left = 0.0;
  double cross_right = 0.0;
  Matrix sum = Matrix::Zero(system.dim(), system.dim());
  for (int j = 0; j < system.modes(); ++j) {
    sum += system.coin(j);
    for (int k = 0; k < system.modes(); ++k) {
      if (j == k) continue;
      cross_left = std::max(cross_left, max_abs(system.coin(j).adjoint() * system.coin(k)));
      cross_right = std::max(cross_right, max_abs(system.coin(j) * system.coin(k).adjoint()));
    }
  }
  return finish({
      make_check("coin cross products C_j^* C_k vanish", cross_left, tol),
      make_check("coin cross products C_j C_k^* vanish", cross_right, tol),
      make_check("coin sum is unitary", unitarity_deviation(sum), tol),
  });
}

ValidationReport validate(const ResolutionOfIdentity& r, double tol) {
  if (r.projections.empty()) throw DomainError("empty resolution of the identity");
  const auto d = r.projections.front().rows();
  for (const auto& p : r.projections) {
    if (p.rows() != d || p.cols() != d) {
      throw DomainError("projections must be square matrices of the same size");
    }
  }
  double idempotent = 0.0;
  double selfadjoint = 0.0;
  double orthogonal = 0.0;
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t j = 0; j < r.projections.size(); ++j) {
    const Matrix& p = r.projections[j];
    sum += p;
    idempotent = std::max(idempotent, max_abs(p * p - p));
    selfadjoint = std::max(selfadjoint, max_abs(p - p.adjoint()));
    for (std::size_t k = 0; k < r.projections.size(); ++k) {
      if (j != k) orthogonal = std::max(orthogonal, max_abs(p * r.projections[k]));
    }
  }
  return finish({
      make_check("projections idempotent", idempotent, tol),
      make_check("projections self-adjoint", selfadjoint, tol),
      make_check("projections mutually orthogonal", orthogonal, tol),
      make_check("projections sum to identity",
                 max_abs(sum - identity(static_cast<int>(d))), tol),
  });
}

CoinFactorization factor(const CoinSystem& system, double tol) {
  const auto report = validate(system, tol);
  if (!report.pass) {
    throw DomainError("not a coin operator system:" + describe_failures(report));
  }
  CoinFactorization f;
  f.unitary = Matrix::Zero(system.dim(), system.dim());
  for (const auto& c : system.coins()) {
    f.unitary += c;
    f.resolution.projections.push_back(c * c.adjoint());
  }
  return f;
}

CoinSystem build(const Matrix& unitary, const ResolutionOfIdentity& r, double tol) {
  const double dev = unitarity_deviation(unitary);
  if (!(dev <= tol)) {
    throw DomainError("build: U is not unitary (deviation " + std::to_string(dev) + ")");
  }
  const auto report = validate(r, tol);
  if (!report.pass) {
    throw DomainError("build: not a resolution of the identity:" + describe_failures(report));
  }
  if (r.projections.front().rows() != unitary.rows()) {
    throw DomainError("build: projection and unitary dimensions differ");
  }
  std::vector<Matrix> coins;
  coins.reserve(r.projections.size());
  for (const auto& p : r.projections) coins.push_back(p * unitary);
  return CoinSystem(static_cast<int>(r.projections.size()) - 1, std::move(coins));
}

WeightedCoinSum weighted_sum(const CoinSystem& system, VertexIndex tau) {
  Hypercube(system.n()).check(tau);
  WeightedCoinSum w{tau, Matrix::Zero(system.dim(), system.dim())};
  for (int k = 0; k < system.modes(); ++k) {
    w.matrix += static_cast<double>(membership_sign(tau, k)) * system.coin(k);
  }
  return w;
}

EigenDecomposition eigendecompose(const WeightedCoinSum& w, double tol) {
  const Matrix& u = w.matrix;
  const double unitary_dev = unitarity_deviation(u);
  if (!(unitary_dev <= tol)) {
    throw DomainError("eigendecompose: U_" + subset_notation(w.tau) +
                      " is not unitary (deviation " + std::to_string(unitary_dev) + ")");
  }
  // A unitary matrix is normal, so its complex Schur form is diagonal and
  // the Schur vectors are already an orthonormal eigenbasis.
  Eigen::ComplexSchur<Matrix> schur(u);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("eigendecompose: Schur iteration did not converge for U_" +
                         subset_notation(w.tau));
  }
  const Matrix& q = schur.matrixU();
  const Matrix& t = schur.matrixT();
  const auto d = u.rows();

  std::vector<Eigen::Index> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return canonical_arg(t(a, a)) < canonical_arg(t(b, b));
  });

  EigenDecomposition out;
  for (auto i : order) out.pairs.push_back({t(i, i), q.col(i)});

  // Re-orthonormalize inside each cluster of (numerically) equal eigenvalues.
  for (std::size_t begin = 0; begin < out.pairs.size();) {
    std::size_t end = begin + 1;
    while (end < out.pairs.size() &&
           std::abs(out.pairs[end].value - out.pairs[end - 1].value) <= kEigenGroupingTol) {
      ++end;
    }
    for (std::size_t i = begin; i < end; ++i) {
      Vector& v = out.pairs[i].vector;
      for (std::size_t j = begin; j < i; ++j) {
        const Vector& e = out.pairs[j].vector;
        v -= e.dot(v) * e;
      }
      v.normalize();
    }
    begin = end;
  }

  for (auto& p : out.pairs) {
    fix_phase(p.vector);
    p.value = p.vector.dot(u * p.vector);  // Rayleigh quotient
    out.max_residual = std::max(out.max_residual, (u * p.vector - p.value * p.vector).norm());
    out.max_circle_deviation = std::max(out.max_circle_deviation, std::abs(std::abs(p.value) - 1.0));
  }
  Matrix basis(d, d);
  for (Eigen::Index i = 0; i < d; ++i) basis.col(i) = out.pairs[i].vector;
  out.max_orthonormality_deviation = max_abs(basis.adjoint() * basis - identity(static_cast<int>(d)));

  if (out.max_residual > tol || out.max_circle_deviation > tol ||
      out.max_orthonormality_deviation > tol) {
    std::ostringstream os;
    os << "eigendecompose: U_" << subset_notation(w.tau)
       << " residual " << out.max_residual << ", |b|-1 " << out.max_circle_deviation
       << ", orthonormality " << out.max_orthonormality_deviation
       << " (tolerance " << tol << ")";
    throw NumericalError(os.str());
  }
  return out;
}

std::vector<int> default_partition(int modes, int d) {
  if (modes < 1 || d < modes) {
    throw DomainError("cannot split dimension " + std::to_string(d) + " into " +
                      std::to_string(modes) + " nonempty blocks");
  }
  std::vector<int> sizes(modes, d / modes);
  for (int k = 0; k < d % modes; ++k) ++sizes[k];
  return sizes;
}

CoinSystem random_system(int n, int d, std::uint64_t seed,
                         std::optional<std::vector<int>> partition_sizes) {
  check_n(n);
  const int modes = n + 1;
  std::vector<int> sizes;
  if (partition_sizes) {
    sizes = *partition_sizes;
    const bool positive = std::all_of(sizes.begin(), sizes.end(), [](int s) { return s > 0; });
    if (static_cast<int>(sizes.size()) != modes || !positive ||
        std::accumulate(sizes.begin(), sizes.end(), 0) != d) {
      throw DomainError("partition must be " + std::to_string(modes) +
                        " positive block sizes summing to " + std::to_string(d));
    }
  } else {
    sizes = default_partition(modes, d);
  }

  std::mt19937_64 rng(seed);
  const Matrix u = haar_unitary(d, rng);
  ResolutionOfIdentity r;
  int offset = 0;
  for (int size : sizes) {
    Matrix p = Matrix::Zero(d, d);
    for (int i = offset; i < offset + size; ++i) p(i, i) = 1.0;
    r.projections.push_back(std::move(p));
    offset += size;
  }
  return build(u, r);
}

CoinSystem builtin_example(std::string_view id) {
  if (id == "3.1") {
    Matrix c0 = Matrix::Zero(2, 2);
    Matrix c1 = Matrix::Zero(2, 2);
    c0(0, 1) = 1.0;
    c1(1, 0) = 1.0;
    return CoinSystem(1, {c0, c1});
  }
  if (id == "3.2") {
    Matrix c0 = Matrix::Zero(4, 4);
    Matrix c1 = Matrix::Zero(4, 4);
    c0(0, 0) = c0(1, 1) = 1.0;
    c1(2, 2) = c1(3, 3) = -1.0;
    return CoinSystem(1, {c0, c1});
  }
  throw DomainError("unknown built-in example '" + std::string(id) + "' (expected 3.1 or 3.2)");
}

}  // namespace qbnwalk
