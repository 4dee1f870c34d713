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

#include "qbnwalk/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qbnwalk/coin.hpp"
#include "qbnwalk/errors.hpp"
#include "qbnwalk/fock.hpp"
#include "qbnwalk/io.hpp"
#include "qbnwalk/walk.hpp"

namespace qbnwalk::cli {

namespace {

constexpr std::uint64_t kMaxSteps = std::uint64_t{1} << 16;

/// A runtime invariant failed (norm drift, invalid coins, failed check).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int n = -1;
  int dim = -1;
  std::string coins;
  std::string state;
  std::string spec;
  std::string out;
  std::uint64_t steps = 0;
  std::uint64_t horizon = 4096;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  bool closed_form = false;

  // example
  std::string id;
  // random-coins
  std::vector<int> partition;
  // state
  std::optional<VertexIndex> vertex;
  std::optional<VertexIndex> hadamard;
  std::string position;
  std::string position_out;
  bool random_position = false;
  int coin_index = 0;
  bool random_coin = false;
};

// Writes to --out when given, otherwise to the command's output stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw io::ParseError("cannot write " + path);
    }
    os_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

void require_steps(std::uint64_t t, const char* what) {
  if (t > kMaxSteps) {
    throw DomainError(std::string(what) + " is capped at " + std::to_string(kMaxSteps));
  }
}

void check_coin_system(const CoinSystem& system, double tol) {
  const auto report = validate(system, tol);
  if (!report.pass) {
    std::ostringstream os;
    os << "coin file is not a coin operator system:";
    for (const auto& c : report.checks) {
      if (!c.pass) os << " " << c.name << " (deviation " << c.deviation << ")";
    }
    throw InvariantError(os.str());
  }
}

void check_matches(const WalkState& state, const CoinSystem& system) {
  if (state.n() != system.n() || state.dim() != system.dim()) {
    std::ostringstream os;
    os << "state (n=" << state.n() << ", dim=" << state.dim() << ") and coins (n=" << system.n()
       << ", dim=" << system.dim() << ") disagree";
    throw DomainError(os.str());
  }
}

void check_unit(const WalkState& state, double tol) {
  const double norm = state.norm();
  if (!(std::abs(norm - 1.0) <= tol)) {
    throw InvariantError("state norm " + io::format_real(norm) + " differs from 1 by more than " +
                         io::format_real(tol));
  }
}

void check_distribution(const Distribution& d, std::uint64_t t) {
  if (!d.normalized) {
    throw InvariantError("probabilities at t=" + std::to_string(t) + " sum to " +
                         io::format_real(d.total));
  }
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  require_steps(cfg.steps, "--steps");
  const double tol = cfg.tol.value_or(1e-9);
  const auto system = io::read_coin_system(cfg.coins);
  auto state = io::read_walk_state(cfg.state);
  check_matches(state, system);
  check_coin_system(system, kValidationTol);
  check_unit(state, tol);

  Sink sink(cfg.out, out);
  auto& os = sink.stream();
  io::write_series_header(os);
  if (cfg.closed_form) {
    auto components = decompose(state);
    for (std::uint64_t t = 0; t <= cfg.steps; ++t) {
      if (t > 0) components = advance_components(system, components, 1);
      const auto d = distribution_closed_form(system, components, 0);
      check_distribution(d, t);
      io::write_series_rows(os, std::to_string(t), d);
    }
  } else {
    for (std::uint64_t t = 0; t <= cfg.steps; ++t) {
      if (t > 0) state = step(state, system);
      const auto d = distribution(state, tol);
      check_distribution(d, t);
      io::write_series_rows(os, std::to_string(t), d);
    }
  }
  return kOk;
}

struct ReportBuilder {
  io::Json checks = io::Json::array();
  bool pass = true;

  void add(const std::string& name, const std::string& property, double deviation, double tol) {
    const bool ok = deviation <= tol;
    pass = pass && ok;
    checks.push_back(io::Json{{"name", name},
                              {"property", property},
                              {"deviation", deviation},
                              {"tolerance", tol},
                              {"pass", ok}});
  }
  void add(const std::string& name, const std::string& property, bool ok) {
    pass = pass && ok;
    checks.push_back(io::Json{{"name", name}, {"property", property}, {"pass", ok}});
  }
};

void basis_suite(int n, double tol, ReportBuilder& report) {
  Hypercube g(n);
  std::vector<PositionVector> hat;
  for (VertexIndex s = 0; s < g.vertex_count(); ++s) hat.push_back(hadamard_vector(n, s));
  double gram = 0.0;
  double eigen = 0.0;
  for (VertexIndex a = 0; a < g.vertex_count(); ++a) {
    for (VertexIndex b = 0; b < g.vertex_count(); ++b) {
      gram = std::max(gram, std::abs(inner(hat[a], hat[b]) - (a == b ? 1.0 : 0.0)));
    }
    for (int k = 0; k < g.modes(); ++k) {
      eigen = std::max(eigen, apply_shift(k, hat[a]).max_distance(
                                  static_cast<double>(membership_sign(a, k)) * hat[a]));
    }
  }
  double fixed = 0.0;
  const auto& star = hat[g.full()];
  for (int k = 0; k < g.modes(); ++k) fixed = std::max(fixed, apply_shift(k, star).max_distance(star));
  report.add("hadamard-gram", "hadamard vectors form an orthonormal basis", gram, tol);
  report.add("hadamard-shift-eigen", "shift(k) Zhat_s = eps_s(k) Zhat_s", eigen, tol);
  report.add("common-fixed-point", "every shift fixes Zhat of the full set", fixed, tol);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<CoinSystem> system;
  if (!cfg.coins.empty()) system = io::read_coin_system(cfg.coins);
  int n = cfg.n;
  if (system) {
    if (n >= 0 && n != system->n()) {
      throw DomainError("--n " + std::to_string(n) + " disagrees with the coin file (n=" +
                        std::to_string(system->n()) + ")");
    }
    n = system->n();
  }
  if (n < 0) throw io::ParseError("verify needs --n or --coins");
  check_n(n);
  require_steps(cfg.steps, "--steps");

  ReportBuilder report;
  if (n <= 8) {
    const auto car = verify_car(n, cfg.tol.value_or(kAmplitudeTol));
    for (const auto& r : car.relations) {
      report.add("car: " + r.name, "equal-time anticommutation relations", r.max_deviation, car.tolerance);
    }
    basis_suite(n, cfg.tol.value_or(kAmplitudeTol), report);
  } else {
    err << "note: operator suites run only for n <= 8; skipped for n=" << n << '\n';
  }

  if (system) {
    const double tol = cfg.tol.value_or(kValidationTol);
    for (const auto& c : validate(*system, tol).checks) {
      report.add("coin: " + c.name, "coin operator system definition", c.deviation, tol);
    }
    double worst = 0.0;
    for (VertexIndex tau = 0; tau < Hypercube(n).vertex_count(); ++tau) {
      worst = std::max(worst, unitarity_deviation(weighted_sum(*system, tau).matrix));
    }
    report.add("weighted-sum-unitary", "every eps-weighted coin sum is unitary", worst, tol);
  }

  io::Json stationary;
  if (!cfg.state.empty()) {
    if (!system) throw io::ParseError("--state requires --coins");
    const auto state = io::read_walk_state(cfg.state);
    check_matches(state, *system);
    const std::uint64_t t_max = cfg.steps > 0 ? cfg.steps : 128;
    const auto r = stationary_check(*system, state, t_max, cfg.tol.value_or(kNormTol));
    report.add("stationary", "P_t equals P_0 for all t <= t_max", r.max_deviation, r.tolerance);
    stationary = io::Json{{"t_max", r.t_max},
                          {"max_deviation", r.max_deviation},
                          {"stationary", r.stationary},
                          {"uniform_deviation", r.uniform_deviation},
                          {"uniform", r.uniform}};
  }

  io::Json doc{{"n", n}, {"checks", report.checks}};
  if (!stationary.is_null()) doc["stationary"] = stationary;
  doc["pass"] = report.pass;
  Sink sink(cfg.out, out);
  sink.stream() << doc.dump(2) << '\n';
  if (!report.pass) {
    for (const auto& c : report.checks) {
      if (!c["pass"].get<bool>()) err << "FAILED: " << c["name"].get<std::string>() << '\n';
    }
  }
  return report.pass ? kOk : kInvariant;
}

std::vector<std::uint64_t> horizon_ladder(std::uint64_t horizon) {
  std::vector<std::uint64_t> ladder;
  for (std::uint64_t t = 1; t < horizon; t *= 2) ladder.push_back(t);
  ladder.push_back(horizon);
  return ladder;
}

int cmd_average(const RunConfig& cfg, std::ostream& out) {
  if (cfg.horizon < 1) throw DomainError("--horizon must be at least 1");
  require_steps(cfg.horizon, "--horizon");
  if (cfg.spec.empty() == cfg.state.empty()) {
    throw io::ParseError("average needs exactly one of --spec or --state");
  }
  const auto system = io::read_coin_system(cfg.coins);
  check_coin_system(system, kValidationTol);

  std::optional<EigenComponentSpec> spec;
  std::optional<WalkState> initial;
  if (!cfg.spec.empty()) {
    spec = io::read_component_spec(cfg.spec);
    initial = build_eigenmix_state(system, *spec);
  } else {
    initial = io::read_walk_state(cfg.state);
    check_matches(*initial, system);
    check_unit(*initial, cfg.tol.value_or(1e-9));
  }

  const auto ladder = horizon_ladder(cfg.horizon);
  const auto averages = averaged_distributions(system, *initial, ladder);
  std::optional<Distribution> limit;
  if (spec) {
    LimitOptions options;
    if (cfg.tol) options.residual_tol = *cfg.tol;
    limit = limit_distribution(system, *spec, options);
  }

  Sink sink(cfg.out, out);
  auto& os = sink.stream();
  io::write_series_header(os, "T");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    check_distribution(averages[i], ladder[i]);
    io::write_series_rows(os, std::to_string(ladder[i]), averages[i]);
  }
  if (limit) io::write_series_rows(os, "limit", *limit);
  return kOk;
}

int cmd_random_coins(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n < 0 || cfg.dim < 0) throw io::ParseError("random-coins needs --n and --dim");
  check_n(cfg.n);
  if (cfg.dim < cfg.n + 1) {
    throw DomainError("--dim " + std::to_string(cfg.dim) + " is smaller than n+1 = " +
                      std::to_string(cfg.n + 1));
  }
  std::optional<std::vector<int>> sizes;
  if (!cfg.partition.empty()) sizes = cfg.partition;
  const auto system = random_system(cfg.n, cfg.dim, cfg.seed, sizes);
  if (cfg.out.empty()) {
    out << io::to_json(system).dump(2) << '\n';
  } else {
    io::write_json(cfg.out, io::to_json(system));
  }
  return kOk;
}

int cmd_example(const RunConfig& cfg, std::ostream& out) {
  if (cfg.id != "3.1" && cfg.id != "3.2") {
    throw io::ParseError("unknown example id '" + cfg.id + "' (expected 3.1 or 3.2)");
  }
  const std::filesystem::path dir = cfg.out.empty() ? "." : cfg.out;
  std::filesystem::create_directories(dir);
  const auto system = builtin_example(cfg.id);
  const auto spec = builtin_eigenmix(cfg.id);
  const std::string stem = "example-" + cfg.id;

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& suffix, const io::Json& j) {
    const auto path = dir / (stem + suffix);
    io::write_json(path, j);
    written.push_back(path);
  };
  emit("-coins.json", io::to_json(system));
  emit("-spec.json", io::to_json(spec));
  if (cfg.id == "3.2") emit("-state.json", io::to_json(build_eigenmix_state(system, spec)));
  for (const auto& p : written) out << p.string() << '\n';
  return kOk;
}

int cmd_state(const RunConfig& cfg, std::ostream& out) {
  WalkState state(0, 1);
  if (!cfg.spec.empty()) {
    if (cfg.coins.empty()) throw io::ParseError("--spec requires --coins");
    const auto system = io::read_coin_system(cfg.coins);
    state = build_eigenmix_state(system, io::read_component_spec(cfg.spec));
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_complex = [&] {
      const double re = gauss(rng);
      const double im = gauss(rng);
      return Complex(re, im);
    };

    std::optional<PositionVector> position;
    const int sources = (cfg.vertex ? 1 : 0) + (cfg.hadamard ? 1 : 0) +
                        (cfg.position.empty() ? 0 : 1) + (cfg.random_position ? 1 : 0);
    if (sources != 1) {
      throw io::ParseError("state needs exactly one of --vertex, --hadamard, --position, --random, or --spec");
    }
    if (!cfg.position.empty()) {
      position = io::position_from_json(io::read_json(cfg.position));
    } else {
      if (cfg.n < 0) throw io::ParseError("state needs --n");
      Hypercube g(cfg.n);
      if (cfg.vertex) {
        g.check(*cfg.vertex);
        position = PositionVector::basis(cfg.n, *cfg.vertex);
      } else if (cfg.hadamard) {
        position = hadamard_vector(cfg.n, *cfg.hadamard);
      } else {
        position = PositionVector(cfg.n);
        for (auto& a : position->amplitudes()) a = random_complex();
      }
    }
    if (cfg.n >= 0 && cfg.n != position->n()) throw DomainError("--n disagrees with the position file");

    const int dim = cfg.dim > 0 ? cfg.dim : position->n() + 1;
    if (dim < position->n() + 1) throw DomainError("--dim must be at least n+1");
    Vector coin = Vector::Zero(dim);
    if (cfg.random_coin) {
      for (int j = 0; j < dim; ++j) coin(j) = random_complex();
    } else {
      if (cfg.coin_index < 0 || cfg.coin_index >= dim) throw DomainError("--coin index out of range");
      coin(cfg.coin_index) = 1.0;
    }
    if (!cfg.position_out.empty()) io::write_json(cfg.position_out, io::to_json(*position));
    state = product_state(*position, coin);
  }
  if (cfg.out.empty()) {
    out << io::to_json(state).dump(2) << '\n';
  } else {
    io::write_json(cfg.out, io::to_json(state));
  }
  return kOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--out", cfg.out, "Output path");
}

void add_tol(CLI::App* sub, RunConfig& cfg) {
  sub->add_option_function<double>(
         "--tol", [&cfg](double t) { cfg.tol = t; }, "Tolerance override")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coined quantum walks on hypercubes driven by quantum Bernoulli noises", "qbnwalk"};
  app.set_config("--config", "", "TOML/INI file with option defaults (flags take precedence)");
  app.require_subcommand(1);
  RunConfig cfg;

  auto* simulate = app.add_subcommand("simulate", "Evolve a state and emit t,vertex,probability rows");
  simulate->add_option("--coins", cfg.coins, "Coin system file")->required();
  simulate->add_option("--state", cfg.state, "Initial state file")->required();
  simulate->add_option("--steps", cfg.steps, "Number of steps T (rows for t = 0..T)");
  simulate->add_flag("--closed-form", cfg.closed_form, "Use the closed-form distribution instead of direct evolution");
  add_tol(simulate, cfg);
  add_common(simulate, cfg);

  auto* verify = app.add_subcommand("verify", "Run operator, basis, coin, and stationarity checks");
  verify->add_option("--n", cfg.n, "Hypercube parameter n (graph dimension n+1)");
  verify->add_option("--coins", cfg.coins, "Coin system file");
  verify->add_option("--state", cfg.state, "State for the stationarity check");
  verify->add_option("--steps", cfg.steps, "Stationarity horizon (default 128)");
  add_tol(verify, cfg);
  add_common(verify, cfg);

  auto* average = app.add_subcommand("average", "Emit T-averaged distributions and the analytic limit");
  average->add_option("--coins", cfg.coins, "Coin system file")->required();
  average->add_option("--spec", cfg.spec, "Eigen-component spec file");
  average->add_option("--state", cfg.state, "Initial state file");
  average->add_option("--horizon", cfg.horizon, "Largest averaging horizon");
  add_tol(average, cfg);
  add_common(average, cfg);

  auto* random_coins = app.add_subcommand("random-coins", "Write a seeded random coin system");
  random_coins->add_option("--n", cfg.n, "Hypercube parameter n")->required();
  random_coins->add_option("--dim", cfg.dim, "Coin dimension")->required();
  random_coins->add_option("--seed", cfg.seed, "RNG seed");
  random_coins->add_option("--partition", cfg.partition, "Block sizes of the projections")->delimiter(',');
  add_common(random_coins, cfg);

  auto* example = app.add_subcommand("example", "Write the files of a worked example (3.1 or 3.2)");
  example->add_option("--id", cfg.id, "Example id")->required();
  example->add_option("--out", cfg.out, "Output directory");

  auto* state = app.add_subcommand("state", "Build an initial state file");
  state->add_option("--n", cfg.n, "Hypercube parameter n");
  state->add_option("--dim", cfg.dim, "Coin dimension (default n+1)");
  state->add_option_function<VertexIndex>("--vertex", [&cfg](VertexIndex v) { cfg.vertex = v; }, "Position Z_s");
  state->add_option_function<VertexIndex>("--hadamard", [&cfg](VertexIndex v) { cfg.hadamard = v; }, "Position Zhat_s");
  state->add_option("--position", cfg.position, "Position vector file");
  state->add_flag("--random", cfg.random_position, "Random position vector");
  state->add_option("--coin", cfg.coin_index, "Coin basis vector e_j (default 0)");
  state->add_flag("--coin-random", cfg.random_coin, "Random coin vector");
  state->add_option("--seed", cfg.seed, "RNG seed for random parts");
  state->add_option("--coins", cfg.coins, "Coin system file (with --spec)");
  state->add_option("--spec", cfg.spec, "Eigen-component spec: build the eigenmix state");
  state->add_option("--position-out", cfg.position_out, "Also write the position vector here");
  add_common(state, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(cfg, out);
    if (*verify) return cmd_verify(cfg, out, err);
    if (*average) return cmd_average(cfg, out);
    if (*random_coins) return cmd_random_coins(cfg, out);
    if (*example) return cmd_example(cfg, out);
    if (*state) return cmd_state(cfg, out);
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << '\n';
    return kHypothesis;
  } catch (const InvariantError& e) {
    err << "error: " << e.what() << '\n';
    return kInvariant;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kInvariant;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDimension;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace qbnwalk::cli
