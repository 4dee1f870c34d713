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

#include "qbnwalk/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qbnwalk/errors.hpp"

namespace qbnwalk::io {

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("expected a complex number as [re, im], got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const Json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ParseError("expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != dim) {
      throw ParseError("matrix row " + std::to_string(r) + " does not have " + std::to_string(dim) + " entries");
    }
    for (int c = 0; c < dim; ++c) m(r, c) = complex_from(j[r][c]);
  }
  return m;
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Vector vector_from(const Json& j) {
  if (!j.is_array()) throw ParseError("expected a list of [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from(j[i]);
  return v;
}

int int_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_number_integer()) {
    throw ParseError(std::string("missing integer field \"") + key + "\"");
  }
  return j[key].get<int>();
}

const Json& array_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ParseError(std::string("missing list field \"") + key + "\"");
  }
  return j[key];
}

}  // namespace

Json to_json(const CoinSystem& system) {
  Json coins = Json::array();
  for (const auto& c : system.coins()) coins.push_back(matrix_json(c));
  return Json{{"n", system.n()}, {"dim", system.dim()}, {"coins", std::move(coins)}};
}

Json to_json(const WalkState& state) {
  Json rows = Json::array();
  for (VertexIndex s = 0; s < state.vertex_count(); ++s) {
    Json row = Json::array();
    for (int j = 0; j < state.dim(); ++j) row.push_back(complex_json(state(s, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"n", state.n()}, {"dim", state.dim()}, {"amplitudes", std::move(rows)}};
}

Json to_json(const PositionVector& v) {
  Json amps = Json::array();
  for (const auto& a : v.amplitudes()) amps.push_back(complex_json(a));
  return Json{{"n", v.n()}, {"amplitudes", std::move(amps)}};
}

Json to_json(const EigenComponentSpec& spec) {
  Json comps = Json::array();
  for (std::size_t tau = 0; tau < spec.components.size(); ++tau) {
    const auto& c = spec.components[tau];
    Json entry{{"tau", tau}};
    if (const auto* index = std::get_if<std::size_t>(&c.choice)) {
      entry["index"] = *index;
    } else {
      entry["vector"] = vector_json(std::get<Vector>(c.choice));
    }
    if (c.eigenvalue) entry["eigenvalue"] = complex_json(*c.eigenvalue);
    comps.push_back(std::move(entry));
  }
  return Json{{"n", spec.n}, {"dim", spec.dim}, {"components", std::move(comps)}};
}

CoinSystem coin_system_from_json(const Json& j) {
  const int n = int_field(j, "n");
  const int dim = int_field(j, "dim");
  if (dim < 1) throw ParseError("\"dim\" must be positive");
  const Json& coins = array_field(j, "coins");
  std::vector<Matrix> mats;
  for (const auto& c : coins) mats.push_back(matrix_from(c, dim));
  return CoinSystem(n, std::move(mats));
}

WalkState walk_state_from_json(const Json& j) {
  const int n = int_field(j, "n");
  const int dim = int_field(j, "dim");
  check_n(n);
  if (dim < 1) throw ParseError("\"dim\" must be positive");
  const Json& rows = array_field(j, "amplitudes");
  std::vector<Complex> amp;
  for (const auto& row : rows) {
    // Either one row of d pairs per vertex or a flat list of pairs.
    if (row.is_array() && !row.empty() && row[0].is_array()) {
      if (static_cast<int>(row.size()) != dim) {
        throw ParseError("state row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(dim));
      }
      for (const auto& z : row) amp.push_back(complex_from(z));
    } else {
      amp.push_back(complex_from(row));
    }
  }
  return WalkState(n, dim, std::move(amp));
}

PositionVector position_from_json(const Json& j) {
  const int n = int_field(j, "n");
  const Json& amps = array_field(j, "amplitudes");
  std::vector<Complex> amp;
  for (const auto& z : amps) amp.push_back(complex_from(z));
  return PositionVector(n, std::move(amp));
}

EigenComponentSpec component_spec_from_json(const Json& j) {
  EigenComponentSpec spec;
  spec.n = int_field(j, "n");
  spec.dim = int_field(j, "dim");
  check_n(spec.n);
  const std::size_t count = std::size_t{1} << (spec.n + 1);
  std::vector<std::optional<ComponentChoice>> slots(count);
  for (const auto& entry : array_field(j, "components")) {
    const int tau = int_field(entry, "tau");
    if (tau < 0 || static_cast<std::size_t>(tau) >= count) {
      throw ParseError("component tau=" + std::to_string(tau) + " out of range");
    }
    if (slots[tau]) throw ParseError("duplicate component tau=" + std::to_string(tau));
    ComponentChoice choice{std::size_t{0}, std::nullopt};
    if (entry.contains("vector")) {
      choice.choice = vector_from(entry["vector"]);
    } else if (entry.contains("index") && entry["index"].is_number_unsigned()) {
      choice.choice = entry["index"].get<std::size_t>();
    } else {
      throw ParseError("component tau=" + std::to_string(tau) + " needs \"vector\" or \"index\"");
    }
    if (entry.contains("eigenvalue")) choice.eigenvalue = complex_from(entry["eigenvalue"]);
    slots[tau] = std::move(choice);
  }
  for (std::size_t tau = 0; tau < count; ++tau) {
    if (!slots[tau]) throw ParseError("missing component tau=" + std::to_string(tau));
    spec.components.push_back(std::move(*slots[tau]));
  }
  return spec;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

namespace {

template <class F>
auto parse_file(const std::filesystem::path& path, F&& convert) {
  const Json j = read_json(path);
  try {
    return convert(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace

CoinSystem read_coin_system(const std::filesystem::path& path) {
  return parse_file(path, coin_system_from_json);
}

WalkState read_walk_state(const std::filesystem::path& path) {
  return parse_file(path, walk_state_from_json);
}

EigenComponentSpec read_component_spec(const std::filesystem::path& path) {
  return parse_file(path, component_spec_from_json);
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_snapshot_csv(std::ostream& os, const Distribution& d) {
  os << "vertex,probability\n";
  for (std::size_t s = 0; s < d.probs.size(); ++s) os << s << ',' << format_real(d.probs[s]) << '\n';
}

void write_series_header(std::ostream& os, const std::string& label) {
  os << label << ",vertex,probability\n";
}

void write_series_rows(std::ostream& os, const std::string& time, const Distribution& d) {
  for (std::size_t s = 0; s < d.probs.size(); ++s) {
    os << time << ',' << s << ',' << format_real(d.probs[s]) << '\n';
  }
}

}  // namespace qbnwalk::io
