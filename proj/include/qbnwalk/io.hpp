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

// File formats. Complex numbers are [re, im] pairs; matrices are row-major
// lists of rows; vertices are bitmask integers.
//
//   coin system : {"n": int, "dim": int, "coins": [matrix, ...]}
//   walk state  : {"n": int, "dim": int, "amplitudes": [[row of d pairs], ...]}
//                 one row per vertex, vertex-major
//   position    : {"n": int, "amplitudes": [pair, ...]}
//   components  : {"n": int, "dim": int, "components": [
//                    {"tau": int, "vector": [pair, ...], "eigenvalue": pair?}
//                  | {"tau": int, "index": int}, ...]}
//
// Distributions are CSV with 17 significant digits.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "qbnwalk/coin.hpp"
#include "qbnwalk/fock.hpp"
#include "qbnwalk/walk.hpp"

namespace qbnwalk::io {

using Json = nlohmann::ordered_json;

/// Malformed or unreadable input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const CoinSystem& system);
Json to_json(const WalkState& state);
Json to_json(const PositionVector& v);
Json to_json(const EigenComponentSpec& spec);

CoinSystem coin_system_from_json(const Json& j);
WalkState walk_state_from_json(const Json& j);
PositionVector position_from_json(const Json& j);
EigenComponentSpec component_spec_from_json(const Json& j);

Json read_json(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline; byte-identical for equal input.
void write_json(const std::filesystem::path& path, const Json& j);

CoinSystem read_coin_system(const std::filesystem::path& path);
WalkState read_walk_state(const std::filesystem::path& path);
EigenComponentSpec read_component_spec(const std::filesystem::path& path);

/// printf("%.17g"): 17 significant digits, exact for doubles.
std::string format_real(double x);

/// `vertex,probability` rows.
void write_snapshot_csv(std::ostream& os, const Distribution& d);
/// Header line `t,vertex,probability` (the first column named `label`).
void write_series_header(std::ostream& os, const std::string& label = "t");
/// Rows `time,vertex,probability` for one time slice.
void write_series_rows(std::ostream& os, const std::string& time, const Distribution& d);

}  // namespace qbnwalk::io
