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

#include <iosfwd>
#include <string>
#include <vector>

namespace qbnwalk::cli {

/// Process exit codes; stable across versions.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,        // bad flags, unreadable or malformed files
  kDimension = 3,    // shape mismatch or infeasible dimensions
  kInvariant = 4,    // runtime invariant violated or a verification failed
  kHypothesis = 5,   // a coin component is not an eigenvector of its U_tau
};

/// Runs the command line `args` (args[0] is the program name). Data goes to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbnwalk::cli
