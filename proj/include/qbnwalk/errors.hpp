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

#include <stdexcept>
#include <string>

namespace qbnwalk {

/// Argument outside the operation's domain (bad index, shape mismatch, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not meet its residual contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input does not satisfy a required hypothesis (e.g. a chosen coin
/// component is not an eigenvector of its weighted sum).
class HypothesisError : public std::runtime_error {
 public:
  HypothesisError(unsigned tau, const std::string& what)
      : std::runtime_error(what), tau_(tau) {}
  unsigned tau() const { return tau_; }

 private:
  unsigned tau_;
};

}  // namespace qbnwalk
