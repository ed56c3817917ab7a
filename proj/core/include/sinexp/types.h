// Copyright 2026 The sinexp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SINEXP_TYPES_H_
#define SINEXP_TYPES_H_

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sinexp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Raised when a caller breaks an operation's precondition (dimension
// mismatch, invalid parameters, infeasible starting point).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a numerical procedure cannot deliver its postcondition.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool AllFinite(const Vector& v) { return v.allFinite(); }

inline void RequireDimension(const Vector& v, Eigen::Index n,
                             const char* what) {
  if (v.size() != n) {
    throw ContractViolation(std::string(what) + ": dimension " +
                            std::to_string(v.size()) + " != expected " +
                            std::to_string(n));
  }
}

inline void RequireFinite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw ContractViolation(std::string(what) + ": non-finite entry");
  }
}

}  // namespace sinexp

#endif  // SINEXP_TYPES_H_
