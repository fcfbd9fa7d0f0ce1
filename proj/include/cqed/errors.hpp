// Copyright 2026 The cqedkit Authors
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

#ifndef CQED_ERRORS_HPP
#define CQED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cqed {

/// Invalid argument, malformed file, or violated precondition.
/// The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A least-squares fit that did not converge or is degenerate (exit code 3).
class FitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Eigen-solver failure or insufficient basis convergence (exit code 4).
class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string &message) {
    if (!condition) {
        throw InputError(message);
    }
}

}  // namespace detail

}  // namespace cqed

#endif  // CQED_ERRORS_HPP
