// Copyright 2026 The Framescale Authors.
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

#ifndef FRAMESCALE_ERROR_HPP_
#define FRAMESCALE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace framescale {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violations: bad sizes, non-finite data, out-of-range knobs.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Refusal to enumerate beyond a configured subset budget.
class SizeLimitExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// Raised by the radial-isotropic solver. Carries the diagnosis: the subset
// whose coefficient mass exceeds its span dimension (0-based, ascending)
// when one was found, and the normalized direction in which t escaped.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, int iterations,
                      std::vector<int> blocking_subset,
                      std::vector<double> divergence_direction)
      : Error(what),
        iterations_(iterations),
        blocking_subset_(std::move(blocking_subset)),
        divergence_direction_(std::move(divergence_direction)) {}

  int iterations() const { return iterations_; }
  const std::vector<int>& blocking_subset() const { return blocking_subset_; }
  const std::vector<double>& divergence_direction() const {
    return divergence_direction_;
  }

 private:
  int iterations_;
  std::vector<int> blocking_subset_;
  std::vector<double> divergence_direction_;
};

}  // namespace framescale

#endif  // FRAMESCALE_ERROR_HPP_
