// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The hiris Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HIRIS_ERROR_HPP
#define HIRIS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hiris {

// Input violates a documented precondition (bad parameter, malformed file,
// unknown config key). The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A well-formed request failed while running (singular covariance, I/O
// failure). The CLI maps this to exit code 2.
class ProcessingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace hiris

#endif  // HIRIS_ERROR_HPP
