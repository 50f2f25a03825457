// Copyright 2026 The Authors.
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

#ifndef SMI_ERRORS_HPP_
#define SMI_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace smi {

// Precondition violations (bad shapes, out-of-range indices, duplicate
// commits) throw std::invalid_argument. The two types below carry the
// failure classes that the CLI maps onto distinct exit codes.

// Malformed run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Singular or otherwise unusable matrices.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace smi

#endif  // SMI_ERRORS_HPP_
