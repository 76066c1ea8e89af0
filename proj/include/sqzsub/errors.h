// Copyright 2026 The sqzsub Authors
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

#ifndef SQZSUB_ERRORS_H
#define SQZSUB_ERRORS_H

#include <stdexcept>
#include <string>

namespace sqzsub {

/// Malformed or out-of-domain input (bad T, eta, coefficients, config files).
struct InvalidConfig : std::invalid_argument {
    explicit InvalidConfig(const std::string &what) : std::invalid_argument(what) {
    }
};

/// Physically unreachable request, e.g. a target squeezing that no input
/// squeezing can produce after the subtraction losses.
struct InfeasiblePhysics : std::runtime_error {
    explicit InfeasiblePhysics(const std::string &what) : std::runtime_error(what) {
    }
};

/// Singular matrices, Fock truncation overflow, zero-probability normalization.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string &what) : std::runtime_error(what) {
    }
};

}  // namespace sqzsub

#endif
