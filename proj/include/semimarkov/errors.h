// Copyright 2026 The semimarkov Authors
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

#ifndef SEMIMARKOV_ERRORS_H
#define SEMIMARKOV_ERRORS_H

#include <stdexcept>
#include <string>

namespace semimarkov {

/// Raised when a waiting-time or channel spec string is invalid.
struct SpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure fails (non-convergence, instability,
/// singular propagator, imaginary residue above tolerance).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a two-time propagator is requested at a time s where the
/// propagator from 0 to s is not invertible.
struct SingularPropagator : NumericalError {
    SingularPropagator(const std::string& what, double s) : NumericalError(what), time(s) {}
    double time;
};

}  // namespace semimarkov

#endif
