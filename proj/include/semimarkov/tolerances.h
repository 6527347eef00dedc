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

#ifndef SEMIMARKOV_TOLERANCES_H
#define SEMIMARKOV_TOLERANCES_H

namespace semimarkov {

/// Canonical numerical tolerances shared by the library and its tests.
struct Tolerances {
    /// Roots closer than root_radius * (1 + |z|) are always one multiple root.
    double root_radius = 1e-7;
    /// Wider clusters (up to probe_radius * (1 + |z|)) are merged only when the
    /// polynomial is indistinguishable from one with a multiple root there.
    double multiplicity_probe_radius = 0.1;
    int newton_max_iterations = 100;
    /// evaluate() rejects |imag| > imag_cap * (1 + |real|).
    double imag_cap = 1e-9;
    /// Agreement required between inversion and numerical Bromwich quadrature.
    double quadrature_check = 1e-8;
    /// Extrema with |value| below this are zero-touching minima.
    double zero_touch = 1e-12;
    /// Positivity tolerance on density-matrix eigenvalues.
    double positivity = 1e-12;
    /// Complete-positivity tolerance on Choi components.
    double choi = 1e-12;
};

inline constexpr Tolerances kTolerances{};

}  // namespace semimarkov

#endif
