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

#ifndef SEMIMARKOV_RENEWAL_H
#define SEMIMARKOV_RENEWAL_H

#include <map>
#include <mutex>
#include <vector>

#include "semimarkov/poly_laplace.h"
#include "semimarkov/waiting_time.h"

namespace semimarkov {

inline constexpr int kDefaultMaxJumps = 512;

/// Probability of exactly n renewals in [0, t]: p^_n = g^ f^^n.
ExpPolyFunction jump_probability(const HypoExpWTD& w, int n);

/// Jump-count law truncated at n_max. The closed forms p(n) are cached
/// lazily; for distinct rates their pole coefficients grow quickly with n, so
/// distribution() evaluates the whole law by uniformization instead.
class JumpCountLaw {
   public:
    explicit JumpCountLaw(HypoExpWTD wtd, int n_max = kDefaultMaxJumps);

    const HypoExpWTD& wtd() const { return wtd_; }
    int n_max() const { return n_max_; }

    /// Throws std::out_of_range for n outside [0, n_max].
    const ExpPolyFunction& p(int n) const;
    /// sum_{n <= n_top} p_n(t) from the closed forms.
    double cumulative(int n_top, double t) const;
    /// p_0(t) .. p_{n_max}(t) by uniformization of the (count, stage) chain;
    /// entries are nonnegative and the Poisson tail is below tol.
    std::vector<double> distribution(double t, double tol = 1e-14) const;

   private:
    HypoExpWTD wtd_;
    int n_max_;
    mutable std::mutex mutex_;
    mutable std::map<int, ExpPolyFunction> cache_;
};

/// Probability of an even minus an odd number of jumps.
ExpPolyFunction even_odd_difference(const HypoExpWTD& w, const Tolerances& tol = kTolerances);

/// E[mu^N(t)] and its time derivative.
struct GeneratingFunction {
    double mu = 0;
    ExpPolyFunction value;
    ExpPolyFunction derivative;
};

/// Throws SpecError for mu outside [-1, 1].
GeneratingFunction generating_function(const HypoExpWTD& w, double mu, const Tolerances& tol = kTolerances);

/// E[mu^N(t)] by uniformization of the stage chain at the fastest rate, with
/// the Poisson tail bounded below tol. Throws NumericalError when the bound
/// is not reached within n_max terms.
double series_backend(const HypoExpWTD& w, double mu, double t, double tol, int n_max = kDefaultMaxJumps);

enum class ExtremumKind { kMax, kMin, kZeroCrossing };

struct Extremum {
    double t;
    double value;
    /// Reported classification; zero-touching extrema are minima.
    ExtremumKind kind;
    /// Derivative sign pattern (+ to - is kMax); equals kind for zero crossings.
    ExtremumKind shape;
};

/// Interior extrema and zero crossings of f on (0, T], ordered by time.
/// Extrema with |value| below tol.zero_touch are reported as minima.
/// Throws SpecError for T <= 0.
std::vector<Extremum> find_extrema(const ExpPolyFunction& f, double T, const Tolerances& tol = kTolerances);

/// Grid step that resolves the shortest oscillation or decay scale of f.
double extrema_grid_step(const ExpPolyFunction& f, double T);

}  // namespace semimarkov

#endif
