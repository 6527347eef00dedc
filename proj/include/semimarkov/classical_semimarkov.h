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

#ifndef SEMIMARKOV_CLASSICAL_SEMIMARKOV_H
#define SEMIMARKOV_CLASSICAL_SEMIMARKOV_H

#include <Eigen/Core>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "semimarkov/poly_laplace.h"
#include "semimarkov/waiting_time.h"

namespace semimarkov {

/// Two-state semi-Markov process with embedded jump matrix
/// [[pi, sigma], [1 - pi, 1 - sigma]] (column j is the law after leaving j)
/// and a common waiting-time distribution.
struct SemiMarkovSpec {
    /// Throws SpecError unless pi, sigma lie in [0, 1].
    SemiMarkovSpec(double pi, double sigma, HypoExpWTD wtd);

    double pi;
    double sigma;
    HypoExpWTD wtd;

    Eigen::Matrix2d jump_matrix() const;
    bool is_equal_jump() const { return pi == 0.5 && sigma == 0.5; }
    bool is_flip() const { return pi == 0 && sigma == 1; }
    bool has_closed_form() const { return is_equal_jump() || is_flip(); }
};

/// Column-stochastic in the sense of unit column sums; entries may leave
/// [0, 1] for intermediate maps.
struct TransitionMatrix {
    Eigen::Matrix2d entries;
    double t_from = 0;
    double t_to = 0;

    bool is_stochastic(double tol = 1e-12) const;
};

/// Occupation probabilities of the two states.
struct ProbabilityVector {
    /// Throws SpecError for negative entries or a sum off 1 by more than 1e-12.
    ProbabilityVector(double p1, double p2);

    double p1;
    double p2;

    Eigen::Vector2d vec() const { return {p1, p2}; }
};

/// Closed-form propagators for the equal-jump (pi = sigma = 1/2) and flip
/// (pi = 0, sigma = 1) processes: entries 1/2 (1 +- x(t) / x(s)) with x the
/// survival function or the even-odd difference respectively.
class ClosedFormPropagator {
   public:
    /// Throws SpecError when spec has no closed form.
    explicit ClosedFormPropagator(const SemiMarkovSpec& spec);

    const ExpPolyFunction& decay() const { return decay_; }

    /// Requires t >= s >= 0. Throws SingularPropagator when |x(s)| is below
    /// the zero-touch tolerance.
    TransitionMatrix operator()(double t, double s) const;

   private:
    ExpPolyFunction decay_;
};

TransitionMatrix propagator(const SemiMarkovSpec& spec, double t, double s);

/// T(t, 0) on the uniform grid t_i = i dt.
struct VolterraSolution {
    double dt = 0;
    std::vector<double> times;
    std::vector<Eigen::Matrix2d> values;

    /// Linear interpolation between grid points; t must lie in the grid range.
    Eigen::Matrix2d at(double t) const;
};

/// Trapezoidal solution of dT/dt = (Pi - 1) (k * T) with T(0) = 1, where the
/// delta part of the kernel is integrated exactly. Throws SpecError for
/// dt <= 0 or T_end < 0 and NumericalError when an entry exceeds 10 in
/// magnitude.
VolterraSolution volterra_solve(const SemiMarkovSpec& spec, double T_end, double dt);

/// 1/2 sum |p1_i - p2_i|.
double kolmogorov_distance(const ProbabilityVector& a, const ProbabilityVector& b);

using VectorPair = std::pair<ProbabilityVector, ProbabilityVector>;

struct DistanceSample {
    double t;
    int pair_id;
    double dk;
};

/// Maximal run of grid steps along which D_K strictly increases.
struct GrowthInterval {
    int pair_id;
    double t_start;
    double t_end;
    double dk_start;
    double dk_end;
};

struct ContractivityReport {
    std::vector<DistanceSample> samples;
    std::vector<GrowthInterval> growth;

    bool contractive() const { return growth.empty(); }
};

/// Kolmogorov distance of each evolved pair on the grid. Closed-form specs
/// use the exact propagator; others use volterra_solve with step volterra_dt.
ContractivityReport witness_contractivity(const SemiMarkovSpec& spec, const std::vector<VectorPair>& pairs,
                                          const std::vector<double>& grid, double volterra_dt = 1e-3);

/// CSV with header t,pair_id,DK.
void write_distance_csv(std::ostream& out, const ContractivityReport& report);

struct DivisibilityCell {
    double s;
    double t;
    double min_entry;
    double max_entry;
};

struct DivisibilityReport {
    std::vector<DivisibilityCell> violations;
    std::vector<double> singular_times;
    size_t cells_checked = 0;
    size_t cells_excluded = 0;

    bool divisible() const { return violations.empty(); }
};

/// Checks T(t, s) = T(t, 0) T(s, 0)^-1 for stochasticity on all grid pairs
/// s <= t. Cells with s within 1e-6 T of a singular time are excluded.
DivisibilityReport witness_divisibility(const SemiMarkovSpec& spec, const std::vector<double>& grid,
                                        double volterra_dt = 1e-3);

}  // namespace semimarkov

#endif
