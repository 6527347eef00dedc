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

#ifndef SEMIMARKOV_NONMARKOV_H
#define SEMIMARKOV_NONMARKOV_H

#include <Eigen/Core>
#include <string_view>
#include <vector>

#include "semimarkov/poly_laplace.h"
#include "semimarkov/qubit.h"

namespace semimarkov {

struct Interval {
    double start;
    double end;
};

struct Contribution {
    Interval interval;
    double weight;
};

enum class MeasureMethod { kBlpAnalytic, kBlpNumeric, kRhpHou, kRhp };

std::string_view to_string(MeasureMethod m);

struct MeasureResult {
    MeasureMethod method = MeasureMethod::kBlpAnalytic;
    /// Finite value; meaningless when infinite is set.
    double value = 0;
    bool infinite = false;
    /// Sum of weights equals value when finite.
    std::vector<Contribution> contributions;
    /// Time window actually scanned.
    double horizon = 0;
    /// Bound on what lies beyond the horizon (BLP variants).
    double tail_bound = 0;
    /// Unit Bloch direction of the optimal antipodal pair (BLP variants).
    Eigen::Vector3d direction = Eigen::Vector3d::Zero();
    /// False when a numeric search ran out of budget before its step
    /// tolerance was reached.
    bool converged = true;
};

/// Half the trace norm of rho1 - rho2.
double trace_distance(const QubitState& a, const QubitState& b);

/// D(t) and its derivative for a co-evolved pair, plus the growth set.
struct DistinguishabilityTrace {
    std::vector<double> times;
    std::vector<double> distance;
    std::vector<double> sigma;
    /// Maximal intervals with sigma > 0, endpoints refined by bisection.
    std::vector<Interval> growth;
};

/// Throws SpecError for identical states or a nonpositive window.
DistinguishabilityTrace distinguishability_trace(const DynamicalMap& map, const QubitState& a, const QubitState& b,
                                                 double window, int samples = 1001);

/// Upper bound on the integral of |f'| over [T, inf); infinite when f' has
/// a nondecaying term.
double variation_tail_bound(const ExpPolyFunction& f, double T);

/// Smallest doubling of a natural time scale with the summed variation tail
/// bound of fs below tol. Throws NumericalError if none is found.
double measure_horizon(const std::vector<ExpPolyFunction>& fs, double tol = 1e-12);

/// Sum over growth intervals of |x| (end value minus start value) for
/// x = lambda_mu(t) of a dephasing-type map.
MeasureResult blp_measure_dephasing(const HypoExpWTD& w);
/// Throws SpecError unless the channel dephases about one axis: one Pauli
/// eigenvalue equal to 1 and the other two equal.
MeasureResult blp_measure_dephasing(const PauliChannel& channel, const HypoExpWTD& w);

/// BLP integral for the antipodal pure pair +-n on [0, horizon].
MeasureResult blp_measure_pair(const DynamicalMap& map, const Eigen::Vector3d& direction, double horizon);

struct PairSearchConfig {
    /// Grid resolution on the simplex of squared direction components.
    int simplex_divisions = 12;
    int max_iterations = 400;
    double step_tolerance = 1e-7;
    /// 0 selects measure_horizon of the three Pauli eigenvalue functions.
    double horizon = 0;
};

MeasureResult blp_measure_numeric(const DynamicalMap& map, const PairSearchConfig& cfg = {});

struct ChoiCell {
    double t;
    double s;
    Eigen::Vector4d choi;
    double min_component;
    /// +1 completely positive, -1 violation, 0 excluded (singular t).
    int sign;
};

struct DivisibilityScan {
    std::vector<double> t_grid;
    std::vector<double> s_grid;
    /// Row-major: cells[i * s_grid.size() + j] is (t_grid[i], s_grid[j]).
    std::vector<ChoiCell> cells;
    std::vector<double> singular_times;
    size_t negative_cells = 0;
};

/// Choi vectors of Lambda(t + s, t) from the ratios lambda_i(t + s) / lambda_i(t).
DivisibilityScan divisibility_scan(const DynamicalMap& map, const std::vector<double>& t_grid,
                                   const std::vector<double>& s_grid);

struct HouConfig {
    /// Lag of the intermediate map; 0 selects 1e-3 / (fastest rate).
    double s_offset = 0;
    double window = 20;
    int samples = 20001;
};

/// Mean of arctan(total Choi negativity at lag s_offset) over the region
/// where the intermediate map is not completely positive.
MeasureResult hou_measure(const DynamicalMap& map, const HouConfig& cfg = {});

/// Integral of 2 sum max(0, -gamma_i(t)) over the canonical TCL rates;
/// infinite as soon as some lambda_i crosses zero inside the window.
MeasureResult rhp_measure(const DynamicalMap& map, double window, int samples = 20001);

struct TCLCoefficients {
    double t = 0;
    /// Rates of [sigma_i rho sigma_i - rho], i = x, y, z.
    Eigen::Vector3d canonical = Eigen::Vector3d::Zero();
    /// Rate of [sigma_z rho sigma_z - rho] in the ladder-operator form.
    double dephasing = 0;
    /// Rate of [sigma+ rho sigma- + sigma- rho sigma+ - rho].
    double flip = 0;
    /// Rates of the sigma_x and sigma_y terms (opposite in sign).
    double x_pair = 0;
    double y_pair = 0;
    /// Set when some |lambda_i(t)| is below the zero-touch tolerance; rates
    /// are then NaN.
    bool singular = false;
};

/// Singular when some |lambda_i| is below tol.zero_touch in absolute terms.
TCLCoefficients tcl_coefficients(const MapSnapshot& snap, const Tolerances& tol = kTolerances);
/// Singular when some |lambda_i(t)| is below zero_touch times its envelope
/// sum |c| t^k e^{Re p t}; pure decays are never singular.
TCLCoefficients tcl_coefficients(const DynamicalMap& map, double t);

/// Right-hand sides of the two forms of the master equation.
Eigen::Matrix2cd tcl_rhs_canonical(const TCLCoefficients& c, const Eigen::Matrix2cd& rho);
Eigen::Matrix2cd tcl_rhs_ladder(const TCLCoefficients& c, const Eigen::Matrix2cd& rho);

/// Max-norm difference of the two right-hand sides. Throws NumericalError at
/// a singular time.
double tcl_equivalence_check(const TCLCoefficients& c, const QubitState& rho);

}  // namespace semimarkov

#endif
