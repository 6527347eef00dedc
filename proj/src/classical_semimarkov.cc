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

#include "semimarkov/classical_semimarkov.h"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <string>

#include "semimarkov/csv.h"
#include "semimarkov/errors.h"
#include "semimarkov/renewal.h"

namespace semimarkov {

namespace {

constexpr double kDivergenceBound = 10;
constexpr double kSingularZone = 1e-6;

// T(t, 0) from the closed form when one exists, else from a Volterra solve.
class ForwardMaps {
   public:
    ForwardMaps(const SemiMarkovSpec& spec, double t_end, double dt) {
        if (spec.has_closed_form()) {
            closed_.emplace(spec);
        } else {
            numeric_ = volterra_solve(spec, t_end, dt);
        }
    }

    Eigen::Matrix2d operator()(double t) const {
        if (closed_) {
            return (*closed_)(t, 0).entries;
        }
        return numeric_->at(t);
    }

    const ClosedFormPropagator* closed() const { return closed_ ? &*closed_ : nullptr; }

    // Times in (0, T] where T(s, 0) is not invertible.
    std::vector<double> singular_times(double T) const {
        std::vector<double> out;
        if (closed_) {
            for (const auto& e : find_extrema(closed_->decay(), T)) {
                if (e.kind == ExtremumKind::kZeroCrossing || std::abs(e.value) < kTolerances.zero_touch) {
                    out.push_back(e.t);
                }
            }
            return out;
        }
        const auto& ts = numeric_->times;
        const auto& vs = numeric_->values;
        for (size_t i = 1; i < ts.size() && ts[i] <= T; i++) {
            double a = vs[i - 1].determinant(), b = vs[i].determinant();
            if (b == 0) {
                out.push_back(ts[i]);
            } else if (a * b < 0) {
                out.push_back(ts[i - 1] + (ts[i] - ts[i - 1]) * a / (a - b));
            }
        }
        return out;
    }

   private:
    std::optional<ClosedFormPropagator> closed_;
    std::optional<VolterraSolution> numeric_;
};

double grid_end(const std::vector<double>& grid) {
    if (grid.empty()) {
        throw SpecError("time grid must not be empty");
    }
    for (double t : grid) {
        if (!(t >= 0) || !std::isfinite(t)) {
            throw SpecError("time grid entries must be finite and nonnegative");
        }
    }
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw SpecError("time grid must be sorted");
    }
    return grid.back();
}

}  // namespace

SemiMarkovSpec::SemiMarkovSpec(double pi_, double sigma_, HypoExpWTD wtd_) : pi(pi_), sigma(sigma_), wtd(std::move(wtd_)) {
    if (!(pi >= 0 && pi <= 1) || !(sigma >= 0 && sigma <= 1)) {
        throw SpecError("jump probabilities must lie in [0, 1]");
    }
}

Eigen::Matrix2d SemiMarkovSpec::jump_matrix() const {
    Eigen::Matrix2d m;
    m << pi, sigma, 1 - pi, 1 - sigma;
    return m;
}

bool TransitionMatrix::is_stochastic(double tol) const {
    return entries.minCoeff() >= -tol && entries.maxCoeff() <= 1 + tol;
}

ProbabilityVector::ProbabilityVector(double a, double b) : p1(a), p2(b) {
    if (!(p1 >= 0) || !(p2 >= 0) || std::abs(p1 + p2 - 1) > 1e-12) {
        throw SpecError("probability vector must be nonnegative and sum to 1");
    }
}

ClosedFormPropagator::ClosedFormPropagator(const SemiMarkovSpec& spec) {
    if (spec.is_equal_jump()) {
        decay_ = survival(spec.wtd);
    } else if (spec.is_flip()) {
        decay_ = even_odd_difference(spec.wtd);
    } else {
        throw SpecError("closed-form propagator needs pi = sigma = 1/2 or pi = 0, sigma = 1");
    }
}

TransitionMatrix ClosedFormPropagator::operator()(double t, double s) const {
    if (!(s >= 0) || !(t >= s)) {
        throw std::domain_error("propagator needs t >= s >= 0");
    }
    double xs = decay_(s);
    if (std::abs(xs) < kTolerances.zero_touch) {
        throw SingularPropagator("propagator from 0 is not invertible at s = " + format_double(s), s);
    }
    double ratio = t == s ? 1.0 : decay_(t) / xs;
    TransitionMatrix m;
    m.entries << 0.5 * (1 + ratio), 0.5 * (1 - ratio), 0.5 * (1 - ratio), 0.5 * (1 + ratio);
    m.t_from = s;
    m.t_to = t;
    return m;
}

TransitionMatrix propagator(const SemiMarkovSpec& spec, double t, double s) {
    return ClosedFormPropagator(spec)(t, s);
}

Eigen::Matrix2d VolterraSolution::at(double t) const {
    if (times.empty() || t < 0 || t > times.back() * (1 + 1e-12)) {
        throw std::domain_error("time outside the Volterra grid");
    }
    double pos = t / dt;
    size_t i = std::min(static_cast<size_t>(pos), times.size() - 1);
    if (i + 1 >= times.size()) {
        return values.back();
    }
    double frac = pos - static_cast<double>(i);
    return (1 - frac) * values[i] + frac * values[i + 1];
}

VolterraSolution volterra_solve(const SemiMarkovSpec& spec, double T_end, double dt) {
    if (!(dt > 0) || !std::isfinite(dt)) {
        throw SpecError("Volterra step must be positive");
    }
    if (!(T_end >= 0) || !std::isfinite(T_end)) {
        throw SpecError("Volterra horizon must be nonnegative");
    }
    const MemoryKernel k = kernel(spec.wtd);
    const size_t n = static_cast<size_t>(std::ceil(T_end / dt - 1e-9));
    const double h = dt;
    const double w = k.delta_weight;
    std::vector<double> ks(n + 1, 0.0);
    if (!k.regular_part.is_zero()) {
        for (size_t i = 0; i <= n; i++) {
            ks[i] = k.regular_part(static_cast<double>(i) * h);
        }
    }
    const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d A = spec.jump_matrix() - I;
    // Implicit trapezoid step: the y_{n+1} contributions of both the time
    // rule and the convolution rule move to the left-hand side.
    const Eigen::Matrix2d lhs_inv = (I - 0.5 * h * (w + 0.5 * h * ks[0]) * A).inverse();

    VolterraSolution sol;
    sol.dt = h;
    sol.times.resize(n + 1);
    sol.values.resize(n + 1);
    sol.times[0] = 0;
    sol.values[0] = I;
    Eigen::Matrix2d f_prev = w * A;
    for (size_t m = 0; m < n; m++) {
        Eigen::Matrix2d conv = 0.5 * ks[m + 1] * sol.values[0];
        for (size_t j = 1; j <= m; j++) {
            conv += ks[m + 1 - j] * sol.values[j];
        }
        conv *= h;
        Eigen::Matrix2d next = lhs_inv * (sol.values[m] + 0.5 * h * f_prev + 0.5 * h * A * conv);
        if (next.cwiseAbs().maxCoeff() > kDivergenceBound || !next.allFinite()) {
            throw NumericalError("Volterra solver diverged at t = " + format_double(static_cast<double>(m + 1) * h));
        }
        f_prev = A * ((w + 0.5 * h * ks[0]) * next + conv);
        sol.times[m + 1] = static_cast<double>(m + 1) * h;
        sol.values[m + 1] = next;
    }
    return sol;
}

double kolmogorov_distance(const ProbabilityVector& a, const ProbabilityVector& b) {
    return 0.5 * (std::abs(a.p1 - b.p1) + std::abs(a.p2 - b.p2));
}

ContractivityReport witness_contractivity(const SemiMarkovSpec& spec, const std::vector<VectorPair>& pairs,
                                          const std::vector<double>& grid, double volterra_dt) {
    double T = grid_end(grid);
    ForwardMaps maps(spec, T, volterra_dt);
    ContractivityReport report;
    std::vector<Eigen::Matrix2d> forward;
    forward.reserve(grid.size());
    for (double t : grid) {
        forward.push_back(maps(t));
    }
    for (size_t id = 0; id < pairs.size(); id++) {
        Eigen::Vector2d diff = pairs[id].first.vec() - pairs[id].second.vec();
        std::optional<GrowthInterval> open;
        double prev = 0;
        for (size_t i = 0; i < grid.size(); i++) {
            double dk = 0.5 * (forward[i] * diff).cwiseAbs().sum();
            report.samples.push_back({grid[i], static_cast<int>(id), dk});
            bool rising = i > 0 && dk > prev + kTolerances.positivity;
            if (rising) {
                if (!open) {
                    open = GrowthInterval{static_cast<int>(id), grid[i - 1], grid[i], prev, dk};
                } else {
                    open->t_end = grid[i];
                    open->dk_end = dk;
                }
            } else if (open) {
                report.growth.push_back(*open);
                open.reset();
            }
            prev = dk;
        }
        if (open) {
            report.growth.push_back(*open);
        }
    }
    return report;
}

void write_distance_csv(std::ostream& out, const ContractivityReport& report) {
    write_csv_row(out, {"t", "pair_id", "DK"});
    for (const auto& s : report.samples) {
        write_csv_row(out, {format_double(s.t), std::to_string(s.pair_id), format_double(s.dk)});
    }
}

DivisibilityReport witness_divisibility(const SemiMarkovSpec& spec, const std::vector<double>& grid,
                                        double volterra_dt) {
    double T = grid_end(grid);
    ForwardMaps maps(spec, T, volterra_dt);
    DivisibilityReport report;
    report.singular_times = maps.singular_times(T);
    const double zone = kSingularZone * T;
    std::vector<Eigen::Matrix2d> forward;
    forward.reserve(grid.size());
    for (double t : grid) {
        forward.push_back(maps(t));
    }
    for (size_t i = 0; i < grid.size(); i++) {
        double s = grid[i];
        bool near_singular = std::any_of(report.singular_times.begin(), report.singular_times.end(),
                                         [&](double z) { return std::abs(z - s) <= zone; });
        double det = forward[i].determinant();
        if (near_singular || det == 0) {
            report.cells_excluded += grid.size() - i;
            continue;
        }
        Eigen::Matrix2d inv = forward[i].inverse();
        // Numerical T(s, 0) carries O(dt^2) error, amplified by the inverse.
        double tol = kTolerances.positivity;
        if (!maps.closed()) {
            tol += volterra_dt * volterra_dt * inv.cwiseAbs().rowwise().sum().maxCoeff();
        }
        for (size_t j = i; j < grid.size(); j++) {
            Eigen::Matrix2d m;
            if (const auto* closed = maps.closed()) {
                try {
                    m = (*closed)(grid[j], s).entries;
                } catch (const SingularPropagator&) {
                    report.cells_excluded += grid.size() - i;
                    break;
                }
            } else {
                m = forward[j] * inv;
            }
            report.cells_checked++;
            TransitionMatrix tm{m, s, grid[j]};
            if (!tm.is_stochastic(tol)) {
                report.violations.push_back({s, grid[j], m.minCoeff(), m.maxCoeff()});
            }
        }
    }
    return report;
}

}  // namespace semimarkov
