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

#include "semimarkov/nonmarkov.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "semimarkov/errors.h"
#include "semimarkov/renewal.h"

namespace semimarkov {

namespace {

using cd = std::complex<double>;

constexpr double kSingularZone = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Maximal intervals on which F increases, from the derivative sign pattern.
std::vector<Interval> rising_intervals(const ExpPolyFunction& F, double T) {
    std::vector<Interval> out;
    std::optional<double> open;
    bool first = true;
    for (const auto& e : find_extrema(F, T)) {
        if (e.shape == ExtremumKind::kZeroCrossing) {
            continue;
        }
        if (e.shape == ExtremumKind::kMin) {
            open = e.t;
        } else {
            if (open) {
                out.push_back({*open, e.t});
            } else if (first) {
                out.push_back({0, e.t});
            }
            open.reset();
        }
        first = false;
    }
    if (open) {
        out.push_back({*open, T});
    }
    return out;
}

// Zero test relative to the pointwise envelope, so a pure exponential decay
// never counts as vanishing while a cancellation zero does.
bool vanishes(const ExpPolyFunction& f, double t, double value) {
    return std::abs(value) < kTolerances.zero_touch * f.envelope(t);
}

bool any_axis_vanishes(const DynamicalMap& map, const MapSnapshot& snap) {
    for (int i = 0; i < 3; i++) {
        if (vanishes(map.axis(i).value, snap.t, snap.lambda(i))) {
            return true;
        }
    }
    return false;
}

TCLCoefficients tcl_from(const MapSnapshot& snap, bool singular) {
    TCLCoefficients c;
    c.t = snap.t;
    if (singular) {
        c.singular = true;
        c.canonical.setConstant(kNaN);
        c.dephasing = c.flip = c.x_pair = c.y_pair = kNaN;
        return c;
    }
    Eigen::Vector3d r = snap.lambda_dot.cwiseQuotient(snap.lambda);
    c.canonical << 0.25 * (r(0) - r(1) - r(2)), -0.25 * (r(0) - r(1) + r(2)), -0.25 * (r(0) + r(1) - r(2));
    c.dephasing = -0.25 * (r(0) + r(1) - r(2));
    c.flip = -0.5 * r(2);
    c.x_pair = 0.25 * (r(0) - r(1));
    c.y_pair = -0.25 * (r(0) - r(1));
    return c;
}

// Times in (0, T] where some function vanishes.
std::vector<double> zeros_of(const std::vector<const ExpPolyFunction*>& fs, double T) {
    std::vector<double> out;
    if (!(T > 0)) {
        return out;
    }
    for (const auto* f : fs) {
        for (const auto& e : find_extrema(*f, T)) {
            if (e.kind == ExtremumKind::kZeroCrossing || vanishes(*f, e.t, e.value)) {
                out.push_back(e.t);
            }
        }
    }
    std::sort(out.begin(), out.end());
    // Axes sharing a function report the same zero once.
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-9 * (1 + std::abs(b)); }),
              out.end());
    return out;
}

bool near_any(const std::vector<double>& points, double t, double zone) {
    auto it = std::lower_bound(points.begin(), points.end(), t - zone);
    return it != points.end() && *it <= t + zone;
}

std::vector<const ExpPolyFunction*> axis_values(const DynamicalMap& map) {
    return {&map.axis(0).value, &map.axis(1).value, &map.axis(2).value};
}

std::array<Eigen::Matrix2cd, 4> paulis() {
    Eigen::Matrix2cd i2, x, y, z;
    i2 << 1, 0, 0, 1;
    x << 0, 1, 1, 0;
    y << 0, cd(0, -1), cd(0, 1), 0;
    z << 1, 0, 0, -1;
    return {i2, x, y, z};
}

double sum_weights(const std::vector<Contribution>& cs) {
    double s = 0;
    for (const auto& c : cs) {
        s += c.weight;
    }
    return s;
}

}  // namespace

std::string_view to_string(MeasureMethod m) {
    switch (m) {
        case MeasureMethod::kBlpAnalytic:
            return "blp-analytic";
        case MeasureMethod::kBlpNumeric:
            return "blp-numeric";
        case MeasureMethod::kRhpHou:
            return "rhp-hou";
        case MeasureMethod::kRhp:
            return "rhp";
    }
    return "unknown";
}

double trace_distance(const QubitState& a, const QubitState& b) {
    Eigen::Matrix2cd d = a.matrix() - b.matrix();
    double p = d(0, 0).real(), s = d(1, 1).real();
    double half_tr = 0.5 * (p + s);
    double radius = std::sqrt(0.25 * (p - s) * (p - s) + std::norm(d(1, 0)));
    return 0.5 * (std::abs(half_tr + radius) + std::abs(half_tr - radius));
}

DistinguishabilityTrace distinguishability_trace(const DynamicalMap& map, const QubitState& a, const QubitState& b,
                                                 double window, int samples) {
    if (!(window > 0)) {
        throw SpecError("distinguishability window must be positive");
    }
    if (samples < 2) {
        throw SpecError("distinguishability trace needs at least two samples");
    }
    Eigen::Vector3d delta = a.bloch() - b.bloch();
    if (delta.norm() == 0) {
        throw SpecError("distinguishability needs two distinct states");
    }
    // D^2 = (1/4) sum delta_i^2 lambda_i^2.
    ExpPolyFunction F;
    for (int i = 0; i < 3; i++) {
        const auto& l = map.axis(i).value;
        F = F + (l * l) * (0.25 * delta(i) * delta(i));
    }
    DistinguishabilityTrace tr;
    for (int k = 0; k < samples; k++) {
        double t = window * k / (samples - 1);
        auto snap = map.snapshot(t);
        double F_t = 0, dF_t = 0;
        for (int i = 0; i < 3; i++) {
            F_t += 0.25 * delta(i) * delta(i) * snap.lambda(i) * snap.lambda(i);
            dF_t += 0.5 * delta(i) * delta(i) * snap.lambda(i) * snap.lambda_dot(i);
        }
        double D = std::sqrt(F_t);
        tr.times.push_back(t);
        tr.distance.push_back(D);
        tr.sigma.push_back(D > 0 ? dF_t / (2 * D) : 0.0);
    }
    tr.growth = rising_intervals(F, window);
    return tr;
}

double variation_tail_bound(const ExpPolyFunction& f, double T) {
    double bound = 0;
    const ExpPolyFunction df = f.derivative();
    for (const auto& term : df.terms()) {
        double a = -term.pole.real();
        if (a <= 0) {
            return kInf;
        }
        for (size_t k = 0; k < term.coeffs.size(); k++) {
            double c = std::abs(term.coeffs[k]);
            if (c == 0) {
                continue;
            }
            // int_T^inf t^k e^{-a t} dt = e^{-aT} sum_j k!/j! T^j / a^{k-j+1}.
            double sum = 0, ratio = 1;
            for (int j = static_cast<int>(k); j >= 0; j--) {
                sum += ratio * std::pow(T, j) / std::pow(a, static_cast<double>(k) - j + 1);
                ratio *= j;
            }
            bound += c * std::exp(-a * T) * sum;
        }
    }
    return bound;
}

double measure_horizon(const std::vector<ExpPolyFunction>& fs, double tol) {
    double slowest = kInf;
    for (const auto& f : fs) {
        const ExpPolyFunction df = f.derivative();
        for (const auto& term : df.terms()) {
            if (term.pole.real() >= 0) {
                throw NumericalError("measure horizon: nondecaying mode");
            }
            slowest = std::min(slowest, -term.pole.real());
        }
    }
    if (slowest == kInf) {
        return 1;
    }
    double T = 10 / slowest;
    for (int i = 0; i < 40; i++, T *= 2) {
        double total = 0;
        for (const auto& f : fs) {
            total += variation_tail_bound(f, T);
        }
        if (total < tol) {
            return T;
        }
    }
    throw NumericalError("measure horizon: tail bound not reached");
}

MeasureResult blp_measure_dephasing(const HypoExpWTD& w) {
    return blp_measure_dephasing(PauliChannel::phase_flip(), w);
}

MeasureResult blp_measure_dephasing(const PauliChannel& channel, const HypoExpWTD& w) {
    Eigen::Vector4d mu = channel.mu();
    int fixed = -1;
    for (int i = 0; i < 3; i++) {
        int a = (i + 1) % 3, b = (i + 2) % 3;
        if (mu(i + 1) == 1 && std::abs(mu(a + 1) - mu(b + 1)) <= 1e-15) {
            fixed = i;
        }
    }
    if (fixed < 0) {
        throw SpecError("channel is not a pure dephasing channel");
    }
    int axis = (fixed + 1) % 3;
    double m = std::clamp(mu(axis + 1), -1.0, 1.0);
    ExpPolyFunction x = generating_function(w, m).value;

    MeasureResult r;
    r.method = MeasureMethod::kBlpAnalytic;
    r.direction = Eigen::Vector3d::Zero();
    r.direction(axis) = 1;
    r.horizon = measure_horizon({x});
    r.tail_bound = variation_tail_bound(x, r.horizon);
    // Critical points of |x|: zero crossings and zero-touching extrema are
    // minima; otherwise the sign of x decides.
    struct Critical {
        double t;
        bool is_max;
    };
    std::vector<Critical> crit;
    for (const auto& e : find_extrema(x, r.horizon)) {
        bool is_max = false;
        if (e.kind != ExtremumKind::kZeroCrossing && std::abs(e.value) >= kTolerances.zero_touch) {
            is_max = e.shape == ExtremumKind::kMax ? e.value > 0 : e.value < 0;
        }
        crit.push_back({e.t, is_max});
    }
    std::optional<double> open;
    bool first = true;
    for (const auto& c : crit) {
        if (!c.is_max) {
            if (!open) {
                open = c.t;
            }
        } else {
            std::optional<double> start = open;
            if (!start && first) {
                start = 0.0;
            }
            if (start) {
                r.contributions.push_back({{*start, c.t}, std::abs(x(c.t)) - std::abs(x(*start))});
            }
            open.reset();
        }
        first = false;
    }
    if (open && std::abs(x(r.horizon)) > std::abs(x(*open))) {
        r.contributions.push_back({{*open, r.horizon}, std::abs(x(r.horizon)) - std::abs(x(*open))});
    }
    r.value = sum_weights(r.contributions);
    return r;
}

MeasureResult blp_measure_pair(const DynamicalMap& map, const Eigen::Vector3d& direction, double horizon) {
    if (!(horizon > 0)) {
        throw SpecError("BLP horizon must be positive");
    }
    if (direction.norm() == 0) {
        throw SpecError("pair direction must be nonzero");
    }
    Eigen::Vector3d n = direction.normalized();
    ExpPolyFunction F;
    for (int i = 0; i < 3; i++) {
        if (n(i) != 0) {
            const auto& l = map.axis(i).value;
            F = F + (l * l) * (n(i) * n(i));
        }
    }
    MeasureResult r;
    r.method = MeasureMethod::kBlpNumeric;
    r.direction = n;
    r.horizon = horizon;
    auto D = [&](double t) { return std::sqrt(std::max(0.0, F(t))); };
    for (const auto& iv : rising_intervals(F, horizon)) {
        double weight = D(iv.end) - D(iv.start);
        if (weight > 0) {
            r.contributions.push_back({iv, weight});
        }
    }
    r.value = sum_weights(r.contributions);
    return r;
}

MeasureResult blp_measure_numeric(const DynamicalMap& map, const PairSearchConfig& cfg) {
    if (cfg.simplex_divisions < 1 || cfg.max_iterations < 0 || !(cfg.step_tolerance > 0)) {
        throw SpecError("invalid pair-search configuration");
    }
    std::vector<ExpPolyFunction> axes{map.axis(0).value, map.axis(1).value, map.axis(2).value};
    double horizon = cfg.horizon > 0 ? cfg.horizon : measure_horizon(axes);
    // Weights w_i = n_i^2 on the simplex; the map is diagonal so signs of
    // n_i do not matter.
    auto evaluate = [&](const Eigen::Vector3d& w) {
        return blp_measure_pair(map, w.cwiseMax(0.0).cwiseSqrt(), horizon);
    };
    const int G = cfg.simplex_divisions;
    MeasureResult best;
    Eigen::Vector3d best_w(1, 0, 0);
    bool have = false;
    for (int i = 0; i <= G; i++) {
        for (int j = 0; i + j <= G; j++) {
            Eigen::Vector3d w(i, j, G - i - j);
            w /= G;
            auto r = evaluate(w);
            if (!have || r.value > best.value) {
                best = r;
                best_w = w;
                have = true;
            }
        }
    }
    // Compass search along the simplex edges e_a - e_b.
    double step = 1.0 / G;
    int iterations = 0;
    while (step >= cfg.step_tolerance && iterations < cfg.max_iterations) {
        bool improved = false;
        for (int a = 0; a < 3 && !improved; a++) {
            for (int b = 0; b < 3 && !improved; b++) {
                if (a == b) {
                    continue;
                }
                Eigen::Vector3d w = best_w;
                double move = std::min(step, w(b));
                if (move <= 0) {
                    continue;
                }
                w(a) += move;
                w(b) -= move;
                iterations++;
                auto r = evaluate(w);
                if (r.value > best.value + 1e-15) {
                    best = r;
                    best_w = w;
                    improved = true;
                }
            }
        }
        if (!improved) {
            step /= 2;
        }
    }
    best.converged = step < cfg.step_tolerance;
    best.horizon = horizon;
    best.tail_bound = 0;
    for (const auto& f : axes) {
        best.tail_bound += variation_tail_bound(f, horizon);
    }
    return best;
}

DivisibilityScan divisibility_scan(const DynamicalMap& map, const std::vector<double>& t_grid,
                                   const std::vector<double>& s_grid) {
    for (const auto* g : {&t_grid, &s_grid}) {
        if (g->empty()) {
            throw SpecError("divisibility grid must not be empty");
        }
        for (double v : *g) {
            if (!(v >= 0) || !std::isfinite(v)) {
                throw SpecError("divisibility grid entries must be finite and nonnegative");
            }
        }
    }
    DivisibilityScan scan;
    scan.t_grid = t_grid;
    scan.s_grid = s_grid;
    double window = *std::max_element(t_grid.begin(), t_grid.end());
    scan.singular_times = zeros_of(axis_values(map), window);
    const double zone = kSingularZone * window;
    for (double t : t_grid) {
        auto base = map.snapshot(t);
        bool singular = near_any(scan.singular_times, t, zone) || any_axis_vanishes(map, base);
        for (double s : s_grid) {
            ChoiCell cell{t, s, Eigen::Vector4d::Constant(kNaN), kNaN, 0};
            if (!singular) {
                Eigen::Vector3d ratios = map.snapshot(t + s).lambda.cwiseQuotient(base.lambda);
                cell.choi = choi_vector(ratios);
                cell.min_component = cell.choi.minCoeff();
                cell.sign = is_completely_positive(cell.choi) ? 1 : -1;
                scan.negative_cells += cell.sign < 0;
            }
            scan.cells.push_back(cell);
        }
    }
    return scan;
}

MeasureResult hou_measure(const DynamicalMap& map, const HouConfig& cfg) {
    if (!(cfg.window > 0) || cfg.samples < 2 || cfg.s_offset < 0) {
        throw SpecError("invalid Hou-measure configuration");
    }
    const double s = cfg.s_offset > 0 ? cfg.s_offset : 1e-3 / map.wtd().max_rate();
    auto zeros = zeros_of(axis_values(map), cfg.window);
    const double zone = kSingularZone * cfg.window;
    const double h = cfg.window / (cfg.samples - 1);
    MeasureResult r;
    r.method = MeasureMethod::kRhpHou;
    r.horizon = cfg.window;
    double region = 0;
    std::optional<Contribution> open;
    for (int k = 0; k < cfg.samples; k++) {
        double t = h * k;
        double negativity = 0;
        bool excluded = near_any(zeros, t, zone);
        if (!excluded) {
            auto base = map.snapshot(t);
            if (any_axis_vanishes(map, base)) {
                excluded = true;
            } else {
                Eigen::Vector4d choi = choi_vector(map.snapshot(t + s).lambda.cwiseQuotient(base.lambda));
                for (int i = 0; i < 4; i++) {
                    negativity -= std::min(0.0, choi(i));
                }
            }
        }
        if (!excluded && negativity > kTolerances.choi) {
            region += h;
            if (!open) {
                open = Contribution{{t, t}, 0};
            }
            open->interval.end = t;
            open->weight += h * std::atan(negativity);
        } else if (open) {
            r.contributions.push_back(*open);
            open.reset();
        }
    }
    if (open) {
        r.contributions.push_back(*open);
    }
    if (region > 0) {
        for (auto& c : r.contributions) {
            c.weight /= region;
        }
    }
    r.value = sum_weights(r.contributions);
    return r;
}

MeasureResult rhp_measure(const DynamicalMap& map, double window, int samples) {
    if (!(window > 0) || samples < 2) {
        throw SpecError("invalid RHP-measure configuration");
    }
    MeasureResult r;
    r.method = MeasureMethod::kRhp;
    r.horizon = window;
    auto zeros = zeros_of(axis_values(map), window);
    if (!zeros.empty()) {
        r.infinite = true;
        r.value = kInf;
        for (double z : zeros) {
            r.contributions.push_back({{z, z}, kInf});
        }
        return r;
    }
    const double h = window / (samples - 1);
    auto rate = [&](double t) {
        auto c = tcl_coefficients(map, t);
        return 2 * (c.canonical.cwiseMin(0.0).cwiseAbs().sum());
    };
    double prev_t = 0, prev = rate(0);
    std::optional<Contribution> open;
    for (int k = 1; k < samples; k++) {
        double t = h * k;
        double cur = rate(t);
        double piece = 0.5 * h * (prev + cur);
        if (piece > 0) {
            if (!open) {
                open = Contribution{{prev_t, t}, 0};
            }
            open->interval.end = t;
            open->weight += piece;
        } else if (open) {
            r.contributions.push_back(*open);
            open.reset();
        }
        prev_t = t;
        prev = cur;
    }
    if (open) {
        r.contributions.push_back(*open);
    }
    r.value = sum_weights(r.contributions);
    return r;
}

TCLCoefficients tcl_coefficients(const MapSnapshot& snap, const Tolerances& tol) {
    return tcl_from(snap, snap.lambda.cwiseAbs().minCoeff() < tol.zero_touch);
}

TCLCoefficients tcl_coefficients(const DynamicalMap& map, double t) {
    auto snap = map.snapshot(t);
    return tcl_from(snap, any_axis_vanishes(map, snap));
}

Eigen::Matrix2cd tcl_rhs_canonical(const TCLCoefficients& c, const Eigen::Matrix2cd& rho) {
    auto s = paulis();
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 3; i++) {
        const auto& p = s[static_cast<size_t>(i + 1)];
        out += c.canonical(i) * (p * rho * p - rho);
    }
    return out;
}

Eigen::Matrix2cd tcl_rhs_ladder(const TCLCoefficients& c, const Eigen::Matrix2cd& rho) {
    auto s = paulis();
    Eigen::Matrix2cd raise, lower;
    raise << 0, 1, 0, 0;
    lower << 0, 0, 1, 0;
    Eigen::Matrix2cd out = c.dephasing * (s[3] * rho * s[3] - rho);
    out += c.flip * (raise * rho * lower + lower * rho * raise - rho);
    out += c.x_pair * (s[1] * rho * s[1] - rho);
    out += c.y_pair * (s[2] * rho * s[2] - rho);
    return out;
}

double tcl_equivalence_check(const TCLCoefficients& c, const QubitState& rho) {
    if (c.singular) {
        throw NumericalError("master-equation rates are undefined at a singular time");
    }
    return (tcl_rhs_canonical(c, rho.matrix()) - tcl_rhs_ladder(c, rho.matrix())).cwiseAbs().maxCoeff();
}

}  // namespace semimarkov
