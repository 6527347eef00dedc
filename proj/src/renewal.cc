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

#include "semimarkov/renewal.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "semimarkov/errors.h"

namespace semimarkov {

namespace {

// Factored denominator D^(n+1): the pole multiplicities are exact.
std::vector<Polynomial> repeated_factors(const HypoExpWTD& w, int copies) {
    std::vector<Polynomial> factors;
    for (int c = 0; c < copies; c++) {
        for (const auto& f : w.denominator_factors()) {
            factors.push_back(f);
        }
    }
    return factors;
}

Polynomial power(const Polynomial& p, int n) {
    Polynomial r = Polynomial::constant(1);
    for (int i = 0; i < n; i++) {
        r = r * p;
    }
    return r;
}

int sign_with_noise(double v, double scale) {
    if (std::abs(v) <= 1e-12 * scale) {
        return 0;
    }
    return v > 0 ? 1 : -1;
}

// Bisects a sign change of f on [a, b]; sa is the sign at a.
double bisect(const ExpPolyFunction& f, double a, double b, int sa) {
    for (int it = 0; it < 200; it++) {
        double m = 0.5 * (a + b);
        if (m <= a || m >= b) {
            break;
        }
        int sm = sign_with_noise(f.evaluate_complex(m).real(), f.envelope(m));
        if (sm == 0) {
            return m;
        }
        if (sm == sa) {
            a = m;
        } else {
            b = m;
        }
        if (b - a <= 4 * std::numeric_limits<double>::epsilon() * (1 + std::abs(m))) {
            break;
        }
    }
    return 0.5 * (a + b);
}

// Sign changes of f on the grid, skipping samples lost in rounding noise.
template <typename Report>
void scan_sign_changes(const ExpPolyFunction& f, double T, double step, Report report) {
    int last_sign = 0;
    double last_t = 0;
    int n = static_cast<int>(std::ceil(T / step));
    for (int i = 0; i <= n; i++) {
        double t = std::min(T, i * step);
        int s = sign_with_noise(f.evaluate_complex(t).real(), f.envelope(t));
        if (s == 0) {
            continue;
        }
        if (last_sign != 0 && s != last_sign) {
            report(bisect(f, last_t, t, last_sign), last_sign);
        }
        last_sign = s;
        last_t = t;
    }
}

}  // namespace

ExpPolyFunction jump_probability(const HypoExpWTD& w, int n) {
    if (n < 0) {
        throw SpecError("jump count must be nonnegative");
    }
    Polynomial num = w.survival_numerator() * power(w.numerator(), n);
    return invert_laplace(RationalLaplace(num, repeated_factors(w, n + 1)));
}

JumpCountLaw::JumpCountLaw(HypoExpWTD wtd, int n_max) : wtd_(std::move(wtd)), n_max_(n_max) {
    if (n_max < 0) {
        throw SpecError("jump-count truncation must be nonnegative");
    }
}

const ExpPolyFunction& JumpCountLaw::p(int n) const {
    if (n < 0 || n > n_max_) {
        throw std::out_of_range("jump count " + std::to_string(n) + " outside [0, n_max]");
    }
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(n);
    if (it == cache_.end()) {
        it = cache_.emplace(n, jump_probability(wtd_, n)).first;
    }
    return it->second;
}

double JumpCountLaw::cumulative(int n_top, double t) const {
    double s = 0;
    for (int n = 0; n <= n_top; n++) {
        s += p(n)(t);
    }
    return s;
}

std::vector<double> JumpCountLaw::distribution(double t, double tol) const {
    if (t < 0) {
        throw std::domain_error("jump-count law needs t >= 0");
    }
    if (!(tol > 0)) {
        throw SpecError("distribution tolerance must be positive");
    }
    constexpr int kMaxSteps = 1000000;
    const int m = wtd_.stages();
    const auto rates = wtd_.rates();
    const double big_lambda = wtd_.max_rate();
    const double x = big_lambda * t;
    const size_t width = static_cast<size_t>(n_max_ + 1) * static_cast<size_t>(m);
    // a[n * m + i]: mass with n completed renewals, in stage i, after k steps.
    std::vector<double> a(width, 0.0), next(width);
    a[0] = 1;
    std::vector<double> out(static_cast<size_t>(n_max_ + 1), 0.0);
    double log_w = -x;
    for (int k = 0; k < kMaxSteps; k++) {
        double wk = std::exp(log_w);
        for (size_t j = 0; j < width; j++) {
            out[j / static_cast<size_t>(m)] += wk * a[j];
        }
        if (x == 0) {
            return out;
        }
        double log_next = log_w + std::log(x) - std::log(k + 1.0);
        if (k + 2 > x && std::exp(log_next) / (1 - x / (k + 2)) < tol) {
            return out;
        }
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t j = 0; j < width; j++) {
            if (a[j] == 0) {
                continue;
            }
            size_t i = j % static_cast<size_t>(m);
            double jump = rates[i] / big_lambda;
            next[j] += (1 - jump) * a[j];
            if (j + 1 < width) {
                next[j + 1] += jump * a[j];
            }
        }
        std::swap(a, next);
        log_w = log_next;
    }
    throw NumericalError("jump-count law: Poisson tail above tolerance");
}

ExpPolyFunction even_odd_difference(const HypoExpWTD& w, const Tolerances& tol) {
    return generating_function(w, -1, tol).value;
}

GeneratingFunction generating_function(const HypoExpWTD& w, double mu, const Tolerances& tol) {
    if (!(mu >= -1 && mu <= 1)) {
        throw SpecError("generating-function argument must lie in [-1, 1]");
    }
    GeneratingFunction gf;
    gf.mu = mu;
    if (mu == 1) {
        gf.value = ExpPolyFunction::constant(1);
    } else if (mu == 0) {
        gf.value = survival(w);
    } else {
        // (1/u)(1 - f^)/(1 - mu f^) = R / (D - mu N).
        Polynomial den = w.denominator() - w.numerator() * mu;
        gf.value = invert_laplace(RationalLaplace(w.survival_numerator(), den), tol);
    }
    gf.derivative = gf.value.derivative();
    return gf;
}

double series_backend(const HypoExpWTD& w, double mu, double t, double tol, int n_max) {
    if (!(tol > 0)) {
        throw SpecError("series tolerance must be positive");
    }
    if (!(mu >= -1 && mu <= 1)) {
        throw SpecError("generating-function argument must lie in [-1, 1]");
    }
    if (t < 0) {
        throw std::domain_error("series backend needs t >= 0");
    }
    if (t == 0) {
        return 1;
    }
    auto rates = w.rates();
    const int m = w.stages();
    const double big_lambda = w.max_rate();
    const double x = big_lambda * t;
    // v = P^k 1 for the uniformized stage chain; the wrap-around edge closes
    // one renewal and carries the factor mu. Entries stay within [-1, 1].
    std::vector<double> v(static_cast<size_t>(m), 1.0), next(v.size());
    double log_w = -x;
    double value = 0;
    for (int k = 0; k <= n_max; k++) {
        double wk = std::exp(log_w);
        value += wk * v[0];
        // Tail sum_{j>k} w_j <= w_{k+1} / (1 - x/(k+2)) once k + 2 > x.
        double log_next = log_w + std::log(x) - std::log(k + 1.0);
        if (k + 2 > x) {
            double tail = std::exp(log_next) / (1 - x / (k + 2));
            if (tail < tol) {
                return value;
            }
        }
        for (int i = 0; i < m; i++) {
            double jump = rates[static_cast<size_t>(i)] / big_lambda;
            double target = i + 1 < m ? v[static_cast<size_t>(i + 1)] : mu * v[0];
            next[static_cast<size_t>(i)] = (1 - jump) * v[static_cast<size_t>(i)] + jump * target;
        }
        std::swap(v, next);
        log_w = log_next;
    }
    throw NumericalError("series backend: Poisson tail above tolerance after " + std::to_string(n_max) +
                         " terms");
}

double extrema_grid_step(const ExpPolyFunction& f, double T) {
    double step = std::numeric_limits<double>::infinity();
    for (const auto& term : f.terms()) {
        if (term.pole.imag() != 0) {
            step = std::min(step, std::numbers::pi / std::abs(term.pole.imag()));
        }
        if (term.pole.real() != 0) {
            step = std::min(step, 1 / std::abs(term.pole.real()));
        }
    }
    step /= 20;
    return std::min(step, T / 200);
}

std::vector<Extremum> find_extrema(const ExpPolyFunction& f, double T, const Tolerances& tol) {
    if (!(T > 0)) {
        throw SpecError("extrema window must be positive");
    }
    std::vector<Extremum> out;
    double step = extrema_grid_step(f, T);
    ExpPolyFunction df = f.derivative();
    scan_sign_changes(df, T, step, [&](double t, int before) {
        double v = f.evaluate_complex(t).real();
        ExtremumKind shape = before > 0 ? ExtremumKind::kMax : ExtremumKind::kMin;
        ExtremumKind kind = std::abs(v) < tol.zero_touch ? ExtremumKind::kMin : shape;
        out.push_back({t, v, kind, shape});
    });
    scan_sign_changes(f, T, step, [&](double t, int) { out.push_back({t, f.evaluate_complex(t).real(), ExtremumKind::kZeroCrossing, ExtremumKind::kZeroCrossing});
    });
    std::stable_sort(out.begin(), out.end(), [](const Extremum& a, const Extremum& b) { return a.t < b.t; });
    return out;
}

}  // namespace semimarkov
