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

#include "semimarkov/waiting_time.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "semimarkov/errors.h"

namespace semimarkov {

namespace {

std::string format_rate(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace

HypoExpWTD::HypoExpWTD(std::vector<double> rates) : rates_(std::move(rates)) {
    if (rates_.empty()) {
        throw SpecError("waiting-time distribution needs at least one rate");
    }
    for (double r : rates_) {
        if (!(r > 0) || !std::isfinite(r)) {
            throw SpecError("waiting-time rates must be positive and finite");
        }
    }
    std::sort(rates_.begin(), rates_.end());
}

HypoExpWTD HypoExpWTD::exponential(double rate) {
    return HypoExpWTD(std::vector<double>{rate});
}

HypoExpWTD HypoExpWTD::erlang(int stages, double rate) {
    if (stages < 1) {
        throw SpecError("Erlang distribution needs at least one stage");
    }
    return HypoExpWTD(std::vector<double>(static_cast<size_t>(stages), rate));
}

double HypoExpWTD::mean() const {
    double m = 0;
    for (double r : rates_) {
        m += 1 / r;
    }
    return m;
}

Polynomial HypoExpWTD::numerator() const {
    double n = 1;
    for (double r : rates_) {
        n *= r;
    }
    return Polynomial::constant(n);
}

std::vector<Polynomial> HypoExpWTD::denominator_factors() const {
    std::vector<Polynomial> factors;
    factors.reserve(rates_.size());
    for (double r : rates_) {
        factors.push_back(Polynomial::linear_factor(-r));
    }
    return factors;
}

Polynomial HypoExpWTD::denominator() const {
    Polynomial d = Polynomial::constant(1);
    for (const auto& f : denominator_factors()) {
        d = d * f;
    }
    return d;
}

Polynomial HypoExpWTD::survival_numerator() const {
    // D - N has zero constant term exactly; dividing by u drops it.
    return (denominator() - numerator()).divided_by_u();
}

RationalLaplace HypoExpWTD::transform() const {
    return RationalLaplace(numerator(), denominator_factors());
}

cdouble HypoExpWTD::laplace(cdouble u) const {
    cdouble v = 1;
    for (double r : rates_) {
        v *= r / (u + r);
    }
    return v;
}

std::string HypoExpWTD::to_string() const {
    if (rates_.size() == 1) {
        return "exp:" + format_rate(rates_[0]);
    }
    if (rates_.front() == rates_.back()) {
        return "erlang:" + std::to_string(rates_.size()) + ":" + format_rate(rates_[0]);
    }
    std::string s = "conv:";
    for (size_t i = 0; i < rates_.size(); i++) {
        if (i > 0) {
            s += ",";
        }
        s += format_rate(rates_[i]);
    }
    return s;
}

ExpPolyFunction pdf(const HypoExpWTD& w) {
    return invert_laplace(w.transform());
}

ExpPolyFunction survival(const HypoExpWTD& w) {
    return invert_laplace(RationalLaplace(w.survival_numerator(), w.denominator_factors()));
}

MemoryKernel kernel(const HypoExpWTD& w, const Tolerances& tol) {
    // k^ = u f^ / (1 - f^) = N / R with deg R = m - 1.
    auto split = split_proper(RationalLaplace(w.numerator(), w.survival_numerator()));
    MemoryKernel k;
    k.delta_weight = split.polynomial_part.coeff(0).real();
    if (!split.proper.num().is_zero()) {
        k.regular_part = invert_laplace(split.proper, tol);
    }
    return k;
}

}  // namespace semimarkov
