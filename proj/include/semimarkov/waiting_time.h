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

#ifndef SEMIMARKOV_WAITING_TIME_H
#define SEMIMARKOV_WAITING_TIME_H

#include <span>
#include <string>
#include <vector>

#include "semimarkov/poly_laplace.h"

namespace semimarkov {

/// Convolution of exponential stages with rates lambda_i > 0. Rates are kept
/// sorted ascending so that permutations of the same stages compare equal.
class HypoExpWTD {
   public:
    /// Throws SpecError for an empty rate list or a non-positive rate.
    explicit HypoExpWTD(std::vector<double> rates);

    static HypoExpWTD exponential(double rate);
    static HypoExpWTD erlang(int stages, double rate);

    std::span<const double> rates() const { return rates_; }
    int stages() const { return static_cast<int>(rates_.size()); }
    double min_rate() const { return rates_.front(); }
    double max_rate() const { return rates_.back(); }
    double mean() const;

    /// N(u) = prod lambda_i.
    Polynomial numerator() const;
    /// D(u) = prod (u + lambda_i), one linear factor per stage.
    std::vector<Polynomial> denominator_factors() const;
    Polynomial denominator() const;
    /// R(u) = (D(u) - N(u)) / u, so that the survival transform is R / D.
    Polynomial survival_numerator() const;

    /// f^(u) = N / D with the denominator in factored form.
    RationalLaplace transform() const;
    cdouble laplace(cdouble u) const;

    /// Canonical text form: exp:l, erlang:m:l or conv:l1,l2,...
    std::string to_string() const;

    bool operator==(const HypoExpWTD& o) const { return rates_ == o.rates_; }

   private:
    std::vector<double> rates_;
};

/// Kernel of the renewal equation f = k * g. The delta part is nonzero only
/// for a single exponential stage.
struct MemoryKernel {
    double delta_weight = 0;
    ExpPolyFunction regular_part;
};

ExpPolyFunction pdf(const HypoExpWTD& w);
ExpPolyFunction survival(const HypoExpWTD& w);
MemoryKernel kernel(const HypoExpWTD& w, const Tolerances& tol = kTolerances);

}  // namespace semimarkov

#endif
