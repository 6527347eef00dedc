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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "oracles/quadrature.h"
#include "semimarkov/errors.h"

namespace semimarkov {
namespace {

std::vector<HypoExpWTD> sample_distributions() {
    return {HypoExpWTD::exponential(1.7),       HypoExpWTD::erlang(2, 0.8),          HypoExpWTD::erlang(5, 1.0),
            HypoExpWTD({1.0, 2.0}),             HypoExpWTD({1.0, 0.13}),             HypoExpWTD({1.0, 1.0, 2.0, 5.0}),
            HypoExpWTD({0.3, 0.7, 1.1})};
}

TEST(HypoExpWTD, rejects_invalid_rates) {
    EXPECT_THROW(HypoExpWTD(std::vector<double>{}), SpecError);
    EXPECT_THROW(HypoExpWTD({1.0, -2.0}), SpecError);
    EXPECT_THROW(HypoExpWTD({0.0}), SpecError);
    EXPECT_THROW(HypoExpWTD::erlang(0, 1.0), SpecError);
}

TEST(HypoExpWTD, canonical_text_form) {
    EXPECT_EQ(HypoExpWTD::exponential(1.5).to_string(), "exp:1.5");
    EXPECT_EQ(HypoExpWTD::erlang(3, 2).to_string(), "erlang:3:2");
    EXPECT_EQ(HypoExpWTD({2.0, 0.5}).to_string(), "conv:0.5,2");
}

TEST(pdf, single_exponential) {
    const double lambda = 1.7;
    auto f = pdf(HypoExpWTD::exponential(lambda));
    for (double t = 0; t <= 10; t += 0.25) {
        EXPECT_NEAR(f(t), lambda * std::exp(-lambda * t), 1e-14);
    }
}

TEST(pdf, two_distinct_rates) {
    auto f = pdf(HypoExpWTD({1.0, 2.0}));
    for (double t = 0; t <= 10; t += 0.25) {
        EXPECT_NEAR(f(t), 2 * (std::exp(-t) - std::exp(-2 * t)), 1e-14);
    }
}

TEST(pdf, two_rate_sinh_form) {
    for (double r : {0.13, 0.5, 2.0, 7.0}) {
        const double lambda = 1.3;
        auto f = pdf(HypoExpWTD({lambda, r * lambda}));
        double s = lambda * (1 + r);
        double p = lambda * lambda * r;
        double root = std::sqrt(1 - 4 * p / (s * s));
        for (double t = 0; t <= 15; t += 0.5) {
            double expected = 2 * p / s * std::exp(-0.5 * s * t) / root * std::sinh(0.5 * s * t * root);
            EXPECT_NEAR(f(t), expected, 1e-12) << "r=" << r << " t=" << t;
        }
    }
}

TEST(pdf, erlang_two) {
    const double lambda = 0.8;
    auto f = pdf(HypoExpWTD::erlang(2, lambda));
    for (double t = 0; t <= 10; t += 0.25) {
        EXPECT_NEAR(f(t), lambda * lambda * t * std::exp(-lambda * t), 1e-14);
    }
}

TEST(pdf, erlang_general_form) {
    const double lambda = 1.4;
    for (int m = 1; m <= 8; m++) {
        auto f = pdf(HypoExpWTD::erlang(m, lambda));
        for (double t = 0; t <= 12; t += 0.5) {
            double expected = lambda * std::pow(lambda * t, m - 1) / std::tgamma(m) * std::exp(-lambda * t);
            EXPECT_NEAR(f(t), expected, 1e-13) << "m=" << m;
        }
    }
}

TEST(pdf, nonnegative_on_grid) {
    for (const auto& w : sample_distributions()) {
        auto f = pdf(w);
        for (double t = 0; t <= 60 / w.min_rate(); t += 0.05 / w.max_rate()) {
            EXPECT_GE(f(t), -1e-15) << w.to_string() << " t=" << t;
        }
    }
}

TEST(pdf, normalized) {
    for (const auto& w : sample_distributions()) {
        auto f = pdf(w);
        double T = 50 / w.min_rate();
        long double mass = oracle::simpson([&](long double t) { return f(static_cast<double>(t)); }, 0, T, 200000);
        EXPECT_NEAR(static_cast<double>(mass), 1.0, 1e-8) << w.to_string();
    }
}

TEST(pdf, symmetric_under_rate_swap) {
    auto ab = pdf(HypoExpWTD({0.7, 2.3}));
    auto ba = pdf(HypoExpWTD({2.3, 0.7}));
    EXPECT_EQ(ab.coefficient_distance(ba), 0.0);
}

TEST(pdf, transform_matches_product_form) {
    for (const auto& w : sample_distributions()) {
        auto back = laplace_transform(pdf(w));
        for (cdouble u : {cdouble(0.3, 0), cdouble(1, 2), cdouble(4, -1)}) {
            cdouble expected = 1;
            for (double r : w.rates()) {
                expected *= r / (u + r);
            }
            EXPECT_LT(std::abs(back(u) - expected), 1e-12) << w.to_string();
        }
    }
}

TEST(survival, single_exponential) {
    auto g = survival(HypoExpWTD::exponential(0.6));
    for (double t = 0; t <= 10; t += 0.25) {
        EXPECT_NEAR(g(t), std::exp(-0.6 * t), 1e-14);
    }
}

TEST(survival, erlang_two) {
    const double lambda = 1.9;
    auto g = survival(HypoExpWTD::erlang(2, lambda));
    auto f = pdf(HypoExpWTD::erlang(2, lambda));
    for (double t = 0; t <= 8; t += 0.5) {
        EXPECT_NEAR(g(t), std::exp(-lambda * t) * (1 + lambda * t), 1e-14);
        long double integral = oracle::simpson([&](long double s) { return f(static_cast<double>(s)); }, 0, t, 2000);
        EXPECT_NEAR(g(t), 1 - static_cast<double>(integral), 1e-10);
    }
}

TEST(survival, starts_at_one_and_nonincreasing) {
    for (const auto& w : sample_distributions()) {
        auto g = survival(w);
        EXPECT_NEAR(g(0), 1.0, 1e-14) << w.to_string();
        double prev = g(0);
        for (double t = 0.01; t <= 30 / w.min_rate(); t += 0.05 / w.max_rate()) {
            double v = g(t);
            EXPECT_LE(v, prev + 1e-15) << w.to_string() << " t=" << t;
            prev = v;
        }
    }
}

TEST(survival, transform_identity) {
    for (const auto& w : sample_distributions()) {
        auto back = laplace_transform(survival(w));
        for (cdouble u : {cdouble(0.3, 0), cdouble(1, 2), cdouble(4, -1)}) {
            cdouble expected = (1.0 - w.laplace(u)) / u;
            EXPECT_LT(std::abs(back(u) - expected), 1e-12) << w.to_string();
        }
    }
}

TEST(kernel, single_exponential_is_delta) {
    auto k = kernel(HypoExpWTD::exponential(2.5));
    EXPECT_NEAR(k.delta_weight, 2.5, 1e-15);
    EXPECT_TRUE(k.regular_part.is_zero());
}

TEST(kernel, erlang_two) {
    const double lambda = 0.9;
    auto k = kernel(HypoExpWTD::erlang(2, lambda));
    EXPECT_EQ(k.delta_weight, 0.0);
    for (double t = 0; t <= 10; t += 0.25) {
        EXPECT_NEAR(k.regular_part(t), lambda * lambda * std::exp(-2 * lambda * t), 1e-14);
    }
}

TEST(kernel, two_rates_has_no_delta) {
    auto k = kernel(HypoExpWTD({1.0, 2.0}));
    EXPECT_EQ(k.delta_weight, 0.0);
    EXPECT_FALSE(k.regular_part.is_zero());
}

TEST(kernel, transform_identity) {
    for (const auto& w : sample_distributions()) {
        auto k = kernel(w);
        if (w.stages() > 1) {
            EXPECT_EQ(k.delta_weight, 0.0);
        }
        for (cdouble u : {cdouble(0.3, 0), cdouble(1, 2), cdouble(4, -1)}) {
            cdouble f = w.laplace(u);
            cdouble expected = u * f / (1.0 - f);
            cdouble got = k.delta_weight;
            if (!k.regular_part.is_zero()) {
                got += laplace_transform(k.regular_part)(u);
            }
            EXPECT_LT(std::abs(got - expected), 1e-11 * (1 + std::abs(expected))) << w.to_string();
        }
    }
}

TEST(kernel, reconvolution_with_survival_gives_pdf) {
    for (const auto& w : sample_distributions()) {
        auto k = kernel(w);
        auto g = survival(w);
        auto f = pdf(w);
        double T = 20 / w.min_rate();
        for (int i = 1; i <= 20; i++) {
            double tau = T * i / 20;
            double conv = k.delta_weight * g(tau);
            if (!k.regular_part.is_zero()) {
                conv += static_cast<double>(oracle::simpson(
                    [&](long double s) {
                        double sd = static_cast<double>(s);
                        return k.regular_part(tau - sd) * g(sd);
                    },
                    0, tau, 4000));
            }
            EXPECT_NEAR(conv, f(tau), 1e-7) << w.to_string() << " tau=" << tau;
        }
    }
}

}  // namespace
}  // namespace semimarkov
