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

#include "semimarkov/montecarlo.h"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "semimarkov/errors.h"
#include "semimarkov/renewal.h"

namespace semimarkov {
namespace {

SimConfig config(std::uint64_t n_traj, std::uint64_t seed, double horizon = 20) {
    SimConfig cfg;
    cfg.n_traj = n_traj;
    cfg.seed = seed;
    cfg.horizon = horizon;
    return cfg;
}

void expect_within_3sigma(const Estimate& e, double exact, const std::string& what) {
    EXPECT_LE(std::abs(e.mean - exact), 3 * e.std_error + 1e-15) << what << " mean=" << e.mean << " exact=" << exact
                                                                  << " se=" << e.std_error;
}

TEST(SimConfig, validates) {
    EXPECT_THROW(config(0, 1).validate(), SpecError);
    EXPECT_THROW(config(10, 1, 0).validate(), SpecError);
    EXPECT_NO_THROW(config(10, 1).validate());
}

TEST(TrajectoryRng, streams_are_keyed) {
    TrajectoryRng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    std::uint64_t xa = a.next_u64();
    EXPECT_EQ(xa, b.next_u64());
    EXPECT_NE(xa, c.next_u64());
    EXPECT_NE(xa, d.next_u64());
}

TEST(TrajectoryRng, uniform_moments) {
    TrajectoryRng rng(11, 0);
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; i++) {
        double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sum2 += u * u;
    }
    EXPECT_NEAR(sum / n, 0.5, 3 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(sum2 / n, 1.0 / 3, 0.005);
}

TEST(sample_jump_count, zero_time) {
    TrajectoryRng rng(1, 0);
    EXPECT_EQ(sample_jump_count(HypoExpWTD::exponential(1), 0, rng), 0u);
    EXPECT_THROW(sample_jump_count(HypoExpWTD::exponential(1), -1, rng), std::domain_error);
}

TEST(sample_jump_count, poisson_mean) {
    const std::uint64_t n = 100000;
    double sum = 0, sum2 = 0;
    for (std::uint64_t i = 0; i < n; i++) {
        TrajectoryRng rng(2024, i);
        double k = static_cast<double>(sample_jump_count(HypoExpWTD::exponential(1), 1, rng));
        sum += k;
        sum2 += k * k;
    }
    double mean = sum / n;
    double se = std::sqrt((sum2 / n - mean * mean) / (n - 1));
    EXPECT_LE(std::abs(mean - 1.0), 3 * se);
}

TEST(sample_jump_count, erlang_parity) {
    const std::uint64_t n = 100000;
    double sum = 0, sum2 = 0;
    for (std::uint64_t i = 0; i < n; i++) {
        TrajectoryRng rng(7, i);
        double v = sample_jump_count(HypoExpWTD::erlang(2, 1), 10, rng) % 2 == 0 ? 1 : -1;
        sum += v;
        sum2 += v * v;
    }
    double mean = sum / n;
    double se = std::sqrt((sum2 / n - mean * mean) / (n - 1));
    double q = std::exp(-10.0) * (std::cos(10.0) + std::sin(10.0));
    EXPECT_LE(std::abs(mean - q), 3 * se);
}

TEST(estimate_generating_function, mu_one_is_exact) {
    auto est = estimate_generating_function(HypoExpWTD::erlang(2, 1), 1, {0.0, 1.0, 5.0}, config(1000, 5));
    for (const auto& e : est) {
        EXPECT_EQ(e.mean, 1.0);
        EXPECT_EQ(e.std_error, 0.0);
        EXPECT_EQ(e.n, 1000u);
    }
}

TEST(estimate_generating_function, mu_zero_estimates_survival) {
    auto w = HypoExpWTD({1.0, 0.5});
    std::vector<double> times{0.5, 1, 2, 4, 8};
    auto est = estimate_generating_function(w, 0, times, config(100000, 17));
    auto g = survival(w);
    for (size_t i = 0; i < times.size(); i++) {
        expect_within_3sigma(est[i], g(times[i]), "survival");
    }
}

TEST(estimate_generating_function, mu_minus_one_estimates_q) {
    auto w = HypoExpWTD::erlang(2, 1);
    std::vector<double> times{0.5, 1, 2, 3, 5, 8};
    auto est = estimate_generating_function(w, -1, times, config(100000, 23));
    auto q = even_odd_difference(w);
    for (size_t i = 0; i < times.size(); i++) {
        expect_within_3sigma(est[i], q(times[i]), "q");
    }
}

TEST(estimate_generating_function, matches_analytic_for_general_mu) {
    for (double mu : {-0.6, 0.4}) {
        auto w = HypoExpWTD({1.0, 0.5});
        std::vector<double> times{1, 3, 6};
        auto est = estimate_generating_function(w, mu, times, config(100000, 31));
        auto gf = generating_function(w, mu).value;
        for (size_t i = 0; i < times.size(); i++) {
            expect_within_3sigma(est[i], gf(times[i]), "gf");
        }
    }
}

TEST(estimate_generating_function, rejects_bad_input) {
    auto w = HypoExpWTD::exponential(1);
    EXPECT_THROW(estimate_generating_function(w, 2, {1.0}, config(10, 1)), SpecError);
    EXPECT_THROW(estimate_generating_function(w, 0.5, {30.0}, config(10, 1)), SpecError);
    EXPECT_THROW(estimate_generating_function(w, 0.5, {}, config(10, 1)), SpecError);
}

TEST(estimate_generating_function, default_grid_from_config) {
    auto cfg = config(100, 3);
    cfg.times = {0.0, 1.0};
    EXPECT_EQ(estimate_generating_function(HypoExpWTD::exponential(1), 0.5, {}, cfg).size(), 2u);
}

TEST(estimate_jump_probability, matches_closed_forms) {
    auto w = HypoExpWTD({1.0, 0.5});
    std::vector<double> times{1, 3, 6};
    for (std::uint64_t n : {0u, 1u, 3u}) {
        auto est = estimate_jump_probability(w, n, times, config(100000, 41));
        auto p = jump_probability(w, static_cast<int>(n));
        for (size_t i = 0; i < times.size(); i++) {
            expect_within_3sigma(est[i], p(times[i]), "p_n");
        }
    }
}

TEST(estimate_jump_probability, erlang_zero_jumps) {
    std::vector<double> times{1, 2, 4};
    auto est = estimate_jump_probability(HypoExpWTD::erlang(2, 1), 0, times, config(100000, 43));
    for (size_t i = 0; i < times.size(); i++) {
        expect_within_3sigma(est[i], std::exp(-times[i]) * (1 + times[i]), "p_0");
    }
}

TEST(simulate_two_state, initial_time_reproduces_p0) {
    SemiMarkovSpec spec(0.3, 0.6, HypoExpWTD::erlang(2, 1));
    auto est = simulate_two_state(spec, ProbabilityVector(0.7, 0.3), {0.0}, config(1000, 9));
    EXPECT_EQ(est[0].p1.mean, 0.7);
    EXPECT_EQ(est[0].p1.std_error, 0.0);
    EXPECT_DOUBLE_EQ(est[0].p2.mean, 0.3);
}

TEST(simulate_two_state, equal_jump_exponential) {
    SemiMarkovSpec spec(0.5, 0.5, HypoExpWTD::exponential(1));
    ProbabilityVector p0(0.9, 0.1);
    std::vector<double> times{0.3, 1, 2, 4};
    auto est = simulate_two_state(spec, p0, times, config(100000, 51));
    for (size_t i = 0; i < times.size(); i++) {
        double exact = 0.5 * (1 + std::exp(-times[i]) * (2 * p0.p1 - 1));
        expect_within_3sigma(est[i].p1, exact, "equal-jump");
    }
}

TEST(simulate_two_state, flip_two_rates) {
    SemiMarkovSpec spec(0, 1, HypoExpWTD({1.0, 0.5}));
    ProbabilityVector p0(1, 0);
    std::vector<double> times{1, 2.5, 4, 7};
    auto est = simulate_two_state(spec, p0, times, config(100000, 61));
    ClosedFormPropagator prop(spec);
    for (size_t i = 0; i < times.size(); i++) {
        Eigen::Vector2d p = prop(times[i], 0).entries * p0.vec();
        expect_within_3sigma(est[i].p1, p(0), "flip");
    }
}

TEST(simulate_two_state, general_jump_matrix_matches_volterra) {
    SemiMarkovSpec spec(0.3, 0.6, HypoExpWTD::erlang(2, 1));
    ProbabilityVector p0(0.2, 0.8);
    std::vector<double> times{1, 3, 5};
    auto est = simulate_two_state(spec, p0, times, config(100000, 71));
    auto sol = volterra_solve(spec, 5, 1e-3);
    for (size_t i = 0; i < times.size(); i++) {
        Eigen::Vector2d p = sol.at(times[i]) * p0.vec();
        EXPECT_LE(std::abs(est[i].p1.mean - p(0)), 3 * est[i].p1.std_error + 1e-6);
    }
}

TEST(determinism, identical_seed_gives_identical_bits) {
    auto w = HypoExpWTD({1.0, 0.5});
    std::vector<double> times{0.5, 2, 5};
    auto cfg = config(20000, 12345);
    auto a = estimate_generating_function(w, -1, times, cfg);
    auto b = estimate_generating_function(w, -1, times, cfg);
    cfg.threads = 1;
    auto c = estimate_generating_function(w, -1, times, cfg);
    cfg.threads = 4;
    auto d = estimate_generating_function(w, -1, times, cfg);
    for (size_t i = 0; i < times.size(); i++) {
        for (const auto* other : {&b, &c, &d}) {
            EXPECT_EQ(a[i].mean, (*other)[i].mean);
            EXPECT_EQ(a[i].std_error, (*other)[i].std_error);
        }
    }
    auto e = estimate_generating_function(w, -1, times, config(20000, 12346));
    EXPECT_NE(a[1].mean, e[1].mean);
}

TEST(determinism, two_state_independent_of_threads) {
    SemiMarkovSpec spec(0, 1, HypoExpWTD::erlang(2, 1));
    auto cfg = config(10000, 77);
    cfg.threads = 1;
    auto a = simulate_two_state(spec, ProbabilityVector(0.5, 0.5), {1.0, 3.0}, cfg);
    cfg.threads = 3;
    auto b = simulate_two_state(spec, ProbabilityVector(0.5, 0.5), {1.0, 3.0}, cfg);
    for (size_t i = 0; i < a.size(); i++) {
        EXPECT_EQ(a[i].p1.mean, b[i].p1.mean);
        EXPECT_EQ(a[i].p1.std_error, b[i].p1.std_error);
    }
}

TEST(coverage, three_sigma_intervals_cover_analytic_values) {
    auto w = HypoExpWTD::erlang(2, 1);
    const double t = 2;
    double q = even_odd_difference(w)(t);
    double g = survival(w)(t);
    SemiMarkovSpec spec(0, 1, HypoExpWTD({1.0, 0.5}));
    ClosedFormPropagator prop(spec);
    double occ = (prop(t, 0).entries * Eigen::Vector2d(1, 0))(0);
    int cover_q = 0, cover_g = 0, cover_occ = 0;
    for (std::uint64_t run = 0; run < 100; run++) {
        auto cfg = config(2000, 1000 + run);
        auto eq = estimate_generating_function(w, -1, {t}, cfg)[0];
        auto eg = estimate_generating_function(w, 0, {t}, cfg)[0];
        auto eo = simulate_two_state(spec, ProbabilityVector(1, 0), {t}, cfg)[0].p1;
        cover_q += std::abs(eq.mean - q) <= 3 * eq.std_error;
        cover_g += std::abs(eg.mean - g) <= 3 * eg.std_error;
        cover_occ += std::abs(eo.mean - occ) <= 3 * eo.std_error;
    }
    EXPECT_GE(cover_q, 99);
    EXPECT_GE(cover_g, 99);
    EXPECT_GE(cover_occ, 99);
}

TEST(csv, estimate_rows) {
    auto cfg = config(4, 42);
    std::ostringstream out;
    write_estimates_header(out);
    write_estimates_rows(out, "lambda_mu", {1.5}, {Estimate{0.25, 0.125, 4}}, cfg);
    EXPECT_EQ(out.str(), "t,quantity,mean,std_error,n_traj,seed\n1.5,lambda_mu,0.25,0.125,4,42\n");
}

}  // namespace
}  // namespace semimarkov
