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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "semimarkov/csv.h"
#include "semimarkov/errors.h"

namespace semimarkov {

namespace {

constexpr std::uint64_t kBlockSize = 4096;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Mean and centered second moment per observation time.
struct Moments {
    std::vector<double> n, mean, m2;

    explicit Moments(size_t k) : n(k, 0.0), mean(k, 0.0), m2(k, 0.0) {}

    void add(size_t i, double x) {
        n[i] += 1;
        double d = x - mean[i];
        mean[i] += d / n[i];
        m2[i] += d * (x - mean[i]);
    }

    // Chan et al. pairwise merge; applied in block order for determinism.
    void merge(const Moments& o) {
        for (size_t i = 0; i < n.size(); i++) {
            if (o.n[i] == 0) {
                continue;
            }
            double total = n[i] + o.n[i];
            double d = o.mean[i] - mean[i];
            mean[i] += d * o.n[i] / total;
            m2[i] += o.m2[i] + d * d * n[i] * o.n[i] / total;
            n[i] = total;
        }
    }

    Estimate estimate(size_t i) const {
        Estimate e;
        e.n = static_cast<std::uint64_t>(n[i]);
        e.mean = mean[i];
        e.std_error = n[i] > 1 ? std::sqrt(m2[i] / (n[i] - 1) / n[i]) : 0.0;
        return e;
    }
};

// Observation values of one trajectory: sample(index, out) fills out[i] for
// each observation time.
using TrajectorySampler = std::function<void(std::uint64_t, std::vector<double>&)>;

Moments run_trajectories(std::uint64_t n_traj, size_t n_obs, unsigned threads, const TrajectorySampler& sample) {
    const std::uint64_t n_blocks = (n_traj + kBlockSize - 1) / kBlockSize;
    std::vector<Moments> blocks(n_blocks, Moments(n_obs));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        std::vector<double> obs(n_obs);
        for (std::uint64_t b = next++; b < n_blocks; b = next++) {
            std::uint64_t end = std::min(n_traj, (b + 1) * kBlockSize);
            for (std::uint64_t i = b * kBlockSize; i < end; i++) {
                sample(i, obs);
                for (size_t k = 0; k < n_obs; k++) {
                    blocks[b].add(k, obs[k]);
                }
            }
        }
    };
    unsigned n_threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    n_threads = static_cast<unsigned>(std::min<std::uint64_t>(n_threads, n_blocks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; t++) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    Moments total(n_obs);
    for (const auto& b : blocks) {
        total.merge(b);
    }
    return total;
}

const std::vector<double>& resolve_times(const std::vector<double>& times, const SimConfig& cfg) {
    cfg.validate();
    const auto& ts = times.empty() ? cfg.times : times;
    if (ts.empty()) {
        throw SpecError("no observation times given");
    }
    for (double t : ts) {
        if (!(t >= 0) || t > cfg.horizon) {
            throw SpecError("observation times must lie in [0, horizon]");
        }
    }
    return ts;
}

// Jump counts at sorted observation times along one renewal trajectory.
void jump_counts(const HypoExpWTD& w, const std::vector<double>& times, const std::vector<size_t>& order,
                 TrajectoryRng& rng, std::vector<std::uint64_t>& counts) {
    double clock = sample_waiting_time(w, rng);
    std::uint64_t n = 0;
    for (size_t k : order) {
        while (clock <= times[k]) {
            n++;
            clock += sample_waiting_time(w, rng);
        }
        counts[k] = n;
    }
}

std::vector<size_t> sorted_order(const std::vector<double>& times) {
    std::vector<size_t> order(times.size());
    for (size_t i = 0; i < order.size(); i++) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return times[a] < times[b]; });
    return order;
}

}  // namespace

void SimConfig::validate() const {
    if (n_traj < 1) {
        throw SpecError("n_traj must be at least 1");
    }
    if (!(horizon > 0) || !std::isfinite(horizon)) {
        throw SpecError("simulation horizon must be positive");
    }
}

TrajectoryRng::TrajectoryRng(std::uint64_t seed, std::uint64_t index)
    : state_(mix64(seed + kGolden) ^ mix64(index * kGolden + 0x632BE59BD9B4E019ULL)) {}

std::uint64_t TrajectoryRng::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double TrajectoryRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double TrajectoryRng::exponential(double rate) {
    // 1 - U lies in (0, 1], so the logarithm is finite.
    return -std::log1p(-uniform()) / rate;
}

double sample_waiting_time(const HypoExpWTD& w, TrajectoryRng& rng) {
    double tau = 0;
    for (double r : w.rates()) {
        tau += rng.exponential(r);
    }
    return tau;
}

std::uint64_t sample_jump_count(const HypoExpWTD& w, double t, TrajectoryRng& rng) {
    if (!(t >= 0)) {
        throw std::domain_error("jump count needs t >= 0");
    }
    std::uint64_t n = 0;
    for (double clock = sample_waiting_time(w, rng); clock <= t; clock += sample_waiting_time(w, rng)) {
        n++;
    }
    return n;
}

std::vector<Estimate> estimate_generating_function(const HypoExpWTD& w, double mu, const std::vector<double>& times,
                                                   const SimConfig& cfg) {
    if (!(mu >= -1 && mu <= 1)) {
        throw SpecError("generating-function argument must lie in [-1, 1]");
    }
    const auto& ts = resolve_times(times, cfg);
    auto order = sorted_order(ts);
    auto moments = run_trajectories(cfg.n_traj, ts.size(), cfg.threads, [&](std::uint64_t i, std::vector<double>& obs) {
        TrajectoryRng rng(cfg.seed, i);
        std::vector<std::uint64_t> counts(ts.size());
        jump_counts(w, ts, order, rng, counts);
        for (size_t k = 0; k < ts.size(); k++) {
            obs[k] = counts[k] == 0 ? 1.0 : std::pow(mu, static_cast<double>(counts[k]));
        }
    });
    std::vector<Estimate> out;
    for (size_t k = 0; k < ts.size(); k++) {
        out.push_back(moments.estimate(k));
    }
    return out;
}

std::vector<Estimate> estimate_jump_probability(const HypoExpWTD& w, std::uint64_t n, const std::vector<double>& times,
                                                const SimConfig& cfg) {
    const auto& ts = resolve_times(times, cfg);
    auto order = sorted_order(ts);
    auto moments = run_trajectories(cfg.n_traj, ts.size(), cfg.threads, [&](std::uint64_t i, std::vector<double>& obs) {
        TrajectoryRng rng(cfg.seed, i);
        std::vector<std::uint64_t> counts(ts.size());
        jump_counts(w, ts, order, rng, counts);
        for (size_t k = 0; k < ts.size(); k++) {
            obs[k] = counts[k] == n ? 1.0 : 0.0;
        }
    });
    std::vector<Estimate> out;
    for (size_t k = 0; k < ts.size(); k++) {
        out.push_back(moments.estimate(k));
    }
    return out;
}

std::vector<OccupationEstimate> simulate_two_state(const SemiMarkovSpec& spec, const ProbabilityVector& p0,
                                                   const std::vector<double>& times, const SimConfig& cfg) {
    const auto& ts = resolve_times(times, cfg);
    auto order = sorted_order(ts);
    const Eigen::Matrix2d jump = spec.jump_matrix();
    // Indicator of state 1 at each time, starting from state `start`.
    auto stratum = [&](int start) {
        return run_trajectories(cfg.n_traj, ts.size(), cfg.threads, [&](std::uint64_t i, std::vector<double>& obs) {
            TrajectoryRng rng(cfg.seed, 2 * i + static_cast<std::uint64_t>(start));
            int state = start;
            double clock = sample_waiting_time(spec.wtd, rng);
            for (size_t k : order) {
                while (clock <= ts[k]) {
                    state = rng.uniform() < jump(0, state) ? 0 : 1;
                    clock += sample_waiting_time(spec.wtd, rng);
                }
                obs[k] = state == 0 ? 1.0 : 0.0;
            }
        });
    };
    Moments from1 = stratum(0);
    Moments from2 = stratum(1);
    std::vector<OccupationEstimate> out;
    for (size_t k = 0; k < ts.size(); k++) {
        Estimate a = from1.estimate(k), b = from2.estimate(k);
        Estimate p1;
        p1.n = cfg.n_traj;
        p1.mean = p0.p1 * a.mean + p0.p2 * b.mean;
        p1.std_error = std::hypot(p0.p1 * a.std_error, p0.p2 * b.std_error);
        Estimate p2 = p1;
        p2.mean = 1 - p1.mean;
        out.push_back({ts[k], p1, p2});
    }
    return out;
}

void write_estimates_header(std::ostream& out) {
    write_csv_row(out, {"t", "quantity", "mean", "std_error", "n_traj", "seed"});
}

void write_estimates_rows(std::ostream& out, std::string_view quantity, const std::vector<double>& times,
                          const std::vector<Estimate>& estimates, const SimConfig& cfg) {
    if (times.size() != estimates.size()) {
        throw std::invalid_argument("times and estimates differ in length");
    }
    for (size_t i = 0; i < times.size(); i++) {
        write_csv_row(out, {format_double(times[i]), quantity, format_double(estimates[i].mean),
                            format_double(estimates[i].std_error), std::to_string(estimates[i].n),
                            std::to_string(cfg.seed)});
    }
}

}  // namespace semimarkov
