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

#ifndef SEMIMARKOV_MONTECARLO_H
#define SEMIMARKOV_MONTECARLO_H

#include <cstdint>
#include <ostream>
#include <string_view>
#include <vector>

#include "semimarkov/classical_semimarkov.h"
#include "semimarkov/waiting_time.h"

namespace semimarkov {

struct SimConfig {
    std::uint64_t n_traj = 100000;
    std::uint64_t seed = 1;
    double horizon = 10;
    /// Default observation grid when an operation is given no times.
    std::vector<double> times;
    /// Worker threads; 0 selects the hardware concurrency. Results do not
    /// depend on this value.
    unsigned threads = 0;

    /// Throws SpecError for n_traj < 1 or a nonpositive horizon.
    void validate() const;
};

struct Estimate {
    double mean = 0;
    double std_error = 0;
    std::uint64_t n = 0;
};

/// SplitMix64 stream keyed by (seed, trajectory index); trajectory i draws
/// the same numbers however trajectories are scheduled.
class TrajectoryRng {
   public:
    TrajectoryRng(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64();
    /// Uniform on [0, 1).
    double uniform();
    /// Inverse-CDF exponential with the given rate.
    double exponential(double rate);

   private:
    std::uint64_t state_;
};

/// One waiting time: the sum of one exponential per stage.
double sample_waiting_time(const HypoExpWTD& w, TrajectoryRng& rng);

/// Number of renewals in [0, t]. Throws std::domain_error for t < 0.
std::uint64_t sample_jump_count(const HypoExpWTD& w, double t, TrajectoryRng& rng);

/// Sample mean of mu^N(t) at each time. Throws SpecError for mu outside
/// [-1, 1] or times outside [0, horizon].
std::vector<Estimate> estimate_generating_function(const HypoExpWTD& w, double mu, const std::vector<double>& times,
                                                   const SimConfig& cfg);

/// Empirical P(N(t) = n) at each time.
std::vector<Estimate> estimate_jump_probability(const HypoExpWTD& w, std::uint64_t n, const std::vector<double>& times,
                                                const SimConfig& cfg);

struct OccupationEstimate {
    double t;
    Estimate p1;
    Estimate p2;
};

/// Occupation probabilities. Trajectories are stratified by the initial
/// state (n_traj from each) and weighted by p0, so t = 0 reproduces p0.
std::vector<OccupationEstimate> simulate_two_state(const SemiMarkovSpec& spec, const ProbabilityVector& p0,
                                                   const std::vector<double>& times, const SimConfig& cfg);

/// CSV with header t,quantity,mean,std_error,n_traj,seed.
void write_estimates_header(std::ostream& out);
void write_estimates_rows(std::ostream& out, std::string_view quantity, const std::vector<double>& times,
                          const std::vector<Estimate>& estimates, const SimConfig& cfg);

}  // namespace semimarkov

#endif
