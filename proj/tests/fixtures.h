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

// Shared channel and waiting-time matrices for property tests.

#ifndef SEMIMARKOV_TESTS_FIXTURES_H
#define SEMIMARKOV_TESTS_FIXTURES_H

#include <Eigen/Core>
#include <cmath>
#include <random>
#include <vector>

#include "semimarkov/qubit.h"
#include "semimarkov/waiting_time.h"

namespace semimarkov::fixtures {

inline std::vector<PauliChannel> channel_matrix() {
    return {PauliChannel::identity(),
            PauliChannel::phase_flip(),
            PauliChannel::ep(),
            PauliChannel::mixture(0.3),
            PauliChannel::mixture(0.8),
            PauliChannel(Eigen::Vector4d(0.2, 0.4, 0.2, 0.2)),
            PauliChannel(Eigen::Vector4d(0.1, 0.2, 0.3, 0.4))};
}

inline std::vector<HypoExpWTD> wtd_matrix() {
    return {HypoExpWTD::exponential(1),    HypoExpWTD::erlang(2, 1),    HypoExpWTD::erlang(4, 1),
            HypoExpWTD({1.0, 0.5}),        HypoExpWTD({1.0, 0.13}),     HypoExpWTD({1.0, 2.0, 3.0})};
}

/// Haar-uniform pure states mixed toward the center by a random factor.
inline std::vector<QubitState> random_states(int n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    std::vector<QubitState> out;
    for (int i = 0; i < n; i++) {
        Eigen::Vector3d v(normal(gen), normal(gen), normal(gen));
        out.push_back(QubitState::from_bloch(v.normalized() * std::cbrt(unit(gen))));
    }
    return out;
}

/// The six pure states on the Bloch axes: +x, -x, +y, -y, +z, -z.
inline std::vector<Eigen::Vector3d> axis_states() {
    std::vector<Eigen::Vector3d> out;
    for (int i = 0; i < 3; i++) {
        for (double s : {1.0, -1.0}) {
            Eigen::Vector3d v = Eigen::Vector3d::Zero();
            v(i) = s;
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace semimarkov::fixtures

#endif
