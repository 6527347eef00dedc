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

#include "semimarkov/spec_parse.h"

#include <gtest/gtest.h>

#include "fixtures.h"
#include "semimarkov/errors.h"

namespace semimarkov {
namespace {

TEST(parse_wtd, accepts_all_forms) {
    EXPECT_EQ(parse_wtd("exp:2.5"), HypoExpWTD::exponential(2.5));
    EXPECT_EQ(parse_wtd("erlang:3:1"), HypoExpWTD::erlang(3, 1));
    EXPECT_EQ(parse_wtd("conv:1,0.5"), HypoExpWTD({1, 0.5}));
    EXPECT_EQ(parse_wtd("conv:1,2,3").stages(), 3);
}

TEST(parse_wtd, roundtrips_through_to_string) {
    for (const auto& w : fixtures::wtd_matrix()) {
        EXPECT_EQ(parse_wtd(w.to_string()), w) << w.to_string();
    }
}

TEST(parse_wtd, rejects_malformed_input) {
    for (const char* bad : {"", "exp", "exp:", "exp:-1", "exp:0", "exp:1x", "exp:nan", "exp:inf", "erlang:2",
                            "erlang:0:1", "erlang:2.5:1", "erlang:2:1:3", "conv:", "conv:1,,2", "conv:1,-2",
                            "gamma:2:1", " exp:1"}) {
        EXPECT_THROW(parse_wtd(bad), SpecError) << bad;
    }
}

TEST(parse_channel, accepts_all_forms) {
    EXPECT_EQ(parse_channel("phaseflip").lambda(), PauliChannel::phase_flip().lambda());
    EXPECT_EQ(parse_channel("ep").lambda(), PauliChannel::ep().lambda());
    EXPECT_EQ(parse_channel("mix:0.3").lambda(), PauliChannel::mixture(0.3).lambda());
    EXPECT_EQ(parse_channel("pauli:0.2,0.4,0.2,0.2").lambda(), Eigen::Vector4d(0.2, 0.4, 0.2, 0.2));
}

TEST(parse_channel, roundtrips_through_to_string) {
    for (const auto& ch : fixtures::channel_matrix()) {
        EXPECT_EQ(parse_channel(ch.to_string()).lambda(), ch.lambda()) << ch.to_string();
    }
}

TEST(parse_channel, rejects_malformed_input) {
    for (const char* bad : {"", "phase", "mix:", "mix:1.5", "mix:-0.1", "pauli:1,0,0", "pauli:0.5,0.5,0.5,0.5",
                            "pauli:1,0,0,0,0", "pauli:a,b,c,d", "Phaseflip"}) {
        EXPECT_THROW(parse_channel(bad), SpecError) << bad;
    }
}

}  // namespace
}  // namespace semimarkov
