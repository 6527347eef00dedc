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

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "semimarkov/errors.h"

namespace semimarkov {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

bool consume_prefix(std::string_view& text, std::string_view prefix) {
    if (text.substr(0, prefix.size()) != prefix) {
        return false;
    }
    text.remove_prefix(prefix.size());
    return true;
}

}  // namespace

double parse_number(std::string_view text, std::string_view what) {
    double value = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw SpecError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

HypoExpWTD parse_wtd(std::string_view text) {
    const std::string original(text);
    if (consume_prefix(text, "exp:")) {
        return HypoExpWTD::exponential(parse_number(text, "rate"));
    }
    if (consume_prefix(text, "erlang:")) {
        auto parts = split(text, ':');
        if (parts.size() != 2) {
            throw SpecError("erlang spec must be erlang:M:RATE, got '" + original + "'");
        }
        double m = parse_number(parts[0], "stage count");
        if (m != std::floor(m) || m < 1 || m > 1e6) {
            throw SpecError("stage count must be a positive integer, got '" + original + "'");
        }
        return HypoExpWTD::erlang(static_cast<int>(m), parse_number(parts[1], "rate"));
    }
    if (consume_prefix(text, "conv:")) {
        std::vector<double> rates;
        for (auto field : split(text, ',')) {
            rates.push_back(parse_number(field, "rate"));
        }
        return HypoExpWTD(std::move(rates));
    }
    throw SpecError("unknown waiting-time spec '" + original + "' (expected exp:, erlang: or conv:)");
}

PauliChannel parse_channel(std::string_view text) {
    const std::string original(text);
    if (text == "phaseflip") {
        return PauliChannel::phase_flip();
    }
    if (text == "ep") {
        return PauliChannel::ep();
    }
    if (consume_prefix(text, "mix:")) {
        return PauliChannel::mixture(parse_number(text, "mixing weight"));
    }
    if (consume_prefix(text, "pauli:")) {
        auto parts = split(text, ',');
        if (parts.size() != 4) {
            throw SpecError("pauli spec needs four weights, got '" + original + "'");
        }
        Eigen::Vector4d p;
        for (int i = 0; i < 4; i++) {
            p(i) = parse_number(parts[static_cast<size_t>(i)], "Pauli weight");
        }
        return PauliChannel(p);
    }
    throw SpecError("unknown channel spec '" + original + "' (expected pauli:, phaseflip, ep or mix:)");
}

}  // namespace semimarkov
