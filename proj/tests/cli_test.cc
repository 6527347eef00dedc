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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "commands.h"

namespace semimarkov::cli {
namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

using Table = std::vector<std::vector<std::string>>;

// Drops the leading comment line and the column header, and splits the rest
// on commas.
Table parse_csv(const std::string& text, std::string* header = nullptr) {
    std::istringstream in(text);
    std::string line;
    Table rows;
    bool first = true;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (first) {
            EXPECT_EQ(line.rfind("# semimarkov ", 0), 0u) << line;
            first = false;
            continue;
        }
        if (!have_header) {
            have_header = true;
            if (header) {
                *header = line;
            }
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

// Kolmogorov distances grouped by pair id.
std::map<std::string, std::vector<double>> by_pair(const Table& rows) {
    std::map<std::string, std::vector<double>> out;
    for (const auto& r : rows) {
        out[r[1]].push_back(std::stod(r[2]));
    }
    return out;
}

TEST(cli_kolmogorov, flip_with_oscillatory_wtd_revives) {
    std::string header;
    auto rows = parse_csv(call({"kolmogorov", "--preset", "flip", "--wtd", "conv:1,0.5", "--steps", "401"}).out, &header);
    EXPECT_EQ(header, "lambda_t,pair_id,DK");
    auto pairs = by_pair(rows);
    EXPECT_EQ(pairs.size(), 10u);
    for (const auto& [id, dk] : pairs) {
        bool revival = false;
        for (size_t k = 1; k < dk.size(); k++) {
            revival = revival || dk[k] > dk[k - 1] + 1e-12;
        }
        EXPECT_TRUE(revival) << id;
    }
}

TEST(cli_kolmogorov, half_and_exponential_are_nonincreasing) {
    for (const auto& args : std::vector<std::vector<std::string>>{{"kolmogorov", "--preset", "half", "--wtd", "conv:1,0.5"},
                                                                   {"kolmogorov", "--preset", "flip", "--wtd", "exp:1"}}) {
        auto pairs = by_pair(parse_csv(call(args).out));
        ASSERT_FALSE(pairs.empty());
        for (const auto& [id, dk] : pairs) {
            for (size_t k = 1; k < dk.size(); k++) {
                EXPECT_LE(dk[k], dk[k - 1] + 1e-12) << args[2] << " pair " << id;
            }
        }
    }
}

TEST(cli_qm, maxima_table) {
    std::string header;
    auto rows = parse_csv(call({"qm", "--table", "maxima", "--window", "10"}).out, &header);
    EXPECT_EQ(header, "m,index,lambda_t,height,partial_sum");
    std::map<int, std::vector<double>> heights;
    for (const auto& r : rows) {
        heights[std::stoi(r[0])].push_back(std::stod(r[3]));
    }
    EXPECT_EQ(heights.count(1), 0u);
    ASSERT_EQ(heights[2].size(), 3u);
    for (size_t n = 0; n < 3; n++) {
        EXPECT_NEAR(heights[2][n], std::exp(-(n + 1.0) * 3.141592653589793), 1e-12);
    }
    for (int m = 3; m <= 6; m++) {
        EXPECT_GT(heights[m].front(), heights[m - 1].front()) << m;
    }
}

TEST(cli_qm, curves_have_one_column_per_order) {
    std::string header;
    auto rows = parse_csv(call({"qm", "--m-max", "3", "--steps", "11"}).out, &header);
    EXPECT_EQ(header, "lambda_t,abs_q1,abs_q2,abs_q3");
    ASSERT_EQ(rows.size(), 11u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"0", "1", "1", "1"}));
}

std::map<std::string, bool> rows_with_negative(const Table& rows) {
    std::map<std::string, bool> neg;
    for (const auto& r : rows) {
        neg[r[0]] = neg[r[0]] || r[2] == "-1";
    }
    return neg;
}

TEST(cli_sign_scan, qr_mode_threshold) {
    auto r = call({"sign-scan", "--mode", "qr", "--x-min", "0.05", "--x-max", "0.5", "--x-steps", "2", "--window", "30",
                   "--steps", "301"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto neg = rows_with_negative(parse_csv(r.out));
    EXPECT_FALSE(neg.at("0.05"));
    EXPECT_TRUE(neg.at("0.5"));
}

TEST(cli_sign_scan, nu_mode_threshold) {
    auto r = call({"sign-scan", "--mode", "nu", "--x-min", "0.4", "--x-max", "0.9", "--x-steps", "2", "--window", "60",
                   "--steps", "601"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto neg = rows_with_negative(parse_csv(r.out));
    EXPECT_FALSE(neg.at("0.4"));
    EXPECT_TRUE(neg.at("0.9"));
}

TEST(cli_tcl, ladder_column_always_negative_and_residual_small) {
    std::string header;
    auto rows = parse_csv(call({"tcl", "--channel", "pauli:0.2,0.4,0.2,0.2", "--wtd", "conv:1,0.13", "--steps", "101"}).out,
                          &header);
    EXPECT_EQ(header, "lambda_t,singular,gamma_x,gamma_y,gamma_z,dephasing,flip,x_pair,y_pair,residual");
    for (size_t k = 1; k < rows.size(); k++) {
        EXPECT_LT(std::stod(rows[k][8]), 0) << rows[k][0];
        EXPECT_LT(std::stod(rows[k][9]), 1e-10);
    }
}

TEST(cli_tcl, phase_flip_exponential_rate_is_one) {
    auto rows = parse_csv(call({"tcl", "--channel", "phaseflip", "--wtd", "exp:1", "--steps", "5"}).out);
    for (const auto& r : rows) {
        EXPECT_NEAR(std::stod(r[4]), 1, 1e-12);
        EXPECT_NEAR(std::stod(r[5]), 1, 1e-12);
    }
}

TEST(cli_choi_scan, flags_violations_and_singular_rows) {
    auto rows = parse_csv(call({"choi-scan", "--wtd", "erlang:2:1", "--window", "5", "--steps", "21", "--s-window", "1",
                                "--s-steps", "5"})
                              .out);
    int negative = 0;
    for (const auto& r : rows) {
        if (r[0] == "0") {
            EXPECT_EQ(r[3], "1");
        }
        negative += r[3] == "-1";
        if (r[0] == "2.5" && r[1] == "0.5") {
            EXPECT_EQ(r[3], "-1");
        }
    }
    EXPECT_GT(negative, 0);
}

TEST(cli_measures, erlang2_summary) {
    auto r = call({"measures", "--wtd", "erlang:2:1", "--samples", "4001"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["blp"]["value"].get<double>(), 1 / (std::exp(3.141592653589793) - 1), 1e-6);
    EXPECT_TRUE(doc["rhp"]["infinite"].get<bool>());
    EXPECT_TRUE(doc["rhp"]["value"].is_null());
    double hou = doc["hou"]["value"].get<double>();
    EXPECT_GT(hou, 0);
    EXPECT_TRUE(std::isfinite(hou));
    auto ep = nlohmann::json::parse(call({"measures", "--channel", "ep", "--wtd", "erlang:2:1", "--samples", "101"}).out);
    EXPECT_NEAR(ep["blp"]["value"].get<double>(), doc["blp"]["value"].get<double>(), 1e-10);
}

TEST(cli_measures, exponential_all_zero) {
    for (const char* ch : {"phaseflip", "ep", "mix:0.7", "pauli:0.1,0.2,0.3,0.4"}) {
        auto doc = nlohmann::json::parse(call({"measures", "--channel", ch, "--wtd", "exp:1", "--samples", "201"}).out);
        EXPECT_EQ(doc["blp"]["value"].get<double>(), 0) << ch;
        EXPECT_EQ(doc["hou"]["value"].get<double>(), 0) << ch;
        EXPECT_EQ(doc["rhp"]["value"].get<double>(), 0) << ch;
    }
}

TEST(cli_mc, deterministic_and_thread_independent) {
    std::vector<std::string> base{"mc", "--wtd", "erlang:2:1", "--n-traj", "20000", "--seed", "5", "--steps", "11"};
    auto a = call(base);
    auto one = base;
    one.insert(one.end(), {"--threads", "1"});
    auto b = call(one);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    std::string header;
    parse_csv(a.out, &header);
    EXPECT_EQ(header, "t,quantity,mean,std_error,n_traj,seed");
}

TEST(cli_distance, equatorial_pair_tracks_abs_q) {
    auto rows = parse_csv(call({"distance", "--wtd", "erlang:2:1", "--window", "6", "--steps", "7"}).out);
    for (const auto& r : rows) {
        double t = std::stod(r[0]);
        EXPECT_NEAR(std::stod(r[1]), std::abs(std::exp(-t) * (std::cos(t) + std::sin(t))), 1e-13);
    }
}

TEST(cli, byte_identical_reruns) {
    std::vector<std::string> args{"tcl", "--channel", "mix:0.8", "--wtd", "conv:1,2,3", "--steps", "51"};
    EXPECT_EQ(call(args).out, call(args).out);
    auto out = call(args).out;
    EXPECT_EQ(out.substr(0, out.find('\n')),
              "# semimarkov 0.1.0 command=tcl channel=pauli:0.19999999999999996,0,0,0.8 wtd=conv:1,2,3 rate=1 window=20 steps=51");
}

TEST(cli, rate_scale_leaves_dimensionless_output_unchanged) {
    auto a = parse_csv(call({"distance", "--wtd", "conv:1,0.5", "--rate", "1", "--steps", "9"}).out);
    auto b = parse_csv(call({"distance", "--wtd", "conv:3,1.5", "--rate", "3", "--steps", "9"}).out);
    ASSERT_EQ(a.size(), b.size());
    for (size_t k = 0; k < a.size(); k++) {
        EXPECT_NEAR(std::stod(a[k][1]), std::stod(b[k][1]), 1e-13);
        EXPECT_NEAR(std::stod(a[k][2]), std::stod(b[k][2]), 1e-12);
    }
}

TEST(cli, exit_codes) {
    EXPECT_EQ(call({"kolmogorov", "--wtd", "bogus"}).code, kExitSpecError);
    EXPECT_EQ(call({"tcl", "--channel", "pauli:1,1,1,1"}).code, kExitSpecError);
    EXPECT_EQ(call({"kolmogorov", "--preset", "other"}).code, kExitSpecError);
    EXPECT_EQ(call({"no-such-command"}).code, kExitSpecError);
    EXPECT_EQ(call({}).code, kExitSpecError);
    EXPECT_EQ(call({"--help"}).code, kExitOk);
    auto r = call({"kolmogorov", "--preset", "flip", "--wtd", "erlang:3:5", "--rate", "0.01", "--window", "3"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST(cli, output_directory_from_environment) {
    auto dir = std::filesystem::temp_directory_path() / "semimarkov_cli_test";
    std::filesystem::create_directories(dir);
    ::setenv("SEMIMARKOV_OUTPUT_DIR", dir.c_str(), 1);
    auto r = call({"--output", "q.csv", "qm", "--m-max", "2", "--steps", "3"});
    ::unsetenv("SEMIMARKOV_OUTPUT_DIR");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(dir / "q.csv");
    std::stringstream content;
    content << in.rdbuf();
    EXPECT_EQ(content.str(), call({"qm", "--m-max", "2", "--steps", "3"}).out);
    std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace semimarkov::cli
