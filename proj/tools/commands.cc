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

#include "commands.h"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

#include "semimarkov/classical_semimarkov.h"
#include "semimarkov/csv.h"
#include "semimarkov/errors.h"
#include "semimarkov/montecarlo.h"
#include "semimarkov/nonmarkov.h"
#include "semimarkov/qubit.h"
#include "semimarkov/renewal.h"
#include "semimarkov/spec_parse.h"

namespace semimarkov::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = SEMIMARKOV_VERSION;

/// Ordered key=value echo of every option that affects the output.
class ConfigEcho {
   public:
    void add(std::string key, std::string value) { items_.emplace_back(std::move(key), std::move(value)); }
    void add(std::string key, double value) { add(std::move(key), format_double(value)); }

    std::string header(std::string_view command) const {
        std::string line = "# semimarkov " + std::string(kVersion) + " command=" + std::string(command);
        for (const auto& [k, v] : items_) {
            line += " " + k + "=" + v;
        }
        return line;
    }

    json to_json(std::string_view command) const {
        json j;
        j["command"] = command;
        for (const auto& [k, v] : items_) {
            j[k] = v;
        }
        return j;
    }

   private:
    std::vector<std::pair<std::string, std::string>> items_;
};

/// Uniform grid of `steps` points on [0, span].
std::vector<double> uniform_grid(double span, int steps) {
    if (!(span > 0) || steps < 2) {
        throw SpecError("grids need a positive span and at least two points");
    }
    std::vector<double> g(static_cast<size_t>(steps));
    for (int k = 0; k < steps; k++) {
        g[static_cast<size_t>(k)] = span * k / (steps - 1);
    }
    return g;
}

std::vector<double> scaled(const std::vector<double>& xs, double factor) {
    std::vector<double> out(xs);
    for (double& x : out) {
        x *= factor;
    }
    return out;
}

void require_positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) {
        throw SpecError(std::string(what) + " must be positive");
    }
}

std::string fmt(double x) { return format_double(x); }

Eigen::Vector3d parse_bloch(const std::string& text) {
    std::stringstream ss(text);
    std::string field;
    std::vector<double> v;
    while (std::getline(ss, field, ',')) {
        v.push_back(parse_number(field, "Bloch component"));
    }
    if (v.size() != 3) {
        throw SpecError("Bloch vector must have three components, got '" + text + "'");
    }
    return {v[0], v[1], v[2]};
}

int sign_of(double x) { return (x > 0) - (x < 0); }

struct Common {
    std::string wtd = "conv:1,0.5";
    std::string channel = "phaseflip";
    double rate = 1;
    double window = 20;
    int steps = 201;
};

void add_common(CLI::App* sub, Common& c, bool with_channel) {
    sub->add_option("--wtd", c.wtd, "Waiting-time spec: exp:L, erlang:M:L or conv:L1,L2,...")->capture_default_str();
    if (with_channel) {
        sub->add_option("--channel", c.channel, "Channel spec: pauli:a,b,c,d, phaseflip, ep or mix:NU")
            ->capture_default_str();
    }
    sub->add_option("--rate", c.rate, "Rate scale; outputs use the dimensionless time rate*t")->capture_default_str();
    sub->add_option("--window", c.window, "Window length in units of rate*t")->capture_default_str();
    sub->add_option("--steps", c.steps, "Grid points on the window")->capture_default_str();
}

// ---------------------------------------------------------------- commands

void cmd_kolmogorov(std::ostream& out, const Common& c, const std::string& preset, int pairs) {
    require_positive(c.rate, "rate");
    if (pairs < 1) {
        throw SpecError("pairs must be at least 1");
    }
    HypoExpWTD w = parse_wtd(c.wtd);
    double p;
    double s;
    if (preset == "half") {
        p = s = 0.5;
    } else if (preset == "flip") {
        p = 0;
        s = 1;
    } else {
        throw SpecError("preset must be half or flip");
    }
    SemiMarkovSpec spec(p, s, w);
    auto lt = uniform_grid(c.window, c.steps);
    std::vector<VectorPair> vp;
    for (int k = 1; k <= pairs; k++) {
        double d = static_cast<double>(k) / pairs;
        vp.emplace_back(ProbabilityVector(0.5 + d / 2, 0.5 - d / 2), ProbabilityVector(0.5 - d / 2, 0.5 + d / 2));
    }
    auto report = witness_contractivity(spec, vp, scaled(lt, 1 / c.rate));
    ConfigEcho echo;
    echo.add("preset", preset);
    echo.add("wtd", w.to_string());
    echo.add("rate", c.rate);
    echo.add("window", c.window);
    echo.add("steps", std::to_string(c.steps));
    echo.add("pairs", std::to_string(pairs));
    out << echo.header("kolmogorov") << "\n";
    write_csv_row(out, {"lambda_t", "pair_id", "DK"});
    for (const auto& smp : report.samples) {
        write_csv_row(out, {fmt(smp.t * c.rate), std::to_string(smp.pair_id), fmt(smp.dk)});
    }
}

void cmd_qm(std::ostream& out, const Common& c, int m_max, const std::string& table) {
    require_positive(c.rate, "rate");
    if (m_max < 1 || m_max > 64) {
        throw SpecError("m-max must lie in [1, 64]");
    }
    ConfigEcho echo;
    echo.add("m_max", std::to_string(m_max));
    echo.add("rate", c.rate);
    echo.add("window", c.window);
    echo.add("steps", std::to_string(c.steps));
    echo.add("table", table);
    out << echo.header("qm") << "\n";
    std::vector<ExpPolyFunction> qs;
    for (int m = 1; m <= m_max; m++) {
        qs.push_back(generating_function(HypoExpWTD::erlang(m, c.rate), -1).value);
    }
    if (table == "curves") {
        std::vector<std::string> head{"lambda_t"};
        for (int m = 1; m <= m_max; m++) {
            head.push_back("abs_q" + std::to_string(m));
        }
        for (size_t i = 0; i < head.size(); i++) {
            out << (i ? "," : "") << head[i];
        }
        out << "\n";
        for (double x : uniform_grid(c.window, c.steps)) {
            out << fmt(x);
            for (const auto& q : qs) {
                out << "," << fmt(std::abs(q(x / c.rate)));
            }
            out << "\n";
        }
    } else if (table == "maxima") {
        write_csv_row(out, {"m", "index", "lambda_t", "height", "partial_sum"});
        for (int m = 1; m <= m_max; m++) {
            auto r = blp_measure_dephasing(HypoExpWTD::erlang(m, c.rate));
            double partial = 0;
            int index = 0;
            for (const auto& contrib : r.contributions) {
                double t = contrib.interval.end;
                if (t >= r.horizon || t * c.rate > c.window) {
                    break;
                }
                partial += contrib.weight;
                write_csv_row(out, {std::to_string(m), std::to_string(++index), fmt(t * c.rate),
                                    fmt(std::abs(qs[static_cast<size_t>(m - 1)](t))), fmt(partial)});
            }
        }
    } else {
        throw SpecError("table must be curves or maxima");
    }
}

void cmd_sign_scan(std::ostream& out, const Common& c, const std::string& mode, double x_min, double x_max,
                   int x_steps) {
    require_positive(c.rate, "rate");
    if (!(x_max >= x_min) || x_steps < 1 || !(x_min >= 0)) {
        throw SpecError("scan range must satisfy 0 <= x-min <= x-max with x-steps >= 1");
    }
    std::function<ExpPolyFunction(double)> make;
    ConfigEcho echo;
    echo.add("mode", mode);
    if (mode == "qr") {
        if (!(x_min > 0)) {
            throw SpecError("qr mode needs a positive rate ratio");
        }
        make = [&](double r) { return generating_function(HypoExpWTD({c.rate, r * c.rate}), -1).value; };
    } else if (mode == "nu") {
        if (!(x_max <= 1)) {
            throw SpecError("nu mode needs mixing weights in [0, 1]");
        }
        HypoExpWTD w = parse_wtd(c.wtd);
        echo.add("wtd", w.to_string());
        make = [w](double nu) { return generating_function(w, 1 - 2 * nu).value; };
    } else {
        throw SpecError("mode must be qr or nu");
    }
    echo.add("x_min", x_min);
    echo.add("x_max", x_max);
    echo.add("x_steps", std::to_string(x_steps));
    echo.add("rate", c.rate);
    echo.add("window", c.window);
    echo.add("steps", std::to_string(c.steps));
    out << echo.header("sign-scan") << "\n";
    write_csv_row(out, {"x", "lambda_t", "sign"});
    auto lt = uniform_grid(c.window, c.steps);
    for (int i = 0; i < x_steps; i++) {
        double x = x_steps == 1 ? x_min : x_min + (x_max - x_min) * i / (x_steps - 1);
        auto f = make(x);
        for (double v : lt) {
            write_csv_row(out, {fmt(x), fmt(v), std::to_string(sign_of(f(v / c.rate)))});
        }
    }
}

void cmd_tcl(std::ostream& out, const Common& c) {
    require_positive(c.rate, "rate");
    DynamicalMap map(parse_channel(c.channel), parse_wtd(c.wtd));
    ConfigEcho echo;
    echo.add("channel", map.channel().to_string());
    echo.add("wtd", map.wtd().to_string());
    echo.add("rate", c.rate);
    echo.add("window", c.window);
    echo.add("steps", std::to_string(c.steps));
    out << echo.header("tcl") << "\n";
    write_csv_row(out, {"lambda_t", "singular", "gamma_x", "gamma_y", "gamma_z", "dephasing", "flip", "x_pair",
                        "y_pair", "residual"});
    std::vector<QubitState> probes{QubitState::maximally_mixed()};
    for (int i = 0; i < 3; i++) {
        for (double sgn : {1.0, -1.0}) {
            Eigen::Vector3d r = Eigen::Vector3d::Zero();
            r(i) = sgn;
            probes.push_back(QubitState::from_bloch(r));
        }
    }
    probes.push_back(QubitState::from_bloch(Eigen::Vector3d(0.3, -0.4, 0.5)));
    for (double x : uniform_grid(c.window, c.steps)) {
        auto k = tcl_coefficients(map, x / c.rate);
        double residual = std::numeric_limits<double>::quiet_NaN();
        if (!k.singular) {
            residual = 0;
            for (const auto& rho : probes) {
                residual = std::max(residual, tcl_equivalence_check(k, rho) / c.rate);
            }
        }
        write_csv_row(out, {fmt(x), k.singular ? "1" : "0", fmt(k.canonical(0) / c.rate), fmt(k.canonical(1) / c.rate),
                            fmt(k.canonical(2) / c.rate), fmt(k.dephasing / c.rate), fmt(k.flip / c.rate),
                            fmt(k.x_pair / c.rate), fmt(k.y_pair / c.rate), fmt(residual)});
    }
}

void cmd_choi_scan(std::ostream& out, const Common& c, double s_window, int s_steps) {
    require_positive(c.rate, "rate");
    DynamicalMap map(parse_channel(c.channel), parse_wtd(c.wtd));
    ConfigEcho echo;
    echo.add("channel", map.channel().to_string());
    echo.add("wtd", map.wtd().to_string());
    echo.add("rate", c.rate);
    echo.add("window", c.window);
    echo.add("steps", std::to_string(c.steps));
    echo.add("s_window", s_window);
    echo.add("s_steps", std::to_string(s_steps));
    out << echo.header("choi-scan") << "\n";
    auto scan = divisibility_scan(map, scaled(uniform_grid(c.window, c.steps), 1 / c.rate),
                                  scaled(uniform_grid(s_window, s_steps), 1 / c.rate));
    write_csv_row(out, {"lambda_t", "lambda_s", "min_component", "sign", "singular"});
    for (const auto& cell : scan.cells) {
        bool singular = cell.sign == 0;
        write_csv_row(out, {fmt(cell.t * c.rate), fmt(cell.s * c.rate), fmt(cell.min_component),
                            std::to_string(cell.sign), singular ? "1" : "0"});
    }
}

json contributions_json(const MeasureResult& r, double rate) {
    json arr = json::array();
    for (const auto& ct : r.contributions) {
        arr.push_back({{"start", ct.interval.start * rate},
                       {"end", ct.interval.end * rate},
                       {"weight", std::isfinite(ct.weight) ? json(ct.weight) : json(nullptr)}});
    }
    return arr;
}

json measure_json(const MeasureResult& r, double rate) {
    json j;
    j["method"] = std::string(to_string(r.method));
    j["value"] = r.infinite ? json(nullptr) : json(r.value);
    j["infinite"] = r.infinite;
    j["horizon"] = r.horizon * rate;
    j["contributions"] = contributions_json(r, rate);
    return j;
}

void cmd_measures(std::ostream& out, const Common& c, int hou_samples) {
    require_positive(c.rate, "rate");
    require_positive(c.window, "window");
    DynamicalMap map(parse_channel(c.channel), parse_wtd(c.wtd));
    ConfigEcho echo;
    echo.add("channel", map.channel().to_string());
    echo.add("wtd", map.wtd().to_string());
    echo.add("rate", c.rate);
    echo.add("window", c.window);
    echo.add("hou_samples", std::to_string(hou_samples));

    json doc;
    doc["tool"] = "semimarkov";
    doc["version"] = kVersion;
    doc["config"] = echo.to_json("measures");

    auto blp = blp_measure_numeric(map, {});
    json jb = measure_json(blp, c.rate);
    jb["direction"] = {blp.direction(0), blp.direction(1), blp.direction(2)};
    jb["tail_bound"] = blp.tail_bound;
    jb["converged"] = blp.converged;
    doc["blp"] = jb;

    try {
        auto analytic = blp_measure_dephasing(map.channel(), map.wtd());
        json ja = measure_json(analytic, c.rate);
        ja["tail_bound"] = analytic.tail_bound;
        doc["blp_analytic"] = ja;
    } catch (const SpecError&) {
        doc["blp_analytic"] = nullptr;
    }

    HouConfig hc;
    hc.window = c.window / c.rate;
    hc.samples = hou_samples;
    auto hou = hou_measure(map, hc);
    json jh = measure_json(hou, c.rate);
    jh["s_offset"] = (hc.s_offset > 0 ? hc.s_offset : 1e-3 / map.wtd().max_rate()) * c.rate;
    doc["hou"] = jh;

    doc["rhp"] = measure_json(rhp_measure(map, c.window / c.rate, hou_samples), c.rate);
    out << doc.dump(2) << "\n";
}

void cmd_mc(std::ostream& out, const Common& c, const std::string& quantity, double mu, std::uint64_t n,
            std::uint64_t n_traj, std::uint64_t seed, unsigned threads) {
    require_positive(c.rate, "rate");
    HypoExpWTD w = parse_wtd(c.wtd);
    auto lt = uniform_grid(c.window, c.steps);
    auto times = scaled(lt, 1 / c.rate);
    SimConfig cfg;
    cfg.n_traj = n_traj;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.horizon = times.back();
    cfg.validate();
    std::vector<Estimate> est;
    std::string label;
    if (quantity == "q") {
        est = estimate_generating_function(w, -1, times, cfg);
        label = "q";
    } else if (quantity == "lambda") {
        if (!(mu >= -1 && mu <= 1)) {
            throw SpecError("mu must lie in [-1, 1]");
        }
        est = estimate_generating_function(w, mu, times, cfg);
        label = "lambda_" + fmt(mu);
    } else if (quantity == "pn") {
        est = estimate_jump_probability(w, n, times, cfg);
        label = "p_" + std::to_string(n);
    } else {
        throw SpecError("quantity must be q, lambda or pn");
    }
    ConfigEcho echo;
    echo.add("wtd", w.to_string());
    echo.add("quantity", label);
    echo.add("rate", c.rate);
    echo.add("window", c.window);
    echo.add("steps", std::to_string(c.steps));
    echo.add("n_traj", std::to_string(n_traj));
    echo.add("seed", std::to_string(seed));
    out << echo.header("mc") << "\n";
    write_estimates_header(out);
    write_estimates_rows(out, label, lt, est, cfg);
}

void cmd_distance(std::ostream& out, const Common& c, const std::string& a, const std::string& b) {
    require_positive(c.rate, "rate");
    DynamicalMap map(parse_channel(c.channel), parse_wtd(c.wtd));
    auto ra = QubitState::from_bloch(parse_bloch(a));
    auto rb = QubitState::from_bloch(parse_bloch(b));
    auto tr = distinguishability_trace(map, ra, rb, c.window / c.rate, c.steps);
    ConfigEcho echo;
    echo.add("channel", map.channel().to_string());
    echo.add("wtd", map.wtd().to_string());
    echo.add("state_a", a);
    echo.add("state_b", b);
    echo.add("rate", c.rate);
    echo.add("window", c.window);
    echo.add("steps", std::to_string(c.steps));
    out << echo.header("distance") << "\n";
    write_csv_row(out, {"lambda_t", "D", "sigma", "growing"});
    for (size_t k = 0; k < tr.times.size(); k++) {
        double t = tr.times[k];
        bool growing = false;
        for (const auto& iv : tr.growth) {
            growing = growing || (t > iv.start && t < iv.end);
        }
        write_csv_row(out, {fmt(t * c.rate), fmt(tr.distance[k]), fmt(tr.sigma[k] / c.rate), growing ? "1" : "0"});
    }
}

std::filesystem::path resolve_output(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("SEMIMARKOV_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
            p = std::filesystem::path(dir) / p;
        }
    }
    return p;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Semi-Markov dynamics and non-Markovianity diagnostics", "semimarkov"};
    app.set_version_flag("--version", std::string("semimarkov ") + kVersion);
    app.require_subcommand(1);
    std::string output;
    app.add_option("-o,--output", output, "Write data to this file instead of standard output");

    Common common;
    std::string preset = "half";
    int pairs = 10;
    auto* kol = app.add_subcommand("kolmogorov", "Kolmogorov distance trajectories of a classical two-state process");
    add_common(kol, common, false);
    kol->add_option("--preset", preset, "Jump-matrix preset: half or flip")->capture_default_str();
    kol->add_option("--pairs", pairs, "Number of initial pairs")->capture_default_str();

    int m_max = 6;
    std::string table = "curves";
    auto* qm = app.add_subcommand("qm", "|q_m| for Erlang waiting times with m = 1..m-max");
    add_common(qm, common, false);
    qm->add_option("--m-max", m_max, "Largest Erlang order")->capture_default_str();
    qm->add_option("--table", table, "curves or maxima")->capture_default_str();

    std::string mode = "qr";
    double x_min = 0.05;
    double x_max = 8;
    int x_steps = 80;
    auto* sign = app.add_subcommand("sign-scan", "Sign map of q over (r, rate*t) or lambda_{1-2nu} over (nu, rate*t)");
    add_common(sign, common, false);
    sign->add_option("--mode", mode, "qr or nu")->capture_default_str();
    sign->add_option("--x-min", x_min, "Smallest r or nu")->capture_default_str();
    sign->add_option("--x-max", x_max, "Largest r or nu")->capture_default_str();
    sign->add_option("--x-steps", x_steps, "Rows in the scan")->capture_default_str();

    auto* tcl = app.add_subcommand("tcl", "Master-equation rates in both decompositions");
    add_common(tcl, common, true);

    double s_window = 5;
    int s_steps = 51;
    auto* choi = app.add_subcommand("choi-scan", "Complete-positivity sign map of intermediate maps over (t, s)");
    add_common(choi, common, true);
    choi->add_option("--s-window", s_window, "Lag range in units of rate*s")->capture_default_str();
    choi->add_option("--s-steps", s_steps, "Lag grid points")->capture_default_str();

    int hou_samples = 20001;
    auto* meas = app.add_subcommand("measures", "JSON summary of BLP, Hou and RHP measures");
    add_common(meas, common, true);
    meas->add_option("--samples", hou_samples, "Time samples for the divisibility measures")->capture_default_str();

    std::string quantity = "q";
    double mu = -1;
    std::uint64_t n = 0;
    std::uint64_t n_traj = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimates of renewal quantities");
    add_common(mc, common, false);
    mc->add_option("--quantity", quantity, "q, lambda or pn")->capture_default_str();
    mc->add_option("--mu", mu, "Generating-function argument for quantity lambda")->capture_default_str();
    mc->add_option("--n", n, "Jump count for quantity pn")->capture_default_str();
    mc->add_option("--n-traj", n_traj, "Trajectories")->capture_default_str();
    mc->add_option("--seed", seed, "Random seed")->capture_default_str();
    mc->add_option("--threads", threads, "Worker threads (0 = all); output does not depend on it")
        ->capture_default_str();

    std::string state_a = "1,0,0";
    std::string state_b = "-1,0,0";
    auto* dist = app.add_subcommand("distance", "Trace distance and its derivative for a pair of qubit states");
    add_common(dist, common, true);
    dist->add_option("--state-a", state_a, "Bloch vector x,y,z")->capture_default_str();
    dist->add_option("--state-b", state_b, "Bloch vector x,y,z")->capture_default_str();

    std::vector<std::string> argv_store{"semimarkov"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitSpecError;
    }

    std::ostringstream buffer;
    try {
        if (*kol) {
            cmd_kolmogorov(buffer, common, preset, pairs);
        } else if (*qm) {
            cmd_qm(buffer, common, m_max, table);
        } else if (*sign) {
            cmd_sign_scan(buffer, common, mode, x_min, x_max, x_steps);
        } else if (*tcl) {
            cmd_tcl(buffer, common);
        } else if (*choi) {
            cmd_choi_scan(buffer, common, s_window, s_steps);
        } else if (*meas) {
            cmd_measures(buffer, common, hou_samples);
        } else if (*mc) {
            cmd_mc(buffer, common, quantity, mu, n, n_traj, seed, threads);
        } else if (*dist) {
            cmd_distance(buffer, common, state_a, state_b);
        }
    } catch (const SpecError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (output.empty()) {
        out << buffer.str();
        return kExitOk;
    }
    auto path = resolve_output(output);
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << buffer.str()) || !file.flush()) {
        err << "error: cannot write " << path.string() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace semimarkov::cli
