// Copyright 2026 The qkdrate developers.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qkd/sweep.hpp"
#include "qkd/verify.hpp"

namespace {

int run(const qkd::RunConfig& config) {
    using qkd::RunMode;
    if (config.mode == RunMode::VerifyEstimators) {
        const auto report =
            qkd::verify_estimators(config.verify_attacks, config.seed);
        std::cout << report.report();
        if (!report.pass()) {
            std::cerr << "estimator verification FAILED\n";
            return 2;
        }
        std::cout << "estimator verification passed\n";
        return 0;
    }
    if (config.mode == RunMode::VerifyBounds) {
        const auto report = qkd::verify_bounds(
            config.verify_trials, config.verify_rounds, 0.1, config.seed);
        std::cout << report.report();
        if (!report.pass()) {
            std::cerr << "bound verification FAILED\n";
            return 2;
        }
        std::cout << "bound verification passed\n";
        return 0;
    }

    const auto rows = qkd::run_sweep(config);
    qkd::write_csv(config, rows, config.out);
    std::cout << "wrote " << rows.size() << " rows to " << config.out
              << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Finite-key security analysis for the three-state time-bin QKD "
        "protocol: attenuation sweeps, one-decoy key rates, and estimator/"
        "bound verification suites."};

    std::string config_path;
    std::string mode;
    std::string out;
    std::optional<double> att_start, att_stop, att_step;
    std::optional<std::uint64_t> rounds, seed;
    std::optional<bool> optimize;

    app.add_option("--config", config_path,
                   "key=value configuration file (flags override it)");
    app.add_option("--mode", mode,
                   "single-photon | wcp-decoy | verify-bounds | "
                   "verify-estimators");
    app.add_option("--att-start", att_start, "sweep start attenuation (dB)");
    app.add_option("--att-stop", att_stop, "sweep stop attenuation (dB)");
    app.add_option("--att-step", att_step, "sweep step (dB)");
    app.add_option("--rounds", rounds, "block size N");
    app.add_option("--seed", seed, "RNG seed");
    app.add_flag("--optimize,!--no-optimize", optimize,
                 "optimize protocol parameters per sweep point");
    app.add_option("--out", out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        qkd::RunConfig config;
        if (!config_path.empty()) config = qkd::parse_config_file(config_path);
        if (!mode.empty()) config.mode = qkd::parse_run_mode(mode);
        if (att_start) config.att_start = *att_start;
        if (att_stop) config.att_stop = *att_stop;
        if (att_step) config.att_step = *att_step;
        if (rounds) config.rounds = *rounds;
        if (seed) config.seed = *seed;
        if (optimize) config.optimize = *optimize;
        if (!out.empty()) config.out = out;
        config.validate();
        return run(config);
    } catch (const qkd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
