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

#include "qkd/sweep.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qkd {

RunMode parse_run_mode(const std::string& text) {
    if (text == "single-photon") return RunMode::SinglePhoton;
    if (text == "wcp-decoy") return RunMode::WcpDecoy;
    if (text == "verify-bounds") return RunMode::VerifyBounds;
    if (text == "verify-estimators") return RunMode::VerifyEstimators;
    throw ConfigError("mode", "unknown mode '" + text + "'");
}

std::string run_mode_name(RunMode mode) {
    switch (mode) {
    case RunMode::SinglePhoton:
        return "single-photon";
    case RunMode::WcpDecoy:
        return "wcp-decoy";
    case RunMode::VerifyBounds:
        return "verify-bounds";
    case RunMode::VerifyEstimators:
        return "verify-estimators";
    }
    return "?";
}

void RunConfig::validate() const {
    if (!(att_step > 0.0)) throw ConfigError("att_step", "must be > 0");
    if (att_stop < att_start)
        throw ConfigError("att_stop", "must be >= att_start");
    if (rounds == 0) throw ConfigError("rounds", "must be positive");
    try {
        channel.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("channel", e.what());
    }
    if (!(eps_sec > 0.0 && eps_sec < 1.0))
        throw ConfigError("eps_sec", "must lie in (0, 1)");
    if (!(eps_cor > 0.0 && eps_cor < 1.0))
        throw ConfigError("eps_cor", "must lie in (0, 1)");
    if (!(ec_efficiency >= 1.0))
        throw ConfigError("ec_efficiency", "must be >= 1");
    if (!optimize && mode == RunMode::WcpDecoy) {
        try {
            fixed.intensities.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("mu1/mu2/p_mu1", e.what());
        }
    }
    if (!(fixed.p_z > 0.0 && fixed.p_z < 1.0))
        throw ConfigError("p_z", "must lie in (0, 1)");
    try {
        space.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("grid", e.what());
    }
    if (verify_attacks < 1) throw ConfigError("verify_attacks", "must be >= 1");
    if (verify_trials < 1) throw ConfigError("verify_trials", "must be >= 1");
    if (verify_rounds == 0) throw ConfigError("verify_rounds", "must be >= 1");
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, "cannot parse '" + value + "' as a number");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    // Accept scientific notation for convenience (rounds = 1e8).
    const double x = parse_double(key, value);
    if (!(x >= 0.0) || x != std::floor(x) || x > 1.8e19)
        throw ConfigError(key, "'" + value + "' is not a whole number");
    return static_cast<std::uint64_t>(x);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "no" || value == "off")
        return false;
    throw ConfigError(key, "cannot parse '" + value + "' as a boolean");
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace

void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "mode")
        config.mode = parse_run_mode(value);
    else if (key == "att_start")
        config.att_start = parse_double(key, value);
    else if (key == "att_stop")
        config.att_stop = parse_double(key, value);
    else if (key == "att_step")
        config.att_step = parse_double(key, value);
    else if (key == "rounds")
        config.rounds = parse_u64(key, value);
    else if (key == "seed")
        config.seed = parse_u64(key, value);
    else if (key == "optimize")
        config.optimize = parse_bool(key, value);
    else if (key == "sp_reference")
        config.sp_reference = parse_bool(key, value);
    else if (key == "out")
        config.out = value;
    else if (key == "p_dc")
        config.channel.p_dc = parse_double(key, value);
    else if (key == "e_mis")
        config.channel.e_mis = parse_double(key, value);
    else if (key == "det_eff")
        config.channel.det_eff = parse_double(key, value);
    else if (key == "eps_sec")
        config.eps_sec = parse_double(key, value);
    else if (key == "eps_cor")
        config.eps_cor = parse_double(key, value);
    else if (key == "ec_efficiency")
        config.ec_efficiency = parse_double(key, value);
    else if (key == "mu1")
        config.fixed.intensities.mu1 = parse_double(key, value);
    else if (key == "mu2")
        config.fixed.intensities.mu2 = parse_double(key, value);
    else if (key == "p_mu1")
        config.fixed.intensities.p_mu1 = parse_double(key, value);
    else if (key == "p_z")
        config.fixed.p_z = parse_double(key, value);
    else if (key == "grid_points")
        config.space.grid_points = static_cast<int>(parse_u64(key, value));
    else if (key == "refine_rounds")
        config.space.refine_rounds = static_cast<int>(parse_u64(key, value));
    else if (key == "verify_attacks")
        config.verify_attacks = static_cast<int>(parse_u64(key, value));
    else if (key == "verify_trials")
        config.verify_trials = static_cast<int>(parse_u64(key, value));
    else if (key == "verify_rounds")
        config.verify_rounds = parse_u64(key, value);
    else
        throw ConfigError(key, "unknown configuration key");
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    RunConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config", "line " + std::to_string(line_no) +
                                            " is not key=value");
        apply_config_entry(config, trim(line.substr(0, eq)),
                           trim(line.substr(eq + 1)));
    }
    return config;
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
    config.validate();
    const int n_points = static_cast<int>(
        std::floor((config.att_stop - config.att_start) / config.att_step +
                   1e-9)) +
        1;
    std::vector<SweepRow> rows(n_points);
    const FiniteKeyEpsilons eps =
        FiniteKeyEpsilons::standard(config.eps_sec, config.eps_cor);
    KeyRateOptions options;
    options.ec_efficiency = config.ec_efficiency;

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n_points; ++i) {
        SweepRow& row = rows[i];
        row.attenuation_db = config.att_start + i * config.att_step;
        ChannelParams channel = config.channel;
        channel.attenuation_db = row.attenuation_db;

        if (config.mode == RunMode::WcpDecoy) {
            row.has_wcp = true;
            if (config.optimize) {
                const OptimizeResult best =
                    optimize(channel, config.rounds, eps, config.space,
                             options);
                row.params = best.params;
                row.breakdown = best.breakdown;
            } else {
                row.params = config.fixed;
                row.breakdown = evaluate_wcp_expected(
                    channel, config.fixed, config.rounds, eps, options);
            }
        }
        if (config.mode == RunMode::SinglePhoton || config.sp_reference) {
            row.has_sp = true;
            if (config.optimize) {
                const auto sp3 = optimize_single_photon(
                    channel, config.rounds, eps,
                    SinglePhotonVariant::ThreeBin, config.ec_efficiency);
                const auto sp2 = optimize_single_photon(
                    channel, config.rounds, eps, SinglePhotonVariant::Bb84,
                    config.ec_efficiency);
                row.sp_p_z = sp3.p_z;
                row.sp_threebin = sp3.result;
                row.sp_bb84 = sp2.result;
            } else {
                row.sp_p_z = config.fixed.p_z;
                row.sp_threebin = evaluate_single_photon(
                    channel, config.fixed.p_z, config.rounds, eps,
                    SinglePhotonVariant::ThreeBin, config.ec_efficiency);
                row.sp_bb84 = evaluate_single_photon(
                    channel, config.fixed.p_z, config.rounds, eps,
                    SinglePhotonVariant::Bb84, config.ec_efficiency);
            }
        }
    }
    return rows;
}

std::string csv_header() {
    return "schema,mode,attenuation_db,rounds,seed,mu1,mu2,p_mu1,p_z,"
           "key_bits,key_per_round,ex_upper,ez_upper,qber_z,d0_z_lower,"
           "d1_z_lower,d1_ezz_lower,d1_lplus_upper,gamma,lambda_ec,n_z,m_z,"
           "sp3_key_bits,bb84_key_bits";
}

std::string csv_row(const RunConfig& config, const SweepRow& row) {
    std::ostringstream os;
    const double n = static_cast<double>(config.rounds);
    os << "1," << run_mode_name(config.mode) << ','
       << format_double(row.attenuation_db) << ',' << config.rounds << ','
       << config.seed << ',';
    if (row.has_wcp) {
        const KeyRateBreakdown& b = row.breakdown;
        os << format_double(row.params.intensities.mu1) << ','
           << format_double(row.params.intensities.mu2) << ','
           << format_double(row.params.intensities.p_mu1) << ','
           << format_double(row.params.p_z) << ','
           << format_double(b.key_length) << ','
           << format_double(b.key_length / n) << ','
           << format_double(b.ex_upper) << ',' << format_double(b.ez_upper)
           << ',' << format_double(b.qber_z) << ','
           << format_double(b.d0_z_lower) << ','
           << format_double(b.d1_z_lower) << ','
           << format_double(b.d1_ezz_lower) << ','
           << format_double(b.d1_lplus_upper) << ','
           << format_double(b.gamma_term) << ','
           << format_double(b.lambda_ec) << ',' << format_double(b.n_z)
           << ',' << format_double(b.m_z) << ',';
    } else if (row.has_sp) {
        const SinglePhotonKeyRate& s = row.sp_threebin;
        os << ",,," << format_double(row.sp_p_z) << ','
           << format_double(s.key_length) << ','
           << format_double(s.key_length / n) << ','
           << format_double(s.ex_upper) << ',' << format_double(s.ez_upper)
           << ',' << format_double(s.qber_z) << ",,,,,,"
           << format_double(s.lambda_ec) << ',' << format_double(s.n_z)
           << ",,";
    } else {
        os << ",,,,,,,,,,,,,,,,,";
    }
    if (row.has_sp)
        os << format_double(row.sp_threebin.key_length) << ','
           << format_double(row.sp_bb84.key_length);
    else
        os << ',';
    return os.str();
}

void write_csv(const RunConfig& config, const std::vector<SweepRow>& rows,
               const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("out", "cannot open '" + path + "' for writing");
    out << csv_header() << '\n';
    for (const SweepRow& row : rows) out << csv_row(config, row) << '\n';
    if (!out) throw ConfigError("out", "write failure on '" + path + "'");
}

} // namespace qkd
