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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qkd/optimizer.hpp"

namespace qkd {

/// Configuration problem, reported with the offending field name.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(field) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

enum class RunMode { SinglePhoton, WcpDecoy, VerifyBounds, VerifyEstimators };

RunMode parse_run_mode(const std::string& text); // throws ConfigError
std::string run_mode_name(RunMode mode);

/// Batch-run configuration: flat key=value file, CLI flags override.
struct RunConfig {
    RunMode mode = RunMode::WcpDecoy;
    double att_start = 0.0;
    double att_stop = 80.0;
    double att_step = 5.0;
    std::uint64_t rounds = 100000000ULL; // 1e8
    std::uint64_t seed = 1;
    bool optimize = true;
    bool sp_reference = false;
    std::string out = "sweep.csv";

    ChannelParams channel; // attenuation_db filled per sweep point
    double eps_sec = 1e-9;
    double eps_cor = 1e-9;
    double ec_efficiency = 1.16;
    ProtocolParams fixed; // used when optimize == false
    ParamSpace space;

    // verification-mode knobs
    int verify_attacks = 1000;
    int verify_trials = 1000;
    std::uint64_t verify_rounds = 1000000ULL;

    void validate() const; // throws ConfigError
};

/// Applies one key=value assignment; throws ConfigError for unknown keys or
/// unparsable values.
void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value);

/// Parses a flat key=value file ('#' starts a comment) over the defaults.
RunConfig parse_config_file(const std::string& path);

/// One attenuation point of a sweep.
struct SweepRow {
    double attenuation_db = 0.0;
    bool has_wcp = false;
    ProtocolParams params;
    KeyRateBreakdown breakdown;
    bool has_sp = false;
    double sp_p_z = 0.0;
    SinglePhotonKeyRate sp_threebin;
    SinglePhotonKeyRate sp_bb84;
};

/// Runs the sweep for the configured mode. Points are evaluated in
/// parallel; the returned rows are in attenuation order.
std::vector<SweepRow> run_sweep(const RunConfig& config);

/// Stable, versioned CSV schema; identical config + seed produces a
/// byte-identical file. Doubles are written in shortest round-trip form.
std::string csv_header();
std::string csv_row(const RunConfig& config, const SweepRow& row);
void write_csv(const RunConfig& config, const std::vector<SweepRow>& rows,
               const std::string& path); // throws ConfigError on I/O failure

} // namespace qkd
