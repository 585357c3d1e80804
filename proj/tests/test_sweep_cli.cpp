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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qkd/sweep.hpp"

using namespace qkd;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = "/tmp/qkdrate_test_" + name;
    std::ofstream out(path);
    out << body;
    return path;
}

int count_fields(const std::string& line) {
    int commas = 0;
    for (char ch : line)
        if (ch == ',') ++commas;
    return commas + 1;
}

} // namespace

TEST_CASE("run mode parsing") {
    CHECK(parse_run_mode("wcp-decoy") == RunMode::WcpDecoy);
    CHECK(parse_run_mode("single-photon") == RunMode::SinglePhoton);
    CHECK(parse_run_mode("verify-bounds") == RunMode::VerifyBounds);
    CHECK(parse_run_mode("verify-estimators") == RunMode::VerifyEstimators);
    CHECK_THROWS_AS(parse_run_mode("bogus"), ConfigError);
}

TEST_CASE("config file parsing") {
    const std::string path = write_temp("ok.cfg",
                                        "# comment\n"
                                        "mode = single-photon\n"
                                        "att_start = 5\n"
                                        "att_stop = 15\n"
                                        "att_step = 5\n"
                                        "rounds = 1e6\n"
                                        "seed = 9\n"
                                        "e_mis = 0.02\n"
                                        "optimize = false\n"
                                        "p_z = 0.8\n");
    const RunConfig config = parse_config_file(path);
    CHECK(config.mode == RunMode::SinglePhoton);
    CHECK(config.att_start == 5.0);
    CHECK(config.rounds == 1000000);
    CHECK(config.seed == 9);
    CHECK(config.channel.e_mis == 0.02);
    CHECK(!config.optimize);
    CHECK(config.fixed.p_z == 0.8);
    config.validate();
}

TEST_CASE("config errors carry the field name") {
    const std::string bad_key = write_temp("badkey.cfg", "p_zc = 0.5\n");
    CHECK_THROWS_WITH_AS(parse_config_file(bad_key),
                         "p_zc: unknown configuration key", ConfigError);

    const std::string bad_value = write_temp("badval.cfg", "rounds = ten\n");
    try {
        parse_config_file(bad_value);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "rounds");
    }

    CHECK_THROWS_AS(parse_config_file("/nonexistent/qkdrate.cfg"),
                    ConfigError);

    const std::string bad_line = write_temp("badline.cfg", "just text\n");
    CHECK_THROWS_AS(parse_config_file(bad_line), ConfigError);
}

TEST_CASE("config validation rejects broken sweeps") {
    RunConfig config;
    config.att_step = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = RunConfig{};
    config.att_stop = -1.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = RunConfig{};
    config.eps_sec = 2.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = RunConfig{};
    config.optimize = false;
    config.fixed.intensities.mu2 = 0.9; // above mu1
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("sweep rows are ordered and the CSV is byte-stable") {
    RunConfig config;
    config.mode = RunMode::WcpDecoy;
    config.att_start = 0.0;
    config.att_stop = 10.0;
    config.att_step = 5.0;
    config.rounds = 10000000ULL;
    config.optimize = false;
    config.fixed.intensities = {0.6, 0.15, 0.78};
    config.fixed.p_z = 0.65;

    const auto rows = run_sweep(config);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].attenuation_db == 0.0);
    CHECK(rows[1].attenuation_db == 5.0);
    CHECK(rows[2].attenuation_db == 10.0);
    CHECK(rows[0].breakdown.key_length >= rows[2].breakdown.key_length);

    write_csv(config, rows, "/tmp/qkdrate_test_a.csv");
    const auto rows2 = run_sweep(config);
    write_csv(config, rows2, "/tmp/qkdrate_test_b.csv");
    const std::string a = slurp("/tmp/qkdrate_test_a.csv");
    const std::string b = slurp("/tmp/qkdrate_test_b.csv");
    CHECK(!a.empty());
    CHECK(a == b);
    CHECK(a.find("\r") == std::string::npos); // LF line endings

    // header and every row agree on the column count
    std::istringstream lines(a);
    std::string header;
    std::getline(lines, header);
    const int expected_fields = count_fields(header);
    CHECK(header.substr(0, 7) == "schema,");
    std::string line;
    int n_rows = 0;
    while (std::getline(lines, line)) {
        CHECK(count_fields(line) == expected_fields);
        ++n_rows;
    }
    CHECK(n_rows == 3);
}

TEST_CASE("single-photon sweep fills the reference columns") {
    RunConfig config;
    config.mode = RunMode::SinglePhoton;
    config.att_start = 0.0;
    config.att_stop = 0.0;
    config.att_step = 1.0;
    config.rounds = 10000000ULL;
    config.optimize = false;
    config.fixed.p_z = 0.9;

    const auto rows = run_sweep(config);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].has_sp);
    CHECK(rows[0].sp_threebin.key_length > 0.0);
    CHECK(rows[0].sp_bb84.key_length > 0.0);
    const std::string line = csv_row(config, rows[0]);
    CHECK(count_fields(line) == count_fields(csv_header()));
}

TEST_CASE("unwritable output path is a config error naming the field") {
    RunConfig config;
    try {
        write_csv(config, {}, "/nonexistent-dir/out.csv");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "out");
    }
}
