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

#include <cmath>

#include "qkd/channel.hpp"

using namespace qkd;

namespace {

SourceConfig wcp_source(std::uint64_t rounds, std::uint64_t seed) {
    SourceConfig source;
    source.mode = SourceMode::WcpDecoy;
    source.intensities = {0.5, 0.15, 0.7};
    source.p_z = 0.8;
    source.rounds = rounds;
    source.seed = seed;
    return source;
}

} // namespace

TEST_CASE("per-bin intensities for each prepared state") {
    // monitoring input 0.4: k = 1, eta = 0.8, p_zb = 0.5
    const BinIntensities z0 =
        expected_bin_intensities(PreparedState::Z0, 1.0, 0.8, 0.5, 0.0);
    CHECK(z0.t0 == doctest::Approx(0.1));
    CHECK(z0.t1 == doctest::Approx(0.1));
    CHECK(z0.t2 == 0.0);
    CHECK(z0.data_early == doctest::Approx(0.4));
    CHECK(z0.data_late == 0.0);

    const BinIntensities plus =
        expected_bin_intensities(PreparedState::XPlus, 1.0, 0.8, 0.5, 0.0);
    CHECK(plus.t0 == doctest::Approx(0.05));
    CHECK(plus.t2 == doctest::Approx(0.05));
    CHECK(plus.t1 == 0.0); // perfect interference

    const BinIntensities misaligned =
        expected_bin_intensities(PreparedState::XPlus, 1.0, 0.8, 0.5, 0.01);
    CHECK(misaligned.t1 == doctest::Approx(0.4 / 4.0 * 0.02));

    CHECK_THROWS_AS(expected_bin_intensities(PreparedState::XMinus, 1.0, 0.8,
                                             0.5, 0.0),
                    std::invalid_argument);
}

TEST_CASE("transmittance composes multiplicatively in dB") {
    ChannelParams channel;
    channel.det_eff = 1.0;
    channel.attenuation_db = 7.0;
    const double eta = channel.transmittance();
    channel.attenuation_db = 14.0;
    CHECK(channel.transmittance() == doctest::Approx(eta * eta).epsilon(1e-12));
    channel.det_eff = 0.25;
    CHECK(channel.transmittance() ==
          doctest::Approx(0.25 * eta * eta).epsilon(1e-12));
}

TEST_CASE("opaque channel with no dark counts yields nothing") {
    ChannelParams channel;
    channel.attenuation_db = 400.0;
    channel.p_dc = 0.0;
    const SimResult sim =
        simulate_counts_expected(channel, wcp_source(1000000, 1));
    for (int k = 0; k < kMaxIntensities; ++k)
        for (int e = 0; e < kNumEvents; ++e) CHECK(sim.counts.n[k][e] == 0);
}

TEST_CASE("noiseless single-photon channel has zero QBER and dark-free bins") {
    ChannelParams channel;
    channel.attenuation_db = 0.0;
    channel.p_dc = 0.0;
    channel.e_mis = 0.0;
    channel.det_eff = 0.83;
    SourceConfig source;
    source.mode = SourceMode::SinglePhoton;
    source.p_z = 0.8;
    source.rounds = 1000000;
    const SimResult sim = simulate_counts_expected(channel, source);
    CHECK(sim.counts.total(Event::ZErr) == 0);
    // detection probability on the data line is det_eff * p_zb exactly
    const double expected_dets =
        1000000.0 * 0.8 * channel.det_eff * source.bob_pz();
    CHECK(static_cast<double>(sim.counts.total(Event::ZDet)) ==
          doctest::Approx(expected_dets).epsilon(1e-6));
    // zero-noise fixed point: no clicks in the interfering bin from |+>
    CHECK(sim.counts.total(Event::LPlus) == 0);
}

TEST_CASE("Monte Carlo is deterministic and thread-layout independent") {
    ChannelParams channel;
    channel.attenuation_db = 6.0;
    channel.p_dc = 1e-4;
    channel.e_mis = 0.02;
    const SourceConfig source = wcp_source(400000, 33);

    const SimResult a = simulate_counts_mc(channel, source);
    const SimResult b = simulate_counts_mc(channel, source);
    const SimResult serial = simulate_counts_mc_serial(channel, source);
    for (int k = 0; k < kMaxIntensities; ++k)
        for (int e = 0; e < kNumEvents; ++e) {
            CHECK(a.counts.n[k][e] == b.counts.n[k][e]);
            CHECK(a.counts.n[k][e] == serial.counts.n[k][e]);
            for (int c = 0; c < 3; ++c)
                CHECK(a.ledger.n[k][e][c] == serial.ledger.n[k][e][c]);
        }

    SourceConfig other = source;
    other.seed = 34;
    const SimResult c = simulate_counts_mc(channel, other);
    CHECK(c.counts.total(Event::ZDet) != a.counts.total(Event::ZDet));
}

TEST_CASE("photon-number ledger decomposes every class exactly") {
    ChannelParams channel;
    channel.attenuation_db = 4.0;
    channel.p_dc = 1e-4;
    channel.e_mis = 0.03;
    const SimResult sim = simulate_counts_mc(channel, wcp_source(500000, 7));
    for (int k = 0; k < kMaxIntensities; ++k)
        for (int e = 0; e < kNumEvents; ++e) {
            const std::uint64_t split = sim.ledger.n[k][e][0] +
                                        sim.ledger.n[k][e][1] +
                                        sim.ledger.n[k][e][2];
            CHECK(split == sim.counts.n[k][e]);
        }
}

TEST_CASE("Monte Carlo agrees with the expected-value mode within 5 sigma") {
    ChannelParams channel;
    channel.attenuation_db = 5.0;
    channel.p_dc = 1e-5;
    channel.e_mis = 0.02;
    const SourceConfig source = wcp_source(10000000, 2025);

    const SimResult expected = simulate_counts_expected(channel, source);
    const SimResult mc = simulate_counts_mc(channel, source);
    for (int k = 0; k < 2; ++k)
        for (int e = 0; e < kNumEvents; ++e) {
            const double mean = static_cast<double>(expected.counts.n[k][e]);
            if (mean < 100.0) continue; // too rare for a z-test
            const double sigma = std::sqrt(mean);
            const double observed = static_cast<double>(mc.counts.n[k][e]);
            CAPTURE(k);
            CAPTURE(e);
            CHECK(std::abs(observed - mean) <= 5.0 * sigma);
        }
}

TEST_CASE("dark-count-dominated regime randomizes the data line") {
    ChannelParams channel;
    channel.attenuation_db = 130.0; // effectively no signal
    channel.p_dc = 1e-3;
    channel.e_mis = 0.0;
    const SimResult sim =
        simulate_counts_expected(channel, wcp_source(20000000, 3));
    const double qber =
        static_cast<double>(sim.counts.total(Event::ZErr)) /
        static_cast<double>(sim.counts.total(Event::ZDet));
    CHECK(qber == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("single-photon reference rejects WCP sources") {
    ChannelParams channel;
    CHECK_THROWS_AS(
        single_photon_reference_counts(channel, wcp_source(1000, 1)),
        std::invalid_argument);
}

TEST_CASE("single-photon reference produces both receivers") {
    ChannelParams channel;
    channel.attenuation_db = 10.0;
    channel.p_dc = 1e-8;
    channel.e_mis = 0.01;
    SourceConfig source;
    source.mode = SourceMode::SinglePhoton;
    source.p_z = 0.9;
    source.rounds = 100000000ULL;
    const SinglePhotonReference ref =
        single_photon_reference_counts(channel, source);
    CHECK(ref.counts.total(Event::ZDet) > 0);
    CHECK(ref.n_x > 0);
    // X-line error rate tracks e_mis when darks are negligible
    CHECK(ref.m_x / ref.n_x == doctest::Approx(0.01).epsilon(0.05));
}

TEST_CASE("source validation") {
    SourceConfig source = wcp_source(0, 1);
    CHECK_THROWS_AS(source.validate(), std::invalid_argument);
    source.rounds = 10;
    source.p_z = 1.0;
    CHECK_THROWS_AS(source.validate(), std::invalid_argument);
    ChannelParams channel;
    channel.p_dc = 1.0;
    CHECK_THROWS_AS(channel.validate(), std::invalid_argument);
    channel = ChannelParams{};
    channel.e_mis = 0.6;
    CHECK_THROWS_AS(channel.validate(), std::invalid_argument);
}
