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

#include <cmath>
#include <cstdint>

#include "qkd/attack.hpp"
#include "qkd/counts.hpp"
#include "qkd/decoy.hpp"

namespace qkd {

/// Honest-channel model: fixed attenuation, per-bin dark counts, and an
/// intrinsic misalignment error that flips data-line bits and degrades the
/// interferometer visibility (V = 1 - 2 e_mis).
struct ChannelParams {
    double attenuation_db = 0.0;
    double p_dc = 1e-10;
    double e_mis = 0.01;
    double det_eff = 1.0;

    double transmittance() const {
        return det_eff * std::pow(10.0, -attenuation_db / 10.0);
    }
    double visibility() const { return 1.0 - 2.0 * e_mis; }
    void validate() const; // throws std::invalid_argument
};

enum class SourceMode { SinglePhoton, WcpDecoy };

struct SourceConfig {
    SourceMode mode = SourceMode::WcpDecoy;
    IntensitySettings intensities;
    double p_z = 0.9;
    /// Bob's data-line split; values <= 0 couple it to Alice's p_z.
    double p_zb = -1.0;
    std::uint64_t rounds = 0;
    std::uint64_t seed = 1;

    double bob_pz() const { return p_zb > 0.0 ? p_zb : p_z; }
    int num_intensities() const {
        return mode == SourceMode::WcpDecoy ? 2 : 1;
    }
    void validate() const;
};

/// Mean photon number arriving in each detection bin for one pulse of
/// intensity k through transmittance eta. Data line carries k eta p_zb in
/// the bit-matching bin; the monitoring line input is k eta (1 - p_zb).
struct BinIntensities {
    double data_early = 0.0;
    double data_late = 0.0;
    double t0 = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
};

BinIntensities expected_bin_intensities(PreparedState state, double k,
                                        double eta, double p_zb,
                                        double e_mis);

struct SimResult {
    ObservedCounts counts;
    TruthLedger ledger;
};

/// Deterministic expectation-mode counts: every class count is the rounded
/// expected value under the click model (1 - (1 - p_dc) e^{-I} per bin).
/// The ledger carries the photon-number decomposition of the same
/// expectations, so asymptotic bound checks need no sampling.
///
/// round = false keeps the raw fractional expectations. The optimizer runs
/// on that variant: rounding sub-unit class expectations to zero creates
/// cliffs a parameter search would otherwise exploit.
SimResult simulate_counts_expected(const ChannelParams& channel,
                                   const SourceConfig& source,
                                   bool round = true);

/// Monte Carlo counts with per-round Poisson photon numbers, binomial
/// thinning, per-bin dark counts and data-line misalignment flips. Pair
/// events span consecutive rounds. The per-round randomness is counter
/// based, so results are identical for any work-sharing layout.
///
/// simulate_counts_mc shards rounds across OpenMP threads;
/// simulate_counts_mc_serial is the single-loop reference implementation
/// kept for testing and benchmarking. Both produce bit-identical results
/// for the same configuration.
SimResult simulate_counts_mc(const ChannelParams& channel,
                             const SourceConfig& source);
SimResult simulate_counts_mc_serial(const ChannelParams& channel,
                                    const SourceConfig& source);

/// Ideal single-photon comparison curves: the three-bin protocol's classes
/// plus the X-line statistics of a standard BB84 receiver measuring both X
/// outcomes. n_mon holds the per-state monitoring-bin clicks of the
/// non-overlapping bin layout (each round's three arrival bins separately
/// resolvable), which is what the single-photon reference estimator uses;
/// the paired overlap classes in `counts` belong to the decoy bookkeeping.
struct SinglePhotonReference {
    ObservedCounts counts;    // three-bin protocol event classes
    double n_mon[3][3] = {};  // [sent state Z0,Z1,X+][bin t0,t1,t2]
    double n_x = 0.0;         // BB84 X-basis detections
    double m_x = 0.0;         // BB84 X-basis errors
};

SinglePhotonReference single_photon_reference_counts(
    const ChannelParams& channel, const SourceConfig& source,
    bool round = true);

} // namespace qkd
