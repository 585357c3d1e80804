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

#include "qkd/channel.hpp"
#include "qkd/decoy.hpp"

namespace qkd {

/// Protocol-side parameters the optimizer tunes.
struct ProtocolParams {
    IntensitySettings intensities;
    double p_z = 0.9;
};

/// One-decoy pipeline on deterministic expected counts: channel model ->
/// ObservedCounts -> finite-key bounds -> key length.
KeyRateBreakdown evaluate_wcp_expected(const ChannelParams& channel,
                                       const ProtocolParams& protocol,
                                       std::uint64_t rounds,
                                       const FiniteKeyEpsilons& eps,
                                       const KeyRateOptions& options = {},
                                       bool round = true);

enum class SinglePhotonVariant { ThreeBin, Bb84 };

struct SinglePhotonKeyRate {
    double key_length = 0.0;
    double n_z = 0.0;
    double qber_z = 0.0;
    double ex_hat = 0.0;   // observed phase-error estimate
    double ex_upper = 0.0; // after the statistical deviation term
    double ez_upper = 0.0;
    double lambda_ec = 0.0;
    bool feasible = false;
};

/// Key length for an ideal single-photon source, either through this
/// protocol's monitoring line (ThreeBin) or through a standard BB84
/// receiver measuring both X outcomes (Bb84). No decoy decomposition is
/// needed: every detection is a single-photon detection. Both variants use
/// the same statistical-correction and composition terms, so differences
/// between the curves isolate the estimation scheme.
SinglePhotonKeyRate evaluate_single_photon(const ChannelParams& channel,
                                           double p_z, std::uint64_t rounds,
                                           const FiniteKeyEpsilons& eps,
                                           SinglePhotonVariant variant,
                                           double ec_efficiency = 1.16,
                                           bool round = true);

} // namespace qkd
