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

#include <vector>

#include "qkd/pipeline.hpp"

namespace qkd {

/// Search box for the protocol parameters. mu2 is parametrized as a ratio
/// of mu1 so the ordering mu2 < mu1 holds everywhere in the box.
struct ParamSpace {
    struct Range {
        double lo;
        double hi;
    };
    Range mu1{0.05, 1.0};
    Range mu2_ratio{0.02, 0.8};
    Range p_mu1{0.1, 0.95};
    Range p_z{0.5, 0.98};
    int grid_points = 8;
    int refine_rounds = 2;

    void validate() const; // throws std::invalid_argument
};

struct OptimizeResult {
    ProtocolParams params;
    KeyRateBreakdown breakdown;
    double rate = 0.0; // key bits per round
};

/// Maximize finite-key bits per round on the expected-value pipeline:
/// coarse grid search over the box, then Nelder-Mead refinement around the
/// incumbent. Grid points are evaluated in parallel with a deterministic
/// lexicographic tie-break, and the refinement never returns a point worse
/// than the incumbent. Returns the best attempted point (rate 0) when no
/// feasible point yields key.
///
/// extra_candidates are evaluated alongside the grid; sweeps pass the
/// optimum of a neighbouring channel setting to keep envelopes monotone.
OptimizeResult optimize(const ChannelParams& channel, std::uint64_t rounds,
                        const FiniteKeyEpsilons& eps, const ParamSpace& space,
                        const KeyRateOptions& options = {},
                        const std::vector<ProtocolParams>& extra_candidates = {});

struct SinglePhotonOptimizeResult {
    double p_z = 0.9;
    SinglePhotonKeyRate result;
};

/// One-dimensional grid + refinement over p_z for the single-photon
/// reference curves.
SinglePhotonOptimizeResult optimize_single_photon(
    const ChannelParams& channel, std::uint64_t rounds,
    const FiniteKeyEpsilons& eps, SinglePhotonVariant variant,
    double ec_efficiency = 1.16);

} // namespace qkd
