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

#include <cstdint>
#include <string>

#include "qkd/channel.hpp"

namespace qkd {

/// Result of sweeping random collective attacks through every estimator
/// and cross-checking them against the amplitude oracle. All deviations
/// are absolute values; the sweep covers ancilla dimensions 1-8 and loss
/// weights 0-0.9.
struct EstimatorVerification {
    int attacks = 0;
    double max_dev_bare = 0.0;        // bare-scheme estimator vs oracle
    double max_dev_monitoring = 0.0;  // monitoring-only estimator vs oracle
    double max_dev_joint = 0.0;       // joint form vs monitoring form
    double max_dev_closed = 0.0;     // |closed form - ideal|
    double max_dev_m_arg = 0.0;      // max(0,.) argument vs p(+|-)/Sigma
    double max_dev_scale = 0.0;      // closed form vs 2x direct amplitudes
    double max_dev_povm = 0.0;       // |povm route - amplitude route|
    double max_dev_row_sum = 0.0;    // |sum_b p(b|a) - 1|, Direct
    double max_dev_pair = 0.0;       // pair_sum_identity left vs right
    double max_dev_uncorrected = 0.0; // uncorrected closed form vs oracle
    double seconds = 0.0;

    bool pass(double tol = 1e-10) const;
    std::string report() const;
};

EstimatorVerification verify_estimators(int n_attacks, std::uint64_t seed);

/// Empirical soundness of the decoy bounds against photon-number-resolved
/// Monte Carlo truth: violation counts over seeded trials for the
/// single-photon sandwich and the vacuum upper bound, on the (e,ZZ) and
/// (l,Z) monitoring classes.
struct BoundsVerification {
    int trials = 0;
    double eps = 0.1;
    int viol_d1_lower = 0;
    int viol_d1_upper = 0;
    int viol_d0_upper = 0;
    double seconds = 0.0;

    bool pass() const;
    std::string report() const;
};

BoundsVerification verify_bounds(int trials, std::uint64_t rounds, double eps,
                                 std::uint64_t seed);

} // namespace qkd
