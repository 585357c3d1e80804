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

#include <array>
#include <cstdint>
#include <initializer_list>

namespace qkd {

/// Event classes tallied by the channel simulation and consumed by the
/// decoy-state bounds.
///
/// ZDet/ZErr: data-line detections and errors on Z-sent rounds.
/// L0/L1/LPlus: late monitoring-bin clicks, by the sent state.
/// E..: early (overlap) monitoring-bin clicks, by the consecutive sent
/// pattern (previous, current). Only the patterns the analysis uses are
/// tallied. Each pair class is attributed to its "source" pulse -- the one
/// whose photons can reach the overlap bin under perfect preparation
/// (current for E00/E01/E0P/EPP, previous for E11/EP1) -- which keeps the
/// per-intensity Poisson decomposition exact for the bounds.
enum class Event : int {
    ZDet = 0,
    ZErr,
    L0,
    L1,
    LPlus,
    E00,
    E11,
    EPP,
    E01,
    E0P,
    EP1,
};

inline constexpr int kNumEvents = 11;
inline constexpr int kMaxIntensities = 2;

constexpr int event_index(Event e) { return static_cast<int>(e); }

/// Detection counts per intensity setting and event class, plus the
/// emission parameters needed to turn pattern counts into pattern rates.
/// Monte Carlo counts are integer-valued; expectation-mode counts are
/// integer-valued by default and may carry fractional expectations when the
/// caller asks for the unrounded (smooth) variant.
struct ObservedCounts {
    int num_intensities = kMaxIntensities;
    std::uint64_t rounds = 0;
    double p_z = 0.5;
    std::array<std::array<double, kNumEvents>, kMaxIntensities> n{};

    double at(int intensity, Event e) const {
        return n[intensity][event_index(e)];
    }
    double& at(int intensity, Event e) {
        return n[intensity][event_index(e)];
    }

    double total(Event e) const {
        double sum = 0;
        for (int k = 0; k < num_intensities; ++k) sum += n[k][event_index(e)];
        return sum;
    }

    /// Probability that a round (or consecutive round pair) carries the
    /// sent pattern of the given event class.
    double pattern_prob(Event e) const;

    void add(const ObservedCounts& other);
};

/// Photon-number bookkeeping for Monte Carlo runs: per event class and
/// intensity, how many counted detections came from a source pulse that
/// left Alice with 0, 1, or >= 2 photons. This is the ground truth the
/// decoy bounds are tested against.
struct TruthLedger {
    std::array<std::array<std::array<std::uint64_t, 3>, kNumEvents>,
               kMaxIntensities>
        n{};

    std::uint64_t& at(int intensity, Event e, int photon_class) {
        return n[intensity][event_index(e)][photon_class];
    }
    std::uint64_t at(int intensity, Event e, int photon_class) const {
        return n[intensity][event_index(e)][photon_class];
    }

    /// Total over intensities for one photon class, summed over the given
    /// event classes.
    std::uint64_t total(std::initializer_list<Event> events,
                        int photon_class) const;

    void add(const TruthLedger& other);
};

} // namespace qkd
