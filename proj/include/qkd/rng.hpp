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

namespace qkd {

/// splitmix64 finalizer (Vigna). Used both as a stream scrambler and as the
/// generator step of Rng below.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based PRNG: the stream is a pure function of (seed, counter,
/// stream), so any round of a simulation can be replayed in isolation and
/// work can be sharded across threads without changing the results.
///
/// Not cryptographic; statistical quality is adequate for Monte Carlo use.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t counter, std::uint64_t stream) {
        state_ = mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^
                       (counter * 0xd1342543de82ef95ULL + 1)) ^
                 (stream * 0x2545f4914f6cdd1dULL + 1);
    }

    explicit Rng(std::uint64_t seed) : Rng(seed, 0, 0) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n).
    std::uint64_t index(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller (implemented here so streams are
    /// reproducible across standard libraries).
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// Poisson by inversion; fine for the small means used here (mu <~ 30).
    /// exp_neg_mean must equal exp(-mean); it is passed in so hot loops can
    /// precompute it once per intensity.
    int poisson(double mean, double exp_neg_mean) {
        double u = uniform();
        double p = exp_neg_mean;
        int n = 0;
        double c = p;
        while (u > c && n < 200) {
            ++n;
            p *= mean / n;
            c += p;
        }
        return n;
    }

    int poisson(double mean) { return poisson(mean, std::exp(-mean)); }

  private:
    std::uint64_t state_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace qkd
