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

#include "qkd/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qkd {

namespace {

using Point = std::array<double, 4>; // mu1, mu2/mu1, p_mu1, p_z

ProtocolParams to_params(const Point& x) {
    ProtocolParams p;
    p.intensities.mu1 = x[0];
    p.intensities.mu2 = x[0] * x[1];
    p.intensities.p_mu1 = x[2];
    p.p_z = x[3];
    return p;
}

Point clamp_point(const Point& x, const ParamSpace& space) {
    const ParamSpace::Range r[4] = {space.mu1, space.mu2_ratio, space.p_mu1,
                                    space.p_z};
    Point out;
    for (int i = 0; i < 4; ++i) out[i] = std::clamp(x[i], r[i].lo, r[i].hi);
    return out;
}

struct Objective {
    const ChannelParams& channel;
    std::uint64_t rounds;
    const FiniteKeyEpsilons& eps;
    const KeyRateOptions& options;

    double operator()(const Point& x) const {
        const ProtocolParams p = to_params(x);
        // Unrounded expectations: the smooth objective, free of the
        // count-rounding cliffs integer tallies would introduce.
        const KeyRateBreakdown b =
            evaluate_wcp_expected(channel, p, rounds, eps, options, false);
        return b.key_length / static_cast<double>(rounds);
    }
};

bool lex_less(const Point& a, const Point& b) {
    for (int i = 0; i < 4; ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

struct Incumbent {
    Point x{};
    double rate = -1.0;

    void offer(const Point& cand, double cand_rate) {
        if (cand_rate > rate ||
            (cand_rate == rate && rate >= 0.0 && lex_less(cand, x))) {
            x = cand;
            rate = cand_rate;
        }
    }
};

// Nelder-Mead on the clamped box. Deterministic; ~40 iterations per call
// is plenty for a 4-dimensional smooth-ish objective.
Point nelder_mead(const Objective& objective, const ParamSpace& space,
                  const Point& start, double step_frac, int max_iter,
                  double* best_value) {
    constexpr int n = 4;
    std::array<Point, n + 1> simplex;
    std::array<double, n + 1> value;
    const ParamSpace::Range r[4] = {space.mu1, space.mu2_ratio, space.p_mu1,
                                    space.p_z};
    simplex[0] = clamp_point(start, space);
    for (int i = 0; i < n; ++i) {
        Point p = simplex[0];
        const double step = step_frac * (r[i].hi - r[i].lo);
        p[i] = (p[i] + step <= r[i].hi) ? p[i] + step : p[i] - step;
        simplex[i + 1] = clamp_point(p, space);
    }
    for (int i = 0; i <= n; ++i) value[i] = -objective(simplex[i]);

    for (int iter = 0; iter < max_iter; ++iter) {
        std::array<int, n + 1> order;
        for (int i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return value[a] < value[b]; });
        std::array<Point, n + 1> sx;
        std::array<double, n + 1> sv;
        for (int i = 0; i <= n; ++i) {
            sx[i] = simplex[order[i]];
            sv[i] = value[order[i]];
        }
        simplex = sx;
        value = sv;

        Point centroid{};
        for (int i = 0; i < n; ++i)
            for (int d = 0; d < 4; ++d) centroid[d] += simplex[i][d] / n;

        auto affine = [&](double t) {
            Point p;
            for (int d = 0; d < 4; ++d)
                p[d] = centroid[d] + t * (simplex[n][d] - centroid[d]);
            return clamp_point(p, space);
        };

        const Point reflected = affine(-1.0);
        const double fr = -objective(reflected);
        if (fr < value[0]) {
            const Point expanded = affine(-2.0);
            const double fe = -objective(expanded);
            if (fe < fr) {
                simplex[n] = expanded;
                value[n] = fe;
            } else {
                simplex[n] = reflected;
                value[n] = fr;
            }
        } else if (fr < value[n - 1]) {
            simplex[n] = reflected;
            value[n] = fr;
        } else {
            const Point contracted = affine(0.5);
            const double fc = -objective(contracted);
            if (fc < value[n]) {
                simplex[n] = contracted;
                value[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    for (int d = 0; d < 4; ++d)
                        simplex[i][d] =
                            0.5 * (simplex[i][d] + simplex[0][d]);
                    value[i] = -objective(simplex[i]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (value[i] < value[best]) best = i;
    *best_value = -value[best];
    return simplex[best];
}

} // namespace

void ParamSpace::validate() const {
    auto check = [](const Range& r, const char* name) {
        if (!(r.lo < r.hi) || !(r.lo > 0.0))
            throw std::invalid_argument(std::string("empty range for ") +
                                        name);
    };
    check(mu1, "mu1");
    check(mu2_ratio, "mu2_ratio");
    check(p_mu1, "p_mu1");
    check(p_z, "p_z");
    if (mu2_ratio.hi >= 1.0)
        throw std::invalid_argument("mu2_ratio must stay below 1");
    if (p_mu1.hi >= 1.0 || p_z.hi >= 1.0)
        throw std::invalid_argument("probability ranges must stay below 1");
    if (grid_points < 2)
        throw std::invalid_argument("grid needs at least 2 points per axis");
    if (refine_rounds < 0)
        throw std::invalid_argument("refine_rounds must be >= 0");
}

OptimizeResult optimize(const ChannelParams& channel, std::uint64_t rounds,
                        const FiniteKeyEpsilons& eps, const ParamSpace& space,
                        const KeyRateOptions& options,
                        const std::vector<ProtocolParams>& extra_candidates) {
    space.validate();
    const Objective objective{channel, rounds, eps, options};

    const int g = space.grid_points;
    const ParamSpace::Range r[4] = {space.mu1, space.mu2_ratio, space.p_mu1,
                                    space.p_z};
    auto axis = [&](int d, int i) {
        return r[d].lo + (r[d].hi - r[d].lo) * i / (g - 1.0);
    };

    const long total = static_cast<long>(g) * g * g * g;
    Incumbent incumbent;
#pragma omp parallel
    {
        Incumbent local;
#pragma omp for schedule(static)
        for (long idx = 0; idx < total; ++idx) {
            long rem = idx;
            Point x;
            for (int d = 3; d >= 0; --d) {
                x[d] = axis(d, static_cast<int>(rem % g));
                rem /= g;
            }
            local.offer(x, objective(x));
        }
#pragma omp critical
        {
            if (local.rate > incumbent.rate ||
                (local.rate == incumbent.rate && incumbent.rate >= 0.0 &&
                 lex_less(local.x, incumbent.x)))
                incumbent.offer(local.x, local.rate);
        }
    }

    for (const ProtocolParams& p : extra_candidates) {
        if (!(p.intensities.mu1 > p.intensities.mu2) ||
            !(p.intensities.mu2 > 0.0))
            continue;
        Point x{p.intensities.mu1, p.intensities.mu2 / p.intensities.mu1,
                p.intensities.p_mu1, p.p_z};
        x = clamp_point(x, space);
        incumbent.offer(x, objective(x));
    }

    double step = 1.0 / (g - 1.0);
    for (int round = 0; round < space.refine_rounds; ++round) {
        double refined_rate = 0.0;
        const Point refined = nelder_mead(objective, space, incumbent.x,
                                          step, 60, &refined_rate);
        incumbent.offer(refined, refined_rate);
        step *= 0.33;
    }

    OptimizeResult out;
    out.params = to_params(incumbent.x);
    out.breakdown =
        evaluate_wcp_expected(channel, out.params, rounds, eps, options);
    out.rate = out.breakdown.key_length / static_cast<double>(rounds);
    return out;
}

SinglePhotonOptimizeResult optimize_single_photon(
    const ChannelParams& channel, std::uint64_t rounds,
    const FiniteKeyEpsilons& eps, SinglePhotonVariant variant,
    double ec_efficiency) {
    auto rate = [&](double p_z) {
        return evaluate_single_photon(channel, p_z, rounds, eps, variant,
                                      ec_efficiency, false)
            .key_length;
    };
    double best_pz = 0.5;
    double best = -1.0;
    for (int i = 0; i <= 48; ++i) {
        const double p_z = 0.50 + 0.48 * i / 48.0;
        const double value = rate(p_z);
        if (value > best) {
            best = value;
            best_pz = p_z;
        }
    }
    // local ternary refinement
    double lo = std::max(0.50, best_pz - 0.02);
    double hi = std::min(0.98, best_pz + 0.02);
    for (int it = 0; it < 30; ++it) {
        const double a = lo + (hi - lo) / 3.0;
        const double b = hi - (hi - lo) / 3.0;
        if (rate(a) < rate(b))
            lo = a;
        else
            hi = b;
    }
    const double candidate = 0.5 * (lo + hi);
    if (rate(candidate) > best) best_pz = candidate;

    SinglePhotonOptimizeResult out;
    out.p_z = best_pz;
    out.result = evaluate_single_photon(channel, best_pz, rounds, eps,
                                        variant, ec_efficiency);
    return out;
}

} // namespace qkd
