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

#include "qkd/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkd/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qkd {

void ChannelParams::validate() const {
    if (attenuation_db < 0.0)
        throw std::invalid_argument("attenuation_db must be >= 0");
    if (!(p_dc >= 0.0 && p_dc < 1.0))
        throw std::invalid_argument("p_dc must lie in [0, 1)");
    if (!(e_mis >= 0.0 && e_mis <= 0.5))
        throw std::invalid_argument("e_mis must lie in [0, 1/2]");
    if (!(det_eff > 0.0 && det_eff <= 1.0))
        throw std::invalid_argument("det_eff must lie in (0, 1]");
}

void SourceConfig::validate() const {
    if (!(p_z > 0.0 && p_z < 1.0))
        throw std::invalid_argument("p_z must lie in (0, 1)");
    if (p_zb > 0.0 && p_zb >= 1.0)
        throw std::invalid_argument("p_zb must lie in (0, 1)");
    if (rounds == 0) throw std::invalid_argument("rounds must be positive");
    if (mode == SourceMode::WcpDecoy) intensities.validate();
}

BinIntensities expected_bin_intensities(PreparedState state, double k,
                                        double eta, double p_zb,
                                        double e_mis) {
    if (k < 0.0) throw std::invalid_argument("intensity must be >= 0");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must lie in [0, 1]");
    const double data = k * eta * p_zb;
    const double mon = k * eta * (1.0 - p_zb);
    const double v = 1.0 - 2.0 * e_mis;
    BinIntensities bins;
    switch (state) {
    case PreparedState::Z0:
        bins.data_early = data;
        bins.t0 = mon / 4.0;
        bins.t1 = mon / 4.0;
        break;
    case PreparedState::Z1:
        bins.data_late = data;
        bins.t1 = mon / 4.0;
        bins.t2 = mon / 4.0;
        break;
    case PreparedState::XPlus:
        bins.data_early = data / 2.0;
        bins.data_late = data / 2.0;
        bins.t0 = mon / 8.0;
        bins.t1 = mon / 4.0 * (1.0 - v);
        bins.t2 = mon / 8.0;
        break;
    case PreparedState::XMinus:
        throw std::invalid_argument("the source never prepares |->");
    }
    return bins;
}

namespace {

constexpr PreparedState kStates[3] = {PreparedState::Z0, PreparedState::Z1,
                                      PreparedState::XPlus};

// Per-round context shared by the expected-value and Monte Carlo paths.
struct Model {
    double eta;
    double p_zb;
    double p_dc;
    double e_mis;
    int num_intensities;
    double k[2];           // pulse intensities (slot 1 unused for SP)
    double p_k[2];
    double exp_neg_k[2];
    double p_state[3];     // Z0, Z1, XPlus emission probabilities
    // Per-photon routing probabilities, by state.
    double q_data_early[3];
    double q_data_late[3];
    double q_t0[3];
    double q_t1[3];
    double q_t2[3];
    bool single_photon;
};

Model make_model(const ChannelParams& channel, const SourceConfig& source) {
    channel.validate();
    source.validate();
    Model m;
    m.eta = channel.transmittance();
    m.p_zb = source.bob_pz();
    m.p_dc = channel.p_dc;
    m.e_mis = channel.e_mis;
    m.single_photon = source.mode == SourceMode::SinglePhoton;
    m.num_intensities = source.num_intensities();
    if (m.single_photon) {
        m.k[0] = m.k[1] = 1.0;
        m.p_k[0] = 1.0;
        m.p_k[1] = 0.0;
    } else {
        m.k[0] = source.intensities.mu1;
        m.k[1] = source.intensities.mu2;
        m.p_k[0] = source.intensities.p_mu1;
        m.p_k[1] = source.intensities.p_mu2();
    }
    m.exp_neg_k[0] = std::exp(-m.k[0]);
    m.exp_neg_k[1] = std::exp(-m.k[1]);
    m.p_state[0] = 0.5 * source.p_z;
    m.p_state[1] = 0.5 * source.p_z;
    m.p_state[2] = 1.0 - source.p_z;
    for (int s = 0; s < 3; ++s) {
        const BinIntensities bins = expected_bin_intensities(
            kStates[s], 1.0, m.eta, m.p_zb, m.e_mis);
        m.q_data_early[s] = bins.data_early;
        m.q_data_late[s] = bins.data_late;
        m.q_t0[s] = bins.t0;
        m.q_t1[s] = bins.t1;
        m.q_t2[s] = bins.t2;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Expected-value mode.
// ---------------------------------------------------------------------------

// E[x^n] over the photon-number distribution of pulse slot ki.
double pgf(const Model& m, int ki, double x) {
    if (m.single_photon) return x;
    return std::exp(-m.k[ki] * (1.0 - x));
}

// Probability that a bin with per-photon arrival probability q clicks,
// split by the photon-number class of the pulse. extra_miss multiplies the
// no-click factor contributed by everything other than this pulse's
// photons and the bin's own dark draw.
struct ClassProbs {
    double by_class[3] = {0.0, 0.0, 0.0};
    double total() const { return by_class[0] + by_class[1] + by_class[2]; }
};

ClassProbs click_by_class(const Model& m, int ki, double q,
                          double extra_miss = 1.0) {
    const double survive = (1.0 - m.p_dc) * extra_miss;
    ClassProbs cp;
    if (m.single_photon) {
        cp.by_class[0] = 0.0;
        cp.by_class[1] = 1.0 - survive * (1.0 - q);
        cp.by_class[2] = 0.0;
        return cp;
    }
    const double p0 = m.exp_neg_k[ki];
    const double p1 = m.k[ki] * p0;
    const double total = 1.0 - survive * pgf(m, ki, 1.0 - q);
    cp.by_class[0] = p0 * (1.0 - survive);
    cp.by_class[1] = p1 * (1.0 - survive * (1.0 - q));
    cp.by_class[2] = total - cp.by_class[0] - cp.by_class[1];
    return cp;
}

void add_expected(ObservedCounts& counts, TruthLedger& ledger, int ki,
                  Event event, double weight, const ClassProbs& cp,
                  bool round) {
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        double n = weight * cp.by_class[c];
        if (round) n = static_cast<double>(std::llround(n));
        ledger.at(ki, event, c) +=
            static_cast<std::uint64_t>(std::llround(n));
        total += n;
    }
    counts.at(ki, event) += total;
}

SimResult expected_impl(const ChannelParams& channel,
                        const SourceConfig& source, bool round) {
    const Model m = make_model(channel, source);
    const double n_rounds = static_cast<double>(source.rounds);
    const double n_pairs =
        static_cast<double>(source.rounds > 0 ? source.rounds - 1 : 0);

    SimResult result;
    result.counts.num_intensities = m.num_intensities;
    result.counts.rounds = source.rounds;
    result.counts.p_z = source.p_z;

    for (int ki = 0; ki < m.num_intensities; ++ki) {
        // Data line, Z states. The wrong bin only ever holds darks.
        for (int s = 0; s < 2; ++s) {
            const double weight = n_rounds * m.p_k[ki] * m.p_state[s];
            const double q =
                s == 0 ? m.q_data_early[0] : m.q_data_late[1];
            // Click in the signal bin, split by photon class; rounds with
            // no signal click can still detect via the dark wrong bin.
            const ClassProbs sig = click_by_class(m, ki, q);
            const double p0 = m.single_photon ? 0.0 : m.exp_neg_k[ki];
            const double p1 = m.single_photon ? 1.0 : m.k[ki] * p0;
            const double pm[3] = {p0, p1, 1.0 - p0 - p1};
            ClassProbs det;
            for (int c = 0; c < 3; ++c) {
                const double no_sig = pm[c] - sig.by_class[c];
                det.by_class[c] = sig.by_class[c] + no_sig * m.p_dc;
            }
            add_expected(result.counts, result.ledger, ki, Event::ZDet,
                         weight, det, round);

            // Error probability: correct-bin and wrong-bin click states,
            // double clicks resolved by a fair coin, then the e_mis flip.
            ClassProbs err;
            for (int c = 0; c < 3; ++c) {
                const double c1 =
                    pm[c] > 0.0 ? sig.by_class[c] / pm[c] : 0.0;
                const double c0 = m.p_dc;
                const double pc = c1 * (1.0 - c0) + 0.5 * c1 * c0;
                const double pw = c0 * (1.0 - c1) + 0.5 * c1 * c0;
                const double p_err =
                    pc * m.e_mis + pw * (1.0 - m.e_mis);
                err.by_class[c] = pm[c] * p_err;
            }
            add_expected(result.counts, result.ledger, ki, Event::ZErr,
                         weight, err, round);
        }

        // Late monitoring bin: one contributing pulse per round.
        const Event l_events[3] = {Event::L0, Event::L1, Event::LPlus};
        for (int s = 0; s < 3; ++s) {
            const double weight = n_rounds * m.p_k[ki] * m.p_state[s];
            add_expected(result.counts, result.ledger, ki, l_events[s],
                         weight, click_by_class(m, ki, m.q_t1[s]), round);
        }

        // Early (overlap) monitoring bin, by consecutive pattern. Single
        // contributing pulse except for (+,+), where the partner pulse's
        // no-photon factor is averaged over its intensity mix.
        struct PairClass {
            Event event;
            int prev, cur; // state indices
            bool source_is_prev;
        };
        const PairClass pairs[6] = {
            {Event::E00, 0, 0, false}, {Event::E11, 1, 1, true},
            {Event::EPP, 2, 2, false}, {Event::E01, 0, 1, false},
            {Event::E0P, 0, 2, false}, {Event::EP1, 2, 1, true},
        };
        for (const PairClass& pc : pairs) {
            const double pattern =
                m.p_state[pc.prev] * m.p_state[pc.cur];
            const double weight = n_pairs * m.p_k[ki] * pattern;
            const double q = pc.source_is_prev ? m.q_t2[pc.prev]
                                               : m.q_t0[pc.cur];
            // Photon leak from the partner pulse into the same bin.
            const double q_other = pc.source_is_prev ? m.q_t0[pc.cur]
                                                     : m.q_t2[pc.prev];
            double extra_miss = 1.0;
            if (q_other > 0.0) {
                extra_miss = 0.0;
                for (int kj = 0; kj < m.num_intensities; ++kj)
                    extra_miss += m.p_k[kj] * pgf(m, kj, 1.0 - q_other);
            }
            add_expected(result.counts, result.ledger, ki, pc.event, weight,
                         click_by_class(m, ki, q, extra_miss), round);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Monte Carlo mode.
// ---------------------------------------------------------------------------

struct RoundOutcome {
    int ki = 0;
    int state = 0;
    int photon_class = 0;
    int data_early = 0;
    int data_late = 0;
    int t0 = 0;
    int t1 = 0;
    int t2 = 0;
    bool dark_data_early = false;
    bool dark_data_late = false;
    bool dark_l = false;
    bool dark_e = false;
};

RoundOutcome simulate_round(const Model& m, std::uint64_t seed,
                            std::uint64_t round) {
    Rng rng(seed, round, 0);
    RoundOutcome out;
    out.ki = (m.num_intensities == 2 && !rng.bernoulli(m.p_k[0])) ? 1 : 0;
    const double u_state = rng.uniform();
    out.state = u_state < m.p_state[0] ? 0
                : u_state < m.p_state[0] + m.p_state[1] ? 1
                                                        : 2;
    const int n_photons =
        m.single_photon ? 1 : rng.poisson(m.k[out.ki], m.exp_neg_k[out.ki]);
    out.photon_class = std::min(n_photons, 2);

    const int s = out.state;
    const double c_de = m.q_data_early[s];
    const double c_dl = c_de + m.q_data_late[s];
    const double c_t0 = c_dl + m.q_t0[s];
    const double c_t1 = c_t0 + m.q_t1[s];
    const double c_t2 = c_t1 + m.q_t2[s];
    for (int p = 0; p < n_photons; ++p) {
        const double u = rng.uniform();
        if (u < c_de)
            ++out.data_early;
        else if (u < c_dl)
            ++out.data_late;
        else if (u < c_t0)
            ++out.t0;
        else if (u < c_t1)
            ++out.t1;
        else if (u < c_t2)
            ++out.t2;
        // otherwise lost (absorbed, unmonitored port, or wrong line)
    }
    out.dark_data_early = rng.bernoulli(m.p_dc);
    out.dark_data_late = rng.bernoulli(m.p_dc);
    out.dark_l = rng.bernoulli(m.p_dc);
    out.dark_e = rng.bernoulli(m.p_dc);
    return out;
}

void tally_round(const Model& m, std::uint64_t seed, std::uint64_t round,
                 const RoundOutcome& prev, const RoundOutcome& cur,
                 bool has_prev, ObservedCounts& counts, TruthLedger& ledger) {
    // Data line.
    if (cur.state < 2) {
        const bool ce = cur.data_early > 0 || cur.dark_data_early;
        const bool cl = cur.data_late > 0 || cur.dark_data_late;
        if (ce || cl) {
            Rng rng(seed, round, 1); // resolution + misalignment flip
            int bit = ce && cl ? (rng.bernoulli(0.5) ? 1 : 0) : (cl ? 1 : 0);
            if (rng.bernoulli(m.e_mis)) bit = 1 - bit;
            counts.at(cur.ki, Event::ZDet) += 1;
            ledger.at(cur.ki, Event::ZDet, cur.photon_class) += 1;
            if (bit != cur.state) {
                counts.at(cur.ki, Event::ZErr) += 1;
                ledger.at(cur.ki, Event::ZErr, cur.photon_class) += 1;
            }
        }
    }

    // Late monitoring bin.
    if (cur.t1 > 0 || cur.dark_l) {
        const Event e = cur.state == 0   ? Event::L0
                        : cur.state == 1 ? Event::L1
                                         : Event::LPlus;
        counts.at(cur.ki, e) += 1;
        ledger.at(cur.ki, e, cur.photon_class) += 1;
    }

    // Early (overlap) monitoring bin.
    if (!has_prev) return;
    if (!(cur.t0 > 0 || prev.t2 > 0 || cur.dark_e)) return;
    Event event;
    bool source_is_prev = false;
    if (prev.state == 0 && cur.state == 0) event = Event::E00;
    else if (prev.state == 1 && cur.state == 1) {
        event = Event::E11;
        source_is_prev = true;
    } else if (prev.state == 2 && cur.state == 2) event = Event::EPP;
    else if (prev.state == 0 && cur.state == 1) event = Event::E01;
    else if (prev.state == 0 && cur.state == 2) event = Event::E0P;
    else if (prev.state == 2 && cur.state == 1) {
        event = Event::EP1;
        source_is_prev = true;
    } else
        return; // pattern not used by the analysis
    const RoundOutcome& src = source_is_prev ? prev : cur;
    counts.at(src.ki, event) += 1;
    ledger.at(src.ki, event, src.photon_class) += 1;
}

void mc_chunk(const Model& m, const SourceConfig& source, std::uint64_t lo,
              std::uint64_t hi, ObservedCounts& counts, TruthLedger& ledger) {
    RoundOutcome prev;
    bool has_prev = false;
    if (lo > 0) {
        prev = simulate_round(m, source.seed, lo - 1);
        has_prev = true;
    }
    for (std::uint64_t r = lo; r < hi; ++r) {
        const RoundOutcome cur = simulate_round(m, source.seed, r);
        tally_round(m, source.seed, r, prev, cur, has_prev, counts, ledger);
        prev = cur;
        has_prev = true;
    }
}

SimResult mc_impl(const ChannelParams& channel, const SourceConfig& source,
                  bool parallel) {
    const Model m = make_model(channel, source);
    SimResult result;
    result.counts.num_intensities = m.num_intensities;
    result.counts.rounds = source.rounds;
    result.counts.p_z = source.p_z;

    if (!parallel) {
        mc_chunk(m, source, 0, source.rounds, result.counts, result.ledger);
        return result;
    }

#ifdef _OPENMP
    const std::uint64_t n = source.rounds;
    const int max_threads = omp_get_max_threads();
    const std::uint64_t chunk =
        std::max<std::uint64_t>(16384, n / (4 * max_threads) + 1);
    const std::uint64_t n_chunks = (n + chunk - 1) / chunk;
#pragma omp parallel
    {
        ObservedCounts local_counts;
        local_counts.num_intensities = m.num_intensities;
        TruthLedger local_ledger;
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks);
             ++c) {
            const std::uint64_t lo = static_cast<std::uint64_t>(c) * chunk;
            const std::uint64_t hi = std::min(n, lo + chunk);
            mc_chunk(m, source, lo, hi, local_counts, local_ledger);
        }
#pragma omp critical
        {
            result.counts.add(local_counts);
            result.ledger.add(local_ledger);
        }
    }
#else
    mc_chunk(m, source, 0, source.rounds, result.counts, result.ledger);
#endif
    return result;
}

} // namespace

SimResult simulate_counts_expected(const ChannelParams& channel,
                                   const SourceConfig& source, bool round) {
    return expected_impl(channel, source, round);
}

SimResult simulate_counts_mc(const ChannelParams& channel,
                             const SourceConfig& source) {
    return mc_impl(channel, source, true);
}

SimResult simulate_counts_mc_serial(const ChannelParams& channel,
                                    const SourceConfig& source) {
    return mc_impl(channel, source, false);
}

SinglePhotonReference single_photon_reference_counts(
    const ChannelParams& channel, const SourceConfig& source, bool round) {
    if (source.mode != SourceMode::SinglePhoton)
        throw std::invalid_argument(
            "single_photon_reference_counts requires a single-photon source");
    SinglePhotonReference ref;
    ref.counts = simulate_counts_expected(channel, source, round).counts;

    // Monitoring clicks with non-overlapping bins, by sent state. For a
    // single photon (k = 1) the bin intensities are the per-round landing
    // probabilities.
    {
        const double n = static_cast<double>(source.rounds);
        const double p_state[3] = {0.5 * source.p_z, 0.5 * source.p_z,
                                   1.0 - source.p_z};
        for (int s = 0; s < 3; ++s) {
            const PreparedState state =
                s == 0   ? PreparedState::Z0
                : s == 1 ? PreparedState::Z1
                         : PreparedState::XPlus;
            const BinIntensities bins = expected_bin_intensities(
                state, 1.0, channel.transmittance(), source.bob_pz(),
                channel.e_mis);
            const double q[3] = {bins.t0, bins.t1, bins.t2};
            for (int b = 0; b < 3; ++b) {
                const double click =
                    1.0 - (1.0 - channel.p_dc) * (1.0 - q[b]);
                double count = n * p_state[s] * click;
                if (round) count = static_cast<double>(std::llround(count));
                ref.n_mon[s][b] = count;
            }
        }
    }

    // Standard-BB84 X line: the photon lands in the correct +/- bin with
    // probability 1 - e_mis, both bins see darks, double clicks resolve by
    // a fair coin.
    const double eta = channel.transmittance();
    const double q = eta * (1.0 - source.bob_pz());
    const double p_dc = channel.p_dc;
    const double e_mis = channel.e_mis;
    const double rounds_x =
        static_cast<double>(source.rounds) * (1.0 - source.p_z) *
        (1.0 - source.bob_pz());
    const double p_any = 1.0 - (1.0 - q) * (1.0 - p_dc) * (1.0 - p_dc);
    const double p_err = q * (1.0 - e_mis) * 0.5 * p_dc +
                         q * e_mis * (1.0 - 0.5 * p_dc) +
                         (1.0 - q) * (p_dc * (1.0 - p_dc) +
                                      0.5 * p_dc * p_dc);
    ref.n_x = rounds_x * p_any;
    ref.m_x = rounds_x * p_err;
    if (round) {
        ref.n_x = static_cast<double>(std::llround(ref.n_x));
        ref.m_x = static_cast<double>(std::llround(ref.m_x));
    }
    return ref;
}

} // namespace qkd
