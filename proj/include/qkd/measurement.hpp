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

#include "qkd/attack.hpp"

namespace qkd {

/// Outcomes of the bare scheme: Bob either measures {|0>,|1>} or projects
/// onto a single X state. BMinus/BPlus are pure projection probabilities,
/// not part of a completeness relation; BPlus is oracle-only (the protocol
/// never measures it), mirroring PreparedState::XMinus.
enum class SimpleOutcome { B0, B1, BMinus, BPlus, NoDetect };

/// Arrival bins of the monitoring-line interferometer. Projections onto the
/// unmonitored output port count as NoDetect.
enum class TimebinOutcome { T0, T1, T2, NoDetect };

/// Probability-scale convention for monitoring-line tables.
///
/// Direct: squared norms of the interferometer output amplitudes; each
/// prepared state's outcomes (including NoDetect) sum to one.
///
/// Doubled: the closed inner-product expressions for p(t_i|a); these
/// equal exactly twice the Direct value on the monitoring bins. The
/// monitoring-only phase-error estimator and everything derived from it use
/// this scale. Both conventions are kept first-class; consumers state which
/// one they expect.
enum class Convention { Direct, Doubled };

/// Eve-space amplitude vectors attached to Bob's {|0>, |1>, |vac>}
/// components for a given prepared state (X states are the +/- linear
/// combinations of the two attack rows).
std::array<Vector, 3> bob_components(const EveAttack& attack,
                                     PreparedState state);

/// p(b|a) for the bare scheme: squared norm of the Bob component selected
/// by the outcome. A pure projection probability, not weighted by basis
/// choice.
double cond_prob_simple(const EveAttack& attack, PreparedState a,
                        SimpleOutcome b);

/// Monitoring-line p(b|a) from the interferometer output amplitudes, with
/// every unmonitored component contributing to NoDetect. Direct convention.
double cond_prob_timebin_direct(const EveAttack& attack, PreparedState a,
                                TimebinOutcome b);

/// Monitoring-line p(b|a) evaluated from the closed inner-product
/// expressions in terms of Eve's ancilla vectors (Doubled convention).
/// For the monitoring bins this equals exactly 2x the Direct value; the
/// NoDetect entry is the bare no-detection flag norm.
double cond_prob_timebin_closed(const EveAttack& attack, PreparedState a,
                               TimebinOutcome b);

/// POVM of the monitoring line on the span of {|0,0>, |1,0>, |0,1>}
/// (vacuum, early photon, late photon), in that basis order.
struct PovmSet {
    Matrix t0, t1, t2, no_detect;

    const Matrix& element(TimebinOutcome b) const;
};

/// The four monitoring-line POVM elements. no_detect is built from its own
/// closed expression, not as identity-minus-sum; completeness is a theorem
/// checked by tests, not a construction.
PovmSet povm_elements();

/// Bob's reduced density matrix (Eve traced out) for a prepared state under
/// the attack, embedded as |0> -> |1,0>, |1> -> |0,1>, |vac> -> |0,0>.
Matrix reduced_bob_state(const EveAttack& attack, PreparedState a);

/// tr(M_b rho_B): the POVM route to the monitoring probabilities. Agrees
/// with cond_prob_timebin_direct on every outcome to 1e-12.
double povm_prob(const EveAttack& attack, PreparedState a, TimebinOutcome b);

/// Conditional-probability table over the monitoring outcomes for all four
/// prepared states, in either convention.
struct TimebinTable {
    Convention convention;
    double p[4][4]; // [PreparedState][TimebinOutcome]

    double at(PreparedState a, TimebinOutcome b) const {
        return p[static_cast<int>(a)][static_cast<int>(b)];
    }
    double row_sum(PreparedState a) const;
};

TimebinTable timebin_table(const EveAttack& attack, Convention convention);

} // namespace qkd
