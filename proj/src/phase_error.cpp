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

#include "qkd/phase_error.hpp"

#include <algorithm>
#include <stdexcept>

namespace qkd {

namespace {

double positive_part(double y) { return y > 0.0 ? y : 0.0; }

PhaseEstimate finish(double first, double m_arg) {
    PhaseEstimate est;
    est.first_term = first;
    est.m_arg = m_arg;
    est.raw = first + positive_part(m_arg);
    est.value = std::clamp(est.raw, 0.0, 1.0);
    return est;
}

} // namespace

SimpleProbSet simple_probs(const EveAttack& attack) {
    SimpleProbSet p;
    const PreparedState alice[2] = {PreparedState::Z0, PreparedState::Z1};
    const SimpleOutcome bob[2] = {SimpleOutcome::B0, SimpleOutcome::B1};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            p.z[i][j] = cond_prob_simple(attack, alice[j], bob[i]);
    p.minus_plus =
        cond_prob_simple(attack, PreparedState::XPlus, SimpleOutcome::BMinus);
    for (int j = 0; j < 2; ++j) {
        p.minus_z[j] = cond_prob_simple(attack, alice[j], SimpleOutcome::BMinus);
        p.z_plus[j] = cond_prob_simple(attack, PreparedState::XPlus, bob[j]);
    }
    return p;
}

TimebinProbSet timebin_probs(const EveAttack& attack) {
    TimebinProbSet set;
    const PreparedState states[3] = {PreparedState::Z0, PreparedState::Z1,
                                     PreparedState::XPlus};
    const TimebinOutcome bins[3] = {TimebinOutcome::T0, TimebinOutcome::T1,
                                    TimebinOutcome::T2};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            set.t[i][j] = cond_prob_timebin_closed(attack, states[i], bins[j]);
    return set;
}

JointProbSet joint_probs(const TimebinProbSet& probs, double p_z) {
    if (!(p_z > 0.0 && p_z < 1.0))
        throw std::invalid_argument("p_z must lie in (0, 1)");
    const double wz = 0.5 * p_z;       // emission weight of each Z state
    const double wx = 1.0 - p_z;       // emission weight of |+>
    JointProbSet joint;
    joint.p_z = p_z;
    joint.e_00 = (probs.t[0][0] + probs.t[0][2]) * wz * wz;
    joint.e_11 = (probs.t[1][0] + probs.t[1][2]) * wz * wz;
    joint.e_pp = (probs.t[2][0] + probs.t[2][2]) * wx;
    joint.e_0p = (probs.t[0][2] + probs.t[2][0]) * wx;
    joint.e_p1 = (probs.t[2][2] + probs.t[1][0]) * wx;
    joint.l_z0 = probs.t[0][1] * wz;
    joint.l_z1 = probs.t[1][1] * wz;
    joint.l_plus = probs.t[2][1] * wx;
    return joint;
}

std::optional<double> ex_ideal(const EveAttack& attack) {
    const double mp =
        cond_prob_simple(attack, PreparedState::XPlus, SimpleOutcome::BMinus);
    const double pm =
        cond_prob_simple(attack, PreparedState::XMinus, SimpleOutcome::BPlus);
    const double pp =
        cond_prob_simple(attack, PreparedState::XPlus, SimpleOutcome::BPlus);
    const double mm =
        cond_prob_simple(attack, PreparedState::XMinus, SimpleOutcome::BMinus);
    const double den = mp + pm + pp + mm;
    if (den == 0.0) return std::nullopt;
    return (mp + pm) / den;
}

namespace {

std::optional<double> closed_form(const EveAttack& attack,
                                  bool uncorrected) {
    double sigma = 0.0;
    for (int j = 0; j < 2; ++j)
        for (int c = 0; c < 2; ++c)
            sigma += attack.phi[j][c].squaredNorm();
    if (sigma == 0.0) return std::nullopt;
    const double overlap =
        (attack.phi[0][kBob0].dot(attack.phi[1][kBob1]) +
         attack.phi[0][kBob1].dot(attack.phi[1][kBob0]))
            .real();
    if (uncorrected) return 1.0 - 2.0 * overlap / sigma;
    return 0.5 - overlap / sigma;
}

} // namespace

std::optional<double> ex_ideal_closed_form(const EveAttack& attack) {
    return closed_form(attack, false);
}

std::optional<double> ex_ideal_closed_form_uncorrected(const EveAttack& attack) {
    return closed_form(attack, true);
}

std::optional<PhaseEstimate> ex_bare_scheme(const SimpleProbSet& p) {
    const double sigma_z = p.z[0][0] + p.z[0][1] + p.z[1][0] + p.z[1][1];
    if (sigma_z == 0.0) return std::nullopt;
    const double first = p.minus_plus / sigma_z;
    const double leak = p.minus_z[0] + p.minus_z[1] + p.z_plus[0] + p.z_plus[1];
    const double m_arg = 1.0 + (p.minus_plus - leak) / sigma_z;
    return finish(first, m_arg);
}

std::optional<PhaseEstimate> ex_monitoring(const TimebinProbSet& p) {
    const double sigma =
        p.t[0][0] + p.t[0][2] + p.t[1][0] + p.t[1][2];
    if (sigma == 0.0) return std::nullopt;
    const double t1_plus = p.t[2][1];
    const double first = t1_plus / (2.0 * sigma);
    const double m_arg =
        1.0 +
        (0.5 * (t1_plus - p.t1_given_z()) - p.side_given_plus()) / sigma;
    return finish(first, m_arg);
}

std::optional<PhaseEstimate> ex_joint(const JointProbSet& p) {
    if (!(p.p_z > 0.0 && p.p_z < 1.0))
        throw std::invalid_argument("p_z must lie in (0, 1)");
    const double sigma_e = p.e_00 + p.e_11;
    if (sigma_e == 0.0) return std::nullopt;
    const double alpha = p.p_z * p.p_z / (4.0 * (1.0 - p.p_z));
    const double beta = p.p_z / 4.0;
    const double first = 0.5 * alpha * p.l_plus / sigma_e;
    const double m_arg =
        1.0 + first - (beta * (p.l_z0 + p.l_z1) + alpha * p.e_pp) / sigma_e;
    return finish(first, m_arg);
}

double pair_early_prob(const EveAttack& attack, PreparedState prev,
                       PreparedState cur) {
    return cond_prob_timebin_closed(attack, prev, TimebinOutcome::T2) +
           cond_prob_timebin_closed(attack, cur, TimebinOutcome::T0);
}

RelationSides pair_sum_identity(const EveAttack& attack, PreparedState j) {
    RelationSides sides;
    sides.left = cond_prob_timebin_closed(attack, j, TimebinOutcome::T0) +
                 cond_prob_timebin_closed(attack, j, TimebinOutcome::T2);
    sides.right = pair_early_prob(attack, j, j);
    return sides;
}

RelationSides equivalent_side_relation(const EveAttack& attack) {
    RelationSides sides;
    sides.left =
        cond_prob_timebin_closed(attack, PreparedState::XPlus,
                                TimebinOutcome::T0) +
        cond_prob_timebin_closed(attack, PreparedState::XPlus,
                                TimebinOutcome::T2);
    sides.right =
        pair_early_prob(attack, PreparedState::Z0, PreparedState::XPlus) +
        pair_early_prob(attack, PreparedState::XPlus, PreparedState::Z1);
    return sides;
}

} // namespace qkd
