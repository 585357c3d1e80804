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

#include "qkd/measurement.hpp"

#include <cmath>

namespace qkd {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;

double re_dot(const Vector& a, const Vector& b) { return a.dot(b).real(); }
} // namespace

std::array<Vector, 3> bob_components(const EveAttack& attack,
                                     PreparedState state) {
    std::array<Vector, 3> v;
    switch (state) {
    case PreparedState::Z0:
        for (int c = 0; c < 3; ++c) v[c] = attack.phi[0][c];
        break;
    case PreparedState::Z1:
        for (int c = 0; c < 3; ++c) v[c] = attack.phi[1][c];
        break;
    case PreparedState::XPlus:
        for (int c = 0; c < 3; ++c)
            v[c] = kInvSqrt2 * (attack.phi[0][c] + attack.phi[1][c]);
        break;
    case PreparedState::XMinus:
        for (int c = 0; c < 3; ++c)
            v[c] = kInvSqrt2 * (attack.phi[0][c] - attack.phi[1][c]);
        break;
    }
    return v;
}

double cond_prob_simple(const EveAttack& attack, PreparedState a,
                        SimpleOutcome b) {
    const auto v = bob_components(attack, a);
    switch (b) {
    case SimpleOutcome::B0:
        return v[kBob0].squaredNorm();
    case SimpleOutcome::B1:
        return v[kBob1].squaredNorm();
    case SimpleOutcome::BMinus:
        return 0.5 * (v[kBob0] - v[kBob1]).squaredNorm();
    case SimpleOutcome::BPlus:
        return 0.5 * (v[kBob0] + v[kBob1]).squaredNorm();
    case SimpleOutcome::NoDetect:
        return v[kBobVacuum].squaredNorm();
    }
    return 0.0;
}

double cond_prob_timebin_direct(const EveAttack& attack, PreparedState a,
                                TimebinOutcome b) {
    const auto v = bob_components(attack, a);
    switch (b) {
    case TimebinOutcome::T0:
        return 0.25 * v[kBob0].squaredNorm();
    case TimebinOutcome::T1:
        return 0.25 * (v[kBob0] - v[kBob1]).squaredNorm();
    case TimebinOutcome::T2:
        return 0.25 * v[kBob1].squaredNorm();
    case TimebinOutcome::NoDetect:
        // Unmonitored output port (three bins) plus the no-detection flag.
        return 0.25 * v[kBob0].squaredNorm() +
               0.25 * (v[kBob0] + v[kBob1]).squaredNorm() +
               0.25 * v[kBob1].squaredNorm() + v[kBobVacuum].squaredNorm();
    }
    return 0.0;
}

double cond_prob_timebin_closed(const EveAttack& attack, PreparedState a,
                               TimebinOutcome b) {
    // Closed expressions in the six ancilla vectors. Z rows use the direct
    // per-row forms; X rows combine the two rows with sign s.
    if (a == PreparedState::Z0 || a == PreparedState::Z1) {
        const int j = (a == PreparedState::Z0) ? 0 : 1;
        const Vector& p0 = attack.phi[j][kBob0];
        const Vector& p1 = attack.phi[j][kBob1];
        switch (b) {
        case TimebinOutcome::T0:
            return 0.5 * p0.squaredNorm();
        case TimebinOutcome::T1:
            return 0.5 * (p0.squaredNorm() + p1.squaredNorm() -
                          2.0 * re_dot(p0, p1));
        case TimebinOutcome::T2:
            return 0.5 * p1.squaredNorm();
        case TimebinOutcome::NoDetect:
            return attack.phi[j][kBobVacuum].squaredNorm();
        }
        return 0.0;
    }

    const double s = (a == PreparedState::XPlus) ? 1.0 : -1.0;
    const Vector& a0 = attack.phi[0][kBob0];
    const Vector& b0 = attack.phi[1][kBob0];
    const Vector& a1 = attack.phi[0][kBob1];
    const Vector& b1 = attack.phi[1][kBob1];
    switch (b) {
    case TimebinOutcome::T0:
        return 0.25 * (a0.squaredNorm() + b0.squaredNorm() +
                       2.0 * s * re_dot(a0, b0));
    case TimebinOutcome::T1:
        return 0.25 * (a0.squaredNorm() + b0.squaredNorm() +
                       a1.squaredNorm() + b1.squaredNorm() -
                       2.0 * re_dot(a0, a1) + 2.0 * s * re_dot(a0, b0) -
                       2.0 * s * re_dot(a0, b1) - 2.0 * s * re_dot(a1, b0) +
                       2.0 * s * re_dot(a1, b1) - 2.0 * re_dot(b0, b1));
    case TimebinOutcome::T2:
        return 0.25 * (a1.squaredNorm() + b1.squaredNorm() +
                       2.0 * s * re_dot(a1, b1));
    case TimebinOutcome::NoDetect: {
        const Vector& av = attack.phi[0][kBobVacuum];
        const Vector& bv = attack.phi[1][kBobVacuum];
        return 0.5 * (av.squaredNorm() + bv.squaredNorm() +
                      2.0 * s * re_dot(av, bv));
    }
    }
    return 0.0;
}

const Matrix& PovmSet::element(TimebinOutcome b) const {
    switch (b) {
    case TimebinOutcome::T0:
        return t0;
    case TimebinOutcome::T1:
        return t1;
    case TimebinOutcome::T2:
        return t2;
    default:
        return no_detect;
    }
}

PovmSet povm_elements() {
    // Basis order: |0,0>, |1,0>, |0,1>.
    PovmSet set;
    set.t0 = Matrix::Zero(3, 3);
    set.t1 = Matrix::Zero(3, 3);
    set.t2 = Matrix::Zero(3, 3);
    set.no_detect = Matrix::Zero(3, 3);

    set.t0(1, 1) = 0.25;

    set.t1(1, 1) = 0.25;
    set.t1(2, 2) = 0.25;
    set.t1(1, 2) = -0.25;
    set.t1(2, 1) = -0.25;

    set.t2(2, 2) = 0.25;

    // (1/2) I + (1/2)|0,0><0,0| + (1/4)(|0,1><1,0| + |1,0><0,1|)
    set.no_detect(0, 0) = 1.0;
    set.no_detect(1, 1) = 0.5;
    set.no_detect(2, 2) = 0.5;
    set.no_detect(1, 2) = 0.25;
    set.no_detect(2, 1) = 0.25;
    return set;
}

Matrix reduced_bob_state(const EveAttack& attack, PreparedState a) {
    const auto v = bob_components(attack, a);
    // Row order of the embedding: vacuum, |0> (early), |1> (late).
    const Vector* e[3] = {&v[kBobVacuum], &v[kBob0], &v[kBob1]};
    Matrix rho(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            rho(i, j) = e[j]->dot(*e[i]); // <e_j|e_i>
    return rho;
}

double povm_prob(const EveAttack& attack, PreparedState a, TimebinOutcome b) {
    static const PovmSet set = povm_elements();
    const Matrix rho = reduced_bob_state(attack, a);
    return (set.element(b) * rho).trace().real();
}

double TimebinTable::row_sum(PreparedState a) const {
    const int i = static_cast<int>(a);
    return p[i][0] + p[i][1] + p[i][2] + p[i][3];
}

TimebinTable timebin_table(const EveAttack& attack, Convention convention) {
    TimebinTable table;
    table.convention = convention;
    const PreparedState states[4] = {PreparedState::Z0, PreparedState::Z1,
                                     PreparedState::XPlus,
                                     PreparedState::XMinus};
    const TimebinOutcome bins[4] = {TimebinOutcome::T0, TimebinOutcome::T1,
                                    TimebinOutcome::T2,
                                    TimebinOutcome::NoDetect};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            table.p[i][j] =
                (convention == Convention::Direct)
                    ? cond_prob_timebin_direct(attack, states[i], bins[j])
                    : cond_prob_timebin_closed(attack, states[i], bins[j]);
    return table;
}

} // namespace qkd
