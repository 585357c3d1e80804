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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "qkd/measurement.hpp"

using namespace qkd;

namespace {
constexpr PreparedState kAllStates[4] = {PreparedState::Z0, PreparedState::Z1,
                                         PreparedState::XPlus,
                                         PreparedState::XMinus};
constexpr TimebinOutcome kAllBins[4] = {TimebinOutcome::T0,
                                        TimebinOutcome::T1,
                                        TimebinOutcome::T2,
                                        TimebinOutcome::NoDetect};
} // namespace

TEST_CASE("bare-scheme probabilities on the canonical attacks") {
    const EveAttack identity = make_identity_attack(4);
    CHECK(cond_prob_simple(identity, PreparedState::Z0, SimpleOutcome::B0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cond_prob_simple(identity, PreparedState::XPlus,
                           SimpleOutcome::BMinus) ==
          doctest::Approx(0.0).epsilon(1e-14));

    const EveAttack ir = make_intercept_resend_attack();
    CHECK(cond_prob_simple(ir, PreparedState::XPlus, SimpleOutcome::BMinus) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(cond_prob_simple(ir, PreparedState::Z0, SimpleOutcome::B0) ==
          doctest::Approx(1.0));
    CHECK(cond_prob_simple(ir, PreparedState::Z0, SimpleOutcome::B1) ==
          doctest::Approx(0.0));

    // |+> maps to |-> under a phase flip
    const EveAttack flip = make_phase_flip_attack();
    CHECK(cond_prob_simple(flip, PreparedState::XPlus,
                           SimpleOutcome::BMinus) == doctest::Approx(1.0));
}

TEST_CASE("Z measurement of the bare scheme is complete") {
    for (int i = 0; i < 50; ++i) {
        const EveAttack attack = sample_random_attack(1 + i % 6, 0.1 * (i % 9),
                                                      555 + i);
        for (PreparedState a : kAllStates) {
            const double sum =
                cond_prob_simple(attack, a, SimpleOutcome::B0) +
                cond_prob_simple(attack, a, SimpleOutcome::B1) +
                cond_prob_simple(attack, a, SimpleOutcome::NoDetect);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("projection probabilities are bounded and obey the parallelogram sum") {
    // 1/2||v0 - v1||^2 summed over the two X preparations equals the same
    // sum over the two Z preparations; everything stays inside [0, 1].
    const SimpleOutcome outcomes[] = {SimpleOutcome::B0, SimpleOutcome::B1,
                                      SimpleOutcome::BMinus,
                                      SimpleOutcome::BPlus,
                                      SimpleOutcome::NoDetect};
    for (int i = 0; i < 80; ++i) {
        const EveAttack attack =
            sample_random_attack(1 + i % 8, 0.1 * (i % 10), 40 + i);
        for (PreparedState a : kAllStates)
            for (SimpleOutcome b : outcomes) {
                const double p = cond_prob_simple(attack, a, b);
                CHECK(p >= 0.0);
                CHECK(p <= 1.0 + 1e-12);
            }
        const double x_sum =
            cond_prob_simple(attack, PreparedState::XPlus,
                             SimpleOutcome::BMinus) +
            cond_prob_simple(attack, PreparedState::XMinus,
                             SimpleOutcome::BMinus);
        const double z_sum =
            cond_prob_simple(attack, PreparedState::Z0,
                             SimpleOutcome::BMinus) +
            cond_prob_simple(attack, PreparedState::Z1,
                             SimpleOutcome::BMinus);
        CHECK(x_sum == doctest::Approx(z_sum).epsilon(1e-12));
    }
}

TEST_CASE("time-bin amplitudes of the identity attack") {
    const EveAttack identity = make_identity_attack(2);
    CHECK(cond_prob_timebin_direct(identity, PreparedState::XPlus,
                                   TimebinOutcome::T1) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(cond_prob_timebin_direct(identity, PreparedState::XPlus,
                                   TimebinOutcome::T0) ==
          doctest::Approx(0.125));
    CHECK(cond_prob_timebin_direct(identity, PreparedState::Z0,
                                   TimebinOutcome::T0) ==
          doctest::Approx(0.25));
    // closed-expression convention doubles the monitoring entries
    CHECK(cond_prob_timebin_closed(identity, PreparedState::Z0,
                                  TimebinOutcome::T0) == doctest::Approx(0.5));
    CHECK(cond_prob_timebin_closed(identity, PreparedState::XPlus,
                                  TimebinOutcome::T0) ==
          doctest::Approx(0.25));
}

TEST_CASE("direct time-bin table is a complete measurement") {
    for (int i = 0; i < 60; ++i) {
        const EveAttack attack =
            sample_random_attack(1 + i % 8, 0.1 * (i % 10), 771 + i);
        const TimebinTable table = timebin_table(attack, Convention::Direct);
        for (PreparedState a : kAllStates)
            CHECK(table.row_sum(a) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("closed-expression entries equal twice the direct amplitudes") {
    for (int i = 0; i < 300; ++i) {
        const EveAttack attack =
            sample_random_attack(1 + i % 8, 0.1 * (i % 10), 12000 + i);
        for (PreparedState a : kAllStates)
            for (TimebinOutcome b :
                 {TimebinOutcome::T0, TimebinOutcome::T1, TimebinOutcome::T2})
                CHECK(cond_prob_timebin_closed(attack, a, b) ==
                      doctest::Approx(2.0 *
                                      cond_prob_timebin_direct(attack, a, b))
                          .epsilon(1e-12));
    }
}

TEST_CASE("POVM elements match their defining coefficients") {
    const PovmSet set = povm_elements();
    CHECK(set.t0(1, 1).real() == 0.25);
    CHECK(set.t2(2, 2).real() == 0.25);
    CHECK(set.t1(1, 2).real() == -0.25);

    SUBCASE("completeness") {
        const Matrix sum = set.t0 + set.t1 + set.t2 + set.no_detect;
        CHECK((sum - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
    }

    SUBCASE("positivity and hermiticity") {
        for (const Matrix* m : {&set.t0, &set.t1, &set.t2, &set.no_detect}) {
            CHECK((*m - m->adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
            Eigen::SelfAdjointEigenSolver<Matrix> solver(*m);
            CHECK(solver.eigenvalues().minCoeff() >= -1e-12);
        }
    }

    SUBCASE("t1 is a half-weight rank-one projector") {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(set.t1);
        const auto ev = solver.eigenvalues();
        CHECK(ev(0) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(ev(1) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(ev(2) == doctest::Approx(0.5));
    }
}

TEST_CASE("POVM route reproduces the amplitude route") {
    const EveAttack identity = make_identity_attack(3);
    CHECK(povm_prob(identity, PreparedState::Z0, TimebinOutcome::T0) ==
          doctest::Approx(0.25));
    CHECK(povm_prob(identity, PreparedState::XPlus, TimebinOutcome::T1) ==
          doctest::Approx(0.0).epsilon(1e-14));

    for (int i = 0; i < 200; ++i) {
        const EveAttack attack =
            sample_random_attack(1 + i % 8, 0.1 * (i % 10), 9000 + i);
        for (PreparedState a : kAllStates)
            for (TimebinOutcome b : kAllBins)
                CHECK(std::abs(povm_prob(attack, a, b) -
                               cond_prob_timebin_direct(attack, a, b)) <=
                      1e-12);
    }
}

TEST_CASE("reduced Bob states are unit-trace and positive") {
    // X inputs are unit combinations of the two isometry rows, so every
    // prepared state leads to a normalized reduced state.
    for (int i = 0; i < 40; ++i) {
        const EveAttack attack = sample_random_attack(3, 0.2, 31 + i);
        for (PreparedState a : kAllStates) {
            const Matrix rho = reduced_bob_state(attack, a);
            CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-10));
            Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
            CHECK(solver.eigenvalues().minCoeff() >= -1e-12);
        }
    }
}

TEST_CASE("sampled attack with zero loss weight fills the photon space") {
    const EveAttack attack = sample_random_attack(1, 0.0, 7);
    const TimebinTable table = timebin_table(attack, Convention::Direct);
    for (PreparedState a : kAllStates)
        CHECK(table.row_sum(a) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(attack.phi[0][kBobVacuum].norm() == doctest::Approx(0.0));
}
