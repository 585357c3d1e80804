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

#include "qkd/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkd/rng.hpp"

namespace qkd {

double UnitarityResiduals::max() const {
    return std::max({row0, row1, cross});
}

UnitarityResiduals unitarity_residuals(const EveAttack& attack) {
    double n0 = 0.0;
    double n1 = 0.0;
    Complex cross{0.0, 0.0};
    for (int c = 0; c < 3; ++c) {
        n0 += attack.phi[0][c].squaredNorm();
        n1 += attack.phi[1][c].squaredNorm();
        cross += attack.phi[0][c].dot(attack.phi[1][c]);
    }
    return {std::abs(n0 - 1.0), std::abs(n1 - 1.0), std::abs(cross)};
}

bool attack_is_valid(const EveAttack& attack, double tol) {
    const Eigen::Index dim = attack.ancilla_dim();
    if (dim < 1) return false;
    for (int j = 0; j < 2; ++j)
        for (int c = 0; c < 3; ++c)
            if (attack.phi[j][c].size() != dim) return false;
    return unitarity_residuals(attack).max() <= tol;
}

void validate_attack(const EveAttack& attack, double tol) {
    if (!attack_is_valid(attack, tol))
        throw std::invalid_argument(
            "EveAttack violates the isometry constraints");
}

namespace {

EveAttack zero_attack(int ancilla_dim) {
    if (ancilla_dim < 1)
        throw std::invalid_argument("ancilla_dim must be >= 1");
    EveAttack attack;
    for (int j = 0; j < 2; ++j)
        for (int c = 0; c < 3; ++c)
            attack.phi[j][c] = Vector::Zero(ancilla_dim);
    return attack;
}

} // namespace

EveAttack make_identity_attack(int ancilla_dim) {
    EveAttack attack = zero_attack(ancilla_dim);
    attack.phi[0][kBob0](0) = 1.0;
    attack.phi[1][kBob1](0) = 1.0;
    return attack;
}

EveAttack make_intercept_resend_attack() {
    EveAttack attack = zero_attack(2);
    attack.phi[0][kBob0](0) = 1.0;
    attack.phi[1][kBob1](1) = 1.0;
    return attack;
}

EveAttack make_phase_flip_attack(int ancilla_dim) {
    EveAttack attack = zero_attack(ancilla_dim);
    attack.phi[0][kBob0](0) = 1.0;
    attack.phi[1][kBob1](0) = -1.0;
    return attack;
}

EveAttack sample_random_attack(int ancilla_dim, double loss_weight,
                               std::uint64_t seed) {
    if (ancilla_dim < 1)
        throw std::invalid_argument("ancilla_dim must be >= 1");
    if (loss_weight < 0.0 || loss_weight >= 1.0)
        throw std::invalid_argument("loss_weight must lie in [0, 1)");

    const int d = ancilla_dim;
    const int rows = 3 * d;

    // Complex Gaussian with per-block standard deviations chosen so the
    // vacuum block carries an expected squared-norm share of loss_weight.
    const double photon_sd = std::sqrt((1.0 - loss_weight) / (2.0 * d));
    const double vacuum_sd = std::sqrt(loss_weight / d);

    Rng rng(seed, 0, 0x41747461636bULL);
    Matrix g(rows, 2);
    for (int r = 0; r < rows; ++r) {
        const double sd = (r < 2 * d) ? photon_sd : vacuum_sd;
        for (int col = 0; col < 2; ++col)
            g(r, col) = sd * Complex(rng.gaussian(), rng.gaussian());
    }

    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix q = qr.householderQ() * Matrix::Identity(rows, 2);

    EveAttack attack;
    for (int j = 0; j < 2; ++j)
        for (int c = 0; c < 3; ++c)
            attack.phi[j][c] = q.block(c * d, j, d, 1);
    return attack;
}

} // namespace qkd
