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

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>

namespace qkd {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// States Alice can prepare. The protocol sends only Z0, Z1 and XPlus;
/// XMinus is admitted so that oracle computations can evaluate the ideal
/// four-state phase error directly. Protocol-facing tables reject it.
enum class PreparedState { Z0, Z1, XPlus, XMinus };

constexpr bool is_protocol_state(PreparedState s) {
    return s != PreparedState::XMinus;
}

/// Indices of the Bob-side component in an attack output: the photon
/// carrying |0>, the photon carrying |1>, and the no-detection flag.
inline constexpr int kBob0 = 0;
inline constexpr int kBob1 = 1;
inline constexpr int kBobVacuum = 2;

/// A collective attack. Eve applies the same isometry to every round:
///
///   U |j>|phi>  =  |0>|phi_j^0>  +  |1>|phi_j^1>  +  |vac>|phi_j^vac>
///
/// for Alice bits j in {0,1}. The six unnormalized ancilla vectors fully
/// determine every detection probability at Bob's side; X-basis inputs are
/// linear combinations of the two rows.
struct EveAttack {
    /// phi[j][c]: Alice bit j, Bob component c (kBob0, kBob1, kBobVacuum).
    std::array<std::array<Vector, 3>, 2> phi;

    Eigen::Index ancilla_dim() const { return phi[0][0].size(); }
};

/// Deviations from the isometry constraints: each row of the attack must
/// have unit total norm and the two rows must have vanishing total overlap.
struct UnitarityResiduals {
    double row0;
    double row1;
    double cross;

    double max() const;
};

UnitarityResiduals unitarity_residuals(const EveAttack& attack);

bool attack_is_valid(const EveAttack& attack, double tol = 1e-12);

/// Throws std::invalid_argument when the isometry constraints are violated
/// beyond tol or the six vectors disagree on dimension.
void validate_attack(const EveAttack& attack, double tol = 1e-12);

/// The no-attack baseline: phi_0^0 = phi_1^1 = e_0, everything else zero.
EveAttack make_identity_attack(int ancilla_dim);

/// Eve learns the Z bit perfectly and introduces no Z error:
/// phi_0^0 = e_0, phi_1^1 = e_1. Ideal phase error 1/2.
EveAttack make_intercept_resend_attack();

/// phi_0^0 = e_0, phi_1^1 = -e_0. Maps |+> to |->; ideal phase error 1.
EveAttack make_phase_flip_attack(int ancilla_dim = 1);

/// Generic valid attack: two orthonormal columns of a QR-orthonormalized
/// complex Gaussian matrix on the (3 * ancilla_dim)-dimensional output
/// space, with the Gaussian mass of the vacuum block biased so that the
/// expected no-detection weight is roughly loss_weight.
///
/// Deterministic for a fixed seed. Requires ancilla_dim >= 1 and
/// loss_weight in [0, 1).
EveAttack sample_random_attack(int ancilla_dim, double loss_weight,
                               std::uint64_t seed);

} // namespace qkd
