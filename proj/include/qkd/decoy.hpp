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

#include <optional>

#include "qkd/counts.hpp"

namespace qkd {

/// The two pulse intensities of the one-decoy protocol and the probability
/// of choosing the stronger one. mu1 > mu2 > 0 is required: the bounds
/// divide by mu1 - mu2 and by mu2.
struct IntensitySettings {
    double mu1 = 0.5;
    double mu2 = 0.1;
    double p_mu1 = 0.7;

    double p_mu2() const { return 1.0 - p_mu1; }
    double p_k(int intensity) const { return intensity == 0 ? p_mu1 : p_mu2(); }
    double k(int intensity) const { return intensity == 0 ? mu1 : mu2; }

    void validate() const; // throws std::invalid_argument
};

/// Failure-probability budget. `bound` is consumed by each individual
/// Hoeffding/delta application; sec and cor are the composition-level
/// secrecy and correctness parameters. The standard budget ties the
/// per-bound epsilon to the 19-term union implied by the key-length
/// composition constant.
struct FiniteKeyEpsilons {
    double bound = 1e-9 / 19;
    double sec = 1e-9;
    double cor = 1e-9;

    static FiniteKeyEpsilons standard(double eps_sec, double eps_cor) {
        return {eps_sec / 19.0, eps_sec, eps_cor};
    }

    void validate() const; // throws std::invalid_argument
};

/// Total probability that a pulse carries n photons (n in {0,1}), under the
/// Poisson intensity mixture.
double tau_n(const IntensitySettings& settings, int n);

/// sqrt((n/2) log(1/eps)); natural log. eps = 1 is allowed and gives 0,
/// which collapses every finite-key correction to its asymptotic value.
double hoeffding_dev(double n_total, double eps);

/// Hoeffding-corrected per-intensity count:
///   (e^k / p_k) (n_k +- sqrt((n_total/2) log(1/eps))).
/// sign must be +1 or -1; the minus variant may go negative and callers
/// clamp at zero where a count is required.
double n_k_pm(double n_k, double n_total, double k, double p_k, double eps,
              int sign);

/// delta(n, eps) = sqrt(n log(1/eps) / 2); natural log.
double delta_correction(double n, double eps);

/// Binary entropy with h(0) = h(1) = 0; base-2 logs.
double binary_entropy(double x);

/// Finite-key phase-error correction gamma(a, b, c, d). Returns 0 in the
/// b -> 0 or b -> 1 limits and std::nullopt when the log argument is not
/// positive (infeasible correction).
std::optional<double> gamma_correction(double a, double b, double c,
                                       double d);

/// A one-sided bound: value is clamped to be usable as a count (>= 0), raw
/// is the unclamped formula value for diagnostics.
struct Bound {
    double value;
    double raw;
};

/// Per-intensity counts of one event class (mu1 slot first).
struct ClassCounts {
    double n_mu1 = 0.0;
    double n_mu2 = 0.0;

    double total() const { return n_mu1 + n_mu2; }
    double n(int intensity) const { return intensity == 0 ? n_mu1 : n_mu2; }
};

ClassCounts class_counts(const ObservedCounts& counts,
                         std::initializer_list<Event> events);

/// Upper bound on vacuum-caused events of a target pattern, estimated from
/// the photon-free |0>|1> pair pattern:
///   (p_target / p_01) n(e,01) + delta((p_target / p_01) n(e,01), eps).
Bound d0_upper_from_01(double n_e01_total, double p_target, double p_01,
                       double eps);

Bound d0_upper_from_01(const ObservedCounts& counts, Event target,
                       double eps);

/// Sign applied to the vacuum term inside the single-photon lower bound.
/// Minus is the correct direction (a lower bound must subtract the
/// upper-bounded vacuum contribution); Plus is kept for diagnostics
/// and demonstrably breaks the bound when vacuum events are plentiful.
enum class VacuumTermSign { Minus, Plus };

/// One-decoy lower bound on single-photon detections of an event class:
///   tau1 mu1 / (mu2 (mu1 - mu2)) *
///     (n_mu2^- - (mu2^2/mu1^2) n_mu1^+ - ((mu1^2-mu2^2)/mu1^2) d0_upper/tau0)
/// clamped at zero.
Bound d1_lower(const ClassCounts& counts, const IntensitySettings& settings,
               double eps, double d0_upper,
               VacuumTermSign sign = VacuumTermSign::Minus);

/// One-decoy upper bound on single-photon detections:
///   tau1 / (mu1 - mu2) * (n_mu1^+ - n_mu2^-), clamped at zero.
Bound d1_upper(const ClassCounts& counts, const IntensitySettings& settings,
               double eps);

/// Upper bound on the single-photon phase error rate from the monitoring
/// line counts, with all internal decoy bounds taken at the given epsilon.
/// value clamps to [0, 1/2] for entropy use; raw is unclamped.
///
/// The coefficients alpha and beta assume pair events weighted by the X
/// slot's emission probability alone, so the physically-counted mixed-pair
/// classes are converted by 1/p(partner) = 2/p_z before bounding-by-ratio.
struct DecoyPhaseBound {
    double value;
    double raw;
    double d1_ezz_lower;   // denominator: single-photon identical-Z pairs
    double d1_lplus_upper; // numerator: single-photon (l,+) events
    double d1_lz_lower;
    double d1_side_lower;
};

std::optional<DecoyPhaseBound> ex_upper_decoy(const ObservedCounts& counts,
                                              const IntensitySettings& settings,
                                              double eps);

/// All intermediate values of a finite-key evaluation, plus the key length.
struct KeyRateBreakdown {
    double n_z = 0.0;
    double m_z = 0.0;
    double qber_z = 0.0;
    double d0_z_lower = 0.0;
    double d1_z_lower = 0.0;
    double d1_ezz_lower = 0.0;
    double d1_lplus_upper = 0.0;
    double ex_upper = 0.0;
    double gamma_term = 0.0;
    double ez_upper = 0.0;
    double lambda_ec = 0.0;
    double key_length = 0.0;
    // Hoeffding-corrected Z-line counts.
    double n_z_mu1_plus = 0.0;
    double n_z_mu1_minus = 0.0;
    double n_z_mu2_plus = 0.0;
    double n_z_mu2_minus = 0.0;
    bool feasible = false; // false when any required bound had no statistics
};

/// Composition of the key-length formula:
///   l = d0_z + d1_z (1 - h(ez)) - lambda_ec
///       - 6 log2(19/eps_sec) - log2(2/eps_cor), clamped at zero.
/// ez > 1/2 drives the entropy term to 1 (zero rate), never an exception.
double key_length_bits(double d0_z, double d1_z, double ez_upper,
                       double lambda_ec, const FiniteKeyEpsilons& eps);

struct KeyRateOptions {
    double ec_efficiency = 1.16; // lambda_EC = f * n_z * h(QBER_z)
    VacuumTermSign vacuum_sign = VacuumTermSign::Minus;
};

/// Full one-decoy evaluation: Z-line vacuum and single-photon bounds, the
/// monitoring-line phase-error bound, the gamma correction tying e_x to
/// e_z, and the final key length.
KeyRateBreakdown compute_key_rate(const ObservedCounts& counts,
                                  const IntensitySettings& settings,
                                  const FiniteKeyEpsilons& eps,
                                  const KeyRateOptions& options = {});

} // namespace qkd
