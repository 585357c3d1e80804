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

#include "qkd/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkd {

namespace {
constexpr double kLog2E = 1.4426950408889634074; // 1/ln(2)

double positive_part(double y) { return y > 0.0 ? y : 0.0; }
} // namespace

void IntensitySettings::validate() const {
    if (!(mu1 > 0.0) || !(mu2 > 0.0) || !(mu1 > mu2))
        throw std::invalid_argument(
            "intensities must satisfy mu1 > mu2 > 0");
    if (!(p_mu1 > 0.0 && p_mu1 < 1.0))
        throw std::invalid_argument("p_mu1 must lie in (0, 1)");
}

void FiniteKeyEpsilons::validate() const {
    if (!(bound > 0.0 && bound <= 1.0))
        throw std::invalid_argument("per-bound epsilon must lie in (0, 1]");
    if (!(sec > 0.0 && sec < 1.0) || !(cor > 0.0 && cor < 1.0))
        throw std::invalid_argument("eps_sec and eps_cor must lie in (0, 1)");
}

double tau_n(const IntensitySettings& settings, int n) {
    if (n != 0 && n != 1)
        throw std::invalid_argument("tau_n supports n in {0, 1}");
    settings.validate();
    double tau = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double k = settings.k(i);
        const double weight = (n == 0) ? 1.0 : k;
        tau += settings.p_k(i) * std::exp(-k) * weight;
    }
    return tau;
}

double hoeffding_dev(double n_total, double eps) {
    if (n_total < 0.0) throw std::invalid_argument("n_total must be >= 0");
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("eps must lie in (0, 1]");
    return std::sqrt(0.5 * n_total * std::log(1.0 / eps));
}

double n_k_pm(double n_k, double n_total, double k, double p_k, double eps,
              int sign) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("sign must be +1 or -1");
    if (!(p_k > 0.0 && p_k <= 1.0))
        throw std::invalid_argument("p_k must lie in (0, 1]");
    const double dev = hoeffding_dev(n_total, eps);
    return std::exp(k) / p_k * (n_k + sign * dev);
}

double delta_correction(double n, double eps) {
    return hoeffding_dev(n, eps);
}

double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -(x * std::log(x) + (1.0 - x) * std::log(1.0 - x)) * kLog2E;
}

std::optional<double> gamma_correction(double a, double b, double c,
                                       double d) {
    if (b <= 0.0 || b >= 1.0) return 0.0; // limit of the formula
    if (!(c > 0.0) || !(d > 0.0))
        throw std::invalid_argument("gamma requires positive c and d");
    const double v = (1.0 - b) * b;
    const double log_arg = (c + d) / (c * d * v) * (441.0 / (a * a));
    if (!(log_arg > 0.0)) return std::nullopt;
    const double inner = (c + d) * v / (c * d * std::log(2.0)) *
                         std::log2(log_arg);
    if (inner < 0.0) return std::nullopt;
    return std::sqrt(inner);
}

double ObservedCounts::pattern_prob(Event e) const {
    const double pz_half = 0.5 * p_z;
    const double px = 1.0 - p_z;
    switch (e) {
    case Event::ZDet:
    case Event::ZErr:
        return p_z;
    case Event::L0:
    case Event::L1:
        return pz_half;
    case Event::LPlus:
        return px;
    case Event::E00:
    case Event::E11:
    case Event::E01:
        return pz_half * pz_half;
    case Event::EPP:
        return px * px;
    case Event::E0P:
    case Event::EP1:
        return pz_half * px;
    }
    return 0.0;
}

void ObservedCounts::add(const ObservedCounts& other) {
    rounds += other.rounds;
    for (int k = 0; k < kMaxIntensities; ++k)
        for (int e = 0; e < kNumEvents; ++e) n[k][e] += other.n[k][e];
}

std::uint64_t TruthLedger::total(std::initializer_list<Event> events,
                                 int photon_class) const {
    std::uint64_t sum = 0;
    for (Event e : events)
        for (int k = 0; k < kMaxIntensities; ++k)
            sum += n[k][event_index(e)][photon_class];
    return sum;
}

void TruthLedger::add(const TruthLedger& other) {
    for (int k = 0; k < kMaxIntensities; ++k)
        for (int e = 0; e < kNumEvents; ++e)
            for (int c = 0; c < 3; ++c) n[k][e][c] += other.n[k][e][c];
}

ClassCounts class_counts(const ObservedCounts& counts,
                         std::initializer_list<Event> events) {
    ClassCounts cls;
    for (Event e : events) {
        cls.n_mu1 += counts.at(0, e);
        cls.n_mu2 += counts.at(1, e);
    }
    return cls;
}

Bound d0_upper_from_01(double n_e01_total, double p_target, double p_01,
                       double eps) {
    if (!(p_01 > 0.0))
        throw std::invalid_argument("p(01) pattern probability must be > 0");
    const double scaled = p_target / p_01 * n_e01_total;
    const double raw = scaled + delta_correction(scaled, eps);
    return {positive_part(raw), raw};
}

Bound d0_upper_from_01(const ObservedCounts& counts, Event target,
                       double eps) {
    return d0_upper_from_01(
        counts.total(Event::E01),
        counts.pattern_prob(target), counts.pattern_prob(Event::E01), eps);
}

Bound d1_lower(const ClassCounts& counts, const IntensitySettings& settings,
               double eps, double d0_upper, VacuumTermSign sign) {
    settings.validate();
    const double mu1 = settings.mu1;
    const double mu2 = settings.mu2;
    const double total = counts.total();
    const double n2_minus =
        n_k_pm(counts.n_mu2, total, mu2, settings.p_mu2(), eps, -1);
    const double n1_plus =
        n_k_pm(counts.n_mu1, total, mu1, settings.p_mu1, eps, +1);
    const double tau0 = tau_n(settings, 0);
    const double tau1 = tau_n(settings, 1);
    const double vac_coeff = (mu1 * mu1 - mu2 * mu2) / (mu1 * mu1);
    const double vac_sign = (sign == VacuumTermSign::Minus) ? -1.0 : 1.0;
    const double raw =
        tau1 * mu1 / (mu2 * (mu1 - mu2)) *
        (n2_minus - mu2 * mu2 / (mu1 * mu1) * n1_plus +
         vac_sign * vac_coeff * d0_upper / tau0);
    return {positive_part(raw), raw};
}

Bound d1_upper(const ClassCounts& counts, const IntensitySettings& settings,
               double eps) {
    settings.validate();
    const double total = counts.total();
    const double n1_plus =
        n_k_pm(counts.n_mu1, total, settings.mu1, settings.p_mu1, eps, +1);
    const double n2_minus =
        n_k_pm(counts.n_mu2, total, settings.mu2, settings.p_mu2(), eps, -1);
    const double raw =
        tau_n(settings, 1) / (settings.mu1 - settings.mu2) *
        (n1_plus - n2_minus);
    return {positive_part(raw), raw};
}

std::optional<DecoyPhaseBound> ex_upper_decoy(const ObservedCounts& counts,
                                              const IntensitySettings& settings,
                                              double eps) {
    const double p_z = counts.p_z;
    if (!(p_z > 0.0 && p_z < 1.0))
        throw std::invalid_argument("p_z must lie in (0, 1)");

    const ClassCounts e_zz = class_counts(counts, {Event::E00, Event::E11});
    const ClassCounts l_plus = class_counts(counts, {Event::LPlus});
    const ClassCounts l_z = class_counts(counts, {Event::L0, Event::L1});
    const ClassCounts e_side = class_counts(counts, {Event::E0P, Event::EP1});

    const double d0_ezz =
        d0_upper_from_01(counts.total(Event::E01),
                         2.0 * counts.pattern_prob(Event::E00),
                         counts.pattern_prob(Event::E01), eps)
            .value;
    const double d0_lz =
        d0_upper_from_01(counts.total(Event::E01),
                         counts.pattern_prob(Event::L0) +
                             counts.pattern_prob(Event::L1),
                         counts.pattern_prob(Event::E01), eps)
            .value;
    const double d0_side =
        d0_upper_from_01(counts.total(Event::E01),
                         counts.pattern_prob(Event::E0P) +
                             counts.pattern_prob(Event::EP1),
                         counts.pattern_prob(Event::E01), eps)
            .value;

    const double d1_ezz = d1_lower(e_zz, settings, eps, d0_ezz).value;
    if (d1_ezz <= 0.0) return std::nullopt;

    const double d1_lp = d1_upper(l_plus, settings, eps).value;
    const double d1_lz = d1_lower(l_z, settings, eps, d0_lz).value;
    // The mixed-pair classes are counted with their physical pattern
    // frequency p(partner) p(+); the alpha coefficient expects the X slot's
    // weight alone, so the bound is rescaled by 1/p(partner) = 2/p_z.
    const double d1_side =
        d1_lower(e_side, settings, eps, d0_side).value * (2.0 / p_z);

    const double alpha = p_z * p_z / (4.0 * (1.0 - p_z));
    const double beta = p_z / 4.0;
    const double first = 0.5 * alpha * d1_lp / d1_ezz;
    const double m_arg =
        1.0 + first - (beta * d1_lz + alpha * d1_side) / d1_ezz;

    DecoyPhaseBound bound;
    bound.raw = first + positive_part(m_arg);
    bound.value = std::clamp(bound.raw, 0.0, 0.5);
    bound.d1_ezz_lower = d1_ezz;
    bound.d1_lplus_upper = d1_lp;
    bound.d1_lz_lower = d1_lz;
    bound.d1_side_lower = d1_side;
    return bound;
}

double key_length_bits(double d0_z, double d1_z, double ez_upper,
                       double lambda_ec, const FiniteKeyEpsilons& eps) {
    eps.validate();
    const double entropy =
        (ez_upper >= 0.5) ? 1.0 : binary_entropy(positive_part(ez_upper));
    const double l = d0_z + d1_z * (1.0 - entropy) - lambda_ec -
                     6.0 * std::log2(19.0 / eps.sec) -
                     std::log2(2.0 / eps.cor);
    return positive_part(l);
}

KeyRateBreakdown compute_key_rate(const ObservedCounts& counts,
                                  const IntensitySettings& settings,
                                  const FiniteKeyEpsilons& eps,
                                  const KeyRateOptions& options) {
    settings.validate();
    eps.validate();

    KeyRateBreakdown out;
    const ClassCounts z = class_counts(counts, {Event::ZDet});
    const ClassCounts z_err = class_counts(counts, {Event::ZErr});
    out.n_z = z.total();
    out.m_z = z_err.total();
    if (out.n_z <= 0.0) return out; // no sifted key at all

    out.qber_z = out.m_z / out.n_z;
    out.lambda_ec =
        options.ec_efficiency * out.n_z * binary_entropy(out.qber_z);

    const double e = eps.bound;
    out.n_z_mu1_plus = n_k_pm(z.n_mu1, out.n_z, settings.mu1, settings.p_mu1, e, +1);
    out.n_z_mu1_minus = n_k_pm(z.n_mu1, out.n_z, settings.mu1, settings.p_mu1, e, -1);
    out.n_z_mu2_plus = n_k_pm(z.n_mu2, out.n_z, settings.mu2, settings.p_mu2(), e, +1);
    out.n_z_mu2_minus = n_k_pm(z.n_mu2, out.n_z, settings.mu2, settings.p_mu2(), e, -1);

    // Z-line vacuum bound of the one-decoy procedure:
    //   tau0 (mu1 n_mu2^- - mu2 n_mu1^+) / (mu1 - mu2), clamped at zero.
    const double tau0 = tau_n(settings, 0);
    out.d0_z_lower = positive_part(
        tau0 * (settings.mu1 * out.n_z_mu2_minus -
                settings.mu2 * out.n_z_mu1_plus) /
        (settings.mu1 - settings.mu2));

    out.d1_z_lower =
        d1_lower(z, settings, e, out.d0_z_lower, options.vacuum_sign).value;

    const auto ex = ex_upper_decoy(counts, settings, e);
    if (!ex) return out; // no monitoring statistics: abort, zero key
    out.ex_upper = ex->value;
    out.d1_ezz_lower = ex->d1_ezz_lower;
    out.d1_lplus_upper = ex->d1_lplus_upper;

    if (out.d1_z_lower <= 0.0) return out;

    const auto gamma = gamma_correction(eps.sec, out.ex_upper,
                                        out.d1_z_lower, out.d1_ezz_lower);
    if (!gamma) return out;
    out.gamma_term = *gamma;
    out.ez_upper = std::min(0.5, out.ex_upper + out.gamma_term);

    out.key_length = key_length_bits(out.d0_z_lower, out.d1_z_lower,
                                     out.ez_upper, out.lambda_ec, eps);
    out.feasible = true;
    return out;
}

} // namespace qkd
