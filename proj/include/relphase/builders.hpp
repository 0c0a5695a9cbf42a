#pragma once

// Closed-form amplitude arrays for each state family.
//
// Every builder returns the state inside the interferometer with the mode-a
// phase chosen so that the relative phase distribution peaks at phi = 0,
// followed by global-phase canonicalization (dominant amplitude real > 0).
// Alternating convolution sums are evaluated exactly in 128-bit integers;
// all binomial prefactors go through log-gamma.

#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "relphase/binomial.hpp"
#include "relphase/errors.hpp"
#include "relphase/fock_state.hpp"
#include "relphase/state_spec.hpp"

namespace relphase {

/// Phase (in the exp(i n_a theta) convention) that takes the output of the
/// beam-splitter map  a'^dag -> (a^dag + i b^dag)/sqrt2,  b'^dag -> (i a^dag + b^dag)/sqrt2
/// to the centered state returned by the builder of `family`.
/// Zero for families prepared directly inside the interferometer.
template <typename Scalar = double>
constexpr Scalar centering_phase(Family family) {
    switch (family) {
        case Family::Fock: return std::numbers::pi_v<Scalar> / 2;
        case Family::SqueezedOptimal:
        case Family::SqueezedSqrtShot: return -std::numbers::pi_v<Scalar> / 2;
        default: return Scalar(0);
    }
}

namespace detail {

inline void require_exact_range(int n, const char* family) {
    if (n > kMaxExactPhotons) {
        throw InvalidSpecError(std::string(family) + " builder supports N <= " + std::to_string(kMaxExactPhotons));
    }
}

template <typename Scalar>
TwoModeFockState<Scalar> finish(int n, AmplitudeVector<Scalar> amplitudes) {
    return TwoModeFockState<Scalar>::normalized(n, canonical_global_phase<Scalar>(std::move(amplitudes)));
}

}  // namespace detail

/// |N>_{a'}|0>_{b'} through the beam splitter:
///   A_k = i^{N-k} sqrt(binom(N,k) / 2^N),
/// then one quarter turn per photon in mode a to center the distribution.
template <typename Scalar = double>
TwoModeFockState<Scalar> build_fock_one_input(int n) {
    validate(FockOneInput{n});
    AmplitudeVector<Scalar> a(n + 1);
    const Scalar log2 = std::log(Scalar(2));
    for (int k = 0; k <= n; ++k) {
        const Scalar mag = std::exp(Scalar(0.5) * (log_binomial<Scalar>(n, k) - n * log2));
        const QuarterTurn phase = QuarterTurn::of(n - k) + QuarterTurn::of(k);
        a[k] = mag * phase.value<Scalar>();
    }
    return detail::finish<Scalar>(n, std::move(a));
}

/// (|N,0> + |0,N>) / sqrt(2).
template <typename Scalar = double>
TwoModeFockState<Scalar> build_noon(int n) {
    validate(Noon{n});
    AmplitudeVector<Scalar> a = AmplitudeVector<Scalar>::Zero(n + 1);
    a[0] = a[n] = std::complex<Scalar>(Scalar(1) / std::sqrt(Scalar(2)), 0);
    return TwoModeFockState<Scalar>(n, std::move(a));
}

/// Phase-difference eigenvector: A_k = e^{i k phi0} / sqrt(N+1).
template <typename Scalar = double>
TwoModeFockState<Scalar> build_phase_state(int n, Scalar phi0 = Scalar(0)) {
    validate(PhaseState{n, static_cast<double>(phi0)});
    AmplitudeVector<Scalar> a(n + 1);
    const Scalar mag = Scalar(1) / std::sqrt(Scalar(n + 1));
    for (int k = 0; k <= n; ++k) a[k] = std::polar(mag, phi0 * Scalar(k));
    return detail::finish<Scalar>(n, std::move(a));
}

/// |N/2>_{a'}|N/2>_{b'} through the beam splitter:
///   A_k = i^{N/2} sqrt(binom(N,N/2)/2^N) sum_q i^{k-2q} binom(N/2,q) binom(N/2,k-q) / sqrt(binom(N,k)).
template <typename Scalar = double>
TwoModeFockState<Scalar> build_twin_fock(int n) {
    validate(TwinFock{n});
    detail::require_exact_range(n, "twin-Fock");
    const auto& binom = BinomialTable::instance();
    const int half = n / 2;
    const Scalar log2 = std::log(Scalar(2));
    AmplitudeVector<Scalar> a(n + 1);
    for (int k = 0; k <= n; ++k) {
        GaussianInt sum;
        for (int q = 0; q <= half; ++q) {
            sum.add(QuarterTurn::of(k - 2 * q), binom(half, q) * binom(half, k - q));
        }
        const Scalar scale =
            std::exp(Scalar(0.5) * (log_binomial<Scalar>(n, half) - n * log2 - log_binomial<Scalar>(n, k)));
        a[k] = scale * QuarterTurn::of(half).value<Scalar>() * sum.value<Scalar>();
    }
    return detail::finish<Scalar>(n, std::move(a));
}

/// Correlated Fock input through the beam splitter (N odd, N+- = (N +- 1)/2):
///   A_k ~ sqrt(binom(N,N+)/2^{N-1}) sum_q cos[pi(2k-4q+1)/4] binom(N+,q) binom(N-,k-q) / sqrt(binom(N,k)).
/// The cosine only takes the values +-1/sqrt(2), so the sum is an exact integer.
template <typename Scalar = double>
TwoModeFockState<Scalar> build_correlated_fock(int n) {
    validate(CorrelatedFock{n});
    detail::require_exact_range(n, "correlated Fock");
    const auto& binom = BinomialTable::instance();
    const int n_plus = (n + 1) / 2;
    const int n_minus = n - n_plus;
    const Scalar log2 = std::log(Scalar(2));
    AmplitudeVector<Scalar> a(n + 1);
    for (int k = 0; k <= n; ++k) {
        wide_int sum = 0;
        for (int q = 0; q <= n_plus; ++q) {
            const int eighth = (((2 * k - 4 * q + 1) % 8) + 8) % 8;  // always odd
            const wide_int term = binom(n_plus, q) * binom(n_minus, k - q);
            sum += (eighth == 1 || eighth == 7) ? term : -term;
        }
        const Scalar scale = std::exp(Scalar(0.5) * (log_binomial<Scalar>(n, n_plus) - (n - 1) * log2 -
                                                     log_binomial<Scalar>(n, k) - log2));
        a[k] = std::complex<Scalar>(scale * static_cast<Scalar>(sum), 0);
    }
    return detail::finish<Scalar>(n, std::move(a));
}

template <typename Scalar = double>
struct SqueezedCoherentParameters {
    Scalar sinh2_r;
    Scalar alpha2;
};

template <typename Scalar = double>
SqueezedCoherentParameters<Scalar> squeezed_coherent_parameters(int n_bar, SqueezingRegime regime) {
    const Scalar nb = static_cast<Scalar>(n_bar);
    if (regime == SqueezingRegime::Optimal) return {nb / 2, nb / 2};
    const Scalar sinh2 = std::sqrt(nb) / 2;
    return {sinh2, nb - sinh2};
}

/// Unnormalized N = n_bar component of squeezed(a') x coherent(b') after the
/// beam splitter, with S_{2m} and C_n truncated at the projected order.
/// Its squared norm is the probability of finding exactly n_bar photons.
template <typename Scalar = double>
AmplitudeVector<Scalar> squeezed_coherent_component(const SqueezedCoherent& spec) {
    const int n = spec.n_bar;
    detail::require_exact_range(n, "squeezed/coherent");
    const auto [sinh2, alpha2] = squeezed_coherent_parameters<Scalar>(n, spec.regime);
    if (!(alpha2 > Scalar(0))) throw InvalidSpecError("coherent amplitude |alpha|^2 must be positive");

    const Scalar log2 = std::log(Scalar(2));
    const Scalar log_tanh = Scalar(0.5) * std::log(sinh2 / (Scalar(1) + sinh2));
    const Scalar log_cosh = Scalar(0.5) * std::log1p(sinh2);
    const Scalar theta_s = static_cast<Scalar>(spec.theta_s);
    const Scalar theta_c = static_cast<Scalar>(spec.theta_c);
    const auto& binom = BinomialTable::instance();

    AmplitudeVector<Scalar> a = AmplitudeVector<Scalar>::Zero(n + 1);
    for (int m = 0; 2 * m <= n; ++m) {
        const int coh = n - 2 * m;
        // |C_coh| |S_2m| sqrt(binom(N,2m) / 2^N), in log space.
        const Scalar log_c = -alpha2 / 2 + Scalar(0.5) * coh * std::log(alpha2) - Scalar(0.5) * log_factorial<Scalar>(coh);
        const Scalar log_s = Scalar(0.5) * log_factorial<Scalar>(2 * m) + m * (log_tanh - log2) -
                             log_factorial<Scalar>(m) - Scalar(0.5) * log_cosh;
        const Scalar log_weight = log_c + log_s + Scalar(0.5) * (log_binomial<Scalar>(n, 2 * m) - n * log2);
        // (-1)^m from S_2m and i^{N-2m} combine into quarter turns.
        const QuarterTurn turns = QuarterTurn::of(2 * m) + QuarterTurn::of(coh);
        const std::complex<Scalar> phase =
            turns.value<Scalar>() * std::polar(Scalar(1), coh * theta_c + m * theta_s);
        for (int k = 0; k <= n; ++k) {
            GaussianInt sum;
            for (int q = 0; q <= coh; ++q) {
                sum.add(QuarterTurn::of(k - 2 * q), binom(coh, q) * binom(2 * m, k - q));
            }
            const Scalar scale = std::exp(log_weight - Scalar(0.5) * log_binomial<Scalar>(n, k));
            // Centering: exp(-i n_a theta_a) with theta_a = -pi/2.
            a[k] += scale * phase * sum.value<Scalar>() * QuarterTurn::of(k).value<Scalar>();
        }
    }
    return a;
}

/// Projects onto N = n_bar and renormalizes.
template <typename Scalar = double>
TwoModeFockState<Scalar> build_squeezed_coherent_projected(const SqueezedCoherent& spec) {
    validate(spec);
    AmplitudeVector<Scalar> a = squeezed_coherent_component<Scalar>(spec);
    if (a.squaredNorm() < Scalar(1e-12)) {
        throw EmptyComponentError("projection onto N = " + std::to_string(spec.n_bar) + " has negligible weight");
    }
    return detail::finish<Scalar>(spec.n_bar, std::move(a));
}

template <typename Scalar = double>
TwoModeFockState<Scalar> build_squeezed_coherent_projected(int n_bar, SqueezingRegime regime) {
    return build_squeezed_coherent_projected<Scalar>(SqueezedCoherent{n_bar, regime});
}

/// Dispatches a StateSpec to its builder.
template <typename Scalar = double>
TwoModeFockState<Scalar> build_state(const StateSpec& spec) {
    return std::visit(
        [](const auto& s) -> TwoModeFockState<Scalar> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FockOneInput>) return build_fock_one_input<Scalar>(s.n);
            else if constexpr (std::is_same_v<T, Noon>) return build_noon<Scalar>(s.n);
            else if constexpr (std::is_same_v<T, PhaseState>) return build_phase_state<Scalar>(s.n, static_cast<Scalar>(s.phi0));
            else if constexpr (std::is_same_v<T, TwinFock>) return build_twin_fock<Scalar>(s.n);
            else if constexpr (std::is_same_v<T, CorrelatedFock>) return build_correlated_fock<Scalar>(s.n);
            else return build_squeezed_coherent_projected<Scalar>(s);
        },
        spec);
}

}  // namespace relphase
