#pragma once

// Quantum Fisher information, Fisher information of the relative phase
// distribution, Bhattacharyya fidelity and Cramer-Rao bounds.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "relphase/builders.hpp"
#include "relphase/errors.hpp"
#include "relphase/fock_state.hpp"
#include "relphase/phase_distribution.hpp"
#include "relphase/quadrature.hpp"
#include "relphase/state_spec.hpp"

namespace relphase {

inline constexpr double kDefaultFisherTolerance = 1e-9;
inline constexpr double kSweepFisherTolerance = 1e-7;

/// F_Q = 4 Var(n_a) for a pure state under exp(i n_a theta).
template <typename Scalar>
Scalar fisher_quantum(const TwoModeFockState<Scalar>& state) {
    return 4 * photon_moments(state).var_n_a;
}

/// Closed-form F_Q where one is known (Fock input, NOON, phase state).
std::optional<double> fisher_quantum_analytic(const StateSpec& spec);

/// Reference curve drawn against F_Q for a family: N, N^2, (N^2+2N)/3,
/// N^2/2 + N (large-N twin-Fock), N^2 (optimal squeezing), 1.45 N^{3/2}.
std::optional<double> reference_curve(Family family, double n);

template <typename Scalar = double>
struct LssFisher {
    Scalar value;
    Scalar error_estimate;
    long evaluations;
};

namespace detail {

inline int fisher_panels(int n_total) { return std::max(4, 2 * n_total + 2); }

}  // namespace detail

/// F_LSS = integral over [-pi, pi) of (dP/dphi)^2 / P.
///
/// The absolute tolerance is tol * max(1, F_LSS), with the scale taken from a
/// trapezoid pre-pass and re-checked against the final value.
/// Throws NonConvergenceError carrying the worst subinterval.
template <typename Scalar>
LssFisher<Scalar> fisher_lss(const TwoModeFockState<Scalar>& state, Scalar tol = Scalar(kDefaultFisherTolerance)) {
    if (!(tol > Scalar(0))) throw std::invalid_argument("fisher_lss requires tol > 0");
    const PhaseDistribution<Scalar> dist(state);
    auto integrand = [&dist](Scalar phi) { return dist.fisher_integrand(phi); };
    const Scalar pi = std::numbers::pi_v<Scalar>;

    Scalar scale = std::abs(integrate_periodic<Scalar>(integrand, 4 * state.n_total() + 16).value);
    long evaluations = 0;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const Scalar abs_tol = tol * std::max(Scalar(1), scale);
        const auto q = integrate_adaptive<Scalar>(integrand, -pi, pi, abs_tol, kDefaultMaxDepth,
                                                  detail::fisher_panels(state.n_total()));
        evaluations += q.evaluations;
        if (!q.converged) {
            throw NonConvergenceError("F_LSS quadrature did not converge for N = " + std::to_string(state.n_total()),
                                      double(q.worst_lower), double(q.worst_upper), double(q.error_estimate));
        }
        if (q.error_estimate <= tol * std::max(Scalar(1), q.value)) return {q.value, q.error_estimate, evaluations};
        scale = q.value;
    }
    throw NonConvergenceError("F_LSS error estimate exceeds tol * max(1, value)", double(-pi), double(pi), 0.0);
}

/// 1 - F(delta_phi) = (1/2) integral (sqrt P(phi) - sqrt P(phi + delta_phi))^2.
/// Equal to one minus the Bhattacharyya fidelity because both distributions
/// integrate to one, and free of the cancellation in 1 - F.
template <typename Scalar>
QuadResult<Scalar> fidelity_deficit(const PhaseDistribution<Scalar>& dist, Scalar delta_phi, Scalar abs_tol) {
    const Scalar pi = std::numbers::pi_v<Scalar>;
    auto integrand = [&dist, delta_phi](Scalar phi) {
        const Scalar diff = dist.sqrt_p(phi) - dist.sqrt_p(phi + delta_phi);
        return diff * diff / 2;
    };
    // sqrt(P) has a kink at each zero of P, and the integrand differs from its
    // smooth part only within |delta_phi| of one. Panels no wider than that
    // keep a node inside every such window.
    const double by_step = std::ceil(2 * std::numbers::pi / std::max(std::abs(double(delta_phi)), 1e-6));
    const int panels = std::max(detail::fisher_panels(dist.n_total()), static_cast<int>(std::min(by_step, 1e6)));
    return integrate_adaptive<Scalar>(integrand, -pi, pi, abs_tol, kDefaultMaxDepth, panels);
}

/// Bhattacharyya fidelity between P(phi) and P(phi + delta_phi); in [0, 1].
template <typename Scalar>
Scalar bhattacharyya_fidelity(const TwoModeFockState<Scalar>& state, Scalar delta_phi, Scalar abs_tol = Scalar(1e-12)) {
    if (delta_phi == Scalar(0)) return Scalar(1);
    const PhaseDistribution<Scalar> dist(state);
    const auto q = fidelity_deficit(dist, delta_phi, abs_tol);
    return std::clamp(Scalar(1) - q.value, Scalar(0), Scalar(1));
}

/// Step sizes for the fidelity curvature extrapolation.
inline constexpr std::array<double, 3> kCurvatureSteps = {1e-2, 5e-3, 2.5e-3};

/// lim 8 (1 - F(h)) / h^2 as h -> 0, by two levels of Richardson extrapolation.
///
/// sqrt(P) has a kink at every zero of P, so 8 (1 - F(h)) / h^2 carries an
/// O(h) term as well as the O(h^2) one; the two levels eliminate h then h^2.
template <typename Scalar>
Scalar fidelity_curvature_check(const TwoModeFockState<Scalar>& state) {
    const PhaseDistribution<Scalar> dist(state);
    const Scalar magnitude = fisher_quantum(state);
    std::array<Scalar, 3> curvature{};
    for (std::size_t i = 0; i < kCurvatureSteps.size(); ++i) {
        const Scalar h = Scalar(kCurvatureSteps[i]);
        const Scalar expected_deficit = magnitude * h * h / 8;
        const Scalar abs_tol = std::max(Scalar(1e-9) * expected_deficit, Scalar(1e-20));
        const auto q = fidelity_deficit(dist, h, abs_tol);
        curvature[i] = 8 * q.value / (h * h);
    }
    const Scalar first = 2 * curvature[1] - curvature[0];
    const Scalar second = 2 * curvature[2] - curvature[1];
    return (4 * second - first) / 3;
}

struct EstimationBound {
    double delta_theta_min;
    int repetitions_p;
};

/// Delta theta_min = 1 / sqrt(p F).
EstimationBound cramer_rao_min(double fisher, int repetitions);

struct FisherReport {
    int n_total = 0;
    double f_q = 0;
    std::optional<double> f_q_analytic;
    double f_lss = 0;
    double quad_error = 0;
    /// |f_lss - f_q| / f_q, or the absolute difference when f_q = 0.
    double rel_diff = 0;
};

FisherReport fisher_report(const StateSpec& spec, double tol = kDefaultFisherTolerance);

}  // namespace relphase
