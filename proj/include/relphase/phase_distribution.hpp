#pragma once

// Relative phase distribution of a fixed-N two-mode state,
//     P(phi) = |sum_k A_k e^{i k phi}|^2 / (2 pi),
// evaluated through its autocorrelation (Fourier) form
//     P(phi) = [rho_0 + 2 sum_{d>=1} Re(rho_d e^{i d phi})] / (2 pi),
//     rho_d  = sum_k A_{k+d} conj(A_k).
// With this sign convention exp(i n_a theta) shifts P(phi) to P(phi + theta).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "relphase/fock_state.hpp"

namespace relphase {

template <typename Scalar = double>
struct PhaseSample {
    Scalar phi;
    Scalar p;
    Scalar dp;
};

/// Below this |f| the Fisher integrand is taken from neighbouring points.
inline constexpr double kNearZeroAmplitude = 1e-7;
/// Half-spacing of those neighbouring points.
inline constexpr double kZeroStep = 1e-5;

template <typename Scalar = double>
class PhaseDistribution {
public:
    using Complex = std::complex<Scalar>;

    explicit PhaseDistribution(const TwoModeFockState<Scalar>& state)
        : amplitudes_(state.amplitudes()), n_total_(state.n_total()) {
        const Eigen::Index size = amplitudes_.size();
        const AmplitudeVector<Scalar> weighted =
            amplitudes_.cwiseProduct(RealVector<Scalar>::LinSpaced(size, Scalar(0), Scalar(size - 1)).template cast<Complex>());
        rho_.resize(size);
        sigma_.resize(size);
        for (Eigen::Index d = 0; d < size; ++d) {
            rho_[d] = amplitudes_.head(size - d).dot(amplitudes_.tail(size - d));
            sigma_[d] = weighted.head(size - d).dot(weighted.tail(size - d));
        }
    }

    int n_total() const noexcept { return n_total_; }

    /// rho_d = sum_k A_{k+d} conj(A_k), d = 0..N.
    const AmplitudeVector<Scalar>& autocorrelation() const noexcept { return rho_; }

    Scalar p(Scalar phi) const { return cosine_series(rho_, phi) / two_pi(); }

    /// Term-wise derivative of the Fourier form.
    Scalar dp(Scalar phi) const {
        const Complex w = std::polar(Scalar(1), phi);
        Complex z(1, 0);
        Scalar acc = 0;
        for (Eigen::Index d = 1; d < rho_.size(); ++d) {
            z *= w;
            acc += Scalar(d) * (rho_[d] * z).imag();
        }
        return -2 * acc / two_pi();
    }

    /// Direct form |sum_k A_k e^{i k phi}|^2 / (2 pi), kept as a cross-check.
    Scalar p_direct(Scalar phi) const { return std::norm(amplitude_sum(phi)) / two_pi(); }

    /// sqrt(P) from the direct sum; avoids the sqrt amplification of rounding near zeros of P.
    Scalar sqrt_p(Scalar phi) const { return std::abs(amplitude_sum(phi)) / std::sqrt(two_pi()); }

    /// 4 |f'(phi)|^2 / (2 pi) with f = sum_k A_k e^{i k phi}. By Cauchy-Schwarz
    /// it bounds P'^2 / P everywhere and equals its limit at a simple zero of f.
    Scalar fisher_integrand_bound(Scalar phi) const { return 4 * std::max(cosine_series(sigma_, phi), Scalar(0)) / two_pi(); }

    /// (P')^2 / P, written as 4 Re(conj(f) f')^2 / (2 pi |f|^2) so only the
    /// rounding of f itself matters. Within rounding distance of a zero of f
    /// (a removable singularity) the value is extrapolated from symmetric
    /// pairs at kZeroStep and kZeroStep / 2.
    Scalar fisher_integrand(Scalar phi) const {
        const auto [f, df] = amplitude_sums(phi);
        if (std::abs(f) >= Scalar(kNearZeroAmplitude)) return fisher_ratio(f, df);
        auto pair_mean = [&](Scalar h) {
            const auto [fl, dfl] = amplitude_sums(phi - h);
            const auto [fr, dfr] = amplitude_sums(phi + h);
            return (fisher_ratio(fl, dfl) + fisher_ratio(fr, dfr)) / 2;
        };
        const Scalar h = Scalar(kZeroStep);
        return (4 * pair_mean(h / 2) - pair_mean(h)) / 3;
    }

    PhaseSample<Scalar> sample(Scalar phi) const { return {phi, p(phi), dp(phi)}; }

    /// m_points samples on the uniform grid phi_j = -pi + 2 pi j / m.
    std::vector<PhaseSample<Scalar>> sample_grid(int m_points) const {
        if (m_points < 2) throw std::invalid_argument("sample_grid requires m_points >= 2");
        std::vector<PhaseSample<Scalar>> out;
        out.reserve(static_cast<std::size_t>(m_points));
        for (int j = 0; j < m_points; ++j) out.push_back(sample(grid_point(j, m_points)));
        return out;
    }

    /// Default grid size for width integrals and figures: at least 16 points
    /// per oscillation of the degree-N polynomial.
    int default_grid_points() const { return std::max(4096, 16 * n_total_); }

    /// Second central moment of P on [-pi, pi). Trapezoid over the closed
    /// period plus the h^2 Euler-Maclaurin endpoint term, since phi * P and
    /// phi^2 * P are not periodic.
    Scalar phase_width() const {
        const int m = default_grid_points();
        const Scalar step = two_pi() / Scalar(m);
        const Scalar pi = std::numbers::pi_v<Scalar>;
        // The -pi node stands for both endpoints: phi * P cancels there.
        Scalar first = 0;
        Scalar second = pi * pi * p(-pi);
        for (int j = 1; j < m; ++j) {
            const Scalar phi = grid_point(j, m);
            const Scalar density = p(phi);
            first += phi * density;
            second += phi * phi * density;
        }
        first *= step;
        second *= step;
        // [g']_{-pi}^{pi} for g = phi P and g = phi^2 P.
        first -= step * step / 12 * (2 * pi * dp(pi));
        second -= step * step / 12 * (4 * pi * p(pi));
        return std::sqrt(std::max(second - first * first, Scalar(0)));
    }

    static Scalar grid_point(int j, int m_points) {
        return -std::numbers::pi_v<Scalar> + two_pi() * Scalar(j) / Scalar(m_points);
    }

private:
    static constexpr Scalar two_pi() { return 2 * std::numbers::pi_v<Scalar>; }

    // c_0 + 2 sum_{d>=1} Re(c_d e^{i d phi})
    static Scalar cosine_series(const AmplitudeVector<Scalar>& c, Scalar phi) {
        const Complex w = std::polar(Scalar(1), phi);
        Complex z(1, 0);
        Scalar acc = 0;
        for (Eigen::Index d = 1; d < c.size(); ++d) {
            z *= w;
            acc += (c[d] * z).real();
        }
        return c[0].real() + 2 * acc;
    }

    Complex amplitude_sum(Scalar phi) const { return amplitude_sums(phi).first; }

    // f = sum_k A_k e^{i k phi} and f' = sum_k i k A_k e^{i k phi}.
    std::pair<Complex, Complex> amplitude_sums(Scalar phi) const {
        const Complex w = std::polar(Scalar(1), phi);
        Complex z(1, 0);
        Complex f(0, 0);
        Complex df(0, 0);
        for (Eigen::Index k = 0; k < amplitudes_.size(); ++k) {
            const Complex term = amplitudes_[k] * z;
            f += term;
            df += Scalar(k) * term;
            z *= w;
        }
        return {f, Complex(-df.imag(), df.real())};
    }

    static Scalar fisher_ratio(Complex f, Complex df) {
        const Scalar norm = std::norm(f);
        if (norm == Scalar(0)) return 0;
        const Scalar cross = (std::conj(f) * df).real();
        return 4 * cross * cross / (norm * two_pi());
    }

    AmplitudeVector<Scalar> amplitudes_;
    AmplitudeVector<Scalar> rho_;
    AmplitudeVector<Scalar> sigma_;
    int n_total_;
};

template <typename Scalar>
Scalar eval_p(const TwoModeFockState<Scalar>& state, Scalar phi) {
    return PhaseDistribution<Scalar>(state).p(phi);
}

template <typename Scalar>
Scalar eval_dp(const TwoModeFockState<Scalar>& state, Scalar phi) {
    return PhaseDistribution<Scalar>(state).dp(phi);
}

template <typename Scalar>
std::vector<PhaseSample<Scalar>> sample_grid(const TwoModeFockState<Scalar>& state, int m_points) {
    return PhaseDistribution<Scalar>(state).sample_grid(m_points);
}

template <typename Scalar>
Scalar phase_width(const TwoModeFockState<Scalar>& state) {
    return PhaseDistribution<Scalar>(state).phase_width();
}

}  // namespace relphase
