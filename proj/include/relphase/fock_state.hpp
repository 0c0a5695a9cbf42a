#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace relphase {

template <typename Scalar>
using AmplitudeVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Tolerance on sum |A_k|^2 = 1 accepted at construction.
inline constexpr double kNormTolerance = 1e-10;

/// Pure two-mode state with a fixed total photon number N:
///   |psi> = sum_k A_k |k>_a |N-k>_b,   k = 0..N.
///
/// Immutable after construction; the constructor enforces length N+1,
/// finite entries and unit norm.
template <typename Scalar = double>
class TwoModeFockState {
public:
    using Vector = AmplitudeVector<Scalar>;

    TwoModeFockState(int n_total, Vector amplitudes) : n_total_(n_total), amplitudes_(std::move(amplitudes)) {
        if (n_total_ < 0) throw std::invalid_argument("total photon number must be non-negative");
        if (amplitudes_.size() != n_total_ + 1) {
            throw std::invalid_argument("amplitude array must have length n_total + 1 (got " +
                                        std::to_string(amplitudes_.size()) + " for N=" +
                                        std::to_string(n_total_) + ")");
        }
        if (!amplitudes_.allFinite()) throw std::invalid_argument("non-finite amplitude");
        const Scalar norm2 = amplitudes_.squaredNorm();
        if (std::abs(norm2 - Scalar(1)) > Scalar(kNormTolerance)) {
            throw std::invalid_argument("state is not normalized: sum |A|^2 = " + std::to_string(double(norm2)));
        }
    }

    /// Builds a state from arbitrary non-zero amplitudes by rescaling to unit norm.
    static TwoModeFockState normalized(int n_total, Vector amplitudes) {
        const Scalar norm = amplitudes.norm();
        if (!(norm > Scalar(0)) || !std::isfinite(double(norm))) {
            throw std::invalid_argument("cannot normalize a zero or non-finite amplitude vector");
        }
        amplitudes /= norm;
        return TwoModeFockState(n_total, std::move(amplitudes));
    }

    int n_total() const noexcept { return n_total_; }
    Eigen::Index size() const noexcept { return amplitudes_.size(); }
    const Vector& amplitudes() const noexcept { return amplitudes_; }
    std::complex<Scalar> operator[](Eigen::Index k) const { return amplitudes_[k]; }

    /// |A_k|^2, the photon-number distribution of mode a.
    RealVector<Scalar> probabilities() const { return amplitudes_.cwiseAbs2(); }

private:
    int n_total_;
    Vector amplitudes_;
};

/// Multiplies A_k by e^{i k theta}, i.e. applies exp(i n_a theta).
template <typename Scalar>
TwoModeFockState<Scalar> apply_phase_shift(const TwoModeFockState<Scalar>& state, Scalar theta) {
    typename TwoModeFockState<Scalar>::Vector out = state.amplitudes();
    for (Eigen::Index k = 0; k < out.size(); ++k) {
        out[k] *= std::polar(Scalar(1), theta * static_cast<Scalar>(k));
    }
    return TwoModeFockState<Scalar>(state.n_total(), std::move(out));
}

/// Index of the largest-magnitude amplitude; ties (within a relative 1e-12)
/// resolve to the smallest k so the choice is stable under rounding.
template <typename Derived>
Eigen::Index dominant_index(const Eigen::MatrixBase<Derived>& amplitudes) {
    using Scalar = typename Derived::RealScalar;
    const Scalar peak = amplitudes.cwiseAbs().maxCoeff();
    const Scalar threshold = peak * (Scalar(1) - Scalar(1e-12));
    for (Eigen::Index k = 0; k < amplitudes.size(); ++k) {
        if (std::abs(amplitudes[k]) >= threshold) return k;
    }
    return 0;
}

/// Rotates the global phase so the dominant amplitude is real and positive.
template <typename Scalar>
AmplitudeVector<Scalar> canonical_global_phase(AmplitudeVector<Scalar> amplitudes) {
    if (amplitudes.size() == 0) return amplitudes;
    const auto pivot = amplitudes[dominant_index(amplitudes)];
    const Scalar mag = std::abs(pivot);
    if (mag > Scalar(0)) amplitudes *= std::conj(pivot) / mag;
    return amplitudes;
}

template <typename Scalar>
TwoModeFockState<Scalar> canonical_global_phase(const TwoModeFockState<Scalar>& state) {
    return TwoModeFockState<Scalar>(state.n_total(), canonical_global_phase<Scalar>(state.amplitudes()));
}

/// max_k |a_k - e^{i gamma} b_k| minimised over the global phase gamma.
///
/// The optimal gamma aligns the overlap <b|a>, so this is exact rather than
/// a pivot heuristic.
template <typename Scalar>
Scalar max_distance_up_to_phase(const AmplitudeVector<Scalar>& a, const AmplitudeVector<Scalar>& b) {
    if (a.size() != b.size()) return std::numeric_limits<Scalar>::infinity();
    const std::complex<Scalar> overlap = b.dot(a);
    std::complex<Scalar> phase(1, 0);
    if (std::abs(overlap) > Scalar(0)) phase = overlap / std::abs(overlap);
    return (a - phase * b).cwiseAbs().maxCoeff();
}

template <typename Scalar = double>
struct PhotonMoments {
    Scalar mean_n_a;
    Scalar var_n_a;
};

/// Mean and variance of n_a (two-pass, so the variance is never negative).
template <typename Scalar>
PhotonMoments<Scalar> photon_moments(const TwoModeFockState<Scalar>& state) {
    const RealVector<Scalar> p = state.probabilities();
    const RealVector<Scalar> k = RealVector<Scalar>::LinSpaced(p.size(), Scalar(0), Scalar(p.size() - 1));
    const Scalar mean = p.dot(k);
    const Scalar var = p.dot((k.array() - mean).square().matrix());
    return {mean, var};
}

}  // namespace relphase
