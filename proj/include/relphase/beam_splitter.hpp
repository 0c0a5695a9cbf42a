#pragma once

// Reference beam-splitter transform by direct polynomial expansion.
//
// An input |p>_{a'}|r>_{b'} is (a'^dag)^p (b'^dag)^r / sqrt(p! r!) |0>. Each
// creation operator is replaced by its image
//     a'^dag -> (a^dag + i b^dag) / sqrt(2),   b'^dag -> (i a^dag + b^dag) / sqrt(2)
// and the product is expanded one linear factor at a time. No binomial
// identities are used, so this is independent of the closed-form builders.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "relphase/binomial.hpp"
#include "relphase/fock_state.hpp"

namespace relphase {

/// Expands a fixed-N input in the primed modes.
/// `input[p]` multiplies |p>_{a'}|N-p>_{b'}; the result is indexed by k for
/// |k>_a|N-k>_b and is exactly as normalized as the input.
template <typename Scalar = double>
AmplitudeVector<Scalar> expand_beam_splitter(const AmplitudeVector<Scalar>& input, int n_total) {
    using Complex = std::complex<Scalar>;
    if (n_total < 0) throw std::invalid_argument("total photon number must be non-negative");
    if (input.size() != n_total + 1) {
        throw std::invalid_argument("input has " + std::to_string(input.size()) +
                                    " coefficients but N = " + std::to_string(n_total) + " needs N + 1");
    }
    const Scalar inv_sqrt2 = Scalar(1) / std::sqrt(Scalar(2));
    const Complex i_unit(0, 1);
    AmplitudeVector<Scalar> out = AmplitudeVector<Scalar>::Zero(n_total + 1);
    AmplitudeVector<Scalar> poly(n_total + 1);

    for (int p = 0; p <= n_total; ++p) {
        if (input[p] == Complex(0)) continue;
        const int r = n_total - p;
        // poly[j] is the coefficient of (a^dag)^j (b^dag)^{deg-j}.
        poly.setZero();
        poly[0] = 1;
        int degree = 0;
        auto multiply = [&](Complex on_a, Complex on_b) {
            for (int j = degree + 1; j >= 0; --j) {
                const Complex raised = j > 0 ? poly[j - 1] : Complex(0);
                const Complex kept = j <= degree ? poly[j] : Complex(0);
                poly[j] = (on_a * raised + on_b * kept) * inv_sqrt2;
            }
            ++degree;
        };
        for (int s = 0; s < p; ++s) multiply(Complex(1), i_unit);
        for (int s = 0; s < r; ++s) multiply(i_unit, Complex(1));

        for (int k = 0; k <= n_total; ++k) {
            const Scalar fock_norm = std::exp(Scalar(0.5) * (log_factorial<Scalar>(k) + log_factorial<Scalar>(n_total - k) -
                                                             log_factorial<Scalar>(p) - log_factorial<Scalar>(r)));
            out[k] += input[p] * poly[k] * fock_norm;
        }
    }
    return out;
}

/// Product input: `mode_a[p]` and `mode_b[r]` are single-mode Fock amplitudes;
/// only the p + r = n_total component is propagated (not renormalized).
template <typename Scalar = double>
AmplitudeVector<Scalar> expand_beam_splitter(const AmplitudeVector<Scalar>& mode_a, const AmplitudeVector<Scalar>& mode_b,
                                             int n_total) {
    if (n_total < 0) throw std::invalid_argument("total photon number must be non-negative");
    if (n_total > (mode_a.size() - 1) + (mode_b.size() - 1)) {
        throw std::invalid_argument("inputs cannot reach total photon number " + std::to_string(n_total));
    }
    AmplitudeVector<Scalar> joint = AmplitudeVector<Scalar>::Zero(n_total + 1);
    for (int p = 0; p <= n_total; ++p) {
        const int r = n_total - p;
        if (p < mode_a.size() && r < mode_b.size()) joint[p] = mode_a[p] * mode_b[r];
    }
    return expand_beam_splitter<Scalar>(joint, n_total);
}

/// Normalized interferometer state for a fixed-N input.
template <typename Scalar = double>
TwoModeFockState<Scalar> beam_splitter_oracle(const AmplitudeVector<Scalar>& input, int n_total) {
    return TwoModeFockState<Scalar>::normalized(n_total, expand_beam_splitter<Scalar>(input, n_total));
}

/// Normalized N component of a product input.
template <typename Scalar = double>
TwoModeFockState<Scalar> beam_splitter_oracle(const AmplitudeVector<Scalar>& mode_a, const AmplitudeVector<Scalar>& mode_b,
                                              int n_total) {
    return TwoModeFockState<Scalar>::normalized(n_total, expand_beam_splitter<Scalar>(mode_a, mode_b, n_total));
}

}  // namespace relphase
