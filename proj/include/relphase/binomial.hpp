#pragma once

// Combinatorial helpers shared by the state builders.
//
// Two representations coexist on purpose: exact 128-bit binomials for the
// alternating convolution sums (which cancel catastrophically in floating
// point), and log-gamma binomials for the prefactors (which overflow).

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace relphase {

using wide_int = __int128;

/// Largest total photon number for which every convolution sum fits in
/// wide_int. The partial sums are bounded by binom(N, k) (Vandermonde),
/// and binom(128, 64) < 2^127.
inline constexpr int kMaxExactPhotons = 128;

/// Pascal's triangle up to kMaxExactPhotons, built once.
class BinomialTable {
public:
    static const BinomialTable& instance() {
        static const BinomialTable table;
        return table;
    }

    /// binom(n, k), zero outside 0 <= k <= n.
    wide_int operator()(int n, int k) const {
        if (n < 0 || k < 0 || k > n) return 0;
        if (n > kMaxExactPhotons) throw std::out_of_range("binomial order exceeds exact table");
        return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    }

private:
    BinomialTable() {
        rows_.resize(kMaxExactPhotons + 1);
        for (int n = 0; n <= kMaxExactPhotons; ++n) {
            auto& row = rows_[static_cast<std::size_t>(n)];
            row.assign(static_cast<std::size_t>(n) + 1, 1);
            for (int k = 1; k < n; ++k) {
                const auto& prev = rows_[static_cast<std::size_t>(n - 1)];
                row[static_cast<std::size_t>(k)] =
                    prev[static_cast<std::size_t>(k - 1)] + prev[static_cast<std::size_t>(k)];
            }
        }
    }

    std::vector<std::vector<wide_int>> rows_;
};

template <typename Scalar = double>
Scalar log_factorial(int n) {
    return std::lgamma(static_cast<Scalar>(n) + Scalar(1));
}

/// log binom(n, k) via log-gamma; -inf outside the support.
template <typename Scalar = double>
Scalar log_binomial(int n, int k) {
    if (k < 0 || k > n) return -std::numeric_limits<Scalar>::infinity();
    return log_factorial<Scalar>(n) - log_factorial<Scalar>(k) - log_factorial<Scalar>(n - k);
}

/// Exact power of i, tracked as a quarter-turn count mod 4.
struct QuarterTurn {
    int turns = 0;

    static constexpr QuarterTurn of(int n) { return QuarterTurn{((n % 4) + 4) % 4}; }

    constexpr QuarterTurn operator+(QuarterTurn o) const { return of(turns + o.turns); }

    template <typename Scalar = double>
    std::complex<Scalar> value() const {
        switch (turns) {
            case 0: return {1, 0};
            case 1: return {0, 1};
            case 2: return {-1, 0};
            default: return {0, -1};
        }
    }
};

/// Gaussian integer accumulator: re + i*im, both exact.
struct GaussianInt {
    wide_int re = 0;
    wide_int im = 0;

    void add(QuarterTurn phase, wide_int magnitude) {
        switch (phase.turns) {
            case 0: re += magnitude; break;
            case 1: im += magnitude; break;
            case 2: re -= magnitude; break;
            default: im -= magnitude; break;
        }
    }

    template <typename Scalar = double>
    std::complex<Scalar> value() const {
        return {static_cast<Scalar>(re), static_cast<Scalar>(im)};
    }
};

}  // namespace relphase
