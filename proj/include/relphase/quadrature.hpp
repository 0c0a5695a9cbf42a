#pragma once

// One-dimensional quadrature with explicit error reporting.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "relphase/errors.hpp"

namespace relphase {

template <typename Scalar = double>
struct QuadResult {
    Scalar value = 0;
    Scalar error_estimate = 0;
    long evaluations = 0;
    bool converged = false;
    /// Subinterval carrying the largest error when the loop stopped.
    Scalar worst_lower = 0;
    Scalar worst_upper = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (abscissae on [0, 1]).
inline constexpr std::array<long double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L,
};
inline constexpr std::array<long double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L,
};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<long double, 4> kGaussWeights = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L,
};

template <typename Scalar>
struct Panel {
    Scalar lower;
    Scalar upper;
    Scalar value;
    Scalar error;
    Scalar rounding_floor;
    int depth;

    bool operator<(const Panel& o) const { return error < o.error; }
};

// Neumaier summation.
template <typename Scalar>
struct CompensatedSum {
    Scalar sum = 0;
    Scalar carry = 0;
    void add(Scalar x) {
        const Scalar t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    Scalar value() const { return sum + carry; }
};

template <typename Scalar, typename F>
Scalar checked_eval(F& f, Scalar x) {
    const Scalar y = f(x);
    if (!std::isfinite(static_cast<double>(y))) {
        throw QuadratureError("integrand is not finite at x = " + std::to_string(static_cast<double>(x)),
                              static_cast<double>(x));
    }
    return y;
}

template <typename Scalar, typename F>
Panel<Scalar> gauss_kronrod(F& f, Scalar lower, Scalar upper, int depth) {
    const Scalar center = (lower + upper) / 2;
    const Scalar half = (upper - lower) / 2;
    const Scalar fc = checked_eval(f, center);
    Scalar kronrod = fc * Scalar(kKronrodWeights[7]);
    Scalar gauss = fc * Scalar(kGaussWeights[3]);
    Scalar abs_sum = std::abs(kronrod);
    for (std::size_t j = 0; j < 7; ++j) {
        const Scalar dx = half * Scalar(kKronrodNodes[j]);
        const Scalar f1 = checked_eval(f, center - dx);
        const Scalar f2 = checked_eval(f, center + dx);
        kronrod += Scalar(kKronrodWeights[j]) * (f1 + f2);
        abs_sum += Scalar(kKronrodWeights[j]) * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += Scalar(kGaussWeights[j / 2]) * (f1 + f2);
    }
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    const Scalar floor = 50 * eps * std::abs(half) * abs_sum;
    const Scalar diff = std::abs((kronrod - gauss) * half);
    return {lower, upper, kronrod * half, std::max(diff, floor), floor, depth};
}

}  // namespace detail

inline constexpr int kDefaultMaxDepth = 40;

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops to abs_tol. A panel that would exceed max_depth, or one
/// whose error is already at the rounding floor, stops the loop with
/// converged = false. `initial_panels` pre-splits [a, b] so oscillatory
/// integrands are not undersampled by the first rule.
template <typename Scalar, typename F>
QuadResult<Scalar> integrate_adaptive(F&& f, Scalar a, Scalar b, Scalar abs_tol, int max_depth = kDefaultMaxDepth,
                                      int initial_panels = 1) {
    if (!(a < b)) throw std::invalid_argument("integrate_adaptive requires a < b");
    if (!(abs_tol > Scalar(0))) throw std::invalid_argument("integrate_adaptive requires abs_tol > 0");
    initial_panels = std::max(initial_panels, 1);
    constexpr long kMaxEvaluations = 20'000'000;

    std::priority_queue<detail::Panel<Scalar>> heap;
    QuadResult<Scalar> result;
    Scalar total_error = 0;
    const Scalar width = (b - a) / Scalar(initial_panels);
    for (int i = 0; i < initial_panels; ++i) {
        const Scalar lo = a + width * Scalar(i);
        const Scalar hi = (i + 1 == initial_panels) ? b : a + width * Scalar(i + 1);
        auto panel = detail::gauss_kronrod<Scalar>(f, lo, hi, 0);
        total_error += panel.error;
        heap.push(panel);
    }
    result.evaluations = 15L * initial_panels;

    bool converged = total_error <= abs_tol;
    while (!converged) {
        const auto worst = heap.top();
        if (worst.depth >= max_depth || worst.error <= worst.rounding_floor ||
            result.evaluations + 30 > kMaxEvaluations) {
            break;
        }
        heap.pop();
        const Scalar mid = (worst.lower + worst.upper) / 2;
        auto left = detail::gauss_kronrod<Scalar>(f, worst.lower, mid, worst.depth + 1);
        auto right = detail::gauss_kronrod<Scalar>(f, mid, worst.upper, worst.depth + 1);
        result.evaluations += 30;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        converged = total_error <= abs_tol;
    }

    result.worst_lower = heap.top().lower;
    result.worst_upper = heap.top().upper;
    // Re-sum from scratch: the running error total drifts with rounding.
    std::vector<detail::Panel<Scalar>> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const auto& l, const auto& r) { return l.lower < r.lower; });
    result.value = 0;
    result.error_estimate = 0;
    for (const auto& p : panels) {
        result.value += p.value;
        result.error_estimate += p.error;
    }
    result.converged = result.error_estimate <= abs_tol;
    return result;
}

/// Trapezoid rule over one period [-pi, pi) with m_points equispaced nodes.
///
/// Exact (to rounding) for trigonometric polynomials of degree < m_points.
/// The error estimate compares against the 2*m_points rule, which reuses
/// the first m_points nodes.
template <typename Scalar, typename F>
QuadResult<Scalar> integrate_periodic(F&& f, int m_points) {
    if (m_points < 4) throw std::invalid_argument("integrate_periodic requires m_points >= 4");
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar step = 2 * pi / Scalar(m_points);
    detail::CompensatedSum<Scalar> coarse, midpoints;
    Scalar abs_sum = 0;
    for (int j = 0; j < m_points; ++j) {
        const Scalar x = -pi + step * Scalar(j);
        const Scalar y0 = detail::checked_eval(f, x);
        const Scalar y1 = detail::checked_eval(f, x + step / 2);
        coarse.add(y0);
        midpoints.add(y1);
        abs_sum += std::abs(y0) + std::abs(y1);
    }
    QuadResult<Scalar> result;
    result.value = coarse.value() * step;
    const Scalar fine = (coarse.value() + midpoints.value()) * step / 2;
    const Scalar floor = 10 * std::numeric_limits<Scalar>::epsilon() * abs_sum * step;
    result.error_estimate = std::max(std::abs(fine - result.value), floor);
    result.evaluations = 2L * m_points;
    result.converged = true;
    result.worst_lower = -pi;
    result.worst_upper = pi;
    return result;
}

}  // namespace relphase
