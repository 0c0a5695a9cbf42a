#include "relphase/fisher.hpp"

#include <cmath>
#include <variant>

namespace relphase {

std::optional<double> fisher_quantum_analytic(const StateSpec& spec) {
    if (const auto* s = std::get_if<FockOneInput>(&spec)) return double(s->n);
    if (const auto* s = std::get_if<Noon>(&spec)) return double(s->n) * s->n;
    if (const auto* s = std::get_if<PhaseState>(&spec)) return (double(s->n) * s->n + 2.0 * s->n) / 3.0;
    return std::nullopt;
}

std::optional<double> reference_curve(Family family, double n) {
    switch (family) {
        case Family::Fock: return n;
        case Family::Noon: return n * n;
        case Family::Phase: return (n * n + 2 * n) / 3;
        case Family::TwinFock: return n * n / 2 + n;
        case Family::CorrelatedFock: return std::nullopt;
        case Family::SqueezedOptimal: return n * n;
        case Family::SqueezedSqrtShot: return 1.45 * std::pow(n, 1.5);
    }
    return std::nullopt;
}

EstimationBound cramer_rao_min(double fisher, int repetitions) {
    if (!(fisher > 0) || !std::isfinite(fisher)) throw std::invalid_argument("Fisher information must be positive");
    if (repetitions < 1) throw std::invalid_argument("repetition count must be >= 1");
    return {1.0 / std::sqrt(double(repetitions) * fisher), repetitions};
}

FisherReport fisher_report(const StateSpec& spec, double tol) {
    const auto state = build_state<double>(spec);
    FisherReport report;
    report.n_total = state.n_total();
    report.f_q = fisher_quantum(state);
    report.f_q_analytic = fisher_quantum_analytic(spec);
    const auto lss = fisher_lss(state, tol);
    report.f_lss = lss.value;
    report.quad_error = lss.error_estimate;
    const double diff = std::abs(report.f_lss - report.f_q);
    report.rel_diff = report.f_q > 0 ? diff / report.f_q : diff;
    return report;
}

}  // namespace relphase
