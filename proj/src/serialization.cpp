#include "relphase/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace relphase {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value == 0.0 ? 0.0 : value);
    return buf;
}

json state_to_json(const TwoModeFockState<double>& state) {
    json amps = json::array();
    for (Eigen::Index k = 0; k < state.size(); ++k) amps.push_back({state[k].real(), state[k].imag()});
    return {{"n_total", state.n_total()}, {"amplitudes", std::move(amps)}};
}

TwoModeFockState<double> state_from_json(const json& j) {
    const int n = j.at("n_total").get<int>();
    const auto& amps = j.at("amplitudes");
    if (!amps.is_array()) throw std::invalid_argument("\"amplitudes\" must be an array");
    AmplitudeVector<double> a(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const auto& pair = amps[k];
        if (!pair.is_array() || pair.size() != 2) throw std::invalid_argument("each amplitude must be [re, im]");
        a[static_cast<Eigen::Index>(k)] = {pair[0].get<double>(), pair[1].get<double>()};
    }
    return TwoModeFockState<double>(n, std::move(a));
}

std::string state_to_csv(const TwoModeFockState<double>& state) {
    std::ostringstream out;
    out << "k,prob\n";
    const auto p = state.probabilities();
    for (Eigen::Index k = 0; k < p.size(); ++k) out << k << ',' << format_number(p[k]) << '\n';
    return out.str();
}

std::string grid_to_csv(const std::vector<PhaseSample<double>>& samples, bool include_dp) {
    std::ostringstream out;
    out << (include_dp ? "phi,p,dp\n" : "phi,p\n");
    for (const auto& s : samples) {
        out << format_number(s.phi) << ',' << format_number(s.p);
        if (include_dp) out << ',' << format_number(s.dp);
        out << '\n';
    }
    return out.str();
}

json grid_to_json(const std::vector<PhaseSample<double>>& samples, bool include_dp) {
    json phi = json::array(), p = json::array(), dp = json::array();
    for (const auto& s : samples) {
        phi.push_back(s.phi);
        p.push_back(s.p);
        if (include_dp) dp.push_back(s.dp);
    }
    json out = {{"phi", std::move(phi)}, {"p", std::move(p)}};
    if (include_dp) out["dp"] = std::move(dp);
    return out;
}

std::string report_to_csv_row(const FisherReport& r) {
    std::ostringstream out;
    out << r.n_total << ',' << format_number(r.f_q) << ','
        << (r.f_q_analytic ? format_number(*r.f_q_analytic) : std::string()) << ',' << format_number(r.f_lss) << ','
        << format_number(r.quad_error) << ',' << format_number(r.rel_diff);
    return out.str();
}

json report_to_json(const FisherReport& r) {
    return {
        {"n", r.n_total},
        {"f_q", r.f_q},
        {"f_q_analytic", r.f_q_analytic ? json(*r.f_q_analytic) : json(nullptr)},
        {"f_lss", r.f_lss},
        {"quad_error", r.quad_error},
        {"rel_diff", r.rel_diff},
    };
}

}  // namespace relphase
