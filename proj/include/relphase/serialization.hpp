#pragma once

// CSV and JSON encodings of states, distribution grids and Fisher reports.
// CSV numbers use 12 significant digits so reruns are byte-identical.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "relphase/fisher.hpp"
#include "relphase/fock_state.hpp"
#include "relphase/phase_distribution.hpp"

namespace relphase {

using json = nlohmann::json;

std::string format_number(double value);

/// {"n_total": N, "amplitudes": [[re, im], ...]}
json state_to_json(const TwoModeFockState<double>& state);
TwoModeFockState<double> state_from_json(const json& j);

/// Header `k,prob`.
std::string state_to_csv(const TwoModeFockState<double>& state);

/// Header `phi,p` or `phi,p,dp`.
std::string grid_to_csv(const std::vector<PhaseSample<double>>& samples, bool include_dp);
/// {"phi": [...], "p": [...]} plus "dp" when requested.
json grid_to_json(const std::vector<PhaseSample<double>>& samples, bool include_dp);

inline constexpr const char* kReportCsvHeader = "n,f_q,f_q_analytic,f_lss,quad_error,rel_diff";

/// One CSV row; an absent f_q_analytic is an empty field.
std::string report_to_csv_row(const FisherReport& report);
json report_to_json(const FisherReport& report);

}  // namespace relphase
