#pragma once

// N-sweeps of the Fisher comparison, per-family figure bundles and the
// cross-family summary.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relphase/fisher.hpp"
#include "relphase/phase_distribution.hpp"
#include "relphase/state_spec.hpp"

namespace relphase {

struct SweepRange {
    int n_min = 0;
    int n_max = 0;
    int step = 1;
};

/// Range used by the `sweep` subcommand when no bounds are given.
SweepRange default_sweep_range(Family family);
/// Range used by `compare-all`: smallest valid N up to 40 (60 for squeezed).
SweepRange compare_all_range(Family family);

/// Valid photon numbers in the range, ascending. Parity-restricted families
/// skip invalid N instead of failing.
std::vector<int> sweep_points(Family family, const SweepRange& range);

struct SweepRow {
    int n = 0;
    bool ok = false;
    std::string error;
    bool non_convergence = false;
    FisherReport report;
    std::optional<double> reference;
    double uncertainty_product = 0;
};

struct SweepTable {
    Family family{};
    std::vector<SweepRow> rows;

    bool complete() const;
    bool any_non_convergence() const;
    /// Mean of 100 * rel_diff over successful rows.
    double mean_rel_diff_percent() const;
    double min_uncertainty_product() const;
};

/// Rows are ordered by N whatever the job count.
SweepTable run_sweep(Family family, const SweepRange& range, double tol = kSweepFisherTolerance, int jobs = 1);

/// N at which per-family figures are drawn.
int figure_n(Family family);

struct FigureBundle {
    Family family{};
    TwoModeFockState<double> state;
    std::vector<PhaseSample<double>> distribution;
};

FigureBundle make_figure_bundle(Family family, int m_points = 1024);

struct CompareRow {
    Family family{};
    int n_min = 0;
    int n_max = 0;
    double mean_rel_diff_percent = 0;
    double min_uncertainty_product = 0;
    bool complete = true;
    bool non_convergence = false;
};

inline constexpr const char* kCompareCsvHeader =
    "family,n_min,n_max,mean_rel_diff_percent,min_uncertainty_product";

enum class OutputFormat { Csv, Json };

/// Runs every family; when out_dir is set, writes the per-family
/// coefficients, distribution and sweep plus the summary there.
std::vector<CompareRow> compare_all(double tol, int jobs, OutputFormat format,
                                    const std::optional<std::filesystem::path>& out_dir);

std::string sweep_to_csv(const SweepTable& table, bool with_reference);
std::string sweep_to_json(const SweepTable& table, bool with_reference);
std::string compare_to_csv(const std::vector<CompareRow>& rows);
std::string compare_to_json(const std::vector<CompareRow>& rows);

struct PowerLawFit {
    double exponent = 0;
    double prefactor = 0;
};

/// Least-squares line through (log x, log y).
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace relphase
