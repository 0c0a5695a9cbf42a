#include "relphase/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "relphase/builders.hpp"
#include "relphase/errors.hpp"
#include "relphase/serialization.hpp"

namespace relphase {

namespace {

bool is_squeezed(Family f) { return f == Family::SqueezedOptimal || f == Family::SqueezedSqrtShot; }

bool valid_n(Family family, int n) {
    try {
        validate(make_spec(family, n));
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

SweepRow evaluate_row(Family family, int n, double tol) {
    SweepRow row;
    row.n = n;
    try {
        const StateSpec spec = make_spec(family, n);
        row.report = fisher_report(spec, tol);
        row.reference = reference_curve(family, n);
        const auto state = build_state<double>(spec);
        const auto moments = photon_moments(state);
        row.uncertainty_product = phase_width(state) * std::sqrt(moments.var_n_a);
        row.ok = true;
    } catch (const NonConvergenceError& e) {
        row.error = e.what();
        row.non_convergence = true;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

SweepRange default_sweep_range(Family family) {
    switch (family) {
        case Family::TwinFock: return {2, 40, 2};
        case Family::CorrelatedFock: return {3, 39, 2};
        case Family::SqueezedSqrtShot: return {20, 60, 1};
        default: return {2, 40, 1};
    }
}

SweepRange compare_all_range(Family family) {
    const int lo = smallest_valid_n(family);
    int hi = is_squeezed(family) ? 60 : 40;
    if (family == Family::CorrelatedFock) hi = 39;
    const int step = (family == Family::TwinFock || family == Family::CorrelatedFock) ? 2 : 1;
    return {lo, hi, step};
}

std::vector<int> sweep_points(Family family, const SweepRange& range) {
    if (range.step < 1) throw std::invalid_argument("sweep step must be >= 1");
    if (range.n_min > range.n_max) throw std::invalid_argument("sweep requires n_min <= n_max");
    if (range.n_min < 0) throw std::invalid_argument("sweep requires n_min >= 0");
    std::vector<int> points;
    for (int n = range.n_min; n <= range.n_max; n += range.step)
        if (valid_n(family, n)) points.push_back(n);
    if (points.empty()) throw std::invalid_argument("sweep range contains no valid photon number for " + std::string(family_name(family)));
    return points;
}

bool SweepTable::complete() const {
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ok; });
}

bool SweepTable::any_non_convergence() const {
    return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.non_convergence; });
}

double SweepTable::mean_rel_diff_percent() const {
    double sum = 0;
    int count = 0;
    for (const auto& r : rows)
        if (r.ok) {
            sum += 100.0 * r.report.rel_diff;
            ++count;
        }
    return count ? sum / count : std::numeric_limits<double>::quiet_NaN();
}

double SweepTable::min_uncertainty_product() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : rows)
        if (r.ok) best = std::min(best, r.uncertainty_product);
    return std::isinf(best) ? std::numeric_limits<double>::quiet_NaN() : best;
}

SweepTable run_sweep(Family family, const SweepRange& range, double tol, int jobs) {
    const auto points = sweep_points(family, range);
    SweepTable table;
    table.family = family;
    table.rows.resize(points.size());

    const int workers = std::clamp(jobs, 1, static_cast<int>(points.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) table.rows[i] = evaluate_row(family, points[i], tol);
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return table;
}

int figure_n(Family family) { return family == Family::CorrelatedFock ? 11 : 10; }

FigureBundle make_figure_bundle(Family family, int m_points) {
    auto state = build_state<double>(make_spec(family, figure_n(family)));
    auto grid = sample_grid(state, m_points);
    return {family, std::move(state), std::move(grid)};
}

std::string sweep_to_csv(const SweepTable& table, bool with_reference) {
    std::ostringstream out;
    out << kReportCsvHeader << (with_reference ? ",reference" : "") << '\n';
    for (const auto& r : table.rows) {
        if (!r.ok) {
            // failed rows stay in place so N ordering is preserved
            out << r.n << ",nan,,nan,nan,nan" << (with_reference ? "," : "") << '\n';
            continue;
        }
        out << report_to_csv_row(r.report);
        if (with_reference) out << ',' << (r.reference ? format_number(*r.reference) : std::string());
        out << '\n';
    }
    return out.str();
}

std::string sweep_to_json(const SweepTable& table, bool with_reference) {
    json rows = json::array();
    json failures = json::array();
    for (const auto& r : table.rows) {
        if (!r.ok) {
            failures.push_back({{"n", r.n}, {"error", r.error}});
            continue;
        }
        json row = report_to_json(r.report);
        if (with_reference) row["reference"] = r.reference ? json(*r.reference) : json(nullptr);
        rows.push_back(std::move(row));
    }
    json out = {{"family", std::string(family_name(table.family))}, {"rows", std::move(rows)}};
    if (!failures.empty()) out["failures"] = std::move(failures);
    return out.dump(2) + "\n";
}

std::string compare_to_csv(const std::vector<CompareRow>& rows) {
    std::ostringstream out;
    out << kCompareCsvHeader << '\n';
    for (const auto& r : rows)
        out << family_name(r.family) << ',' << r.n_min << ',' << r.n_max << ',' << format_number(r.mean_rel_diff_percent)
            << ',' << format_number(r.min_uncertainty_product) << '\n';
    return out.str();
}

std::string compare_to_json(const std::vector<CompareRow>& rows) {
    json out = json::array();
    for (const auto& r : rows)
        out.push_back({{"family", std::string(family_name(r.family))},
                       {"n_min", r.n_min},
                       {"n_max", r.n_max},
                       {"mean_rel_diff_percent", r.mean_rel_diff_percent},
                       {"min_uncertainty_product", r.min_uncertainty_product}});
    return out.dump(2) + "\n";
}

std::vector<CompareRow> compare_all(double tol, int jobs, OutputFormat format,
                                    const std::optional<std::filesystem::path>& out_dir) {
    const bool as_json = format == OutputFormat::Json;
    const std::string ext = as_json ? ".json" : ".csv";
    if (out_dir) std::filesystem::create_directories(*out_dir);

    std::vector<CompareRow> summary;
    for (Family family : kAllFamilies) {
        const SweepRange range = compare_all_range(family);
        const SweepTable table = run_sweep(family, range, tol, jobs);
        const auto points = sweep_points(family, range);
        summary.push_back({family, points.front(), points.back(), table.mean_rel_diff_percent(),
                           table.min_uncertainty_product(), table.complete(), table.any_non_convergence()});

        if (!out_dir) continue;
        const auto bundle = make_figure_bundle(family);
        const std::string stem(family_name(family));
        write_file(*out_dir / (stem + "_coefficients" + ext),
                   as_json ? state_to_json(bundle.state).dump(2) + "\n" : state_to_csv(bundle.state));
        write_file(*out_dir / (stem + "_distribution" + ext),
                   as_json ? grid_to_json(bundle.distribution, false).dump(2) + "\n"
                           : grid_to_csv(bundle.distribution, false));
        write_file(*out_dir / (stem + "_sweep" + ext), as_json ? sweep_to_json(table, true) : sweep_to_csv(table, true));
    }
    if (out_dir) write_file(*out_dir / ("summary" + ext), as_json ? compare_to_json(summary) : compare_to_csv(summary));
    return summary;
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("power-law fit needs >= 2 paired points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument("power-law fit needs positive data");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("power-law fit needs distinct x values");
    const double slope = (n * sxy - sx * sy) / denom;
    return {slope, std::exp((sy - slope * sx) / n)};
}

}  // namespace relphase
