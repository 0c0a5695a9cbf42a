#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "relphase/builders.hpp"
#include "relphase/serialization.hpp"
#include "relphase/sweep.hpp"

using namespace relphase;

namespace {

constexpr double kPi = std::numbers::pi;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(RELPHASE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, {}};
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

// ---- serialization ----

TEST(Format, TwelveSignificantDigits) {
    EXPECT_EQ(format_number(1.0 / 3), "0.333333333333");
    EXPECT_EQ(format_number(100.0), "100");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(1.23456789012345e-20), "1.23456789012e-20");
    EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(StateJson, Shape) {
    auto j = state_to_json(build_noon(2));
    EXPECT_EQ(j.at("n_total"), 2);
    ASSERT_EQ(j.at("amplitudes").size(), 3u);
    EXPECT_EQ(j.at("amplitudes")[1].size(), 2u);
    EXPECT_NEAR(j.at("amplitudes")[0][0].get<double>(), 1 / std::sqrt(2.0), 1e-15);
}

TEST(StateJson, RoundTrip) {
    auto s = build_squeezed_coherent_projected(7, SqueezingRegime::Optimal);
    auto back = state_from_json(json::parse(state_to_json(s).dump()));
    EXPECT_EQ(back.n_total(), 7);
    EXPECT_EQ((back.amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(StateJson, RejectsMalformed) {
    EXPECT_ANY_THROW(state_from_json(json::parse(R"({"n_total": 1, "amplitudes": [[1, 0]]})")));
    EXPECT_ANY_THROW(state_from_json(json::parse(R"({"n_total": 0, "amplitudes": [[1]]})")));
    EXPECT_ANY_THROW(state_from_json(json::parse(R"({"amplitudes": [[1, 0]]})")));
}

TEST(StateCsv, NoonRows) {
    auto rows = parse_csv(state_to_csv(build_noon(10)));
    ASSERT_EQ(rows.size(), 12u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "prob"}));
    EXPECT_EQ(rows[1][1], "0.5");
    EXPECT_EQ(rows[11][1], "0.5");
    EXPECT_EQ(rows[5][1], "0");
}

TEST(GridSerialization, CsvAndJson) {
    auto g = sample_grid(build_noon(3), 4);
    auto rows = parse_csv(grid_to_csv(g, true));
    EXPECT_EQ(rows[0], (std::vector<std::string>{"phi", "p", "dp"}));
    EXPECT_EQ(rows.size(), 5u);
    EXPECT_EQ(parse_csv(grid_to_csv(g, false))[0].size(), 2u);
    auto j = grid_to_json(g, true);
    EXPECT_EQ(j.at("phi").size(), 4u);
    EXPECT_EQ(j.at("dp").size(), 4u);
    EXPECT_FALSE(grid_to_json(g, false).contains("dp"));
}

TEST(ReportSerialization, AnalyticPresentAndAbsent) {
    FisherReport with{10, 100, 100.0, 100.000001, 1e-11, 1e-8};
    FisherReport without{10, 60, std::nullopt, 60, 1e-12, 0};
    EXPECT_EQ(report_to_csv_row(with), "10,100,100,100.000001,1e-11,1e-08");
    EXPECT_EQ(report_to_csv_row(without), "10,60,,60,1e-12,0");
    EXPECT_TRUE(report_to_json(without).at("f_q_analytic").is_null());
    EXPECT_EQ(report_to_json(with).at("f_q_analytic"), 100.0);
    EXPECT_EQ(std::string(kReportCsvHeader), "n,f_q,f_q_analytic,f_lss,quad_error,rel_diff");
}

// ---- sweeps ----

TEST(Sweep, PointsRespectParity) {
    EXPECT_EQ(sweep_points(Family::TwinFock, {1, 8, 1}), (std::vector<int>{2, 4, 6, 8}));
    EXPECT_EQ(sweep_points(Family::CorrelatedFock, {2, 7, 1}), (std::vector<int>{3, 5, 7}));
    EXPECT_EQ(sweep_points(Family::SqueezedSqrtShot, {1, 3, 1}), (std::vector<int>{2, 3}));
    EXPECT_THROW(sweep_points(Family::Noon, {5, 2, 1}), std::invalid_argument);
    EXPECT_THROW(sweep_points(Family::TwinFock, {3, 3, 1}), std::invalid_argument);
    EXPECT_THROW(sweep_points(Family::Noon, {1, 4, 0}), std::invalid_argument);
}

TEST(Sweep, OrderedAndDeterministicAcrossJobs) {
    auto one = run_sweep(Family::Phase, {1, 24, 1}, kSweepFisherTolerance, 1);
    auto four = run_sweep(Family::Phase, {1, 24, 1}, kSweepFisherTolerance, 4);
    ASSERT_EQ(one.rows.size(), 24u);
    for (std::size_t i = 0; i < one.rows.size(); ++i) EXPECT_EQ(one.rows[i].n, static_cast<int>(i) + 1);
    EXPECT_EQ(sweep_to_csv(one, true), sweep_to_csv(four, true));
    EXPECT_TRUE(one.complete());
}

TEST(Sweep, MeanRelDiffPercent) {
    auto t = run_sweep(Family::Fock, {1, 40, 1});
    double sum = 0;
    for (const auto& r : t.rows) sum += r.report.rel_diff;
    EXPECT_NEAR(t.mean_rel_diff_percent(), 100 * sum / 40, 1e-15);
    EXPECT_LE(t.mean_rel_diff_percent(), 0.001);
}

TEST(Sweep, NoonMatchesSquares) {
    for (const auto& r : run_sweep(Family::Noon, {1, 40, 1}).rows)
        EXPECT_LE(std::abs(r.report.f_lss - r.n * r.n) / (r.n * r.n), 1e-6) << r.n;
}

TEST(Sweep, SqrtShotPowerLaw) {
    auto t = run_sweep(Family::SqueezedSqrtShot, {20, 60, 1});
    std::vector<double> x, y;
    for (const auto& r : t.rows) {
        x.push_back(r.n);
        y.push_back(r.report.f_q);
    }
    auto fit = fit_power_law(x, y);
    EXPECT_NEAR(fit.exponent, 1.5, 0.1);
}

TEST(Sweep, FailedRowIsFlaggedAndKeptInPlace) {
    SweepTable t;
    t.family = Family::Noon;
    SweepRow ok;
    ok.n = 1;
    ok.ok = true;
    ok.report = {1, 1, 1.0, 1, 0, 0};
    SweepRow bad;
    bad.n = 2;
    bad.error = "boom";
    t.rows = {ok, bad};
    EXPECT_FALSE(t.complete());
    auto rows = parse_csv(sweep_to_csv(t, false));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[2][0], "2");
    EXPECT_EQ(rows[2][1], "nan");
    EXPECT_NEAR(t.mean_rel_diff_percent(), 0.0, 0.0);
}

TEST(PowerLaw, ExactData) {
    std::vector<double> x{2, 3, 5, 8}, y;
    for (double v : x) y.push_back(1.45 * std::pow(v, 1.5));
    auto fit = fit_power_law(x, y);
    EXPECT_NEAR(fit.exponent, 1.5, 1e-12);
    EXPECT_NEAR(fit.prefactor, 1.45, 1e-12);
    EXPECT_THROW(fit_power_law({1}, {1}), std::invalid_argument);
    EXPECT_THROW(fit_power_law({1, 2}, {1, -1}), std::invalid_argument);
}

TEST(FigureBundle, CoefficientsSumToOne) {
    for (Family f : kAllFamilies) {
        auto b = make_figure_bundle(f);
        EXPECT_NEAR(b.state.probabilities().sum(), 1.0, 1e-10);
        EXPECT_EQ(b.distribution.size(), 1024u);
        EXPECT_EQ(b.state.n_total(), figure_n(f));
    }
}

// ---- command line ----

TEST(Cli, StateNoonCsv) {
    auto r = run_cli("state --family noon --n 10 --format csv");
    ASSERT_EQ(r.exit_code, 0);
    auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 12u);
    int nonzero = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (std::stod(rows[i][1]) != 0) {
            ++nonzero;
            EXPECT_EQ(rows[i][1], "0.5");
        }
    EXPECT_EQ(nonzero, 2);
}

TEST(Cli, StateTwinOddRejected) { EXPECT_EQ(run_cli("state --family twin-fock --n 3").exit_code, 1); }

TEST(Cli, StatePhaseUniform) {
    auto r = run_cli("state --family phase --n 10");
    ASSERT_EQ(r.exit_code, 0);
    auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 12u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][1]), 1.0 / 11, 1e-12);
}

TEST(Cli, StateJson) {
    auto r = run_cli("--format json state --family corr-fock --n 5");
    ASSERT_EQ(r.exit_code, 0);
    auto s = state_from_json(json::parse(r.out));
    EXPECT_EQ(s.n_total(), 5);
}

TEST(Cli, DistNoonTrapezoid) {
    auto r = run_cli("dist --family noon --n 10 -m 1024");
    ASSERT_EQ(r.exit_code, 0);
    auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 1025u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"phi", "p"}));
    double sum = 0, peak = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        sum += std::stod(rows[i][1]);
        peak = std::max(peak, std::stod(rows[i][1]));
    }
    EXPECT_NEAR(sum * 2 * kPi / 1024, 1.0, 1e-9);
    EXPECT_NEAR(peak, 1 / kPi, 1e-11);
}

TEST(Cli, DistSqueezedOptimal) {
    auto r = run_cli("dist --family sq-coh --n-bar 10 --regime optimal -m 256 --with-dp");
    ASSERT_EQ(r.exit_code, 0);
    auto rows = parse_csv(r.out);
    EXPECT_EQ(rows[0].size(), 3u);
    EXPECT_EQ(rows.size(), 257u);
}

TEST(Cli, DistRejectsTinyGrid) { EXPECT_EQ(run_cli("dist --family noon --n 4 -m 1").exit_code, 1); }

TEST(Cli, FisherExamples) {
    struct Case {
        std::string args;
        double f_q;
    };
    for (const auto& c : {Case{"--family noon --n 10", 100}, Case{"--family fock --n 10", 10},
                          Case{"--family phase --n 10", 40}}) {
        auto r = run_cli("fisher " + c.args);
        ASSERT_EQ(r.exit_code, 0) << c.args;
        auto rows = parse_csv(r.out);
        ASSERT_EQ(rows.size(), 2u);
        EXPECT_EQ(rows[0].size(), 6u);
        EXPECT_NEAR(std::stod(rows[1][1]), c.f_q, 1e-9);
        EXPECT_NEAR(std::stod(rows[1][3]), c.f_q, 1e-6 * c.f_q);
    }
}

TEST(Cli, FisherJsonNullAnalytic) {
    auto r = run_cli("--format json fisher --family twin-fock --n 10");
    ASSERT_EQ(r.exit_code, 0);
    auto j = json::parse(r.out);
    EXPECT_TRUE(j.at("f_q_analytic").is_null());
    EXPECT_NEAR(j.at("f_q").get<double>(), 60, 1e-9);
}

TEST(Cli, NonConvergenceExitCode) {
    EXPECT_EQ(run_cli("--tol 1e-300 fisher --family phase --n 12").exit_code, 2);
}

TEST(Cli, BadArgumentsExitCode) {
    EXPECT_EQ(run_cli("state --family cat --n 3").exit_code, 1);
    EXPECT_EQ(run_cli("state --family noon").exit_code, 1);
    EXPECT_EQ(run_cli("--format xml state --family noon --n 2").exit_code, 1);
    EXPECT_EQ(run_cli("").exit_code, 1);
    EXPECT_EQ(run_cli("fisher --family sq-coh --n-bar 10 --theta-s 0.4").exit_code, 1);
}

TEST(Cli, SweepDeterministicAcrossJobs) {
    auto a = run_cli("sweep --family corr-fock --n-min 1 --n-max 21 --reference");
    auto b = run_cli("--jobs 3 sweep --family corr-fock --n-min 1 --n-max 21 --reference");
    ASSERT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.out, b.out);
    auto rows = parse_csv(a.out);
    EXPECT_EQ(rows[0].back(), "reference");
    ASSERT_EQ(rows.size(), 12u);
    for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_GT(std::stoi(rows[i][0]), std::stoi(rows[i - 1][0]));
}

TEST(Cli, SweepTwinReference) {
    auto r = run_cli("sweep --family twin-fock --n-min 10 --n-max 10 --reference");
    ASSERT_EQ(r.exit_code, 0);
    auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1].back(), "60");
}

TEST(Cli, CompareAllWritesBundlesAndIsByteStable) {
    const auto dir = std::filesystem::temp_directory_path() / "relphase_compare_test";
    std::filesystem::remove_all(dir);
    auto first = run_cli("--out " + dir.string() + " compare-all");
    ASSERT_EQ(first.exit_code, 0);
    const std::string summary = read_file(dir / "summary.csv");
    EXPECT_EQ(summary, first.out);
    auto second = run_cli("--jobs 2 compare-all");
    EXPECT_EQ(second.out, first.out);

    auto rows = parse_csv(first.out);
    ASSERT_EQ(rows.size(), 8u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"family", "n_min", "n_max", "mean_rel_diff_percent",
                                                 "min_uncertainty_product"}));
    for (Family f : kAllFamilies) {
        const std::string stem(family_name(f));
        for (const char* part : {"_coefficients.csv", "_distribution.csv", "_sweep.csv"})
            EXPECT_TRUE(std::filesystem::exists(dir / (stem + part))) << stem << part;
    }
    std::filesystem::remove_all(dir);
}
