// relphase-cli: build states, sample relative-phase distributions and compare
// the distribution's Fisher information against the quantum Fisher information.
//
// Exit codes: 0 ok, 1 invalid arguments, 2 non-convergence, 3 partial sweep failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "relphase/builders.hpp"
#include "relphase/errors.hpp"
#include "relphase/fisher.hpp"
#include "relphase/serialization.hpp"
#include "relphase/sweep.hpp"

using namespace relphase;

namespace {

enum ExitCode { kOk = 0, kInvalidArgs = 1, kNonConvergence = 2, kPartialSweep = 3 };

struct GlobalOptions {
    std::string format = "csv";
    std::optional<double> tol;
    int jobs = 1;
    std::string out;
};

struct StateOptions {
    std::string family;
    int n = -1;
    std::string regime = "optimal";
    double phi0 = 0;
    double theta_s = 0;
    double theta_c = 0;
    bool allow_mismatch = false;
};

void add_state_flags(CLI::App* cmd, StateOptions& s) {
    cmd->add_option("--family", s.family, "fock | noon | phase | twin-fock | corr-fock | sq-coh | sq-coh-optimal | sq-coh-sqrt")
        ->required();
    cmd->add_option("--n,--n-bar", s.n, "total photon number (mean photon number for sq-coh)")->required();
    cmd->add_option("--regime", s.regime, "squeezing regime for sq-coh")->check(CLI::IsMember({"optimal", "sqrt"}));
    cmd->add_option("--phi0", s.phi0, "reference phase of the phase state");
    cmd->add_option("--theta-s", s.theta_s, "squeezing phase");
    cmd->add_option("--theta-c", s.theta_c, "coherent-state phase");
    cmd->add_flag("--allow-suboptimal-phase", s.allow_mismatch, "permit theta_s != 2 theta_c");
}

/// Accepts the bare "sq-coh" name and resolves it through --regime.
Family resolve_family(const std::string& name, const std::string& regime) {
    if (name == "sq-coh") return regime == "sqrt" ? Family::SqueezedSqrtShot : Family::SqueezedOptimal;
    auto f = parse_family(name);
    if (!f) throw InvalidSpecError("unknown family '" + name + "'");
    return *f;
}

StateSpec to_spec(const StateOptions& s) {
    const Family family = resolve_family(s.family, s.regime);
    StateSpec spec = make_spec(family, s.n);
    if (auto* p = std::get_if<PhaseState>(&spec)) p->phi0 = s.phi0;
    if (auto* q = std::get_if<SqueezedCoherent>(&spec)) {
        q->theta_s = s.theta_s;
        q->theta_c = s.theta_c;
        q->allow_phase_mismatch = s.allow_mismatch;
    }
    validate(spec);
    return spec;
}

void emit(const GlobalOptions& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + g.out);
    f << text;
}

bool as_json(const GlobalOptions& g) { return g.format == "json"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relative phase distributions and Fisher information of two-mode photon states"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--tol", g.tol, "quadrature tolerance, scaled by max(1, F_LSS)")->check(CLI::PositiveNumber);
    app.add_option("--jobs", g.jobs, "worker threads for sweeps")->check(CLI::Range(1, 1024));
    app.add_option("--out", g.out, "output file (directory for compare-all)");

    StateOptions st_state, st_dist, st_fisher;

    auto* cmd_state = app.add_subcommand("state", "print the Fock amplitudes of a state");
    add_state_flags(cmd_state, st_state);

    auto* cmd_dist = app.add_subcommand("dist", "sample P(phi) on a uniform grid over [-pi, pi)");
    add_state_flags(cmd_dist, st_dist);
    int m_points = 1024;
    bool with_dp = false;
    cmd_dist->add_option("-m,--points", m_points, "grid points")->check(CLI::Range(2, 1 << 24));
    cmd_dist->add_flag("--with-dp", with_dp, "add the dP/dphi column");

    auto* cmd_fisher = app.add_subcommand("fisher", "compare F_Q with the Fisher information of P(phi)");
    add_state_flags(cmd_fisher, st_fisher);

    auto* cmd_sweep = app.add_subcommand("sweep", "fisher comparison over a range of photon numbers");
    std::string sweep_family, sweep_regime = "optimal";
    std::optional<int> n_min, n_max, step;
    bool with_reference = false;
    cmd_sweep->add_option("--family", sweep_family, "state family")->required();
    cmd_sweep->add_option("--regime", sweep_regime, "squeezing regime for sq-coh")->check(CLI::IsMember({"optimal", "sqrt"}));
    cmd_sweep->add_option("--n-min", n_min, "first photon number");
    cmd_sweep->add_option("--n-max", n_max, "last photon number");
    cmd_sweep->add_option("--step", step, "photon number step")->check(CLI::PositiveNumber);
    cmd_sweep->add_flag("--reference", with_reference, "add the family's reference curve column");

    auto* cmd_compare = app.add_subcommand("compare-all", "sweep every family and summarize");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalidArgs;
    }

    try {
        if (*cmd_state) {
            const auto state = build_state<double>(to_spec(st_state));
            emit(g, as_json(g) ? state_to_json(state).dump(2) + "\n" : state_to_csv(state));
        } else if (*cmd_dist) {
            const auto state = build_state<double>(to_spec(st_dist));
            const auto grid = sample_grid(state, m_points);
            emit(g, as_json(g) ? grid_to_json(grid, with_dp).dump(2) + "\n" : grid_to_csv(grid, with_dp));
        } else if (*cmd_fisher) {
            const auto report = fisher_report(to_spec(st_fisher), g.tol.value_or(kDefaultFisherTolerance));
            emit(g, as_json(g) ? report_to_json(report).dump(2) + "\n"
                               : std::string(kReportCsvHeader) + "\n" + report_to_csv_row(report) + "\n");
        } else if (*cmd_sweep) {
            const Family family = resolve_family(sweep_family, sweep_regime);
            SweepRange range = default_sweep_range(family);
            if (n_min) range.n_min = *n_min;
            if (n_max) range.n_max = *n_max;
            if (step) range.step = *step;
            const auto table = run_sweep(family, range, g.tol.value_or(kSweepFisherTolerance), g.jobs);
            emit(g, as_json(g) ? sweep_to_json(table, with_reference) : sweep_to_csv(table, with_reference));
            for (const auto& r : table.rows)
                if (!r.ok) std::cerr << "N=" << r.n << " failed: " << r.error << '\n';
            std::cerr << "mean_rel_diff_percent=" << format_number(table.mean_rel_diff_percent()) << '\n';
            if (!table.complete()) return kPartialSweep;
        } else if (*cmd_compare) {
            std::optional<std::filesystem::path> dir;
            if (!g.out.empty()) dir = g.out;
            const auto rows = compare_all(g.tol.value_or(kSweepFisherTolerance), g.jobs,
                                          as_json(g) ? OutputFormat::Json : OutputFormat::Csv, dir);
            std::cout << (as_json(g) ? compare_to_json(rows) : compare_to_csv(rows));
            bool partial = false;
            for (const auto& r : rows)
                if (!r.complete) {
                    partial = true;
                    std::cerr << family_name(r.family) << ": sweep incomplete\n";
                }
            if (partial) return kPartialSweep;
        }
    } catch (const NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n  worst panel [" << format_number(e.worst_lower()) << ", "
                  << format_number(e.worst_upper()) << "] error estimate " << format_number(e.worst_error()) << '\n';
        return kNonConvergence;
    } catch (const QuadratureError& e) {
        std::cerr << "error: " << e.what() << " at phi=" << format_number(e.node()) << '\n';
        return kNonConvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidArgs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidArgs;
    }
    return kOk;
}
