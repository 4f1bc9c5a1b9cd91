#pragma once

// The command-line workflows as library calls: each writes one CSV table to
// a stream. Sweep points run on a worker pool; rows come out in input order.

#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "scnperf/ase.hpp"
#include "scnperf/config.hpp"
#include "scnperf/coverage.hpp"
#include "scnperf/csv.hpp"
#include "scnperf/errors.hpp"
#include "scnperf/intensity.hpp"
#include "scnperf/parallel.hpp"
#include "scnperf/sim.hpp"

namespace scnperf {

struct CommandRequest {
    std::string command;  // coverage, ase, simulate, intensity-dump, reproduce-fig1, reproduce-fig3
    RunSettings settings;
    std::vector<double> lambdas_per_km2;  // empty: settings.lambda_per_km2, or the figure grid
    std::vector<double> t_grid_m;         // intensity-dump abscissae; empty: 1:1e5:51
    IntensityPath path = IntensityPath::closed_form;
    unsigned threads = 1;
    std::string dump_path;  // simulate: per-trial CSV
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"coverage",       "ase",           "simulate",
                                                   "intensity-dump", "reproduce-fig1", "reproduce-fig3"};
    return names;
}

/// λ grid of the figure reproductions: [0.1, 10^4] BSs/km^2, 20 points per decade.
inline std::vector<double> figure_lambda_grid() { return log_grid(0.1, 1e4, 20); }

namespace detail {

inline std::vector<double> lambdas_or(const CommandRequest& r, std::vector<double> fallback) {
    return r.lambdas_per_km2.empty() ? fallback : r.lambdas_per_km2;
}

inline CoverageOptions coverage_options(const CommandRequest& r) {
    CoverageOptions opt;
    opt.abs_tol = r.settings.tol;
    opt.path = r.path;
    return opt;
}

inline void run_coverage(const CommandRequest& r, CsvWriter& csv) {
    const auto lambdas = lambdas_or(r, {r.settings.lambda_per_km2});
    const double t_lin = units::db_to_linear(r.settings.threshold_db);
    csv.header({"lambda_per_km2", "threshold_db", "pc_nlos", "pc_los", "pc_total", "err_est"});
    const auto res = parallel_map(lambdas.size(), r.threads, [&](std::size_t i) {
        const double t[] = {t_lin};
        return coverage_curve(r.settings.network(lambdas[i]), t, coverage_options(r)).front();
    });
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        csv.row({lambdas[i], r.settings.threshold_db, res[i].p_nlos_branch, res[i].p_los_branch, res[i].p_total,
                 res[i].error_estimate});
    }
}

inline void run_ase(const CommandRequest& r, CsvWriter& csv) {
    const auto lambdas = lambdas_or(r, {r.settings.lambda_per_km2});
    const auto rule = gcq_nodes(r.settings.ng);
    csv.header({"lambda_per_km2", "n_g", "ase_bps_hz_km2", "err_est"});
    const auto res = parallel_map(lambdas.size(), r.threads, [&](std::size_t i) {
        return ase(r.settings.network(lambdas[i]), rule, coverage_options(r));
    });
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        csv.row({lambdas[i], static_cast<std::int64_t>(r.settings.ng), res[i].ase_per_km2, res[i].error_estimate});
    }
}

inline SimConfig sim_config(const CommandRequest& r, double lambda_km2) {
    SimConfig sc;
    sc.cfg = r.settings.network(lambda_km2);
    sc.n_trials = r.settings.trials;
    sc.root_seed = r.settings.seed;
    return sc;
}

inline void write_trial_dump(const std::string& path, std::span<const TrialOutcome> trials) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write trial dump '" + path + "'");
    os << "trial,n_bs,serving_link,serving_power_w,interference_w,sinr\n";
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        // a trial without BSs has SINR 0 and no serving link
        os << i << ',' << t.n_bs << ',' << (t.serving_link ? to_string(*t.serving_link) : "none") << ','
           << format_number(t.serving_power_w) << ',' << format_number(t.interference_w) << ','
           << (std::isfinite(t.sinr) ? format_number(t.sinr) : "inf") << '\n';
    }
    if (!os) throw IoError("write failed for trial dump '" + path + "'");
}

inline void run_simulate(const CommandRequest& r, CsvWriter& csv) {
    const auto lambdas = lambdas_or(r, {r.settings.lambda_per_km2});
    require_config(r.dump_path.empty() || lambdas.size() == 1, "--dump needs a single intensity");
    const double t_lin = units::db_to_linear(r.settings.threshold_db);
    csv.header({"lambda_per_km2", "threshold_db", "trials", "seed", "pc_mc", "pc_ci_low", "pc_ci_high", "pc_nlos_mc",
                "pc_los_mc", "ase_mc", "ase_ci_low", "ase_ci_high"});
    for (double lam : lambdas) {
        const auto sc = sim_config(r, lam);
        const auto trials = run_trials(sc, r.threads);
        if (!r.dump_path.empty()) write_trial_dump(r.dump_path, trials);
        const auto cov = estimate_coverage(trials, t_lin);
        const auto a = estimate_ase(trials, sc.cfg.bs_intensity());
        csv.row({lam, r.settings.threshold_db, static_cast<std::int64_t>(sc.n_trials), std::to_string(sc.root_seed),
                 cov.total.estimate, cov.total.low, cov.total.high, cov.nlos_branch.estimate, cov.los_branch.estimate,
                 a.estimate, a.low, a.high});
    }
}

inline void run_intensity_dump(const CommandRequest& r, CsvWriter& csv) {
    const auto grid = r.t_grid_m.empty() ? parse_sweep("1:100000:51") : r.t_grid_m;
    const auto fns = make_intensity_fns(r.settings.network(), r.path);
    csv.header({"t_m", "measure_nlos", "density_nlos", "measure_los", "density_los"});
    for (double t : grid) {
        csv.row({t, fns.nlos.measure(t), fns.nlos.density(t), fns.los.measure(t), fns.los.density(t)});
    }
}

inline void run_reproduce_fig1(const CommandRequest& r, CsvWriter& csv) {
    const auto lambdas = lambdas_or(r, figure_lambda_grid());
    const auto pairings = standard_pairings();
    const double t_lin = units::db_to_linear(r.settings.threshold_db);
    csv.header({"lambda_per_km2", "pairing", "pc_analytic", "err_est", "pc_mc", "mc_ci_low", "mc_ci_high"});
    const std::size_t n = lambdas.size() * pairings.size();
    auto settings_for = [&](std::size_t k) {
        RunSettings s = r.settings;
        s.fading_nlos = pairings[k % pairings.size()].nlos;
        s.fading_los = pairings[k % pairings.size()].los;
        return s;
    };
    const auto analytic = parallel_map(n, r.threads, [&](std::size_t k) {
        const double t[] = {t_lin};
        return coverage_curve(settings_for(k).network(lambdas[k / pairings.size()]), t, coverage_options(r)).front();
    });
    for (std::size_t k = 0; k < n; ++k) {
        CommandRequest sub = r;
        sub.settings = settings_for(k);
        const auto trials = run_trials(sim_config(sub, lambdas[k / pairings.size()]), r.threads);
        const auto mc = estimate_coverage(trials, t_lin);
        csv.row({lambdas[k / pairings.size()], pairings[k % pairings.size()].name, analytic[k].p_total,
                 analytic[k].error_estimate, mc.total.estimate, mc.total.low, mc.total.high});
    }
}

inline void run_reproduce_fig3(const CommandRequest& r, CsvWriter& csv) {
    const auto lambdas = lambdas_or(r, figure_lambda_grid());
    const auto pairings = standard_pairings();
    const auto rule = gcq_nodes(r.settings.ng);
    csv.header({"lambda_per_km2", "pairing", "ase_bps_hz_km2", "err_est"});
    const std::size_t n = lambdas.size() * pairings.size();
    const auto res = parallel_map(n, r.threads, [&](std::size_t k) {
        RunSettings s = r.settings;
        s.fading_nlos = pairings[k % pairings.size()].nlos;
        s.fading_los = pairings[k % pairings.size()].los;
        return ase(s.network(lambdas[k / pairings.size()]), rule, coverage_options(r));
    });
    for (std::size_t k = 0; k < n; ++k) {
        csv.row({lambdas[k / pairings.size()], pairings[k % pairings.size()].name, res[k].ase_per_km2,
                 res[k].error_estimate});
    }
}

}  // namespace detail

/// Runs one command and writes its CSV (meta line, header, rows) to `out`.
inline void run_command(const CommandRequest& r, std::ostream& out) {
    r.settings.validate();
    std::string extra = "intensity_path=" + std::string(to_string(r.path));
    if (!r.lambdas_per_km2.empty()) {
        extra += ";lambda_sweep=";
        for (std::size_t i = 0; i < r.lambdas_per_km2.size(); ++i) {
            extra += (i ? " " : "") + format_number(r.lambdas_per_km2[i]);
        }
    }
    CsvWriter csv(out, r.command, r.settings, extra);
    if (r.command == "coverage") detail::run_coverage(r, csv);
    else if (r.command == "ase") detail::run_ase(r, csv);
    else if (r.command == "simulate") detail::run_simulate(r, csv);
    else if (r.command == "intensity-dump") detail::run_intensity_dump(r, csv);
    else if (r.command == "reproduce-fig1") detail::run_reproduce_fig1(r, csv);
    else if (r.command == "reproduce-fig3") detail::run_reproduce_fig3(r, csv);
    else throw ConfigError("unknown command '" + r.command + "'");
}

}  // namespace scnperf
