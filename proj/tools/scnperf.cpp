// scnperf: coverage probability, ASE and Monte Carlo for small-cell networks
// with NLOS/LOS path loss. Settings come from defaults, then --config, then
// SCNPERF_* environment variables, then flags.
//
// Exit status: 0 success, 2 bad configuration, 3 numerical failure, 4 I/O.
// Failures print one line `scnperf: error kind=<k> code=<n> ... message="..."`.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "scnperf/commands.hpp"

namespace {

struct Flags {
    std::string config;
    std::string lambda;
    double threshold_db = 0.0;
    bool sir = false;
    std::string fading_nlos;
    std::string fading_los;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::size_t ng = 0;
    double tol = 0.0;
    unsigned threads = 0;
    std::string dump;
    std::string t_grid;
    std::string path = "closed";
};

std::string quoted(const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') q += '\\';
        q += (c == '\n' ? ' ' : c);
    }
    return q + "\"";
}

int report(const char* kind, int code, const std::string& message, const std::string& extra = {}) {
    std::cerr << "scnperf: error kind=" << kind << " code=" << code << extra << " message=" << quoted(message) << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coverage probability and area spectral efficiency of small-cell networks with NLOS/LOS links"};
    app.set_version_flag("--version", std::string(scnperf::kVersion));
    app.require_subcommand(1);

    Flags f;
    struct Given {
        CLI::Option* lambda = nullptr;
        CLI::Option* threshold = nullptr;
        CLI::Option* sir = nullptr;
        CLI::Option* fading_nlos = nullptr;
        CLI::Option* fading_los = nullptr;
        CLI::Option* trials = nullptr;
        CLI::Option* seed = nullptr;
        CLI::Option* ng = nullptr;
        CLI::Option* tol = nullptr;
    };
    std::vector<std::pair<CLI::App*, Given>> subs;

    const std::vector<std::pair<std::string, std::string>> descriptions = {
        {"coverage", "analytic coverage probability per intensity"},
        {"ase", "analytic area spectral efficiency per intensity"},
        {"simulate", "Monte Carlo coverage and ASE per intensity"},
        {"intensity-dump", "intensity measures and densities of the displaced processes"},
        {"reproduce-fig1", "coverage vs intensity for three fading pairings, analytic and Monte Carlo"},
        {"reproduce-fig3", "ASE vs intensity for three fading pairings"}};
    for (const auto& [name, what] : descriptions) {
        CLI::App* sub = app.add_subcommand(name, what);
        Given g;
        sub->add_option("--config", f.config, "key = value settings file");
        g.lambda = sub->add_option("--lambda-per-km2", f.lambda, "intensity v or log sweep start:stop:pts (BSs/km^2)");
        g.threshold = sub->add_option("--threshold-db", f.threshold_db, "SINR threshold (dB)");
        g.sir = sub->add_flag("--sir", f.sir, "drop thermal noise (SIR)");
        g.fading_nlos = sub->add_option("--fading-nlos", f.fading_nlos, "rayleigh | nakagami[:m] | rician[:K_dB]");
        g.fading_los = sub->add_option("--fading-los", f.fading_los, "rayleigh | nakagami[:m] | rician[:K_dB]");
        g.trials = sub->add_option("--trials", f.trials, "Monte Carlo trials");
        g.seed = sub->add_option("--seed", f.seed, "Monte Carlo root seed");
        sub->add_option("--out", f.out, "output CSV (default stdout)");
        g.ng = sub->add_option("--ng", f.ng, "Gauss-Chebyshev points N_G for the ASE");
        g.tol = sub->add_option("--tol", f.tol, "absolute tolerance of each coverage probability");
        sub->add_option("--threads", f.threads, "worker threads (default: all cores)");
        if (name == "simulate") sub->add_option("--dump", f.dump, "per-trial CSV file (single intensity only)");
        if (name == "intensity-dump") sub->add_option("--t", f.t_grid, "equivalent distance grid start:stop:pts (m)");
        if (name == "coverage" || name == "ase" || name == "intensity-dump") {
            sub->add_option("--intensity-path", f.path, "closed | general (numeric fading expectation)")
                ->check(CLI::IsMember({"closed", "general"}));
        }
        subs.emplace_back(sub, g);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return report("config", 2, e.what());
    }

    try {
        scnperf::CommandRequest req;
        const Given* given = nullptr;
        for (const auto& [sub, g] : subs) {
            if (sub->parsed()) {
                req.command = sub->get_name();
                given = &g;
            }
        }
        scnperf::RunSettings& s = req.settings;
        // Monte Carlo inside the figure sweep reaches 10^4 BSs/km^2
        if (req.command == "reproduce-fig1") s.trials = 2000;
        if (!f.config.empty()) scnperf::apply_config_file(s, f.config);
        scnperf::apply_environment(s);
        if (given->lambda->count()) {
            const auto sweep = scnperf::parse_sweep(f.lambda);
            // the figure commands always sweep, so a single value becomes a one-point grid there
            const bool figure = req.command.starts_with("reproduce-");
            if (sweep.size() == 1 && f.lambda.find(':') == std::string::npos && !figure) s.lambda_per_km2 = sweep.front();
            else req.lambdas_per_km2 = sweep;
        }
        if (given->threshold->count()) s.threshold_db = f.threshold_db;
        if (given->sir->count()) s.sir = true;
        if (given->fading_nlos->count()) s.fading_nlos = f.fading_nlos;
        if (given->fading_los->count()) s.fading_los = f.fading_los;
        if (given->trials->count()) s.trials = f.trials;
        if (given->seed->count()) s.seed = f.seed;
        if (given->ng->count()) s.ng = f.ng;
        if (given->tol->count()) s.tol = f.tol;
        if (!f.t_grid.empty()) req.t_grid_m = scnperf::parse_sweep(f.t_grid);
        req.path = f.path == "general" ? scnperf::IntensityPath::numeric_general : scnperf::IntensityPath::closed_form;
        req.threads = f.threads > 0 ? f.threads : std::max(1u, std::thread::hardware_concurrency());
        req.dump_path = f.dump;

        std::ostringstream buffer;
        scnperf::run_command(req, buffer);
        if (f.out.empty()) {
            std::cout << buffer.str();
            std::cout.flush();
            if (!std::cout) throw scnperf::IoError("cannot write to stdout");
        } else {
            std::ofstream os(f.out, std::ios::binary);
            if (!os) throw scnperf::IoError("cannot open '" + f.out + "' for writing");
            os << buffer.str();
            os.close();
            if (!os) throw scnperf::IoError("write to '" + f.out + "' failed");
        }
        return 0;
    } catch (const scnperf::ConfigError& e) {
        return report("config", 2, e.what());
    } catch (const scnperf::DomainError& e) {
        return report("config", 2, e.what());
    } catch (const scnperf::NumericalError& e) {
        std::ostringstream extra;
        extra.precision(6);
        extra << " partial=" << e.partial_result() << " achieved_error=" << e.achieved_error();
        return report("numerical", 3, e.what(), extra.str());
    } catch (const scnperf::IoError& e) {
        return report("io", 4, e.what());
    } catch (const std::exception& e) {
        return report("internal", 1, e.what());
    }
}
