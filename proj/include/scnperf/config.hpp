#pragma once

// Run settings in boundary units (dBm, dB, BSs/km^2) and their sources:
// built-in defaults, a flat `key = value` file, then SCNPERF_<KEY>
// environment variables. Command-line flags are applied last by the tool.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scnperf/ase.hpp"
#include "scnperf/errors.hpp"
#include "scnperf/fading.hpp"
#include "scnperf/model.hpp"

namespace scnperf {

inline constexpr std::string_view kVersion = "scnperf 1.0.0";

/// Shortest %g text that reads back as exactly `v`.
inline std::string format_number(double v) {
    detail::require_domain(std::isfinite(v), "non-finite number in output");
    char buf[32];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

struct RunSettings {
    double tx_power_dbm = 24.0;
    double noise_dbm = -95.0;
    double d_m = 250.0;
    double lambda_per_km2 = 10.0;
    double alpha_nlos = 3.75;
    double alpha_los = 2.09;
    double a_nlos_log10 = -3.29;
    double a_los_log10 = -4.14;
    std::string fading_nlos = "rayleigh";
    std::string fading_los = "rayleigh";
    double nakagami_m = 1.0;
    double rician_k_db = 15.0;
    bool sir = false;  // drop the noise term
    double threshold_db = 0.0;
    std::size_t trials = 20000;
    std::uint64_t seed = 1;
    std::size_t ng = kDefaultGcqPoints;
    double tol = 1e-3;

    static const std::vector<std::string>& keys() {
        static const std::vector<std::string> k = {
            "tx_power_dbm", "noise_dbm",  "d_m",        "lambda_per_km2", "alpha_nlos", "alpha_los",
            "a_nlos_log10", "a_los_log10", "fading_nlos", "fading_los",     "nakagami_m", "rician_k_db",
            "sir",          "threshold_db", "trials",     "seed",           "ng",         "tol"};
        return k;
    }

    /// Resolves a fading spelling. A bare `nakagami` or `rician` takes its
    /// parameter from nakagami_m / rician_k_db.
    FadingModel resolve_fading(const std::string& text) const {
        if (text == "nakagami") return FadingModel::nakagami(nakagami_m);
        if (text == "rician") return FadingModel::rician_db(rician_k_db);
        return FadingModel::parse(text);
    }

    NetworkConfig network(double lambda_km2) const {
        NetworkParams p;
        p.tx_power_w = units::dbm_to_watts(tx_power_dbm);
        p.a_nlos = std::pow(10.0, a_nlos_log10);
        p.a_los = std::pow(10.0, a_los_log10);
        p.alpha_nlos = alpha_nlos;
        p.alpha_los = alpha_los;
        p.noise_power_w = sir ? 0.0 : units::dbm_to_watts(noise_dbm);
        p.los_cutoff_m = d_m;
        p.bs_intensity_per_m2 = units::per_km2_to_per_m2(lambda_km2);
        p.fading_nlos = resolve_fading(fading_nlos);
        p.fading_los = resolve_fading(fading_los);
        return NetworkConfig(p);
    }

    NetworkConfig network() const { return network(lambda_per_km2); }

    /// One `key=value` list in key order, used for CSV metadata.
    std::string describe() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& k : keys()) {
            os << (first ? "" : ";") << k << '=' << get(k);
            first = false;
        }
        return os.str();
    }

    std::string get(const std::string& key) const {
        std::ostringstream os;
        auto num = [](double v) { return format_number(v); };
        if (key == "tx_power_dbm") os << num(tx_power_dbm);
        else if (key == "noise_dbm") os << num(noise_dbm);
        else if (key == "d_m") os << num(d_m);
        else if (key == "lambda_per_km2") os << num(lambda_per_km2);
        else if (key == "alpha_nlos") os << num(alpha_nlos);
        else if (key == "alpha_los") os << num(alpha_los);
        else if (key == "a_nlos_log10") os << num(a_nlos_log10);
        else if (key == "a_los_log10") os << num(a_los_log10);
        else if (key == "fading_nlos") os << fading_nlos;
        else if (key == "fading_los") os << fading_los;
        else if (key == "nakagami_m") os << num(nakagami_m);
        else if (key == "rician_k_db") os << num(rician_k_db);
        else if (key == "sir") os << (sir ? "true" : "false");
        else if (key == "threshold_db") os << num(threshold_db);
        else if (key == "trials") os << trials;
        else if (key == "seed") os << seed;
        else if (key == "ng") os << ng;
        else if (key == "tol") os << num(tol);
        else throw ConfigError("unknown setting '" + key + "'");
        return os.str();
    }

    /// Sets one key from text; `source` names the origin in error messages.
    void set(const std::string& key, const std::string& value, const std::string& source) {
        auto fail = [&](const std::string& why) {
            throw ConfigError(source + ": " + key + " = '" + value + "': " + why);
        };
        auto number = [&]() {
            try {
                std::size_t used = 0;
                const double v = std::stod(value, &used);
                if (used != value.size() || !std::isfinite(v)) fail("not a finite number");
                return v;
            } catch (const std::logic_error&) {
                fail("not a number");
            }
            return 0.0;
        };
        auto count = [&]() -> std::uint64_t {
            if (value.empty() || !std::all_of(value.begin(), value.end(), [](unsigned char c) { return std::isdigit(c); })) {
                fail("not a nonnegative integer");
            }
            try {
                return std::stoull(value);
            } catch (const std::logic_error&) {
                fail("integer out of range");
            }
            return 0;
        };
        if (key == "tx_power_dbm") tx_power_dbm = number();
        else if (key == "noise_dbm") noise_dbm = number();
        else if (key == "d_m") d_m = number();
        else if (key == "lambda_per_km2") lambda_per_km2 = number();
        else if (key == "alpha_nlos") alpha_nlos = number();
        else if (key == "alpha_los") alpha_los = number();
        else if (key == "a_nlos_log10") a_nlos_log10 = number();
        else if (key == "a_los_log10") a_los_log10 = number();
        else if (key == "fading_nlos") fading_nlos = value;
        else if (key == "fading_los") fading_los = value;
        else if (key == "nakagami_m") nakagami_m = number();
        else if (key == "rician_k_db") rician_k_db = number();
        else if (key == "sir") {
            if (value == "true" || value == "1") sir = true;
            else if (value == "false" || value == "0") sir = false;
            else fail("expected true or false");
        } else if (key == "threshold_db") threshold_db = number();
        else if (key == "trials") trials = count();
        else if (key == "seed") seed = count();
        else if (key == "ng") ng = count();
        else if (key == "tol") tol = number();
        else throw ConfigError(source + ": unknown setting '" + key + "'");
    }

    /// Checks everything a run needs, including the derived NetworkConfig.
    void validate() const {
        detail::require_config(trials >= 1, "trials must be >= 1");
        detail::require_config(ng >= 1, "ng must be >= 1");
        detail::require_config(tol > 0.0 && tol < 1.0, "tol must be in (0, 1)");
        (void)network();
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Applies `key = value` lines; `#` starts a comment.
inline void apply_config_stream(RunSettings& s, std::istream& in, const std::string& source) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = source + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        s.set(detail::trim(std::string_view(body).substr(0, eq)), detail::trim(std::string_view(body).substr(eq + 1)),
              where);
    }
}

inline void apply_config_file(RunSettings& s, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    apply_config_stream(s, in, path);
}

/// SCNPERF_<KEY> for every known key, looked up through `getenv`.
inline void apply_environment(RunSettings& s,
                              const std::function<const char*(const char*)>& getenv = [](const char* n) {
                                  return std::getenv(n);
                              }) {
    for (const auto& key : RunSettings::keys()) {
        std::string name = "SCNPERF_" + key;
        std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
        if (const char* v = getenv(name.c_str())) s.set(key, detail::trim(v), "environment " + name);
    }
}

/// `v` or `start:stop:pts` (points spaced logarithmically, both ends included).
inline std::vector<double> parse_sweep(const std::string& text) {
    auto num = [&](const std::string& t) {
        try {
            std::size_t used = 0;
            const double v = std::stod(t, &used);
            if (used == t.size() && std::isfinite(v)) return v;
        } catch (const std::logic_error&) {
        }
        throw ConfigError("bad sweep '" + text + "' (expected v or start:stop:pts)");
    };
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(detail::trim(p));
    if (parts.size() == 1) {
        const double v = num(parts[0]);
        detail::require_config(v > 0.0, "sweep values must be > 0");
        return {v};
    }
    if (parts.size() != 3) throw ConfigError("bad sweep '" + text + "' (expected v or start:stop:pts)");
    const double a = num(parts[0]);
    const double b = num(parts[1]);
    const double n = num(parts[2]);
    detail::require_config(a > 0.0 && b > 0.0, "sweep endpoints must be > 0");
    detail::require_config(n >= 1.0 && n == std::floor(n) && n <= 1e6, "sweep point count must be a positive integer");
    const auto pts = static_cast<std::size_t>(n);
    if (pts == 1) return {a};
    std::vector<double> out(pts);
    const double la = std::log10(a);
    const double lb = std::log10(b);
    for (std::size_t i = 0; i < pts; ++i) {
        out[i] = std::pow(10.0, la + (lb - la) * static_cast<double>(i) / static_cast<double>(pts - 1));
    }
    out.front() = a;
    out.back() = b;
    return out;
}

/// Logarithmic grid with `per_decade` points per decade from lo to hi.
inline std::vector<double> log_grid(double lo, double hi, std::size_t per_decade) {
    detail::require_config(lo > 0.0 && hi >= lo && per_decade >= 1, "log_grid: bad range");
    const auto pts = static_cast<std::size_t>(std::llround(std::log10(hi / lo) * static_cast<double>(per_decade))) + 1;
    return parse_sweep(std::to_string(lo) + ":" + std::to_string(hi) + ":" + std::to_string(pts));
}

/// Fading pairing (NLOS, LOS) under a display name.
struct FadingPairing {
    std::string name;
    std::string nlos;
    std::string los;
};

/// Rayleigh/Rayleigh; Nakagami m^NL = 1 with m^L matched to Rician 15 dB;
/// Rayleigh + Rician 15 dB.
inline std::vector<FadingPairing> standard_pairings() {
    const std::string m_los = format_number(rician_to_nakagami_m(units::db_to_linear(15.0)));
    return {{"rayleigh_rayleigh", "rayleigh", "rayleigh"},
            {"nakagami_nakagami", "nakagami:1", "nakagami:" + m_los},
            {"rayleigh_rician15db", "rayleigh", "rician:15"}};
}

}  // namespace scnperf
