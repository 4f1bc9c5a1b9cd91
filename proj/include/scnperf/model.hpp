#pragma once

// Physical parameters and the deterministic part of the propagation model.
// Everything inside the library is SI: watts, meters, BSs per square meter.
// dBm / dB / per-km^2 conversions live here and are only applied at the
// config and CLI boundary.

#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <string_view>

#include "scnperf/errors.hpp"
#include "scnperf/fading.hpp"

namespace scnperf {

enum class LinkType { nlos, los };

inline constexpr std::array<LinkType, 2> kLinkTypes{LinkType::nlos, LinkType::los};

constexpr LinkType other(LinkType link) { return link == LinkType::nlos ? LinkType::los : LinkType::nlos; }

constexpr std::size_t index_of(LinkType link) { return link == LinkType::nlos ? 0 : 1; }

constexpr std::string_view to_string(LinkType link) { return link == LinkType::nlos ? "nlos" : "los"; }

namespace units {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }
inline double per_km2_to_per_m2(double per_km2) { return per_km2 * 1e-6; }
inline double per_m2_to_per_km2(double per_m2) { return per_m2 * 1e6; }

}  // namespace units

/// LOS probability profile p^L(r). Only the step model ships; the concept is
/// the seam for other profiles.
template <class P>
concept LosProfile = requires(const P& p, double r, LinkType link) {
    { p.los_probability(r) } -> std::convertible_to<double>;
    { p.area_within(link, r) } -> std::convertible_to<double>;
};

/// p^L(r) = 1 on (0, d], 0 beyond.
class StepLosProfile {
public:
    explicit StepLosProfile(double cutoff_m) : cutoff_(cutoff_m) {
        detail::require_config(cutoff_m >= 0.0 && !std::isnan(cutoff_m), "LOS cutoff distance must be >= 0");
    }

    double cutoff() const { return cutoff_; }

    double los_probability(double r) const {
        detail::require_domain(r >= 0.0, "los_probability: distance must be >= 0");
        return r <= cutoff_ ? 1.0 : 0.0;
    }

    double nlos_probability(double r) const { return 1.0 - los_probability(r); }

    double probability(LinkType link, double r) const {
        return link == LinkType::los ? los_probability(r) : nlos_probability(r);
    }

    /// 2π ∫_0^R p^U(r) r dr: area of the disc of radius R weighted by the link probability.
    double area_within(LinkType link, double radius) const {
        detail::require_domain(radius >= 0.0, "area_within: radius must be >= 0");
        constexpr double pi = 3.14159265358979323846;
        const double los_r = std::min(radius, cutoff_);
        if (link == LinkType::los) return pi * los_r * los_r;
        if (radius <= cutoff_) return 0.0;
        return pi * (radius - cutoff_) * (radius + cutoff_);
    }

private:
    double cutoff_;
};

static_assert(LosProfile<StepLosProfile>);

struct NetworkParams {
    double tx_power_w = 0.0;
    double a_nlos = 0.0;
    double a_los = 0.0;
    double alpha_nlos = 0.0;
    double alpha_los = 0.0;
    double noise_power_w = 0.0;
    double los_cutoff_m = 0.0;
    double bs_intensity_per_m2 = 0.0;
    FadingModel fading_nlos = FadingModel::rayleigh();
    FadingModel fading_los = FadingModel::rayleigh();
};

/// Validated, immutable parameter set. Modify through the with_* helpers,
/// which return a new validated copy.
class NetworkConfig {
public:
    explicit NetworkConfig(const NetworkParams& p) : p_(p) { validate(); }

    /// Dense urban small-cell parameter set: P_t = 24 dBm, A^NL = 10^-3.29,
    /// A^L = 10^-4.14, alpha^NL = 3.75, alpha^L = 2.09, eta = -95 dBm, d = 250 m.
    /// Intensity defaults to 10 BSs/km^2 and both links to Rayleigh fading.
    static NetworkConfig reference() {
        NetworkParams p;
        p.tx_power_w = units::dbm_to_watts(24.0);
        p.a_nlos = std::pow(10.0, -3.29);
        p.a_los = std::pow(10.0, -4.14);
        p.alpha_nlos = 3.75;
        p.alpha_los = 2.09;
        p.noise_power_w = units::dbm_to_watts(-95.0);
        p.los_cutoff_m = 250.0;
        p.bs_intensity_per_m2 = units::per_km2_to_per_m2(10.0);
        return NetworkConfig(p);
    }

    const NetworkParams& params() const { return p_; }

    double tx_power() const { return p_.tx_power_w; }
    double noise_power() const { return p_.noise_power_w; }
    double los_cutoff() const { return p_.los_cutoff_m; }
    double bs_intensity() const { return p_.bs_intensity_per_m2; }

    double intercept(LinkType link) const { return link == LinkType::los ? p_.a_los : p_.a_nlos; }
    double exponent(LinkType link) const { return link == LinkType::los ? p_.alpha_los : p_.alpha_nlos; }
    /// B^U = P_t A^U.
    double gain_constant(LinkType link) const { return p_.tx_power_w * intercept(link); }
    const FadingModel& fading(LinkType link) const { return link == LinkType::los ? p_.fading_los : p_.fading_nlos; }

    StepLosProfile los_profile() const { return StepLosProfile(p_.los_cutoff_m); }

    NetworkConfig with_intensity(double per_m2) const {
        auto p = p_;
        p.bs_intensity_per_m2 = per_m2;
        return NetworkConfig(p);
    }
    NetworkConfig with_noise(double watts) const {
        auto p = p_;
        p.noise_power_w = watts;
        return NetworkConfig(p);
    }
    NetworkConfig with_fading(const FadingModel& nlos, const FadingModel& los) const {
        auto p = p_;
        p.fading_nlos = nlos;
        p.fading_los = los;
        return NetworkConfig(p);
    }
    NetworkConfig with_cutoff(double meters) const {
        auto p = p_;
        p.los_cutoff_m = meters;
        return NetworkConfig(p);
    }
    NetworkConfig with_exponents(double alpha_nlos, double alpha_los) const {
        auto p = p_;
        p.alpha_nlos = alpha_nlos;
        p.alpha_los = alpha_los;
        return NetworkConfig(p);
    }

private:
    void validate() const {
        auto finite_positive = [](double v) { return std::isfinite(v) && v > 0.0; };
        detail::require_config(finite_positive(p_.tx_power_w), "tx_power must be > 0");
        detail::require_config(finite_positive(p_.a_nlos) && finite_positive(p_.a_los),
                               "path-loss intercepts must be > 0");
        detail::require_config(std::isfinite(p_.alpha_nlos) && p_.alpha_nlos > 2.0,
                               "alpha_nlos must be > 2 (finite interference)");
        detail::require_config(std::isfinite(p_.alpha_los) && p_.alpha_los > 2.0,
                               "alpha_los must be > 2 (finite interference)");
        detail::require_config(std::isfinite(p_.noise_power_w) && p_.noise_power_w >= 0.0,
                               "noise_power must be >= 0");
        detail::require_config(std::isfinite(p_.los_cutoff_m) && p_.los_cutoff_m >= 0.0,
                               "LOS cutoff distance must be >= 0");
        detail::require_config(finite_positive(p_.bs_intensity_per_m2), "BS intensity must be > 0");
    }

    NetworkParams p_;
};

inline double los_probability(const NetworkConfig& cfg, double r) { return cfg.los_profile().los_probability(r); }

inline double nlos_probability(const NetworkConfig& cfg, double r) { return cfg.los_profile().nlos_probability(r); }

/// Deterministic factor B^U r^{-alpha^U}.
inline double path_gain(const NetworkConfig& cfg, LinkType link, double r) {
    detail::require_domain(r > 0.0 && !std::isnan(r), "path_gain: distance must be > 0");
    return cfg.gain_constant(link) * std::pow(r, -cfg.exponent(link));
}

/// P = B^U h r^{-alpha^U}.
inline double received_power(const NetworkConfig& cfg, LinkType link, double r, double h) {
    detail::require_domain(h >= 0.0, "received_power: fading gain must be >= 0");
    return h * path_gain(cfg, link, r);
}

inline double sinr(double serving_power, double interference_sum, double noise) {
    detail::require_domain(serving_power >= 0.0 && interference_sum >= 0.0 && noise >= 0.0,
                           "sinr: powers must be >= 0");
    const double denom = interference_sum + noise;
    detail::require_domain(denom > 0.0, "sinr: interference plus noise is zero");
    return serving_power / denom;
}

}  // namespace scnperf
