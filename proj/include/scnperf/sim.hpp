#pragma once

// Monte Carlo simulator: Poisson BS layouts on a disc around the typical
// user, step LOS classification, Gamma-law fading and strongest-received-
// power association. Every trial draws from its own generator seeded by
// (root_seed, trial_index), so results do not depend on scheduling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include <boost/math/distributions/poisson.hpp>

#include "scnperf/errors.hpp"
#include "scnperf/fading.hpp"
#include "scnperf/model.hpp"
#include "scnperf/quadrature.hpp"

namespace scnperf {

struct SimConfig {
    NetworkConfig cfg = NetworkConfig::reference();
    double disc_radius_m = 0.0;  // 0 selects default_disc_radius(cfg)
    std::size_t n_trials = 20000;
    std::uint64_t root_seed = 1;
    bool antithetic = false;  // pair trials 2k, 2k+1 with mirrored radial uniforms
    bool stratified = false;  // stratify the BS count over the trial index
};

struct TrialOutcome {
    std::size_t n_bs = 0;
    std::optional<LinkType> serving_link;
    double serving_power_w = 0.0;
    double interference_w = 0.0;
    double sinr = 0.0;
    std::size_t max_power_index = 0;
    std::size_t max_sinr_index = 0;
    /// Smallest equivalent distance P^{-1/alpha} per link type (inf if the type is absent).
    std::array<double, 2> min_equivalent_distance{std::numeric_limits<double>::infinity(),
                                                  std::numeric_limits<double>::infinity()};
    bool association_consistent = true;  // argmax SINR == argmax power (or equal powers)

    friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

namespace detail {

/// Mean interference per unit B-free power from BSs in the annulus [r0, r1]
/// of the given link: 2πλ B ∫ r^{1-alpha} dr.
inline double annulus_mean_interference(const NetworkConfig& cfg, LinkType link, double r0, double r1) {
    if (!(r1 > r0)) return 0.0;
    const double a = cfg.exponent(link);
    return 2.0 * std::numbers::pi * cfg.bs_intensity() * cfg.gain_constant(link) *
           (std::pow(r0, 2.0 - a) - std::pow(r1, 2.0 - a)) / (a - 2.0);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::mt19937_64 trial_stream(std::uint64_t root_seed, std::uint64_t trial_index) {
    const std::uint64_t a = splitmix64(root_seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(trial_index));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

/// Smallest k with Pr[N <= k] >= u for N ~ Poisson(mean).
inline std::size_t poisson_inverse_cdf(double mean, double u) {
    const boost::math::poisson_distribution<double> dist(mean);
    auto k = static_cast<std::size_t>(std::floor(mean));
    while (k > 0 && boost::math::cdf(dist, static_cast<double>(k - 1)) >= u) --k;
    while (boost::math::cdf(dist, static_cast<double>(k)) < u) ++k;
    return k;
}

}  // namespace detail

/// Starts from max(3000 m, 10/sqrt(λ)) and doubles until the mean
/// interference from beyond the disc is below 0.1% of the mean interference
/// from inside it (counted from the mean nearest-BS distance 1/sqrt(πλ)).
/// Beyond the LOS cutoff every BS is NLOS, so both means have closed forms.
inline double default_disc_radius(const NetworkConfig& cfg) {
    const double lambda = cfg.bs_intensity();
    const double d = cfg.los_cutoff();
    const double r_ref = 1.0 / std::sqrt(std::numbers::pi * lambda);
    double radius = std::max(3000.0, 10.0 / std::sqrt(lambda));
    for (int i = 0; i < 60; ++i) {
        const double outer = std::max(radius, d);
        const double excluded = detail::annulus_mean_interference(cfg, LinkType::nlos, outer,
                                                                  std::numeric_limits<double>::infinity());
        const double included =
            detail::annulus_mean_interference(cfg, LinkType::los, std::min(r_ref, d), std::min(d, radius)) +
            detail::annulus_mean_interference(cfg, LinkType::nlos, std::max(r_ref, d), radius);
        if (radius >= d && excluded < 1e-3 * included) return radius;
        radius *= 2.0;
    }
    throw NumericalError("default_disc_radius: truncation criterion not met", radius, 0.0);
}

inline double effective_disc_radius(const SimConfig& sc) {
    return sc.disc_radius_m > 0.0 ? sc.disc_radius_m : default_disc_radius(sc.cfg);
}

namespace detail {

inline TrialOutcome simulate_trial(const SimConfig& sc, double radius, std::size_t trial_index) {
    const NetworkConfig& cfg = sc.cfg;
    const bool mirrored = sc.antithetic && trial_index % 2 == 1;
    const std::size_t stream_index = sc.antithetic ? trial_index - trial_index % 2 : trial_index;
    auto rng = trial_stream(sc.root_seed, stream_index);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const double mean_count = std::numbers::pi * cfg.bs_intensity() * radius * radius;
    std::size_t n = 0;
    if (sc.stratified) {
        // the stratum is the trial's position among n_trials; the offset is drawn from the stream
        const double u = (static_cast<double>(trial_index) + unif(rng)) / static_cast<double>(sc.n_trials);
        n = poisson_inverse_cdf(mean_count, std::min(u, std::nextafter(1.0, 0.0)));
    } else {
        std::poisson_distribution<std::size_t> count(mean_count);
        n = count(rng);
    }

    TrialOutcome out;
    out.n_bs = n;
    if (n == 0) return out;

    const double d = cfg.los_cutoff();
    std::vector<double> power(n);
    std::vector<LinkType> links(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = 0.0;
        do {
            u = unif(rng);
        } while (u == 0.0);  // a BS exactly at the user is resampled
        if (mirrored) u = 1.0 - u;
        if (u == 0.0) u = std::numeric_limits<double>::min();
        const double r = radius * std::sqrt(u);
        const LinkType link = r <= d ? LinkType::los : LinkType::nlos;
        links[i] = link;
        const double h = sample_power_gain(cfg.fading(link), rng);
        power[i] = received_power(cfg, link, r, h);
        const double eq = std::pow(power[i], -1.0 / cfg.exponent(link));
        auto& slot = out.min_equivalent_distance[index_of(link)];
        slot = std::min(slot, eq);
        if (power[i] > power[out.max_power_index]) out.max_power_index = i;
    }
    const std::size_t s = out.max_power_index;
    double interference = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != s) interference += power[i];
    }
    const double total = interference + power[s];

    // the SINR-maximizing BS must be the power-maximizing one
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double si = power[i] / ((total - power[i]) + cfg.noise_power());
        if (si > best) {
            best = si;
            out.max_sinr_index = i;
        }
    }
    out.association_consistent =
        out.max_sinr_index == s || power[out.max_sinr_index] == power[s];

    out.serving_power_w = power[s];
    out.interference_w = interference;
    out.sinr = interference + cfg.noise_power() > 0.0 ? sinr(power[s], interference, cfg.noise_power())
                                                       : std::numeric_limits<double>::infinity();
    out.serving_link = links[s];
    return out;
}

}  // namespace detail

/// One realization; deterministic in (root_seed, trial_index).
inline TrialOutcome sample_realization(const SimConfig& sc, std::size_t trial_index) {
    detail::require_domain(sc.n_trials >= 1, "simulation: n_trials must be >= 1");
    return detail::simulate_trial(sc, effective_disc_radius(sc), trial_index);
}

/// All trials, stored by trial index. `threads` workers take interleaved
/// index blocks; the output is identical for any thread count.
inline std::vector<TrialOutcome> run_trials(const SimConfig& sc, unsigned threads = 1) {
    detail::require_domain(sc.n_trials >= 1, "simulation: n_trials must be >= 1");
    const double radius = effective_disc_radius(sc);
    std::vector<TrialOutcome> out(sc.n_trials);
    threads = std::max(1u, threads);
    constexpr std::size_t kBlock = 256;
    auto worker = [&](unsigned w) {
        for (std::size_t start = w * kBlock; start < sc.n_trials; start += threads * kBlock) {
            const std::size_t stop = std::min(sc.n_trials, start + kBlock);
            for (std::size_t i = start; i < stop; ++i) out[i] = detail::simulate_trial(sc, radius, i);
        }
    };
    if (threads == 1) {
        worker(0);
        return out;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    pool.clear();
    return out;
}

struct Interval {
    double estimate = 0.0;
    double low = 0.0;
    double high = 0.0;

    double half_width() const { return 0.5 * (high - low); }
};

inline constexpr double kZ95 = 1.959963984540054;

/// 95% Wilson score interval for k successes in n trials.
inline Interval wilson_interval(std::size_t k, std::size_t n) {
    detail::require_domain(n > 0 && k <= n, "wilson_interval: need 0 <= k <= n, n > 0");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct CoverageEstimate {
    Interval total;
    Interval nlos_branch;  // served by NLOS and covered
    Interval los_branch;   // served by LOS and covered
    std::size_t n_trials = 0;
};

inline CoverageEstimate estimate_coverage(std::span<const TrialOutcome> trials, double threshold) {
    detail::require_domain(threshold > 0.0, "estimate_coverage: T must be > 0");
    std::size_t k = 0;
    std::array<std::size_t, 2> k_branch{0, 0};
    for (const auto& t : trials) {
        if (t.n_bs > 0 && t.sinr > threshold) {
            ++k;
            ++k_branch[index_of(*t.serving_link)];
        }
    }
    CoverageEstimate e;
    e.n_trials = trials.size();
    e.total = wilson_interval(k, trials.size());
    e.nlos_branch = wilson_interval(k_branch[0], trials.size());
    e.los_branch = wilson_interval(k_branch[1], trials.size());
    return e;
}

inline CoverageEstimate estimate_coverage(const SimConfig& sc, double threshold, unsigned threads = 1) {
    const auto trials = run_trials(sc, threads);
    return estimate_coverage(trials, threshold);
}

/// λ E[log2(1 + SINR)] in bps/Hz/km^2 with a 95% CLT interval.
inline Interval estimate_ase(std::span<const TrialOutcome> trials, double lambda_per_m2) {
    detail::require_domain(!trials.empty(), "estimate_ase: no trials");
    std::vector<double> rate(trials.size());
    std::vector<double> sq(trials.size());
    for (std::size_t i = 0; i < trials.size(); ++i) {
        rate[i] = std::log2(1.0 + trials[i].sinr);
        sq[i] = rate[i] * rate[i];
    }
    const double n = static_cast<double>(trials.size());
    const double mean = quad::pairwise_sum<double>(rate) / n;
    const double var = trials.size() > 1 ? std::max(0.0, (quad::pairwise_sum<double>(sq) - n * mean * mean) / (n - 1.0))
                                         : 0.0;
    const double half = kZ95 * std::sqrt(var / n);
    const double scale = units::per_m2_to_per_km2(lambda_per_m2);
    return {scale * mean, scale * (mean - half), scale * (mean + half)};
}

inline Interval estimate_ase(const SimConfig& sc, unsigned threads = 1) {
    const auto trials = run_trials(sc, threads);
    return estimate_ase(trials, sc.cfg.bs_intensity());
}

}  // namespace scnperf
