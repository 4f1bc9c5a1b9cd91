#pragma once

// Area spectral efficiency
//
//   ASE(λ) = λ E[log2(1 + SINR)] = (λ / ln 2) ∫_0^∞ p_c(λ, u) / (1 + u) du
//
// with the semi-infinite integral mapped by u = tan(π/4 (x + 1)) onto
// [-1, 1] and evaluated with Gauss-Chebyshev nodes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "scnperf/coverage.hpp"
#include "scnperf/errors.hpp"
#include "scnperf/model.hpp"
#include "scnperf/quadrature.hpp"

namespace scnperf {

inline constexpr std::size_t kDefaultGcqPoints = 31;

/// Gauss-Chebyshev rule on (0, ∞). Nodes are stored in ascending order.
struct GcqRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// u_n = tan(π/4 cos((2n-1)π/(2N)) + π/4),
/// w_n = π^2 sin((2n-1)π/(2N)) / (4N cos^2(π/4 cos((2n-1)π/(2N)) + π/4)).
inline GcqRule gcq_nodes(std::size_t n_points) {
    detail::require_domain(n_points >= 1, "gcq_nodes: need at least one node");
    const double pi = std::numbers::pi;
    const double n_g = static_cast<double>(n_points);
    GcqRule rule;
    rule.nodes.reserve(n_points);
    rule.weights.reserve(n_points);
    // n = N..1 gives ascending nodes
    for (std::size_t n = n_points; n >= 1; --n) {
        const double phase = (2.0 * static_cast<double>(n) - 1.0) * pi / (2.0 * n_g);
        const double arg = pi / 4.0 * std::cos(phase) + pi / 4.0;
        const double c = std::cos(arg);
        rule.nodes.push_back(std::tan(arg));
        rule.weights.push_back(pi * pi * std::sin(phase) / (4.0 * n_g * c * c));
    }
    return rule;
}

/// (λ / ln 2) Σ w_n p_c(u_n) / (1 + u_n) for any coverage function of the
/// linear threshold. λ in BSs/m^2; the result is in bps/Hz/m^2.
template <class CoverageFn>
double ase_from_coverage(double lambda_per_m2, const GcqRule& rule, CoverageFn&& coverage) {
    detail::require_domain(lambda_per_m2 > 0.0, "ase: intensity must be > 0");
    std::vector<double> terms(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        terms[i] = rule.weights[i] / (rule.nodes[i] + 1.0) * coverage(rule.nodes[i]);
    }
    return lambda_per_m2 / std::numbers::ln2 * quad::pairwise_sum<double>(terms);
}

struct AseResult {
    double ase_per_km2 = 0.0;    // bps/Hz/km^2
    double error_estimate = 0.0;  // same unit
    std::vector<double> thresholds;
    std::vector<CoverageResult> coverage;
};

/// ASE of `cfg` at its configured intensity. The N_G coverage evaluations
/// share one adaptive y-partition and one set of interference tables.
inline AseResult ase(const NetworkConfig& cfg, const GcqRule& rule, const CoverageOptions& opt = {}) {
    AseResult out;
    out.thresholds = rule.nodes;
    out.coverage = coverage_curve(cfg, rule.nodes, opt);
    const double lambda = cfg.bs_intensity();
    std::size_t i = 0;
    const double value = ase_from_coverage(lambda, rule, [&](double) { return out.coverage[i++].p_total; });
    std::vector<double> err(rule.size());
    for (std::size_t k = 0; k < rule.size(); ++k) {
        err[k] = rule.weights[k] / (rule.nodes[k] + 1.0) * out.coverage[k].error_estimate;
    }
    out.ase_per_km2 = units::per_m2_to_per_km2(value);
    out.error_estimate = units::per_m2_to_per_km2(lambda / std::numbers::ln2 * quad::pairwise_sum<double>(err));
    return out;
}

inline AseResult ase(const NetworkConfig& cfg, std::size_t n_points = kDefaultGcqPoints,
                     const CoverageOptions& opt = {}) {
    return ase(cfg, gcq_nodes(n_points), opt);
}

}  // namespace scnperf
