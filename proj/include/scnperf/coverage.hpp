#pragma once

// SINR coverage probability for max-received-power association.
//
// Work in the displaced domain: a BS with equivalent distance t delivers
// power t^{-alpha}. Given that the serving BS belongs to process U at
// equivalent distance y, the other U-points lie beyond y and the V-points
// (V the other link type) beyond y^{alpha^U/alpha^V}, and
//
//   1/SINR = Z + eta y^{alpha^U},   Z = sum of interferer powers relative to the serving power.
//
// Z is a Poisson functional over relative powers s in (0, 1] with intensity
// mu(s) = mu_U(s) + mu_V(s), so its characteristic function is
// exp(∫ (e^{jωs} - 1) mu(s) ds). The branch term is
//
//   p_c^U = ∫ λ^U(y) exp(-Λ^U(y) - Λ^V(y^{alpha^U/alpha^V})) Pr[Z < 1/T - eta y^{alpha^U}] dy
//
// and p_c = p_c^NL + p_c^L.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scnperf/errors.hpp"
#include "scnperf/intensity.hpp"
#include "scnperf/model.hpp"
#include "scnperf/quadrature.hpp"

namespace scnperf {

using cplx = std::complex<double>;

namespace detail {

inline constexpr std::size_t kPanelNodes = 16;

/// Legendre polynomials P_0..P_{N-1} at u.
template <std::size_t N>
std::array<double, N> legendre_values(double u) {
    std::array<double, N> p{};
    p[0] = 1.0;
    if (N > 1) p[1] = u;
    for (std::size_t k = 1; k + 1 < N; ++k) {
        p[k + 1] = (static_cast<double>(2 * k + 1) * u * p[k] - static_cast<double>(k) * p[k - 1]) /
                   static_cast<double>(k + 1);
    }
    return p;
}

/// Discrete Legendre projection at the Gauss nodes: a_k = (2k+1)/2 Σ_g w_g P_k(u_g) f_g
/// gives the coefficients of the polynomial interpolating f at the nodes.
inline const std::array<std::array<double, kPanelNodes>, kPanelNodes>& legendre_projection() {
    static const auto proj = [] {
        const auto& rule = quad::LegendreRule<kPanelNodes>::get();
        std::array<std::array<double, kPanelNodes>, kPanelNodes> m{};
        for (std::size_t g = 0; g < kPanelNodes; ++g) {
            const auto p = legendre_values<kPanelNodes>(rule.nodes[g]);
            for (std::size_t k = 0; k < kPanelNodes; ++k) {
                m[k][g] = 0.5 * static_cast<double>(2 * k + 1) * rule.weights[g] * p[k];
            }
        }
        return m;
    }();
    return proj;
}

}  // namespace detail

/// Relative-power intensity mu(s) of the interference seen by a user served
/// by process `serving` at equivalent distance y, tabulated on geometric
/// panels of (s_min, 1] as degree-15 Legendre series. The exponent
/// E(ω) = ∫ (e^{jωs} - 1) mu(s) ds is then evaluated with a Filon rule per
/// panel (exact for the series, ∫ P_k(u) e^{jθu} du = 2 j^k j_k(θ)), and with a 16-term Taylor series in ω
/// over the panels where |ω| s <= 1. Below s_min mu is extended by its local
/// power law.
class InterferenceField {
public:
    static constexpr double kTaylorLimit = 1.0;
    static constexpr std::size_t kTaylorTerms = 16;
    static constexpr double kInterpolationTol = 1e-8;
    /// A panel is also accepted once its error moves the exponent by less
    /// than this, since |delta exponent| <= 2 * integral of |delta mu|.
    static constexpr double kMassTol = 1e-12;
    static constexpr std::size_t kMaxPanels = 20000;

    /// `cuts` in (s_min, 1) become panel edges, so the field can be truncated
    /// there (see truncation()).
    InterferenceField(const IntensityFns& fns, LinkType serving, double y, double s_min = 1e-15,
                      std::span<const double> cuts = {})
        : fns_(&fns), serving_(serving), s_min_(s_min) {
        detail::require_domain(y > 0.0 && std::isfinite(y), "InterferenceField: y must be > 0");
        detail::require_domain(s_min > 0.0 && s_min < 1.0, "InterferenceField: s_min must be in (0, 1)");
        alpha_u_ = fns[serving].exponent();
        alpha_v_ = fns[other(serving)].exponent();
        log_y_alpha_ = alpha_u_ * std::log(y);
        build(cuts);
    }

    /// mu(s) evaluated directly from the intensity densities.
    double relative_intensity(double s) const {
        const double ls = std::log(s);
        double v = 0.0;
        for (LinkType link : kLinkTypes) {
            const double a = link == serving_ ? alpha_u_ : alpha_v_;
            const double t = std::exp((log_y_alpha_ - ls) / a);
            if (!std::isfinite(t)) continue;
            v += (*fns_)[link].density(t) * t / (a * s);
        }
        return v;
    }

    /// Interferers stronger than x relative to the serving BS: the panels
    /// from `first_panel` on, whose expected count is `mass`.
    struct Truncation {
        std::size_t first_panel = 0;
        double mass = 0.0;
    };

    /// Splits the field at x, which must be >= 1 or one of the cuts.
    Truncation truncation(double x) const {
        if (x >= 1.0) return {panels_.size(), 0.0};
        const auto it = std::lower_bound(panels_.begin(), panels_.end(), x,
                                         [](const Panel& p, double v) { return p.lo < v * (1.0 - 1e-12); });
        detail::require_domain(it != panels_.end() && std::abs(it->lo / x - 1.0) < 1e-12,
                               "InterferenceField::truncation: x is not a panel edge");
        const auto i = static_cast<std::size_t>(it - panels_.begin());
        return {i, mass_suffix_[i]};
    }

    /// E(ω) = ∫_0^1 (e^{jωs} - 1) mu(s) ds.
    cplx exponent(double omega) const { return exponent(omega, panels_.size()); }

    /// Exponent of the interference restricted to the panels below `end`.
    cplx exponent(double omega, std::size_t end) const {
        if (omega == 0.0) return {0.0, 0.0};
        const double aw = std::abs(omega);
        if (aw * s_min_ > kTaylorLimit) {
            throw NumericalError("interference exponent: frequency " + std::to_string(omega) +
                                     " beyond the tabulated range",
                                 0.0, std::numeric_limits<double>::infinity());
        }
        // first panel that needs the Filon rule
        const auto it = std::upper_bound(panels_.begin(), panels_.end(), kTaylorLimit / aw,
                                         [](double lim, const Panel& p) { return lim < p.hi; });
        const auto i0 = std::min(static_cast<std::size_t>(it - panels_.begin()), end);

        cplx taylor = 0.0;
        cplx jw_pow = 1.0;
        for (std::size_t k = 1; k <= kTaylorTerms; ++k) {
            jw_pow *= cplx(0.0, omega) / static_cast<double>(k);
            taylor += jw_pow * prefix_[i0][k - 1];
        }

        cplx filon = 0.0;
        for (std::size_t i = i0; i < end; ++i) {
            const Panel& p = panels_[i];
            const auto jk = quad::spherical_bessel_j<detail::kPanelNodes>(omega * p.h);
            // Σ a_k j^k j_k, split by k mod 4
            double re = 0.0;
            double im = 0.0;
            for (std::size_t k = 0; k < detail::kPanelNodes; k += 4) {
                re += p.coef[k] * jk[k] - p.coef[k + 2] * jk[k + 2];
                im += p.coef[k + 1] * jk[k + 1] - p.coef[k + 3] * jk[k + 3];
            }
            filon += 2.0 * p.h * (std::polar(1.0, omega * p.c) * cplx(re, im)) - p.mass;
        }
        return taylor + filon;
    }

    /// ∫_0^1 s^k mu(s) ds for k = 1..16 (k = 1 is E[Z]).
    double moment(std::size_t k) const {
        detail::require_domain(k >= 1 && k <= kTaylorTerms, "InterferenceField::moment: k must be in 1..16");
        return prefix_.back()[k - 1];
    }

    double s_min() const { return s_min_; }
    std::size_t panel_count() const { return panels_.size(); }

private:
    struct Panel {
        double lo = 0.0;
        double hi = 0.0;
        double c = 0.0;
        double h = 0.0;
        std::array<double, detail::kPanelNodes> coef{};  // mu(c + h u) ≈ Σ coef_k P_k(u)
        double mass = 0.0;             // ∫_lo^hi mu(s) ds
    };
    using Moments = std::array<double, kTaylorTerms>;

    void build(std::span<const double> cuts) {
        constexpr std::size_t N = detail::kPanelNodes;
        const auto& rule = quad::LegendreRule<N>::get();
        const auto& proj = detail::legendre_projection();
        static const std::array<std::array<double, N>, 3> check_basis = {
            detail::legendre_values<N>(-1.0), detail::legendre_values<N>(0.0), detail::legendre_values<N>(1.0)};

        const double decades = -std::log10(s_min_);
        const auto n0 = static_cast<std::size_t>(std::ceil(decades * 2.0));
        std::vector<double> edges;
        for (std::size_t i = 0; i < n0; ++i) {
            edges.push_back(std::pow(10.0, -decades * static_cast<double>(n0 - i) / static_cast<double>(n0)));
        }
        edges.front() = s_min_;
        edges.push_back(1.0);
        for (double b : cuts) {
            if (!(b > s_min_ && b < 1.0)) continue;
            // a grid edge closer than 1% to a cut is replaced by it
            std::erase_if(edges, [b, this](double e) { return e != 1.0 && e != s_min_ && std::abs(e / b - 1.0) < 1e-2; });
            edges.push_back(b);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        std::vector<std::pair<double, double>> todo;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) todo.emplace_back(edges[i], edges[i + 1]);
        std::vector<std::array<double, N>> node_values;
        while (!todo.empty()) {
            const auto [lo, hi] = todo.back();
            todo.pop_back();
            Panel p;
            p.lo = lo;
            p.hi = hi;
            p.c = 0.5 * (lo + hi);
            p.h = 0.5 * (hi - lo);
            std::array<double, N> f{};
            double fmax = 0.0;
            for (std::size_t g = 0; g < N; ++g) {
                f[g] = relative_intensity(p.c + p.h * rule.nodes[g]);
                fmax = std::max(fmax, std::abs(f[g]));
            }
            for (std::size_t k = 0; k < N; ++k) {
                double a = 0.0;
                for (std::size_t g = 0; g < N; ++g) a += proj[k][g] * f[g];
                p.coef[k] = a;
            }
            double err = 0.0;
            const double us[3] = {-1.0, 0.0, 1.0};
            for (std::size_t i = 0; i < 3; ++i) {
                const double exact = relative_intensity(p.c + p.h * us[i]);
                double approx = 0.0;
                for (std::size_t k = 0; k < N; ++k) approx += p.coef[k] * check_basis[i][k];
                fmax = std::max(fmax, std::abs(exact));
                err = std::max(err, std::abs(approx - exact));
            }
            const bool splittable = hi / lo > 1.0 + 1e-9 && panels_.size() + todo.size() < kMaxPanels;
            const bool accurate = err <= kInterpolationTol * fmax || 2.0 * p.h * err <= kMassTol;
            if (!accurate && splittable) {
                const double mid = std::sqrt(lo * hi);
                todo.emplace_back(lo, mid);
                todo.emplace_back(mid, hi);
                continue;
            }
            if (!accurate) {
                throw NumericalError("interference table: interpolation tolerance not reached", 0.0, err / fmax);
            }
            p.mass = 2.0 * p.h * p.coef[0];
            panels_.push_back(p);
            node_values.push_back(f);
        }
        std::vector<std::size_t> order(panels_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return panels_[a].lo < panels_[b].lo; });

        // power-law tail below s_min: mu(s) ≈ mu(s_min) (s / s_min)^{-1-kappa}
        const double mu0 = relative_intensity(s_min_);
        const double mu1 = relative_intensity(2.0 * s_min_);
        Moments tail{};
        if (mu0 > 0.0 && mu1 > 0.0) {
            const double kappa = std::clamp(-1.0 - std::log(mu1 / mu0) / std::log(2.0), -50.0, 0.999);
            for (std::size_t k = 1; k <= kTaylorTerms; ++k) {
                tail[k - 1] = mu0 * std::pow(s_min_, static_cast<double>(k + 1)) / (static_cast<double>(k) - kappa);
            }
        }
        // s^k times the degree-15 interpolant has degree <= 31: exact under the panel's own nodes
        std::vector<Panel> sorted;
        sorted.reserve(panels_.size());
        prefix_.assign(panels_.size() + 1, tail);
        for (std::size_t i = 0; i < order.size(); ++i) {
            const Panel& p = panels_[order[i]];
            const auto& f = node_values[order[i]];
            Moments acc{};
            for (std::size_t g = 0; g < N; ++g) {
                const double s = p.c + p.h * rule.nodes[g];
                double w = rule.weights[g] * f[g];
                for (std::size_t k = 0; k < kTaylorTerms; ++k) {
                    w *= s;
                    acc[k] += w;
                }
            }
            for (std::size_t k = 0; k < kTaylorTerms; ++k) prefix_[i + 1][k] = prefix_[i][k] + p.h * acc[k];
            sorted.push_back(p);
        }
        panels_ = std::move(sorted);
        mass_suffix_.assign(panels_.size() + 1, 0.0);
        for (std::size_t i = panels_.size(); i-- > 0;) mass_suffix_[i] = mass_suffix_[i + 1] + panels_[i].mass;
    }

    const IntensityFns* fns_;
    LinkType serving_;
    double s_min_;
    double alpha_u_ = 0.0;
    double alpha_v_ = 0.0;
    double log_y_alpha_ = 0.0;
    std::vector<Panel> panels_;
    std::vector<Moments> prefix_;  // prefix_[i][k-1] = ∫_0^{panels_[i].lo} s^k mu
    std::vector<double> mass_suffix_;  // ∫_{panels_[i].lo}^1 mu
};

// ---------------------------------------------------------------------------
// Characteristic-function inversion
// ---------------------------------------------------------------------------

struct InversionResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t cf_evaluations = 0;
    double v_max = 0.0;  // last point of the (scaled) frequency axis that was integrated
};

struct InversionOptions {
    double abs_tol = 1e-4;
    /// Frequency-axis cap, in units of π after scaling by x.
    std::size_t max_half_cycles = 1u << 22;
    std::size_t max_evaluations = 400000;
};

/// Pr[Z < x] for a nonnegative, continuously distributed Z with
/// characteristic function `phi`, by Gil-Pelaez inversion
///
///   Pr[Z < x] = 1/2 - (1/π) ∫_0^∞ Im[e^{-jωx} φ(ω)] / ω dω.
///
/// After substituting v = ωx the integral is taken half-cycle by half-cycle
/// of e^{-jv}; the partial sums are accelerated with Wynn's epsilon
/// algorithm, and the integration stops early once |φ| is negligible. Past
/// 4096 half-cycles the axis is extended in octaves until the last octave
/// contributes less than a tenth of the tolerance.
template <class Cf>
InversionResult cdf_from_cf(Cf&& phi, double x, const InversionOptions& opt = {}) {
    InversionResult out;
    if (!(x > 0.0)) return out;
    detail::require_domain(std::isfinite(x), "cdf_from_cf: x must be finite");

    double seg_peak = 0.0;
    auto integrand = [&](double v) {
        const cplx p = phi(v / x);
        ++out.cf_evaluations;
        seg_peak = std::max(seg_peak, std::abs(p));
        return (std::polar(1.0, -v) * p).imag() / v;
    };

    const double pi = std::numbers::pi;
    const double negligible_cf = 1e-3 * opt.abs_tol;
    const double seg_tol = opt.abs_tol / 64.0;
    constexpr std::size_t kHalfCycles = 4096;

    double sum = 0.0;
    double err = 0.0;
    std::vector<double> partial;
    std::vector<double> pieces;
    std::optional<double> last_extrapolation;
    auto finish = [&](double integral, double extra_err) {
        out.value = std::clamp(0.5 - integral / pi, 0.0, 1.0);
        out.error = (err + extra_err) / pi;
        return out;
    };

    for (std::size_t k = 0; k < kHalfCycles; ++k) {
        seg_peak = 0.0;
        const auto r = quad::integrate(integrand, pi * static_cast<double>(k), pi * static_cast<double>(k + 1),
                                       seg_tol, 1e-12, 40000);
        sum += r.value;
        err += r.error;
        out.v_max = pi * static_cast<double>(k + 1);
        partial.push_back(sum);
        pieces.push_back(r.value);
        if (k >= 1 && seg_peak < negligible_cf) return finish(sum, negligible_cf);
        if (k >= 3) {
            const std::size_t n = std::min<std::size_t>(partial.size(), 21);
            const auto ext = quad::wynn_epsilon(std::span<const double>(partial).last(n));
            // (I_k + 3 I_{k-1} + 3 I_{k-2} + I_{k-3}) / 8 cancels the alternating
            // part of the half-cycle integrals to third order; what survives is a
            // monotone tail of order (that value) x k, which the extrapolation
            // does not account for.
            const double monotone =
                0.125 * (pieces[k] + 3.0 * pieces[k - 1] + 3.0 * pieces[k - 2] + pieces[k - 3]);
            const double monotone_tail = std::abs(monotone) * static_cast<double>(k + 1);
            if (ext.error + monotone_tail < opt.abs_tol / 8.0 && last_extrapolation &&
                std::abs(ext.value - *last_extrapolation) < opt.abs_tol / 8.0) {
                return finish(ext.value, ext.error + monotone_tail);
            }
            last_extrapolation = ext.value;
        }
    }

    // Octaves. A density jump of Z (an interferer exactly as strong as the
    // serving BS) leaves a non-oscillating 1/v^2 tail, which the half-cycle
    // extrapolation cannot see; the octave contribution bounds that tail.
    double v = pi * static_cast<double>(kHalfCycles);
    const double v_cap = pi * static_cast<double>(opt.max_half_cycles);
    while (v < v_cap) {
        seg_peak = 0.0;
        const double hi = std::min(2.0 * v, v_cap);
        const auto r = quad::integrate(integrand, v, hi, seg_tol, 1e-12, opt.max_evaluations);
        sum += r.value;
        err += r.error;
        v = hi;
        out.v_max = v;
        if (!r.converged || out.cf_evaluations > opt.max_evaluations) break;
        if (seg_peak < negligible_cf) return finish(sum, negligible_cf);
        if (std::abs(r.value) + r.error < opt.abs_tol / 10.0) return finish(sum, std::abs(r.value));
    }
    const auto partial_out = finish(sum, 0.0);
    throw NumericalError("characteristic-function inversion did not converge (x = " + std::to_string(x) + ")",
                         partial_out.value, std::numeric_limits<double>::infinity());
}

// ---------------------------------------------------------------------------
// Building blocks of the coverage integral
// ---------------------------------------------------------------------------

/// Equivalent distance at which a point of process `to` delivers the same
/// power as a point of process `from` at y: y^{alpha^from / alpha^to}.
inline double equal_power_distance(const NetworkConfig& cfg, LinkType from, LinkType to, double y) {
    return std::exp(cfg.exponent(from) / cfg.exponent(to) * std::log(y));
}

/// Pr[no point of the other process is stronger | serving point of `serving` at y].
inline double association_prob_given_y(const IntensityFns& fns, const NetworkConfig& cfg, LinkType serving,
                                       double y) {
    detail::require_domain(y > 0.0, "association_prob_given_y: y must be > 0");
    const LinkType v = other(serving);
    return std::exp(-fns[v].measure(equal_power_distance(cfg, serving, v, y)));
}

inline double association_prob_given_y(const NetworkConfig& cfg, LinkType serving, double y) {
    return association_prob_given_y(make_intensity_fns(cfg), cfg, serving, y);
}

/// Density of the nearest equivalent distance of process `serving`:
/// λ^U(y) exp(-Λ^U([0, y])).
inline double serving_distance_pdf(const IntensityFns& fns, LinkType serving, double y) {
    detail::require_domain(y > 0.0, "serving_distance_pdf: y must be > 0");
    return fns[serving].density(y) * std::exp(-fns[serving].measure(y));
}

inline double serving_distance_pdf(const NetworkConfig& cfg, LinkType serving, double y) {
    return serving_distance_pdf(make_intensity_fns(cfg), serving, y);
}

namespace detail {

inline constexpr double kNoiseCutoffMargin = 1e-7;

/// Table range needed to invert at a given x (relative interference budget).
inline double field_s_min(double x, const InversionOptions& opt) {
    const double omega_max = std::numbers::pi * static_cast<double>(opt.max_half_cycles) / x;
    return std::clamp(InterferenceField::kTaylorLimit / omega_max, 1e-18, 1e-6);
}

/// Any single interferer above x already violates Z < x, so for c >= x
///
///   Pr[Z < x] = Pr[no interferer above c] Pr[Z_c < x],
///
/// with Z_c the sum over interferers below c. Z_c has no spectral structure
/// on the scale of the serving power, which keeps the inversion cost uniform
/// in x. c = 2x keeps the density jump of Z_c at c away from x.
inline constexpr double kTruncationFactor = 2.0;

inline InversionResult truncated_cdf(const InterferenceField& field, double x, const InversionOptions& opt) {
    const auto tr = field.truncation(kTruncationFactor * x);
    const double p_clear = std::exp(-tr.mass);
    if (p_clear == 0.0) return {};
    InversionOptions inner = opt;
    inner.abs_tol = opt.abs_tol / p_clear;
    auto r = cdf_from_cf([&](double w) { return std::exp(field.exponent(w, tr.first_panel)); }, x, inner);
    r.value *= p_clear;
    r.error *= p_clear;
    return r;
}

}  // namespace detail

/// Characteristic function of 1/SINR given the serving point of `serving`
/// at equivalent distance y and the association event.
inline cplx characteristic_fn(const NetworkConfig& cfg, LinkType serving, double y, double omega) {
    detail::require_domain(y > 0.0, "characteristic_fn: y must be > 0");
    const auto fns = make_intensity_fns(cfg);
    const double aw = std::abs(omega);
    const double s_min = aw > 0.0 ? std::clamp(InterferenceField::kTaylorLimit / aw * 0.5, 1e-18, 1e-6) : 1e-6;
    const InterferenceField field(fns, serving, y, s_min);
    const double noise_rel = cfg.noise_power() * std::pow(y, cfg.exponent(serving));
    return std::exp(field.exponent(omega)) * std::polar(1.0, omega * noise_rel);
}

/// Pr[SINR > T | serving point of `serving` at y, association event].
inline InversionResult conditional_coverage(const IntensityFns& fns, const NetworkConfig& cfg, LinkType serving,
                                            double y, double threshold, const InversionOptions& opt = {}) {
    detail::require_domain(y > 0.0, "conditional_coverage: y must be > 0");
    detail::require_domain(threshold > 0.0 && std::isfinite(threshold), "conditional_coverage: T must be > 0");
    const double x = 1.0 / threshold - cfg.noise_power() * std::pow(y, cfg.exponent(serving));
    if (x <= detail::kNoiseCutoffMargin / threshold) return {};
    const double cut[] = {detail::kTruncationFactor * x};
    const InterferenceField field(fns, serving, y, detail::field_s_min(x, opt), cut);
    return detail::truncated_cdf(field, x, opt);
}

inline InversionResult conditional_coverage(const NetworkConfig& cfg, LinkType serving, double y, double threshold,
                                            const InversionOptions& opt = {}) {
    return conditional_coverage(make_intensity_fns(cfg), cfg, serving, y, threshold, opt);
}

// ---------------------------------------------------------------------------
// Coverage probability
// ---------------------------------------------------------------------------

struct BranchDiagnostics {
    double y_low = 0.0;
    double y_high = 0.0;
    double y_noise_cutoff = std::numeric_limits<double>::infinity();
    std::size_t y_evaluations = 0;
    std::size_t fields_built = 0;
    std::size_t cf_evaluations = 0;
    std::size_t max_panels = 0;
    double max_v = 0.0;
    double quadrature_error = 0.0;
    double inversion_error = 0.0;
};

struct CoverageResult {
    double p_nlos_branch = 0.0;
    double p_los_branch = 0.0;
    double p_total = 0.0;
    double error_estimate = 0.0;
    std::array<BranchDiagnostics, 2> diagnostics{};

    double branch(LinkType link) const { return link == LinkType::nlos ? p_nlos_branch : p_los_branch; }
};

struct CoverageOptions {
    double abs_tol = 1e-3;
    std::optional<LinkType> branch;
    IntensityPath path = IntensityPath::closed_form;
    std::size_t max_y_evaluations = 60000;
};

struct CoverageQuery {
    NetworkConfig cfg;
    double threshold = 1.0;  // linear SINR threshold
    std::optional<LinkType> branch;
    double abs_tol = 1e-3;
    IntensityPath path = IntensityPath::closed_form;
};

namespace detail {

inline constexpr double kNegligibleMass = 1e-12;

/// Smallest ln y in [lo, hi] with pred(ln y) true, for a predicate that is
/// monotone (false then true).
template <class Pred>
double bisect_log(double lo, double hi, Pred&& pred) {
    for (int i = 0; i < 200 && hi - lo > 1e-9; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

struct BranchOutcome {
    std::vector<double> values;
    std::vector<double> errors;
    BranchDiagnostics diag;
};

/// One branch term for every threshold in `thresholds`, sharing the
/// y-partition and the interference tables.
inline BranchOutcome coverage_branch(const IntensityFns& fns, const NetworkConfig& cfg, LinkType serving,
                                     std::span<const double> thresholds, double abs_tol, std::size_t max_y_evals) {
    const std::size_t n = thresholds.size();
    BranchOutcome out;
    out.values.assign(n, 0.0);
    out.errors.assign(n, 0.0);
    BranchDiagnostics& diag = out.diag;

    const LinkType v = other(serving);
    const double alpha_u = cfg.exponent(serving);
    const double ratio = alpha_u / cfg.exponent(v);
    const double eta = cfg.noise_power();
    const double t_min = *std::min_element(thresholds.begin(), thresholds.end());

    auto log_survival = [&](double ly) {
        return -fns[serving].measure(std::exp(ly)) - fns[v].measure(std::exp(ratio * ly));
    };
    constexpr double kLyMin = -80.0;
    constexpr double kLyMax = 80.0;

    const double ly_lo = bisect_log(kLyMin, kLyMax, [&](double ly) {
        return fns[serving].measure(std::exp(ly)) >= kNegligibleMass;
    });
    const double total_mass = fns[serving].total_mass();
    double ly_hi = bisect_log(kLyMin, kLyMax, [&](double ly) {
        if (log_survival(ly) < std::log(kNegligibleMass)) return true;
        if (std::isfinite(total_mass)) return total_mass - fns[serving].measure(std::exp(ly)) < kNegligibleMass;
        return false;
    });
    if (eta > 0.0) {
        // beyond this point even the weakest threshold leaves no room for interference
        const double ly_noise = (std::log((1.0 - kNoiseCutoffMargin) / t_min) - std::log(eta)) / alpha_u;
        diag.y_noise_cutoff = std::exp(ly_noise);
        ly_hi = std::min(ly_hi, ly_noise);
    }
    diag.y_low = std::exp(ly_lo);
    diag.y_high = std::exp(ly_hi);
    if (!(ly_hi > ly_lo)) return out;

    const double inner_tol = abs_tol;
    double max_inversion_err = 0.0;

    auto integrand = [&](double ly) {
        ++diag.y_evaluations;
        quad::Vec r(n, 0.0);
        const double y = std::exp(ly);
        const double weight = fns[serving].density(y) * std::exp(log_survival(ly)) * y;
        if (!(weight > 1e-16)) return r;
        const double noise_rel = eta * std::exp(alpha_u * ly);
        double x_min = std::numeric_limits<double>::infinity();
        for (double T : thresholds) {
            const double x = 1.0 / T - noise_rel;
            if (x > kNoiseCutoffMargin / T) x_min = std::min(x_min, x);
        }
        if (!std::isfinite(x_min)) return r;
        InversionOptions opt;
        opt.abs_tol = inner_tol;
        std::vector<double> cuts;
        for (double T : thresholds) cuts.push_back(kTruncationFactor * (1.0 / T - noise_rel));
        const InterferenceField field(fns, serving, y, field_s_min(x_min, opt), cuts);
        ++diag.fields_built;
        diag.max_panels = std::max(diag.max_panels, field.panel_count());
        for (std::size_t i = 0; i < n; ++i) {
            const double x = 1.0 / thresholds[i] - noise_rel;
            if (x <= kNoiseCutoffMargin / thresholds[i]) continue;
            const auto inv = truncated_cdf(field, x, opt);
            diag.cf_evaluations += inv.cf_evaluations;
            diag.max_v = std::max(diag.max_v, inv.v_max);
            max_inversion_err = std::max(max_inversion_err, inv.error);
            r.v[i] = weight * inv.value;
        }
        return r;
    };

    const std::size_t n_init = 8;
    std::vector<double> bp(n_init + 1);
    for (std::size_t i = 0; i <= n_init; ++i) {
        bp[i] = ly_lo + (ly_hi - ly_lo) * static_cast<double>(i) / static_cast<double>(n_init);
    }
    if (eta > 0.0) {
        // each threshold's own noise cutoff is a kink of its component
        for (double T : thresholds) {
            const double ly = (std::log((1.0 - kNoiseCutoffMargin) / T) - std::log(eta)) / alpha_u;
            if (ly > ly_lo && ly < ly_hi) bp.push_back(ly);
        }
        std::sort(bp.begin(), bp.end());
    }
    const auto res = quad::integrate(integrand, std::span<const double>(bp), abs_tol, 0.0, max_y_evals);
    diag.quadrature_error = res.error;
    diag.inversion_error = max_inversion_err;
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = res.value.v.empty() ? 0.0 : std::clamp(res.value.v[i], 0.0, 1.0);
        out.errors[i] = res.error + max_inversion_err;
    }
    if (!res.converged) {
        throw NumericalError("coverage y-integral did not reach tolerance", out.values.front(), res.error);
    }
    return out;
}

}  // namespace detail

/// Coverage probability at several thresholds for one network configuration.
/// Thresholds are linear SINR ratios.
inline std::vector<CoverageResult> coverage_curve(const NetworkConfig& cfg, std::span<const double> thresholds,
                                                  const CoverageOptions& opt = {}) {
    detail::require_domain(!thresholds.empty(), "coverage_curve: no thresholds");
    for (double T : thresholds) {
        detail::require_domain(T > 0.0 && std::isfinite(T), "coverage: threshold must be finite and > 0");
    }
    detail::require_domain(opt.abs_tol > 0.0, "coverage: tolerance must be > 0");
    const auto fns = make_intensity_fns(cfg, opt.path);

    std::vector<CoverageResult> out(thresholds.size());
    // a third of the budget per branch for the y-quadrature and for the inversions
    const double tol = opt.abs_tol / 3.0;
    for (LinkType link : kLinkTypes) {
        if (opt.branch && *opt.branch != link) continue;
        const auto b = detail::coverage_branch(fns, cfg, link, thresholds, tol, opt.max_y_evaluations);
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            if (link == LinkType::nlos) out[i].p_nlos_branch = b.values[i];
            else out[i].p_los_branch = b.values[i];
            out[i].error_estimate += b.errors[i];
            out[i].diagnostics[index_of(link)] = b.diag;
        }
    }
    for (auto& r : out) r.p_total = std::clamp(r.p_nlos_branch + r.p_los_branch, 0.0, 1.0);
    return out;
}

inline CoverageResult coverage_probability(const CoverageQuery& q) {
    CoverageOptions opt;
    opt.abs_tol = q.abs_tol;
    opt.branch = q.branch;
    opt.path = q.path;
    const double t[] = {q.threshold};
    return coverage_curve(q.cfg, t, opt).front();
}

}  // namespace scnperf
