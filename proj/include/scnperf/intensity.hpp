#pragma once

// Intensity measures of the displaced ("equivalent distance") processes
// R̄ = R (B^U h)^{-1/alpha^U} for U in {NLOS, LOS}.
//
//   Λ^U([0, t]) = E_h[ λ · area^U( t (B^U h)^{1/alpha^U} ) ]
//   λ^U(t)      = dΛ^U/dt
//
// where area^U(R) = 2π ∫_0^R p^U(r) r dr. For the step LOS profile and
// Gamma-law fading both have incomplete-gamma closed forms; the general
// route integrates the fading expectation numerically.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "scnperf/errors.hpp"
#include "scnperf/fading.hpp"
#include "scnperf/model.hpp"
#include "scnperf/quadrature.hpp"
#include "scnperf/special.hpp"

namespace scnperf {

enum class IntensityPath { closed_form, numeric_general };

constexpr std::string_view to_string(IntensityPath p) {
    return p == IntensityPath::closed_form ? "closed-form" : "numeric-general";
}

namespace detail {

/// X = (m / B) (d / t)^alpha, evaluated in log space.
inline double displaced_gamma_argument(double m, double b, double alpha, double d, double t) {
    if (d == 0.0) return 0.0;
    if (t == 0.0) return std::numeric_limits<double>::infinity();
    const double log_x = std::log(m / b) + alpha * (std::log(d) - std::log(t));
    if (log_x > 709.0) return std::numeric_limits<double>::infinity();
    return std::exp(log_x);
}

inline void require_t(double t) { require_domain(t >= 0.0 && !std::isnan(t), "intensity: t must be >= 0"); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Closed forms, written as printed with non-normalized incomplete gammas.
// ---------------------------------------------------------------------------

inline double measure_nakagami_nlos(const NetworkConfig& cfg, double t) {
    detail::require_t(t);
    if (t == 0.0) return 0.0;
    const double m = cfg.fading(LinkType::nlos).gamma_shape();
    const double b = cfg.gain_constant(LinkType::nlos);
    const double alpha = cfg.exponent(LinkType::nlos);
    const double d = cfg.los_cutoff();
    const double lambda = cfg.bs_intensity();
    const double delta = 2.0 / alpha;
    const double x = detail::displaced_gamma_argument(m, b, alpha, d, t);
    const double g_m = special::tgamma(m);
    const double lead = -std::numbers::pi * lambda * d * d / g_m * special::upper_gamma(m, x);
    const double tail =
        std::numbers::pi * lambda * t * t / g_m * std::pow(b / m, delta) * special::upper_gamma(delta + m, x);
    return std::max(0.0, special::flush(lead + tail));
}

inline double measure_nakagami_los(const NetworkConfig& cfg, double t) {
    detail::require_t(t);
    if (t == 0.0) return 0.0;
    const double m = cfg.fading(LinkType::los).gamma_shape();
    const double b = cfg.gain_constant(LinkType::los);
    const double alpha = cfg.exponent(LinkType::los);
    const double d = cfg.los_cutoff();
    const double lambda = cfg.bs_intensity();
    const double delta = 2.0 / alpha;
    const double x = detail::displaced_gamma_argument(m, b, alpha, d, t);
    const double g_m = special::tgamma(m);
    const double beyond = std::numbers::pi * lambda * d * d / g_m * special::upper_gamma(m, x);
    const double within =
        std::numbers::pi * lambda * t * t / g_m * std::pow(b / m, delta) * special::lower_gamma(delta + m, x);
    return special::flush(beyond + within);
}

inline double density_nakagami_nlos(const NetworkConfig& cfg, double t) {
    detail::require_t(t);
    const double m = cfg.fading(LinkType::nlos).gamma_shape();
    const double b = cfg.gain_constant(LinkType::nlos);
    const double alpha = cfg.exponent(LinkType::nlos);
    const double delta = 2.0 / alpha;
    const double x = detail::displaced_gamma_argument(m, b, alpha, cfg.los_cutoff(), t);
    return special::flush(2.0 * std::numbers::pi * cfg.bs_intensity() * t / special::tgamma(m) *
                          std::pow(b / m, delta) * special::upper_gamma(delta + m, x));
}

inline double density_nakagami_los(const NetworkConfig& cfg, double t) {
    detail::require_t(t);
    const double m = cfg.fading(LinkType::los).gamma_shape();
    const double b = cfg.gain_constant(LinkType::los);
    const double alpha = cfg.exponent(LinkType::los);
    const double delta = 2.0 / alpha;
    const double x = detail::displaced_gamma_argument(m, b, alpha, cfg.los_cutoff(), t);
    return special::flush(2.0 * std::numbers::pi * cfg.bs_intensity() * t / special::tgamma(m) *
                          std::pow(b / m, delta) * special::lower_gamma(delta + m, x));
}

/// Rayleigh NLOS (h ~ Exp(1)); the m = 1 specialisation with Γ(1, x) = e^{-x}.
inline double measure_rayleigh_nlos(const NetworkConfig& cfg, double t) {
    detail::require_t(t);
    if (t == 0.0) return 0.0;
    const double b = cfg.gain_constant(LinkType::nlos);
    const double alpha = cfg.exponent(LinkType::nlos);
    const double d = cfg.los_cutoff();
    const double delta = 2.0 / alpha;
    const double pl = std::numbers::pi * cfg.bs_intensity();
    const double x = detail::displaced_gamma_argument(1.0, b, alpha, d, t);
    const double v = pl * t * t * std::pow(b, delta) * special::upper_gamma(delta + 1.0, x) - pl * d * d * std::exp(-x);
    return std::max(0.0, special::flush(v));
}

inline double density_rayleigh_nlos(const NetworkConfig& cfg, double t) {
    detail::require_t(t);
    const double b = cfg.gain_constant(LinkType::nlos);
    const double alpha = cfg.exponent(LinkType::nlos);
    const double delta = 2.0 / alpha;
    const double x = detail::displaced_gamma_argument(1.0, b, alpha, cfg.los_cutoff(), t);
    return special::flush(2.0 * std::numbers::pi * cfg.bs_intensity() * t * std::pow(b, delta) *
                          special::upper_gamma(delta + 1.0, x));
}

// ---------------------------------------------------------------------------
// General route: numerical expectation over the fading law.
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr double kFadingTailMass = 1e-13;

/// E_h[g(h)] for the link's fading law, integrating over h = w^2 (which keeps
/// the integrand bounded at the origin for every m >= 1/2) on [0, h_max]
/// with a breakpoint at `h_kink`.
template <class G>
double fading_expectation(const FadingModel& fading, double h_kink, G&& g) {
    double h_max = power_gain_upper_quantile(fading, kFadingTailMass);
    if (h_kink > 0.0) {
        // an integrand living beyond the kink keeps its relative accuracy when
        // the cut drops the same fraction of the tail beyond the kink
        const double m = fading.gamma_shape();
        const double tail = special::gamma_q(m, m * h_kink);
        if (tail * kFadingTailMass > 0.0) {
            h_max = std::max(h_max, power_gain_upper_quantile(fading, tail * kFadingTailMass));
        }
    }
    const double w_max = std::sqrt(h_max);
    auto integrand = [&](double w) {
        const double h = w * w;
        if (h == 0.0) return 0.0;
        return g(h) * power_gain_pdf(fading, h) * 2.0 * w;
    };
    std::array<double, 3> bp{0.0, w_max, w_max};
    std::size_t n = 2;
    if (h_kink > 0.0 && h_kink < h_max) {
        bp = {0.0, std::sqrt(h_kink), w_max};
        n = 3;
    }
    const auto r = quad::integrate(integrand, std::span<const double>(bp.data(), n), 0.0, 1e-12, 400000);
    if (!r.converged) {
        throw NumericalError("fading expectation did not converge", r.value, r.error);
    }
    return r.value;
}

}  // namespace detail

/// Λ^U([0, t]) by numerical integration of the radial area against the fading PDF.
inline double measure_general(const NetworkConfig& cfg, LinkType link, double t) {
    detail::require_t(t);
    if (t == 0.0) return 0.0;
    const double b = cfg.gain_constant(link);
    const double alpha = cfg.exponent(link);
    const auto profile = cfg.los_profile();
    const double d = profile.cutoff();
    // h at which the displaced radius t (B h)^{1/alpha} crosses the cutoff
    const double h_kink = d > 0.0 ? std::pow(d / t, alpha) / b : 0.0;
    const double value = detail::fading_expectation(cfg.fading(link), h_kink, [&](double h) {
        return profile.area_within(link, t * std::pow(b * h, 1.0 / alpha));
    });
    return cfg.bs_intensity() * value;
}

/// λ^U(t) = E_h[ 2πλ p^U(R) t (B h)^{2/alpha} ] with R = t (B h)^{1/alpha}.
inline double density_general(const NetworkConfig& cfg, LinkType link, double t) {
    detail::require_t(t);
    const double b = cfg.gain_constant(link);
    const double alpha = cfg.exponent(link);
    const auto profile = cfg.los_profile();
    const double d = profile.cutoff();
    const double h_kink = (d > 0.0 && t > 0.0) ? std::pow(d / t, alpha) / b : 0.0;
    const double value = detail::fading_expectation(cfg.fading(link), h_kink, [&](double h) {
        const double scale = std::pow(b * h, 1.0 / alpha);
        return profile.probability(link, t * scale) * t * scale * scale;
    });
    return 2.0 * std::numbers::pi * cfg.bs_intensity() * value;
}

/// Intensity measure and density of one displaced process.
///
/// The closed-form path works with regularized incomplete gammas and
/// precomputed constants, since the coverage engine evaluates it on every
/// interference table it builds.
class LinkIntensity {
public:
    LinkIntensity(const NetworkConfig& cfg, LinkType link, IntensityPath path = IntensityPath::closed_form)
        : cfg_(cfg), link_(link), path_(path) {
        m_ = cfg.fading(link).gamma_shape();
        b_ = cfg.gain_constant(link);
        alpha_ = cfg.exponent(link);
        delta_ = 2.0 / alpha_;
        d_ = cfg.los_cutoff();
        pi_lambda_ = std::numbers::pi * cfg.bs_intensity();
        coef_ = std::pow(b_ / m_, delta_) * std::exp(special::lgamma(m_ + delta_) - special::lgamma(m_));
    }

    LinkType link() const { return link_; }
    IntensityPath path() const { return path_; }
    double exponent() const { return alpha_; }

    double measure(double t) const {
        detail::require_t(t);
        if (t == 0.0) return 0.0;
        if (path_ == IntensityPath::numeric_general) return measure_general(cfg_, link_, t);
        const double x = detail::displaced_gamma_argument(m_, b_, alpha_, d_, t);
        if (link_ == LinkType::nlos) {
            const double v = t * t * coef_ * special::gamma_q(m_ + delta_, x) - d_ * d_ * special::gamma_q(m_, x);
            return std::max(0.0, special::flush(pi_lambda_ * v));
        }
        if (x < 1.0) {
            // near saturation: πλd² minus the mass still outside [0, t], whose
            // two terms differ at leading order by the factor δ/(m+δ)
            const double deficit = d_ * d_ * special::gamma_p(m_, x) - t * t * coef_ * special::gamma_p(m_ + delta_, x);
            return pi_lambda_ * (d_ * d_ - std::max(0.0, deficit));
        }
        const double v = d_ * d_ * special::gamma_q(m_, x) + t * t * coef_ * special::gamma_p(m_ + delta_, x);
        return special::flush(pi_lambda_ * v);
    }

    double density(double t) const {
        detail::require_t(t);
        if (path_ == IntensityPath::numeric_general) return density_general(cfg_, link_, t);
        const double x = detail::displaced_gamma_argument(m_, b_, alpha_, d_, t);
        const double g = link_ == LinkType::nlos ? special::gamma_q(m_ + delta_, x) : special::gamma_p(m_ + delta_, x);
        return special::flush(2.0 * pi_lambda_ * t * coef_ * g);
    }

    /// Λ^U([0, ∞)): finite for LOS (every LOS BS lies within d), infinite for NLOS.
    double total_mass() const {
        if (link_ == LinkType::los) return pi_lambda_ * d_ * d_;
        return std::numeric_limits<double>::infinity();
    }

    /// Far-field coefficient c with Λ^U([0, t]) ~ c t^2 as t -> ∞ (zero for LOS).
    double far_field_coefficient() const { return link_ == LinkType::nlos ? pi_lambda_ * coef_ : 0.0; }

private:
    NetworkConfig cfg_;
    LinkType link_;
    IntensityPath path_;
    double m_ = 1.0;
    double b_ = 0.0;
    double alpha_ = 0.0;
    double delta_ = 0.0;
    double d_ = 0.0;
    double pi_lambda_ = 0.0;
    double coef_ = 0.0;  // (B/m)^{2/alpha} Γ(m + 2/alpha) / Γ(m)
};

/// The pair (NLOS, LOS) of displaced-process intensities.
struct IntensityFns {
    LinkIntensity nlos;
    LinkIntensity los;

    const LinkIntensity& operator[](LinkType link) const { return link == LinkType::nlos ? nlos : los; }
};

/// Picks the closed forms (every shipped fading law is a Gamma law and the
/// step profile is the only LOS profile); `numeric_general` forces the
/// quadrature route.
inline IntensityFns make_intensity_fns(const NetworkConfig& cfg, IntensityPath path = IntensityPath::closed_form) {
    return IntensityFns{LinkIntensity(cfg, LinkType::nlos, path), LinkIntensity(cfg, LinkType::los, path)};
}

}  // namespace scnperf
