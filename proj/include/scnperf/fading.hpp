#pragma once

// Channel power-gain distributions. Every model is a unit-mean Gamma law:
// Rayleigh is Gamma(1, 1), Nakagami-m is Gamma(m, 1/m), and Rician(K) is
// represented by its Nakagami fit m = (K + 1)^2 / (2K + 1).

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "scnperf/errors.hpp"
#include "scnperf/special.hpp"

namespace scnperf {

struct Rayleigh {};

struct Nakagami {
    double m = 1.0;
};

struct Rician {
    double k_linear = 0.0;
};

/// Nakagami shape that matches the first two moments of a Rician power gain.
inline double rician_to_nakagami_m(double k_linear) {
    detail::require_domain(k_linear >= 0.0 && std::isfinite(k_linear),
                           "rician_to_nakagami_m: K must be finite and >= 0");
    return (k_linear + 1.0) * (k_linear + 1.0) / (2.0 * k_linear + 1.0);
}

class FadingModel {
public:
    using Variant = std::variant<Rayleigh, Nakagami, Rician>;

    FadingModel() = default;

    static FadingModel rayleigh() { return FadingModel(Rayleigh{}); }

    static FadingModel nakagami(double m) {
        detail::require_config(std::isfinite(m) && m >= 0.5, "Nakagami shape m must be >= 0.5");
        return FadingModel(Nakagami{m});
    }

    static FadingModel rician(double k_linear) {
        detail::require_config(std::isfinite(k_linear) && k_linear >= 0.0, "Rician K must be >= 0");
        return FadingModel(Rician{k_linear});
    }

    static FadingModel rician_db(double k_db) { return rician(std::pow(10.0, k_db / 10.0)); }

    /// Parses `rayleigh`, `nakagami:<m>` or `rician:<K_dB>`.
    static FadingModel parse(std::string_view text) {
        const auto colon = text.find(':');
        const std::string_view name = text.substr(0, colon);
        if (name == "rayleigh" && colon == std::string_view::npos) return rayleigh();
        if (colon == std::string_view::npos || colon + 1 >= text.size()) {
            throw ConfigError("unknown fading model '" + std::string(text) +
                              "' (expected rayleigh, nakagami:<m> or rician:<K_dB>)");
        }
        double value = 0.0;
        try {
            std::size_t used = 0;
            const std::string arg(text.substr(colon + 1));
            value = std::stod(arg, &used);
            if (used != arg.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ConfigError("bad fading parameter in '" + std::string(text) + "'");
        }
        if (name == "nakagami") return nakagami(value);
        if (name == "rician") return rician_db(value);
        throw ConfigError("unknown fading model '" + std::string(text) + "'");
    }

    /// Shape of the equivalent unit-mean Gamma law.
    double gamma_shape() const {
        return std::visit(
            [](const auto& v) -> double {
                using V = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<V, Rayleigh>) return 1.0;
                else if constexpr (std::is_same_v<V, Nakagami>) return v.m;
                else return rician_to_nakagami_m(v.k_linear);
            },
            model_);
    }

    std::string spelled() const {
        std::ostringstream os;
        os.precision(17);
        std::visit(
            [&os](const auto& v) {
                using V = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<V, Rayleigh>) os << "rayleigh";
                else if constexpr (std::is_same_v<V, Nakagami>) os << "nakagami:" << v.m;
                else os << "rician:" << 10.0 * std::log10(v.k_linear);
            },
            model_);
        return os.str();
    }

    const Variant& variant() const { return model_; }

    bool is_rayleigh() const { return std::holds_alternative<Rayleigh>(model_); }

    friend bool operator==(const FadingModel& a, const FadingModel& b) {
        return a.model_.index() == b.model_.index() && a.gamma_shape() == b.gamma_shape();
    }

private:
    explicit FadingModel(Variant v) : model_(v) {}

    Variant model_{Rayleigh{}};
};

/// Density of the power gain h.
inline double power_gain_pdf(const FadingModel& model, double h) {
    detail::require_domain(h >= 0.0, "power_gain_pdf: h must be >= 0");
    const double m = model.gamma_shape();
    if (m == 1.0) return std::exp(-h);
    if (h == 0.0) return m < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
    const double log_pdf = m * std::log(m) - special::lgamma(m) + (m - 1.0) * std::log(h) - m * h;
    return std::exp(log_pdf);
}

inline double power_gain_cdf(const FadingModel& model, double h) {
    detail::require_domain(h >= 0.0, "power_gain_cdf: h must be >= 0");
    const double m = model.gamma_shape();
    return special::gamma_p(m, m * h);
}

/// Smallest h with Pr[H > h] <= tail.
inline double power_gain_upper_quantile(const FadingModel& model, double tail) {
    const double m = model.gamma_shape();
    return special::gamma_q_inv(m, tail) / m;
}

/// Draws one power gain. std::gamma_distribution is an exact sampler for
/// every shape > 0 (Marsaglia-Tsang in libstdc++, with the U^{1/m} boost for
/// shapes below one), which covers fractional m such as the Rician fit.
template <class URBG>
double sample_power_gain(const FadingModel& model, URBG& rng) {
    const double m = model.gamma_shape();
    std::gamma_distribution<double> gamma(m, 1.0 / m);
    return gamma(rng);
}

}  // namespace scnperf
