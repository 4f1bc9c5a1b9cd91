#pragma once

// Gamma-family special functions used by the fading and intensity modules.
//
// Backed by Boost.Math. Its incomplete gamma switches between the power
// series, the Legendre continued fraction and Temme's uniform asymptotic
// expansion depending on (s, x), and is accurate to a few ulp for double
// arguments. We only add the domain conventions used in this library:
// x = +inf is accepted, and results below 1e-300 are flushed to exact zero.

#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "scnperf/errors.hpp"

namespace scnperf::special {

using Policy = boost::math::policies::policy<
    boost::math::policies::promote_double<false>,
    boost::math::policies::underflow_error<boost::math::policies::ignore_error>>;

inline constexpr double kFlushBelow = 1e-300;

inline double flush(double v) { return std::abs(v) < kFlushBelow ? 0.0 : v; }

inline double tgamma(double s) { return boost::math::tgamma(s, Policy{}); }
inline double lgamma(double s) { return boost::math::lgamma(s, Policy{}); }

/// Regularized upper incomplete gamma Q(s, x) = Γ(s, x) / Γ(s).
inline double gamma_q(double s, double x) {
    detail::require_domain(s > 0.0 && x >= 0.0, "gamma_q: need s > 0, x >= 0");
    if (std::isinf(x)) return 0.0;
    return flush(boost::math::gamma_q(s, x, Policy{}));
}

/// Regularized lower incomplete gamma P(s, x) = γ(s, x) / Γ(s).
inline double gamma_p(double s, double x) {
    detail::require_domain(s > 0.0 && x >= 0.0, "gamma_p: need s > 0, x >= 0");
    if (std::isinf(x)) return 1.0;
    return flush(boost::math::gamma_p(s, x, Policy{}));
}

/// Non-normalized upper incomplete gamma Γ(s, x).
inline double upper_gamma(double s, double x) {
    detail::require_domain(s > 0.0 && x >= 0.0, "upper_gamma: need s > 0, x >= 0");
    if (std::isinf(x)) return 0.0;
    return flush(boost::math::tgamma(s, x, Policy{}));
}

/// Non-normalized lower incomplete gamma γ(s, x).
inline double lower_gamma(double s, double x) {
    detail::require_domain(s > 0.0 && x >= 0.0, "lower_gamma: need s > 0, x >= 0");
    if (std::isinf(x)) return tgamma(s);
    return flush(boost::math::tgamma_lower(s, x, Policy{}));
}

/// Inverse of Q(s, ·): the x with Q(s, x) = q.
inline double gamma_q_inv(double s, double q) {
    detail::require_domain(s > 0.0 && q > 0.0 && q <= 1.0, "gamma_q_inv: need s > 0, q in (0, 1]");
    return boost::math::gamma_q_inv(s, q, Policy{});
}

}  // namespace scnperf::special
