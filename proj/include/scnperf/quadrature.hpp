#pragma once

// Quadrature building blocks shared by the intensity and coverage engines.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <type_traits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace scnperf::quad {

using cplx = std::complex<double>;

template <class T>
double magnitude(const T& v) {
    return std::abs(v);
}

/// Dense vector value type for integrating several integrands over one
/// adaptive partition. An empty vector acts as zero; error control uses the
/// max norm.
struct Vec {
    std::vector<double> v;

    Vec() = default;
    explicit Vec(std::size_t n, double fill = 0.0) : v(n, fill) {}

    Vec& operator+=(const Vec& o) {
        if (o.v.empty()) return *this;
        if (v.empty()) v.assign(o.v.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        if (o.v.empty()) return *this;
        if (v.empty()) v.assign(o.v.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (auto& x : v) x *= s;
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
};

inline double magnitude(const Vec& x) {
    double m = 0.0;
    for (double e : x.v) m = std::max(m, std::abs(e));
    return m;
}

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

/// One 15-point Kronrod panel with the embedded 7-point Gauss estimate.
/// The error estimate is the QUADPACK heuristic built from |K15 - G7|.
template <class T>
struct Panel {
    double a = 0.0;
    double b = 0.0;
    T value{};
    double error = 0.0;

    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
auto gauss_kronrod15(F&& f, double a, double b) {
    using T = std::decay_t<decltype(f(a))>;
    const auto& xk = boost::math::quadrature::gauss_kronrod<double, 15>::abscissa();
    const auto& wk = boost::math::quadrature::gauss_kronrod<double, 15>::weights();
    const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    std::array<T, 15> fv{};
    fv[0] = f(c);
    for (std::size_t i = 1; i < 8; ++i) {
        fv[2 * i - 1] = f(c - h * xk[i]);
        fv[2 * i] = f(c + h * xk[i]);
    }

    T kronrod = wk[0] * fv[0];
    T gauss = wg[0] * fv[0];
    for (std::size_t i = 1; i < 8; ++i) {
        kronrod += wk[i] * (fv[2 * i - 1] + fv[2 * i]);
        if (i % 2 == 0) gauss += wg[i / 2] * (fv[2 * i - 1] + fv[2 * i]);
    }
    const T mean = 0.5 * kronrod;
    double resasc = wk[0] * magnitude(fv[0] - mean);
    for (std::size_t i = 1; i < 8; ++i) {
        resasc += wk[i] * (magnitude(fv[2 * i - 1] - mean) + magnitude(fv[2 * i] - mean));
    }
    resasc *= std::abs(h);

    double err = magnitude((kronrod - gauss) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));

    Panel<T> p;
    p.a = a;
    p.b = b;
    p.value = kronrod * h;
    p.error = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * magnitude(p.value));
    return p;
}

/// Globally adaptive Gauss-Kronrod integration (QAG-style bisection of the
/// panel with the largest error). `breakpoints` seed the initial partition.
template <class F>
auto integrate(F&& f, std::span<const double> breakpoints, double abs_tol, double rel_tol,
               std::size_t max_evaluations = 200000) {
    using T = std::decay_t<decltype(f(breakpoints[0]))>;
    QuadResult<T> out;
    std::priority_queue<Panel<T>> heap;
    T total{};
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i + 1] > breakpoints[i])) continue;
        auto p = gauss_kronrod15(f, breakpoints[i], breakpoints[i + 1]);
        out.evaluations += 15;
        total += p.value;
        total_error += p.error;
        heap.push(p);
    }
    while (!heap.empty() && total_error > std::max(abs_tol, rel_tol * magnitude(total))) {
        if (out.evaluations + 30 > max_evaluations) {
            out.converged = false;
            break;
        }
        Panel<T> worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            out.converged = false;  // interval exhausted at machine precision
            break;
        }
        heap.pop();
        auto left = gauss_kronrod15(f, worst.a, mid);
        auto right = gauss_kronrod15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed the drift of the running updates
    total = T{};
    total_error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_error += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.error = total_error;
    return out;
}

template <class F>
auto integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
               std::size_t max_evaluations = 200000) {
    const std::array<double, 2> bp{a, b};
    return integrate(std::forward<F>(f), std::span<const double>(bp), abs_tol, rel_tol, max_evaluations);
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
/// Returns the extrapolated limit and a crude error estimate (distance
/// between the last two diagonal estimates).
struct Extrapolation {
    double value = 0.0;
    double error = std::numeric_limits<double>::infinity();
};

inline Extrapolation wynn_epsilon(std::span<const double> sums) {
    const std::size_t n = sums.size();
    if (n == 0) return {};
    if (n < 3) return {sums.back(), std::numeric_limits<double>::infinity()};

    // e[k][j] with e[-1] = 0 and e[0] = sums; only even columns are estimates.
    std::vector<double> prev(n, 0.0);
    std::vector<double> cur(sums.begin(), sums.end());
    std::vector<double> estimates;
    estimates.push_back(cur.back());
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> next(n - k);
        bool degenerate = false;
        for (std::size_t j = 0; j + k < n; ++j) {
            const double diff = cur[j + 1] - cur[j];
            if (diff == 0.0 || !std::isfinite(diff)) {
                degenerate = true;
                break;
            }
            next[j] = prev[j + 1] + 1.0 / diff;
        }
        if (degenerate) break;
        prev = std::move(cur);
        cur = std::move(next);
        if (k % 2 == 0) estimates.push_back(cur.back());
    }
    Extrapolation out;
    out.value = estimates.back();
    if (estimates.size() >= 2) {
        out.error = std::abs(estimates.back() - estimates[estimates.size() - 2]);
    }
    return out;
}

/// Spherical Bessel functions j_0..j_{N-1} at x. Power series for |x| < 1,
/// Miller's backward recurrence normalized by Σ (2k+1) j_k^2 = 1 up to
/// |x| = N, and the (then stable) forward recurrence beyond.
template <std::size_t N>
std::array<double, N> spherical_bessel_j(double x) {
    std::array<double, N> j{};
    const double ax = std::abs(x);
    if (ax < 1.0) {
        // j_k(x) = x^k/(2k+1)!! Σ_m (-x^2/2)^m / (m! (2k+3)(2k+5)...(2k+2m+1))
        double lead = 1.0;
        for (std::size_t k = 0; k < N; ++k) {
            if (k > 0) lead *= ax / static_cast<double>(2 * k + 1);
            double term = 1.0;
            double sum = 1.0;
            for (std::size_t m = 1; m < 12; ++m) {
                term *= -0.5 * ax * ax / (static_cast<double>(m) * static_cast<double>(2 * k + 2 * m + 1));
                sum += term;
            }
            j[k] = lead * sum;
        }
    } else if (ax < static_cast<double>(N)) {
        constexpr std::size_t K = N + 30;
        std::array<double, K + 2> b{};
        b[K + 1] = 0.0;
        b[K] = 1.0;
        for (std::size_t k = K; k >= 1; --k) {
            b[k - 1] = static_cast<double>(2 * k + 1) / ax * b[k] - b[k + 1];
        }
        double norm = 0.0;
        for (std::size_t k = 0; k <= K; ++k) norm += static_cast<double>(2 * k + 1) * b[k] * b[k];
        const double scale = 1.0 / std::sqrt(norm);
        // sign fixed by j_0 = sin x / x, or by j_1 where j_0 is small
        const double j0 = std::sin(ax) / ax;
        const double j1 = std::sin(ax) / (ax * ax) - std::cos(ax) / ax;
        const bool use_j0 = std::abs(j0) > std::abs(j1);
        const double ref = use_j0 ? j0 : j1;
        const double sign = ((use_j0 ? b[0] : b[1]) >= 0.0) == (ref >= 0.0) ? 1.0 : -1.0;
        for (std::size_t k = 0; k < N; ++k) j[k] = sign * scale * b[k];
    } else {
        j[0] = std::sin(ax) / ax;
        if (N > 1) j[1] = std::sin(ax) / (ax * ax) - std::cos(ax) / ax;
        for (std::size_t k = 1; k + 1 < N; ++k) {
            j[k + 1] = static_cast<double>(2 * k + 1) / ax * j[k] - j[k - 1];
        }
    }
    if (x < 0.0) {
        for (std::size_t k = 1; k < N; k += 2) j[k] = -j[k];
    }
    return j;
}

/// Gauss-Legendre nodes/weights on [-1, 1] in ascending order.
template <std::size_t N>
struct LegendreRule {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};

    LegendreRule() {
        const auto& x = boost::math::quadrature::gauss<double, N>::abscissa();
        const auto& w = boost::math::quadrature::gauss<double, N>::weights();
        std::vector<std::pair<double, double>> nw;
        for (std::size_t i = 0; i < x.size(); ++i) {
            nw.emplace_back(x[i], w[i]);
            if (x[i] != 0.0) nw.emplace_back(-x[i], w[i]);
        }
        std::sort(nw.begin(), nw.end());
        for (std::size_t i = 0; i < N; ++i) {
            nodes[i] = nw[i].first;
            weights[i] = nw[i].second;
        }
    }

    static const LegendreRule& get() {
        static const LegendreRule rule;
        return rule;
    }
};

/// Pairwise (cascade) summation; the result depends only on the input order.
template <class T>
T pairwise_sum(std::span<const T> v) {
    if (v.empty()) return T{};
    if (v.size() <= 8) {
        T s{};
        for (const auto& x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace scnperf::quad
