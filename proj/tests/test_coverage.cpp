#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracle_values.hpp"
#include "scnperf/coverage.hpp"

using namespace scnperf;

namespace {

NetworkConfig at_lambda(double per_km2) {
    return NetworkConfig::reference().with_intensity(units::per_km2_to_per_m2(per_km2));
}

CoverageResult coverage_at(const NetworkConfig& cfg, double threshold, double tol = 1e-4) {
    CoverageQuery q{cfg, 1.0, std::nullopt, 1e-3, IntensityPath::closed_form};
    q.threshold = threshold;
    q.abs_tol = tol;
    return coverage_probability(q);
}

// d -> 0 makes every link NLOS, d -> infinity every link LOS
NetworkConfig single_slope(double cutoff, double alpha) {
    return at_lambda(10.0).with_noise(0.0).with_exponents(alpha, alpha).with_cutoff(cutoff);
}

}  // namespace

TEST(CharacteristicFn, UnitAtZeroBoundedAndHermitian) {
    for (double lam : {1.0, 10.0, 300.0}) {
        const auto cfg = at_lambda(lam);
        for (LinkType link : kLinkTypes) {
            for (double y : {30.0, 300.0, 3000.0}) {
                const std::complex<double> f0 = characteristic_fn(cfg, link, y, 0.0);
                EXPECT_EQ(f0, std::complex<double>(1.0, 0.0));
                for (double w = 1e-3; w < 1e4; w *= 3.3) {
                    const auto f = characteristic_fn(cfg, link, y, w);
                    const auto g = characteristic_fn(cfg, link, y, -w);
                    EXPECT_LE(std::abs(f), 1.0 + 1e-9) << "y=" << y << " w=" << w;
                    EXPECT_NEAR(g.real(), f.real(), 1e-12) << "y=" << y << " w=" << w;
                    EXPECT_NEAR(g.imag(), -f.imag(), 1e-12) << "y=" << y << " w=" << w;
                }
            }
        }
    }
}

TEST(CharacteristicFn, PureNoiseLimit) {
    const auto cfg = at_lambda(1e-9);
    const double y = 500.0;
    for (LinkType link : kLinkTypes) {
        const double noise_rel = cfg.noise_power() * std::pow(y, cfg.exponent(link));
        for (double w : {0.1, 1.0, 17.0}) {
            const auto f = characteristic_fn(cfg, link, y, w);
            EXPECT_NEAR(std::abs(f - std::polar(1.0, w * noise_rel)), 0.0, 1e-6) << w;
        }
    }
}

TEST(ConditionalCoverage, NoiseOnlyStep) {
    const auto cfg = at_lambda(1e-9);
    for (LinkType link : kLinkTypes) {
        for (double T : {0.5, 1.0, 10.0}) {
            // serving power relative to B h is y^{-alpha}; covered iff y < y_step
            const double y_step = std::pow(1.0 / (T * cfg.noise_power()), 1.0 / cfg.exponent(link));
            EXPECT_NEAR(conditional_coverage(cfg, link, 0.5 * y_step, T).value, 1.0, 1e-4) << T;
            EXPECT_EQ(conditional_coverage(cfg, link, 2.0 * y_step, T).value, 0.0) << T;
        }
    }
}

TEST(ConditionalCoverage, SmallThresholdAndMonotoneInT) {
    const auto cfg = at_lambda(10.0);
    for (LinkType link : kLinkTypes) {
        for (double y : {50.0, 400.0}) {
            EXPECT_NEAR(conditional_coverage(cfg, link, y, 1e-6).value, 1.0, 1e-3);
            double prev = 1.0;
            for (double T : {0.1, 0.5, 1.0, 2.0, 8.0}) {
                const double p = conditional_coverage(cfg, link, y, T).value;
                EXPECT_LE(p, prev + 2e-4) << "y=" << y << " T=" << T;
                prev = p;
            }
        }
    }
}

TEST(Association, VoidProbabilityProperties) {
    const auto cfg = at_lambda(10.0);
    const auto fns = make_intensity_fns(cfg);
    for (LinkType link : kLinkTypes) {
        EXPECT_NEAR(association_prob_given_y(cfg, link, 1e-3), 1.0, 1e-12);
        double prev = 1.0;
        for (double y = 1.0; y < 1e6; y *= 1.4) {
            const double p = association_prob_given_y(cfg, link, y);
            EXPECT_LE(p, prev);
            prev = p;
            const LinkType v = other(link);
            const double mapped = std::pow(y, cfg.exponent(link) / cfg.exponent(v));
            EXPECT_NEAR(p, std::exp(-fns[v].measure(mapped)), 1e-14);
        }
    }
}

TEST(ServingDistance, PdfIntegratesToAtMostOne) {
    const auto cfg = at_lambda(10.0);
    const auto fns = make_intensity_fns(cfg);
    double total = 0.0;
    for (LinkType link : kLinkTypes) {
        const double pts[] = {-10.0, 0.0, 4.0, 6.0, 8.0, 10.0, 14.0, 25.0};
        const auto r = quad::integrate(
            [&](double ly) { return serving_distance_pdf(fns, link, std::exp(ly)) * std::exp(ly); },
            std::span<const double>(pts), 1e-10, 1e-10);
        EXPECT_GT(r.value, 0.0);
        EXPECT_LE(r.value, 1.0 + 1e-9);
        total += r.value;
    }
    // the NLOS process is a.s. nonempty
    EXPECT_GT(total, 1.0);
}

TEST(Coverage, MatchesSingleBsUnionOracleRayleigh) {
    // for T >= 1 at most one BS can exceed the threshold, which gives an
    // independent one-dimensional formula (see tests/oracles/generate.py)
    struct Case {
        double lambda;
        double nlos;
        double los;
    };
    for (const Case& c : {Case{1.0, oracle::kCoverageSinrT1_nlos_lambda1, oracle::kCoverageSinrT1_los_lambda1},
                          Case{10.0, oracle::kCoverageSinrT1_nlos_lambda10, oracle::kCoverageSinrT1_los_lambda10},
                          Case{100.0, oracle::kCoverageSinrT1_nlos_lambda100, oracle::kCoverageSinrT1_los_lambda100}}) {
        const auto r = coverage_at(at_lambda(c.lambda), 1.0);
        EXPECT_NEAR(r.p_nlos_branch, c.nlos, 5e-4) << c.lambda;
        EXPECT_NEAR(r.p_los_branch, c.los, 5e-4) << c.lambda;
        EXPECT_NEAR(r.p_total, c.nlos + c.los, 5e-4) << c.lambda;
        EXPECT_LT(r.error_estimate, 1e-3);
    }
    EXPECT_NEAR(coverage_at(at_lambda(10.0), 2.0).p_total, oracle::kCoverageSinrT2_total_lambda10, 5e-4);
    EXPECT_NEAR(coverage_at(at_lambda(1.0).with_noise(0.0), 1.0).p_total, oracle::kCoverageSirT1_total_lambda1, 5e-4);
}

TEST(Coverage, SingleSlopeStrongestBsClosedForm) {
    // strongest-BS association with Rayleigh fading: p_c = sinc(2/alpha) T^{-2/alpha} for T >= 1
    EXPECT_NEAR(coverage_at(single_slope(1e-6, 4.0), 1.0).p_total, oracle::kSingleSlopeAlpha4T1, 5e-4);
    EXPECT_NEAR(coverage_at(single_slope(1e9, 4.0), 1.0).p_total, oracle::kSingleSlopeAlpha4T1, 5e-4);
    EXPECT_NEAR(coverage_at(single_slope(1e-6, 3.75), 2.0).p_total, oracle::kSingleSlopeAlpha375T2, 5e-4);
}

TEST(Coverage, BranchSumIsProbabilityAcrossIntensities) {
    for (double lam : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
        const auto r = coverage_at(at_lambda(lam), 1.0, 1e-3);
        EXPECT_GE(r.p_nlos_branch, 0.0);
        EXPECT_GE(r.p_los_branch, 0.0);
        EXPECT_LE(r.p_nlos_branch + r.p_los_branch, 1.0 + 1e-3) << lam;
        EXPECT_GE(r.p_total, 0.0);
        EXPECT_LE(r.p_total, 1.0);
    }
}

TEST(Coverage, NonincreasingInThreshold) {
    const std::vector<double> ts = {0.01, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0};
    for (double lam : {1.0, 30.0, 1000.0}) {
        CoverageOptions opt;
        opt.abs_tol = 1e-3;
        const auto curve = coverage_curve(at_lambda(lam), ts, opt);
        for (std::size_t i = 1; i < curve.size(); ++i) {
            EXPECT_LE(curve[i].p_total, curve[i - 1].p_total + 2e-3) << "lambda=" << lam << " T=" << ts[i];
        }
    }
}

TEST(Coverage, CurveMatchesSingleThresholdQueries) {
    const std::vector<double> ts = {0.2, 1.0, 5.0};
    CoverageOptions opt;
    opt.abs_tol = 1e-4;
    const auto cfg = at_lambda(50.0);
    const auto curve = coverage_curve(cfg, ts, opt);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        EXPECT_NEAR(curve[i].p_total, coverage_at(cfg, ts[i]).p_total, 3e-4) << ts[i];
    }
}

TEST(Coverage, SirDominatesSinr) {
    for (double lam : {0.1, 0.3, 1.0, 3.0, 30.0}) {
        const auto sinr = coverage_at(at_lambda(lam), 1.0, 1e-3);
        const auto sir = coverage_at(at_lambda(lam).with_noise(0.0), 1.0, 1e-3);
        EXPECT_GE(sir.p_total, sinr.p_total - 2e-3) << lam;
    }
}

TEST(Coverage, SingleBranchQueryMatchesFullQuery) {
    const auto cfg = at_lambda(20.0);
    const auto full = coverage_at(cfg, 1.0);
    for (LinkType link : kLinkTypes) {
        CoverageQuery q{cfg, 1.0, std::nullopt, 1e-3, IntensityPath::closed_form};
        q.abs_tol = 1e-4;
        q.branch = link;
        const auto part = coverage_probability(q);
        EXPECT_NEAR(part.branch(link), full.branch(link), 2e-4);
        EXPECT_EQ(part.branch(other(link)), 0.0);
    }
}

TEST(Coverage, GeneralIntensityPathAgrees) {
    const auto cfg = at_lambda(10.0).with_fading(FadingModel::rayleigh(), FadingModel::rician_db(15.0));
    CoverageQuery q{cfg, 1.0, std::nullopt, 1e-3, IntensityPath::closed_form};
    q.abs_tol = 1e-3;
    const double closed = coverage_probability(q).p_total;
    q.path = IntensityPath::numeric_general;
    EXPECT_NEAR(coverage_probability(q).p_total, closed, 2e-3);
}

TEST(Coverage, RejectsBadInput) {
    const auto cfg = at_lambda(10.0);
    const double bad[] = {0.0};
    EXPECT_THROW(coverage_curve(cfg, bad), DomainError);
    const double inf[] = {std::numeric_limits<double>::infinity()};
    EXPECT_THROW(coverage_curve(cfg, inf), DomainError);
    EXPECT_THROW(conditional_coverage(cfg, LinkType::los, -1.0, 1.0), DomainError);
}

TEST(Coverage, ReportsExhaustedBudget) {
    CoverageOptions opt;
    opt.abs_tol = 1e-6;
    opt.max_y_evaluations = 100;
    const double t[] = {1.0};
    try {
        coverage_curve(at_lambda(10.0), t, opt);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_GT(e.achieved_error(), 1e-6);
        EXPECT_GE(e.partial_result(), 0.0);
    }
}
