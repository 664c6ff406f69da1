#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "uclab/minimizer.hpp"

using namespace uclab;

namespace {

constexpr double kPi = std::numbers::pi;

// Straight tgamma route, valid away from poles and overflow.
double f_oracle(double x) { return std::sqrt(kPi) * std::tgamma(0.25 - 0.25 * x) / std::tgamma(0.75 - 0.25 * x); }

double lambda_multiplier(double alpha, double kappa, double eps) { return -0.5 * alpha * alpha - 0.5 * kappa * eps; }

}  // namespace

TEST(GammaRatio, Examples) {
    EXPECT_NEAR(gamma_ratio_F(3.0), 0.0, 1e-10);
    EXPECT_NEAR(gamma_ratio_F(0.0), std::tgamma(0.5) * std::tgamma(0.25) / std::tgamma(0.75), 1e-12);
    EXPECT_NEAR(gamma_ratio_F(0.0), 5.2441, 1e-4);
    try {
        gamma_ratio_F(1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::AtPole);
    }
    EXPECT_THROW(gamma_ratio_F(5.0 + 1e-12), Error);
}

TEST(GammaRatio, AgreesWithTgammaRoute) {
    for (double x : {-7.3, -2.0, -0.5, 0.5, 2.0, 2.9, 3.3, 4.2, 6.0, 10.3, 17.5}) {
        EXPECT_NEAR(gamma_ratio_F(x), f_oracle(x), 1e-12 * std::max(1.0, std::abs(f_oracle(x)))) << x;
    }
}

TEST(GammaRatio, ZerosBetweenPoles) {
    for (double x : {3.0, 7.0, 11.0, 19.0}) EXPECT_EQ(gamma_ratio_F(x), 0.0) << x;
}

TEST(GammaRatio, DerivativeMatchesFiniteDifference) {
    for (double x : {-4.1, 0.0, 2.0, 2.9, 3.0, 3.1, 6.5, 9.9}) {
        const double h = 1e-5;
        const double fd = (gamma_ratio_F(x + h) - gamma_ratio_F(x - h)) / (2 * h);
        EXPECT_NEAR(gamma_ratio_F_prime(x), fd, 1e-6 * std::max(1.0, std::abs(fd))) << x;
    }
    EXPECT_NEAR(gamma_ratio_F_prime(3.0), kPi / 2, 1e-14);
}

TEST(GammaRatio, IncreasingThroughThree) {
    EXPECT_LT(gamma_ratio_F(3.0 - 1e-3), 0.0);
    EXPECT_GT(gamma_ratio_F(3.0 + 1e-3), 0.0);
    EXPECT_GT(gamma_ratio_F_prime(3.0), 0.0);
}

TEST(Series, ConvergesToGammaRatio) {
    for (double s : {0.0, 2.0, 2.9}) {
        const double target = gamma_ratio_F(s);
        double prev = 1e9;
        for (long long n : {1000LL, 10000LL, 100000LL, 1000000LL}) {
            const SeriesValue v = series_lhs(s, n);
            const double err = std::abs(v.value - target);
            EXPECT_LT(err, prev) << s;
            EXPECT_LE(err, v.half_width) << s;
            prev = err;
        }
        EXPECT_LT(prev, 5e-3) << s;
    }
    EXPECT_LT(std::abs(series_lhs(3.0, 1000000).value), 5e-3);
}

TEST(Series, NearPoleFollowsF) {
    const double s = 1.0 + 1e-6;
    const double v = series_lhs(s, 1000).value;
    EXPECT_LT(v, -1e6);
    EXPECT_LT(gamma_ratio_F(s), -1e6);
}

TEST(Series, Errors) {
    EXPECT_THROW(series_lhs(1.0, 100), Error);
    EXPECT_THROW(series_lhs(5.0, 100), Error);
    EXPECT_THROW(series_lhs(0.0, 9), Error);
}

TEST(System, ZeroEpsilonPoint) {
    const SystemResidual r = zero_eps_solution();
    EXPECT_EQ(r.alpha, 3.0);
    EXPECT_NEAR(r.beta * r.beta, 2.0 / std::sqrt(kPi) / gamma_ratio_F_prime(3.0), 1e-15);
    EXPECT_NEAR(r.beta * r.beta, 4.0 / std::pow(kPi, 1.5), 1e-14);
    EXPECT_LT(r.norm(), 1e-8);
}

TEST(System, ResidualDefinition) {
    const double a = 2.2, b = -0.7, e = 0.3;
    const SystemResidual r = system_residual(a, b, e);
    const double x = a + b * e;
    EXPECT_NEAR(r.r1, -b * f_oracle(x) - std::pow(kPi, -1.5) * e, 1e-12);
    const double h = 1e-5;
    const double fp = (f_oracle(x + h) - f_oracle(x - h)) / (2 * h);
    EXPECT_NEAR(r.r2, b * b * fp - 2.0 / std::sqrt(kPi), 1e-6);
}

TEST(Scan, SmallGridSkipsPoles) {
    long long sunk = 0;
    ScanOptions opt;
    opt.sink = [&](const SystemResidual&) { ++sunk; };
    // alpha = 1 lies on the grid with beta = 0 at eps = 0.5: x = 1 is a pole.
    const ScanResult r = scan_no_solution(0.5, {0.0, 2.0}, {-1.0, 1.0}, 21, opt);
    EXPECT_GT(r.skipped, 0);
    EXPECT_EQ(r.evaluated + r.skipped, 21 * 21);
    EXPECT_EQ(sunk, r.evaluated);
    EXPECT_TRUE(std::isfinite(r.min_residual));
}

TEST(Scan, SerialAndParallelAgree) {
    ScanOptions one;
    one.workers = 1;
    ScanOptions four;
    four.workers = 4;
    const ScanResult a = scan_no_solution(0.5, {0.1, 20.0}, {-20.0, 20.0}, 101, one);
    const ScanResult b = scan_no_solution(0.5, {0.1, 20.0}, {-20.0, 20.0}, 101, four);
    EXPECT_EQ(a.min_residual, b.min_residual);
    EXPECT_EQ(a.evaluated, b.evaluated);
}

TEST(Scan, InvalidInput) {
    EXPECT_THROW(scan_no_solution(0.5, {0.1, 20.0}, {-20.0, 20.0}, 1), Error);
    EXPECT_THROW(scan_no_solution(0.5, {2.0, 1.0}, {-20.0, 20.0}, 10), Error);
}

// The displayed reduced system does have roots at eps = 0.5; polishing from a
// nearby start lands on one. Recorded so the scan result is not over-read.
TEST(System, PolishFindsRootAtHalf) {
    const SystemResidual r = polish_system(3.5, -0.85, 0.5);
    EXPECT_LT(r.norm(), 1e-12);
    EXPECT_NEAR(r.alpha, 3.4950, 1e-3);
    EXPECT_NEAR(r.beta, -0.8551, 1e-3);
}

TEST(HermiteBranch, GaussianAndHigher) {
    const auto b0 = hermite_branch(hermite_integral(0));
    ASSERT_TRUE(b0.has_value());
    EXPECT_EQ(b0->n, 0);
    EXPECT_EQ(b0->uc, 0.5);
    const auto b2 = hermite_branch(hermite_integral(4));
    ASSERT_TRUE(b2.has_value());
    EXPECT_EQ(b2->n, 4);
    EXPECT_EQ(b2->uc, 4.5);
    EXPECT_FALSE(hermite_branch(0.5).has_value());
}

TEST(Candidate, ZeroKappaIsZeroSignal) {
    const SampledLineSignal f = candidate_series(3.1, 0.0, 0.5, 20, {20.0, 0.05});
    for (const cplx& v : f.samples) EXPECT_EQ(std::abs(v), 0.0);
}

TEST(Candidate, DenominatorPole) {
    // 2n + 1/2 - alpha/2 = 0 at alpha = 1 (n = 0) with kappa = 0.
    try {
        candidate_coefficients(1.0, 0.0, 0.5, 20);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::AtPole);
    }
}

TEST(Candidate, MeasuredConstraintsMatchSeries) {
    const double alpha = 3.1, kappa = 0.1, eps = 0.5;
    const ConstraintSeries series = candidate_constraints(alpha, kappa, eps, 200);
    const ConstraintSeries measured = measured_constraints(candidate_series(alpha, kappa, eps, 200));
    EXPECT_NEAR(measured.integral, series.integral, 1e-3);
    EXPECT_NEAR(measured.norm_sq, series.norm_sq, 1e-3);
}

TEST(Candidate, TruncationStable) {
    const double a = candidate_constraints(3.1, 0.1, 0.5, 200).norm_sq;
    const double b = candidate_constraints(3.1, 0.1, 0.5, 400).norm_sq;
    EXPECT_LT(std::abs(a - b), 1e-3);
}

TEST(Candidate, CoefficientsMatchHermiteProjections) {
    const std::vector<double> c = candidate_coefficients(3.1, 0.1, 0.5, 30);
    const double lam = lambda_multiplier(3.1, 0.1, 0.5);
    for (int n = 0; n <= 30; ++n) {
        const double a_k = -0.5 * 0.1 * hermite_integral(2 * n) / (3.1 * (2 * n + 0.5) + lam);
        EXPECT_NEAR(c[n], a_k, 1e-14 * std::max(1.0, std::abs(a_k))) << n;
    }
}

TEST(Candidate, EulerLagrangeProjectionsVanish) {
    const double alpha = 3.1, kappa = 0.1, eps = 0.5;
    const double lam = lambda_multiplier(alpha, kappa, eps);
    const SeriesGrid grid{20.0, 0.01};
    const SampledLineSignal f = candidate_series(alpha, kappa, eps, 10, grid);
    // With the (2pi)^{-1}-weighted inner product the constant term is pi kappa.
    const std::vector<double> res = euler_lagrange_residual(f, alpha, lam, kPi * kappa);
    for (int n = 0; n <= 20; ++n) EXPECT_NEAR(project_on_hermite(res, f, n), 0.0, 1e-7) << n;

    std::vector<double> coeffs = candidate_coefficients(alpha, kappa, eps, 10);
    coeffs[2] *= 1.1;
    const SampledLineSignal g = even_hermite_series(coeffs, grid);
    const std::vector<double> bad = euler_lagrange_residual(g, alpha, lam, kPi * kappa);
    EXPECT_GT(std::abs(project_on_hermite(bad, g, 4)), 1e-4);
}
