#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "uclab/frames.hpp"

using namespace uclab;
using uclab::testing::make_rng;
using uclab::testing::random_trig_poly;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed form of the Haar product: e^{-i theta} sin(theta)/theta, theta = pi k 2^{-j}.
cplx haar_xi(int j, long long k) {
    const double theta = kPi * std::ldexp(static_cast<double>(k), -j);
    const double sinc = theta == 0.0 ? 1.0 : std::sin(theta) / theta;
    return std::polar(sinc, -theta);
}

MaskSpec constant_mask(cplx v) {
    MaskSpec m;
    m.nu = [v](int, long long) { return v; };
    return m;
}

const WaveletFrameLevels& haar8() {
    static const WaveletFrameLevels fr = build_frame(haar_mask(), 8);
    return fr;
}

}  // namespace

TEST(Mask, HaarPeriodic) { EXPECT_LT(mask_periodicity_defect(haar_mask(), 10, 300), 1e-12); }

TEST(XiProduct, Examples) {
    EXPECT_EQ(xi_product(haar_mask(), 0, 0), cplx(1.0));
    EXPECT_NEAR(std::abs(xi_product(haar_mask(), 2, 1)), std::sin(kPi / 4) / (kPi / 4), 1e-12);
    EXPECT_NEAR(std::abs(xi_product(haar_mask(), 2, 1)), 0.90032, 1e-5);
    EXPECT_EQ(xi_product(constant_mask(0.0), 0, 5), cplx(0.0));
}

TEST(XiProduct, MatchesSincClosedForm) {
    auto rng = make_rng(31);
    std::uniform_int_distribution<int> jd(0, 10);
    std::uniform_int_distribution<long long> kd(-4096, 4096);
    for (int t = 0; t < 100; ++t) {
        const int j = jd(rng);
        const long long k = kd(rng);
        EXPECT_LT(std::abs(xi_product(haar_mask(), j, k) - haar_xi(j, k)), 1e-8) << j << "," << k;
    }
}

TEST(XiProduct, VanishesWhereSincDoes) {
    for (int j = 0; j < 5; ++j) {
        const long long p = 1LL << j;
        for (long long m = 1; m < 6; ++m) EXPECT_LT(std::abs(xi_product(haar_mask(), j, m * p)), 1e-15);
    }
}

TEST(XiProduct, NotConverged) {
    MaskSpec m = constant_mask(cplx(0.5, 0.5));
    m.max_depth = 8;
    try {
        xi_product(m, 0, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ProductNotConverged);
    }
}

TEST(BuildFrame, PhiZeroAtOrigin) { EXPECT_NEAR(std::abs(build_frame(haar_mask(), 3).phi[0].at(0) - 1.0), 0.0, 1e-15); }

TEST(BuildFrame, RefinementIdentity) {
    const WaveletFrameLevels& fr = haar8();
    for (int j = 0; j < fr.J; ++j) EXPECT_LT(refinement_residual(fr, j), 1e-12);
}

TEST(BuildFrame, ScalingLimitTrend) {
    const WaveletFrameLevels& fr = haar8();
    // Below j = 3 the window |k| <= 4 still reaches a zero of the sinc factor.
    for (int j = 4; j <= fr.J; ++j) EXPECT_LT(scaling_limit_defect(fr, j), scaling_limit_defect(fr, j - 1));
}

TEST(BuildFrame, WaveletFromStoredMasks) {
    const WaveletFrameLevels& fr = haar8();
    for (int j = 0; j < fr.J; ++j) {
        for (int k = -fr.support_radius; k <= fr.support_radius; ++k) {
            ASSERT_LT(std::abs(fr.psi[j].at(k) - fr.lambda_at(j + 1, k) * fr.phi[j + 1].at(k)), 1e-14);
        }
    }
}

TEST(BuildFrame, MasksPeriodic) {
    const WaveletFrameLevels& fr = haar8();
    for (int j = 1; j <= fr.J; ++j) {
        const long long p = 1LL << j;
        for (long long k = -40; k < 40; ++k) {
            EXPECT_EQ(fr.mu_at(j, k), fr.mu_at(j, k + p));
            EXPECT_EQ(fr.lambda_at(j, k), fr.lambda_at(j, k + p));
        }
    }
}

TEST(Uep, HaarPasses) {
    const WaveletFrameLevels& fr = haar8();
    for (int j = 1; j <= 8; ++j) EXPECT_LT(uep_matrix_check(fr, j), 1e-12);
}

TEST(Uep, ConstantMaskFails) {
    const WaveletFrameLevels fr = build_frame(constant_mask(1.0), 3, 16);
    EXPECT_NEAR(uep_matrix_check(fr, 3), 2.0, 1e-12);
}

TEST(Uep, SameMatrixForShiftedIndex) {
    const WaveletFrameLevels& fr = haar8();
    for (int j = 1; j <= 8; ++j) {
        const long long h = 1LL << (j - 1);
        for (long long k = 0; k < h; ++k) {
            EXPECT_NEAR(uep_matrix_deviation(fr, j, k), uep_matrix_deviation(fr, j, k + h), 1e-15);
        }
    }
}

TEST(Parseval, FourierBasis) {
    const PeriodicSignal f(3, {1.0});
    double total = 0.0;
    for (int k = -5; k <= 5; ++k) total += std::norm(inner(f, PeriodicSignal(k, {1.0})));
    EXPECT_NEAR(total - norm_sq(f), 0.0, 1e-15);
}

TEST(Parseval, TelescopedIdentityExact) {
    const WaveletFrameLevels& fr = haar8();
    auto rng = make_rng(32);
    for (int t = 0; t < 50; ++t) {
        const PeriodicSignal f = normalized(random_trig_poly(rng, 16));
        EXPECT_LT(std::abs(telescoped_residual(fr, f)), 1e-12);
    }
}

TEST(Parseval, ResidualDecaysWithDepth) {
    auto rng = make_rng(33);
    const PeriodicSignal f = normalized(random_trig_poly(rng, 16));
    double prev = 1e9;
    for (int J = 6; J <= 12; ++J) {
        const double r = std::abs(parseval_residual(build_frame(haar_mask(), J), f));
        EXPECT_LT(r, prev);
        prev = r;
    }
    EXPECT_LT(prev, 1e-3);
}

TEST(Parseval, Homogeneous) {
    const WaveletFrameLevels& fr = haar8();
    auto rng = make_rng(34);
    const PeriodicSignal f = random_trig_poly(rng, 16);
    EXPECT_NEAR(parseval_residual(fr, scaled(f, 3.0)), 9.0 * parseval_residual(fr, f),
                1e-12 * norm_sq(f) * 9.0);
}

TEST(Parseval, BandExceeded) {
    const WaveletFrameLevels fr = build_frame(haar_mask(), 3, 16);
    try {
        parseval_residual(fr, PeriodicSignal(17, {1.0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BandExceeded);
    }
}

TEST(TranslateEnergy, MatchesMaterializedTranslates) {
    auto rng = make_rng(35);
    const PeriodicSignal f = random_trig_poly(rng, 6);
    const PeriodicSignal g = random_trig_poly(rng, 6);
    const int j = 3;
    double direct = 0.0;
    for (int k = 0; k < (1 << j); ++k) {
        direct += std::norm(inner(f, translated(g, 2 * kPi * std::ldexp(double(k), -j))));
    }
    EXPECT_NEAR(translate_energy(f, g, j), direct, 1e-12 * direct);
}

TEST(Bernstein, Examples) {
    auto r = bernstein_check(PeriodicSignal(2, {1.0}), 2.0);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.ratio, 1.0, 1e-15);
    r = bernstein_check(PeriodicSignal(0, {1.0, 1.0}), 1.0);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.ratio, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_FALSE(bernstein_check(PeriodicSignal(3, {1.0}), 2.0).pass);
    EXPECT_THROW(bernstein_check(PeriodicSignal(0, {0.0}), 1.0), Error);
}
