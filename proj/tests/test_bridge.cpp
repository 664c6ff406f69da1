#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "test_support.hpp"
#include "uclab/bridge.hpp"
#include "uclab/wavelets.hpp"

using namespace uclab;
using uclab::testing::make_rng;
using uclab::testing::random_signal;

namespace {

cplx gauss_deriv(double xi) { return {xi * std::exp(-xi * xi), 0.0}; }

std::vector<Level> cosine_levels(int lo, int hi) {
    std::vector<Level> out;
    for (int j = lo; j <= hi; ++j) {
        std::vector<cplx> c(2 * static_cast<std::size_t>(j) + 1, 0.0);
        c.front() = 1.0;
        c.back() = 1.0;
        out.push_back({j, std::ldexp(1.0, j), PeriodicSignal(-j, std::move(c))});
    }
    return out;
}

// int xi^2 |f^|^2 by adaptive quadrature on each segment of the embedding.
double freq_second_quadrature(const PiecewiseLinearSpectrum& s) {
    using boost::math::quadrature::gauss_kronrod;
    double total = 0.0;
    for (int k = s.k0; k <= s.k_end(); ++k) {
        const double lo = s.position(k - 1), hi = s.position(k);
        total += gauss_kronrod<double, 31>::integrate(
            [&](double x) { return x * x * std::norm(spectrum_value(s, std::clamp(x, lo, hi))); }, lo, hi, 2, 1e-12);
    }
    return total;
}

}  // namespace

TEST(Periodize, GaussDerivCoefficients) {
    const PeriodicSignal p = periodize(gauss_deriv, 0);
    EXPECT_NEAR(p.at(1).real(), std::exp(-1.0), 1e-15);
    EXPECT_EQ(p.at(0), cplx(0.0));
}

TEST(Periodize, OddSymmetryAndScaling) {
    const PeriodicSignal p = periodize(gauss_deriv, 3);
    for (int k = p.k0(); k < p.k_end(); ++k) EXPECT_EQ(p.at(-k), -p.at(k));
    EXPECT_NEAR(p.at(5).real(), std::pow(2.0, -1.5) * gauss_deriv(5.0 / 8.0).real(), 1e-16);
}

TEST(Periodize, TailCaptured) {
    const PeriodicSignal p = periodize(gauss_deriv, 6, 1e-20);
    const double edge = std::norm(p.at(p.k0())) + std::norm(p.at(p.k_end() - 1));
    EXPECT_LT(edge, 1e-20 * norm_sq(p));
}

TEST(Periodize, CapReached) {
    const SpectrumFn heavy = [](double xi) { return cplx{1.0 / (1.0 + std::abs(xi)), 0.0}; };
    try {
        periodize(heavy, 2, 1e-20, 1 << 12);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TailNotCaptured);
    }
}

TEST(Embed, Examples) {
    const PiecewiseLinearSpectrum a = embed(PeriodicSignal(0, {1.0}), 1.0);
    EXPECT_EQ(a.nodes, std::vector<cplx>{1.0});
    EXPECT_NEAR(spectrum_value(embed(PeriodicSignal(0, {1.0}), 4.0), 0.0).real(), 2.0, 1e-15);
    const PiecewiseLinearSpectrum b = embed(PeriodicSignal(0, {1.0, 1.0}), 1.0);
    EXPECT_EQ(spectrum_value(b, 0.5), cplx(1.0));
    EXPECT_THROW(embed(PeriodicSignal(0, {0.0}), 1.0), Error);
}

TEST(EmbeddingIdentities, HatExample) {
    const EmbeddingIdentities r = embedding_identities(PeriodicSignal(0, {1.0}), 1.0);
    EXPECT_NEAR(r.norm_residual, 0.0, 1e-15);
    EXPECT_NEAR(r.time_second_residual, 0.0, 1e-15);
    EXPECT_NEAR(r.time_first_residual, 0.0, 1e-15);
}

TEST(EmbeddingIdentities, ExactForRandomSignals) {
    auto rng = make_rng(21);
    for (int t = 0; t < 500; ++t) {
        const PeriodicSignal f = random_signal(rng);
        for (double q : {1.0, 2.0, 8.0, 64.0}) {
            const EmbeddingIdentities r = embedding_identities(f, q);
            ASSERT_LT(r.norm_residual, 1e-10);
            ASSERT_LT(r.time_second_residual, 1e-10);
            ASSERT_LT(r.time_first_residual, 1e-10);
        }
    }
}

// Settles the factor in the second-moment defect: the quadrature value of
// int xi^2|f^|^2 must match the closed form with (1/3) A(psi'), not (1/6).
TEST(EmbeddingIdentities, SecondMomentDefectAgainstQuadrature) {
    auto rng = make_rng(22);
    for (int t = 0; t < 60; ++t) {
        const PeriodicSignal f = random_signal(rng, 24);
        for (double q : {1.0, 3.0, 16.0}) {
            const PiecewiseLinearSpectrum s = embed(f, q);
            const double quad = freq_second_quadrature(s);
            const double dnorm = frequency_moments(f).second / (q * q);
            const double a_deriv = localization_terms(derivative(f)).a_term;
            const double rest = (2.0 * norm_sq(f) + 3.0 * trig_moment(f).real()) / 30.0;
            const double third = (a_deriv / 3.0 - rest) / (q * q);
            const double sixth = (a_deriv / 6.0 - rest) / (q * q);
            EXPECT_NEAR(dnorm - quad, third, 1e-9 * (dnorm + quad));
            if (std::abs(a_deriv) > 1e-3) {
                EXPECT_GT(std::abs(dnorm - quad - sixth), 1e-6 * (dnorm + quad));
            }
            EXPECT_LT(embedding_identities(f, q).item3_residual, 1e-10);
        }
    }
}

TEST(Conditions, MOfC) {
    EXPECT_NEAR(m_of_c(1.0), 2.0 * (1.0 + std::sqrt(2.0) / 3.0 + 1.0 / 6.0), 1e-15);
    EXPECT_NEAR(m_of_c(1.0), 3.2761, 1e-4);
    EXPECT_EQ(truncation_band(1.0), 4);
    EXPECT_EQ(truncation_band(1.5), 6);
}

TEST(Conditions, InsufficientLevels) {
    try {
        check_conditions({Level{4, 16.0, periodize(gauss_deriv, 4)}}, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientLevels);
    }
}

TEST(Conditions, RejectsNonIncreasingQ) {
    std::vector<Level> lv{{4, 16.0, periodize(gauss_deriv, 4)}, {5, 16.0, periodize(gauss_deriv, 5)}};
    EXPECT_THROW(check_conditions(lv, 1.0), Error);
}

TEST(Conditions, GaussDerivSequence) {
    const auto levels = periodized_levels(builtin_wavelet("gauss-deriv"), 4, 12);
    const ConditionReport r = check_conditions(levels, 0.0);
    EXPECT_TRUE(r.c_estimated);
    EXPECT_NEAR(r.c_est, 1.5, 1e-6);
    EXPECT_EQ(r.band, 6);
    EXPECT_NEAR(r.m_of_c, m_of_c(r.c_est), 0.0);
    for (const LevelConditions& c : r.levels) {
        EXPECT_LT(c.s3, 1e-20);
        EXPECT_LT(c.s6, 1e-12);
        EXPECT_NEAR(c.s4, 0.75, 1e-12);
    }
    EXPECT_TRUE(r.all_pass());
}

TEST(Conditions, CosineSequenceFailsFifth) {
    const ConditionReport r = check_conditions(cosine_levels(2, 8), 2.0);
    EXPECT_FALSE(r.pass[4]);
    EXPECT_GT(r.levels.back().s5, 1e3);
}

TEST(Pipeline, GaussDerivTrace) {
    const auto levels = periodized_levels(builtin_wavelet("gauss-deriv"), 4, 10);
    const PipelineTrace tr = three_halves_pipeline(levels, 0.0);
    ASSERT_EQ(tr.rows.size(), 7u);
    for (std::size_t i = 0; i < tr.rows.size(); ++i) {
        const PipelineRow& r = tr.rows[i];
        EXPECT_NEAR(r.uc_embedded, r.uc_recentred, 1e-10);
        EXPECT_TRUE(r.centre_in_band);
        EXPECT_EQ(r.recentred_value_at_zero, 0.0);
        if (i > 0) {
            EXPECT_LT(r.uc_periodic, tr.rows[i - 1].uc_periodic);
            EXPECT_LT(std::abs(r.uc_truncated - r.uc_embedded),
                      std::abs(tr.rows[i - 1].uc_truncated - tr.rows[i - 1].uc_embedded));
            EXPECT_LT(std::abs(r.uc_periodic - r.uc_truncated),
                      std::abs(tr.rows[i - 1].uc_periodic - tr.rows[i - 1].uc_truncated));
        }
        EXPECT_GE(r.uc_periodic, 1.5);
    }
    EXPECT_TRUE(tr.bound_holds);
    EXPECT_TRUE(tr.gap_shrinking);
}

TEST(Pipeline, CentreOutOfBandIsReported) {
    // A one-sided spectrum has its centre far outside M(C)/q.
    std::vector<Level> lv;
    for (int j = 3; j <= 5; ++j) {
        std::vector<cplx> c(64);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::exp(-0.01 * double(i) * double(i));
        lv.push_back({j, std::ldexp(1.0, j), PeriodicSignal(20, c)});
    }
    try {
        three_halves_pipeline(lv, 0.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::CentreOutOfBand);
    }
}

TEST(Convergence, UcBTowardsUcH) {
    const SpectrumFn fn = builtin_wavelet("gauss-deriv");
    const double target = heisenberg_reference(fn).uc;
    EXPECT_NEAR(target, 1.5, 1e-9);
    double prev = 1e9;
    for (int j = 5; j <= 10; ++j) {
        const double gap = std::abs(breitenberger_uc(periodize(fn, j)).uc - target);
        EXPECT_LT(gap, prev);
        prev = gap;
    }
    EXPECT_LT(prev, 1e-3);
}
