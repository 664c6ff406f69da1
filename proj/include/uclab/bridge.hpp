#pragma once

// From periodic wavelet sequences to real-line functions and back.
//
// The chain for a sequence psi_j with scale parameters q_j is
//   psi_j --normalize, zero |k| <= M(C)--> psi*_j
//         --piecewise-linear embedding at spacing 1/q_j--> f*_j
//         --shift by the frequency centre--> f_j,
// and the UC values along the way are compared level by level.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "uclab/error.hpp"
#include "uclab/line.hpp"
#include "uclab/parallel.hpp"
#include "uclab/periodic.hpp"
#include "uclab/summation.hpp"

namespace uclab {

using SpectrumFn = std::function<cplx(double)>;

/// Coefficients 2^{-j/2} psi0_hat(2^{-j} k) for |k| <= K, with K the smallest
/// cut keeping the discarded energy below tail_tol of the total.
inline PeriodicSignal periodize(const SpectrumFn& psi0_hat, int j, double tail_tol = 1e-20,
                                int max_radius = 1 << 24) {
    if (j < 0) throw Error(ErrorKind::InvalidInput, "bridge", "level j must be >= 0");
    if (!(tail_tol > 0.0)) throw Error(ErrorKind::InvalidInput, "bridge", "tail_tol must be positive");
    const double scale = std::ldexp(1.0, -j);
    const double amp = std::sqrt(scale);
    int window = std::max(64, 4 << std::min(j, 20));
    while (true) {
        std::vector<cplx> c(2 * static_cast<std::size_t>(window) + 1);
        for (int k = -window; k <= window; ++k) {
            c[static_cast<std::size_t>(k + window)] = amp * psi0_hat(scale * static_cast<double>(k));
        }
        // outward[r] = energy in |k| >= r
        std::vector<double> outward(static_cast<std::size_t>(window) + 2, 0.0);
        for (int r = window; r >= 0; --r) {
            double e = std::norm(c[static_cast<std::size_t>(r + window)]);
            if (r > 0) e += std::norm(c[static_cast<std::size_t>(-r + window)]);
            outward[static_cast<std::size_t>(r)] = outward[static_cast<std::size_t>(r) + 1] + e;
        }
        const double total = outward[0];
        if (!(total > 0.0)) throw Error(ErrorKind::ZeroSignal, "bridge", "periodized wavelet vanishes on the window");
        if (outward[static_cast<std::size_t>(window / 2)] < tail_tol * total) {
            int cut = 0;
            while (outward[static_cast<std::size_t>(cut) + 1] >= tail_tol * total) ++cut;
            std::vector<cplx> kept(c.begin() + (window - cut), c.begin() + (window + cut + 1));
            return {-cut, std::move(kept)};
        }
        if (window >= max_radius) {
            throw Error(ErrorKind::TailNotCaptured, "bridge", "spectrum tail not captured within the coefficient cap");
        }
        window = std::min(2 * window, max_radius);
    }
}

/// Piecewise-linear spectrum with node value q^{1/2} psi^(k) at k/q.
inline PiecewiseLinearSpectrum embed(const PeriodicSignal& psi, double q) {
    if (!(q > 0.0)) throw Error(ErrorKind::InvalidInput, "bridge", "q must be positive");
    if (psi.is_zero()) throw Error(ErrorKind::ZeroSignal, "bridge", "cannot embed a zero signal");
    PiecewiseLinearSpectrum s;
    s.q = q;
    s.offset = 0.0;
    s.k0 = psi.k0();
    s.nodes = psi.coeffs();
    const double amp = std::sqrt(q);
    for (cplx& v : s.nodes) v *= amp;
    return s;
}

/// Exact periodic/line relations of the embedding, as relative residuals.
struct EmbeddingIdentities {
    double norm_residual = 0.0;         // ||psi||^2 - ||f||^2 - A(psi)/3
    double time_second_residual = 0.0;  // 2 q^2 A(psi) - ||x f||^2
    double time_first_residual = 0.0;   // q Im tau(psi) - (x f, f)
    /// q^{-2}||psi'||^2 - int xi^2 |f^|^2 and its closed form
    /// q^{-2}[(1/3) A(psi') - (2||psi||^2 + 3 Re tau(psi)) / 30].
    double item3_defect = 0.0;
    double item3_predicted = 0.0;
    double item3_residual = 0.0;

    [[nodiscard]] double max_exact_residual() const noexcept {
        return std::max({norm_residual, time_second_residual, time_first_residual});
    }
};

inline EmbeddingIdentities embedding_identities(const PeriodicSignal& psi, double q) {
    const PiecewiseLinearSpectrum f = embed(psi, q);
    const SpectrumMoments m = spectrum_moments(f);
    const double n = norm_sq(psi);
    const cplx tau = trig_moment(psi);
    const LocalizationTerms lt = localization_terms(psi);

    EmbeddingIdentities r;
    r.norm_residual = std::abs(n - m.norm_sq - lt.a_term / 3.0) / n;
    const double lhs2 = 2.0 * q * q * lt.a_term;
    r.time_second_residual = std::abs(lhs2 - m.time_second) / std::max(std::abs(lhs2), std::abs(m.time_second));
    r.time_first_residual = std::abs(q * tau.imag() - m.time_first) / (q * n);

    const double dnorm = frequency_moments(psi).second;
    const double a_deriv = localization_terms(derivative(psi)).a_term;
    r.item3_defect = dnorm / (q * q) - m.freq_second;
    r.item3_predicted = (a_deriv / 3.0 - (2.0 * n + 3.0 * tau.real()) / 30.0) / (q * q);
    r.item3_residual = std::abs(r.item3_defect - r.item3_predicted) / (dnorm / (q * q) + m.freq_second);
    return r;
}

/// M(C) = 2 (C + C sqrt(2C) / 3 + 1/6).
inline double m_of_c(double c) { return 2.0 * (c + c * std::sqrt(2.0 * c) / 3.0 + 1.0 / 6.0); }

/// M(C) rounded outward to the integer frequency grid.
inline int truncation_band(double c) { return static_cast<int>(std::ceil(m_of_c(c) - 1e-12)); }

struct Level {
    int j = 0;
    double q = 1.0;
    PeriodicSignal psi;
};

struct LevelConditions {
    int j = 0;
    double q = 0.0;
    double s1 = 0.0;  // max_{|k|<=M} q |psi^(k)| / ||psi||
    double s2 = 0.0;  // q^-2 A(psi') / ||psi||^2
    double s3 = 0.0;  // |(psi', psi)| / ||psi||^2
    double s4 = 0.0;  // q^-2 ||psi'||^2 / ||psi||^2
    double s5 = 0.0;  // q^2 A(psi) / ||psi||^2
    double s6 = 0.0;  // q |B(psi)| / ||psi||^2
};

struct ConditionOptions {
    /// Limit conditions pass when last/first < trend_threshold.
    double trend_threshold = 0.1;
    /// Bounded conditions fail when last/first > growth_threshold.
    double growth_threshold = 10.0;
};

struct ConditionReport {
    std::vector<LevelConditions> levels;
    double c_est = 0.0;
    bool c_estimated = false;
    double m_of_c = 0.0;
    int band = 0;
    double trend_s1 = 0.0;  // last/first
    double trend_s2 = 0.0;
    bool pass[6] = {false, false, false, false, false, false};

    [[nodiscard]] bool all_pass() const noexcept {
        return std::all_of(std::begin(pass), std::end(pass), [](bool b) { return b; });
    }
};

namespace detail {

inline LevelConditions bounded_terms(const Level& level) {
    const PeriodicSignal& psi = level.psi;
    const double n = norm_sq(psi);
    if (!(n > 0.0)) throw Error(ErrorKind::ZeroSignal, "bridge", "level signal is zero");
    const double q = level.q;
    const auto [m1, m2] = frequency_moments(psi);
    LevelConditions c;
    c.j = level.j;
    c.q = q;
    c.s2 = localization_terms(derivative(psi)).a_term / (q * q * n);
    c.s3 = std::abs(m1) / n;
    c.s4 = m2 / (q * q * n);
    const LocalizationTerms lt = localization_terms(psi);
    c.s5 = q * q * lt.a_term / n;
    c.s6 = q * std::abs(lt.b_term_im) / n;
    return c;
}

inline double trend_ratio(double first, double last) {
    if (first == 0.0) return last == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return last / first;
}

}  // namespace detail

/// Evaluates the six level conditions. A non-positive c_est is replaced by the
/// largest observed s3..s6 value.
inline ConditionReport check_conditions(const std::vector<Level>& levels, double c_est,
                                        const ConditionOptions& opt = {}) {
    if (levels.size() < 2) throw Error(ErrorKind::InsufficientLevels, "bridge", "at least two levels are required");
    for (std::size_t i = 1; i < levels.size(); ++i) {
        if (!(levels[i].q > levels[i - 1].q)) {
            throw Error(ErrorKind::InvalidInput, "bridge", "q_j must be strictly increasing");
        }
    }
    ConditionReport rep;
    rep.levels.reserve(levels.size());
    for (const Level& l : levels) rep.levels.push_back(detail::bounded_terms(l));

    rep.c_estimated = !(c_est > 0.0);
    if (rep.c_estimated) {
        c_est = 0.0;
        for (const LevelConditions& c : rep.levels) c_est = std::max({c_est, c.s3, c.s4, c.s5, c.s6});
    }
    rep.c_est = c_est;
    rep.m_of_c = m_of_c(c_est);
    rep.band = truncation_band(c_est);

    for (std::size_t i = 0; i < levels.size(); ++i) {
        const PeriodicSignal& psi = levels[i].psi;
        const double norm = std::sqrt(norm_sq(psi));
        double s1 = 0.0;
        for (int k = -rep.band; k <= rep.band; ++k) s1 = std::max(s1, std::abs(psi.at(k)));
        rep.levels[i].s1 = levels[i].q * s1 / norm;
    }

    const LevelConditions& first = rep.levels.front();
    const LevelConditions& last = rep.levels.back();
    rep.trend_s1 = detail::trend_ratio(first.s1, last.s1);
    rep.trend_s2 = detail::trend_ratio(first.s2, last.s2);
    rep.pass[0] = rep.trend_s1 < opt.trend_threshold;
    rep.pass[1] = rep.trend_s2 < opt.trend_threshold;

    const double limit = c_est * (1.0 + 1e-12);
    auto bounded = [&](auto field) {
        bool ok = true;
        for (const LevelConditions& c : rep.levels) ok = ok && (c.*field) <= limit;
        const double f0 = first.*field;
        const double f1 = last.*field;
        if (f0 > 1e-12 * c_est) ok = ok && f1 / f0 <= opt.growth_threshold;
        return ok;
    };
    rep.pass[2] = bounded(&LevelConditions::s3);
    rep.pass[3] = bounded(&LevelConditions::s4);
    rep.pass[4] = bounded(&LevelConditions::s5);
    rep.pass[5] = bounded(&LevelConditions::s6);
    return rep;
}

struct PipelineRow {
    LevelConditions conditions;
    double uc_periodic = 0.0;   // UC_B(psi_j)
    double uc_truncated = 0.0;  // UC_B(psi*_j)
    double uc_embedded = 0.0;   // UC_H(f*_j)
    double uc_recentred = 0.0;  // UC_H(f_j)
    double freq_centre_embedded = 0.0;
    double centre_bound = 0.0;  // M(C) / q_j
    bool centre_in_band = false;
    /// |f_j^(0)| after recentring.
    double recentred_value_at_zero = 0.0;
};

struct PipelineOptions {
    double slack = 0.05;
    ConditionOptions conditions;
    unsigned workers = 0;
};

struct PipelineTrace {
    ConditionReport conditions;
    std::vector<PipelineRow> rows;
    double slack = 0.0;
    /// uc_periodic at the largest level >= 3/2 - slack.
    bool bound_holds = false;
    /// |uc_truncated - uc_embedded| smaller at the last level than at the first.
    bool gap_shrinking = false;
    double max_recentre_mismatch = 0.0;
};

inline PipelineTrace three_halves_pipeline(const std::vector<Level>& levels, double c_est,
                                           const PipelineOptions& opt = {}) {
    PipelineTrace trace;
    trace.conditions = check_conditions(levels, c_est, opt.conditions);
    trace.slack = opt.slack;
    const int band = trace.conditions.band;
    const double mc = trace.conditions.m_of_c;
    trace.rows.resize(levels.size());

    parallel_for(levels.size(), opt.workers, [&](std::size_t i) {
        PipelineRow& row = trace.rows[i];
        row.conditions = trace.conditions.levels[i];
        const PeriodicSignal psi = normalized(levels[i].psi);
        row.uc_periodic = breitenberger_uc(psi).uc;
        const PeriodicSignal truncated = truncate_low(psi, band);
        row.uc_truncated = breitenberger_uc(truncated).uc;
        const PiecewiseLinearSpectrum embedded = embed(truncated, levels[i].q);
        const LineUCReport er = uc_line_spectrum(embedded);
        row.uc_embedded = er.uc;
        row.freq_centre_embedded = er.freq_centre;
        row.centre_bound = mc / levels[i].q;
        row.centre_in_band = std::abs(er.freq_centre) <= row.centre_bound;
        const PiecewiseLinearSpectrum recentred = recenter_spectrum(embedded, er.freq_centre);
        row.uc_recentred = uc_line_spectrum(recentred).uc;
        row.recentred_value_at_zero = std::abs(spectrum_value(recentred, 0.0));
    });

    const std::size_t n = trace.rows.size();
    for (std::size_t i = (n >= 2 ? n - 2 : 0); i < n; ++i) {
        if (!trace.rows[i].centre_in_band) {
            throw Error(ErrorKind::CentreOutOfBand, "bridge",
                        "frequency centre of the embedded spectrum exceeds M(C)/q_j at level " +
                            std::to_string(trace.rows[i].conditions.j));
        }
    }
    for (const PipelineRow& r : trace.rows) {
        trace.max_recentre_mismatch = std::max(trace.max_recentre_mismatch, std::abs(r.uc_embedded - r.uc_recentred));
    }
    trace.bound_holds = trace.rows.back().uc_periodic >= 1.5 - opt.slack;
    const auto gap = [](const PipelineRow& r) { return std::abs(r.uc_truncated - r.uc_embedded); };
    trace.gap_shrinking = gap(trace.rows.back()) < gap(trace.rows.front());
    return trace;
}

}  // namespace uclab
