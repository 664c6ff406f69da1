#pragma once

// Coefficient-side arithmetic for 2pi-periodic signals.
//
// A signal f(x) = sum_k c_k e^{ikx} is held as a dense block of coefficients
// c_{k0}, ..., c_{k0+n-1}; reads outside the block are exact zeros. Inner
// products carry the (2pi)^{-1} weight, so by Parseval (f, g) = sum c_k conj(d_k).
// Everything here is an exact (compensated) coefficient sum; no quadrature.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "uclab/error.hpp"
#include "uclab/summation.hpp"

namespace uclab {

using cplx = std::complex<double>;

class PeriodicSignal {
public:
    PeriodicSignal() = default;
    PeriodicSignal(int k0, std::vector<cplx> coeffs) : k0_(k0), coeffs_(std::move(coeffs)) {}

    [[nodiscard]] int k0() const noexcept { return k0_; }
    /// One past the highest stored frequency.
    [[nodiscard]] int k_end() const noexcept { return k0_ + static_cast<int>(coeffs_.size()); }
    [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }
    [[nodiscard]] const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }

    [[nodiscard]] cplx at(int k) const noexcept {
        if (k < k0_ || k >= k_end()) return {0.0, 0.0};
        return coeffs_[static_cast<std::size_t>(k - k0_)];
    }

    [[nodiscard]] bool is_zero() const noexcept {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](cplx c) { return c == cplx{0.0, 0.0}; });
    }

    /// Largest |k| with a stored (possibly zero) coefficient.
    [[nodiscard]] int max_abs_frequency() const noexcept {
        if (coeffs_.empty()) return 0;
        return std::max(std::abs(k0_), std::abs(k_end() - 1));
    }

    friend bool operator==(const PeriodicSignal&, const PeriodicSignal&) = default;

private:
    int k0_ = 0;
    std::vector<cplx> coeffs_;
};

struct LocalizationTerms {
    double a_term = 0.0;
    double b_term_im = 0.0;
};

struct PeriodicUCReport {
    double norm_sq = 0.0;
    cplx tau{};
    double a_term = 0.0;
    double b_term_im = 0.0;  // B(f) = i * b_term_im
    double freq_centre = 0.0;
    double var_A = 0.0;
    double var_F = 0.0;
    double uc = 0.0;
    /// |tau|^2 / ||f||^4 < 1e-12: var_A is numerically explosive.
    bool ill_conditioned = false;
};

/// (f, g) = sum_k c_k conj(d_k).
inline cplx inner(const PeriodicSignal& f, const PeriodicSignal& g) {
    const int lo = std::max(f.k0(), g.k0());
    const int hi = std::min(f.k_end(), g.k_end());
    CompensatedComplexSum acc;
    for (int k = lo; k < hi; ++k) acc += f.at(k) * std::conj(g.at(k));
    return acc.value();
}

inline double norm_sq(const PeriodicSignal& f) {
    CompensatedSum acc;
    for (const cplx& c : f.coeffs()) acc += std::norm(c);
    return acc.value();
}

/// Coefficients i*k*c_k on the same support.
inline PeriodicSignal derivative(const PeriodicSignal& f) {
    std::vector<cplx> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double k = static_cast<double>(f.k0() + static_cast<int>(i));
        out[i] = cplx{0.0, k} * f.coeffs()[i];
    }
    return {f.k0(), std::move(out)};
}

/// tau(f) = sum_k c_{k-1} conj(c_k).
inline cplx trig_moment(const PeriodicSignal& f) {
    CompensatedComplexSum acc;
    for (int k = f.k0() + 1; k < f.k_end(); ++k) acc += f.at(k - 1) * std::conj(f.at(k));
    return acc.value();
}

/// A(f) = (1/2) sum |c_{k-1} - c_k|^2 summed directly; B(f) = i Im tau(f).
inline LocalizationTerms localization_terms(const PeriodicSignal& f) {
    CompensatedSum a;
    for (int k = f.k0(); k <= f.k_end(); ++k) a += std::norm(f.at(k - 1) - f.at(k));
    return {0.5 * a.value(), trig_moment(f).imag()};
}

/// First and second frequency moments sum k|c_k|^2, sum k^2|c_k|^2.
inline std::pair<double, double> frequency_moments(const PeriodicSignal& f) {
    CompensatedSum m1;
    CompensatedSum m2;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double k = static_cast<double>(f.k0() + static_cast<int>(i));
        const double w = std::norm(f.coeffs()[i]);
        m1 += k * w;
        m2 += k * k * w;
    }
    return {m1.value(), m2.value()};
}

/// (f', f) = i sum k|c_k|^2; purely imaginary, returned as the imaginary part.
inline double derivative_inner_im(const PeriodicSignal& f) { return frequency_moments(f).first; }

inline PeriodicUCReport breitenberger_uc(const PeriodicSignal& f) {
    PeriodicUCReport r;
    r.norm_sq = norm_sq(f);
    if (!(r.norm_sq > 0.0)) throw Error(ErrorKind::ZeroSignal, "periodic", "all coefficients are zero");

    r.tau = trig_moment(f);
    const double tau_abs = std::abs(r.tau);
    if (tau_abs < 1e-300) {
        throw Error(ErrorKind::AngularVarianceUndefined, "periodic",
                    "first trigonometric moment vanishes (monomial or equivalent)");
    }
    const LocalizationTerms lt = localization_terms(f);
    r.a_term = lt.a_term;
    r.b_term_im = lt.b_term_im;

    // ||f||^4 - |tau|^2 = 2 A ||f||^2 - A^2 - (Im tau)^2, free of the cancellation
    // in ||f||^4/|tau|^2 - 1 when tau is close to ||f||^2.
    const double n = r.norm_sq;
    const double excess = std::max(0.0, 2.0 * r.a_term * n - r.a_term * r.a_term - r.b_term_im * r.b_term_im);
    const double tau_sq = tau_abs * tau_abs;
    r.var_A = excess / tau_sq;
    r.ill_conditioned = tau_sq / (n * n) < 1e-12;

    r.freq_centre = frequency_moments(f).first / n;
    CompensatedSum spread;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = static_cast<double>(f.k0() + static_cast<int>(i)) - r.freq_centre;
        spread += d * d * std::norm(f.coeffs()[i]);
    }
    r.var_F = spread.value() / n;
    r.uc = std::sqrt(r.var_A * r.var_F);
    return r;
}

/// Zeroes every coefficient with |k| <= band.
inline PeriodicSignal truncate_low(const PeriodicSignal& f, double band) {
    std::vector<cplx> out = f.coeffs();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int k = f.k0() + static_cast<int>(i);
        if (std::abs(static_cast<double>(k)) <= band) out[i] = {0.0, 0.0};
    }
    return {f.k0(), std::move(out)};
}

inline PeriodicSignal scaled(const PeriodicSignal& f, cplx alpha) {
    std::vector<cplx> out = f.coeffs();
    for (cplx& c : out) c *= alpha;
    return {f.k0(), std::move(out)};
}

/// f(. - s): coefficients c_k e^{-iks}.
inline PeriodicSignal translated(const PeriodicSignal& f, double s) {
    std::vector<cplx> out = f.coeffs();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double k = static_cast<double>(f.k0() + static_cast<int>(i));
        out[i] *= std::polar(1.0, -k * s);
    }
    return {f.k0(), std::move(out)};
}

inline PeriodicSignal normalized(const PeriodicSignal& f) {
    const double n = norm_sq(f);
    if (!(n > 0.0)) throw Error(ErrorKind::ZeroSignal, "periodic", "cannot normalize a zero signal");
    return scaled(f, 1.0 / std::sqrt(n));
}

}  // namespace uclab
