#pragma once

// Heisenberg uncertainty constant for functions on the real line.
//
// Normalizations: (f, g) = (2pi)^{-1} int f conj(g) and
// f^(xi) = (2pi)^{-1} int f(x) e^{-i xi x} dx. With these, Parseval reads
// ||f||^2 = int |f^(xi)|^2 dxi, (x f)^ = i (f^)', and every spectrum-side moment
// below is a plain Lebesgue integral over xi.
//
// Two representations are supported:
//   * SampledLineSignal: uniform samples of f(x); time moments by composite
//     Simpson, frequency moments from the DFT of the samples (spectral
//     derivative of the trigonometric interpolant).
//   * PiecewiseLinearSpectrum: f^ continuous and linear between nodes k/q + offset;
//     all moments in closed form, segment by segment.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "uclab/error.hpp"
#include "uclab/summation.hpp"

namespace uclab {

using cplx = std::complex<double>;

struct SampledLineSignal {
    double x_min = 0.0;
    double dx = 1.0;
    std::vector<cplx> samples;

    [[nodiscard]] double x(std::size_t i) const noexcept { return x_min + static_cast<double>(i) * dx; }

    friend bool operator==(const SampledLineSignal&, const SampledLineSignal&) = default;
};

struct LineUCReport {
    double norm_sq = 0.0;
    double time_centre = 0.0;
    double freq_centre = 0.0;
    double time_var = 0.0;
    double freq_var = 0.0;
    double uc = 0.0;
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

/// Forward DFT F_m = sum_n f_n e^{-2 pi i m n / N}.
inline std::vector<cplx> dft(const std::vector<cplx>& in) {
    std::vector<cplx> work = in;
    std::vector<cplx> out(in.size());
    auto* src = reinterpret_cast<fftw_complex*>(work.data());
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(in.size()), src, dst, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

/// Composite Simpson weights for n >= 4 equally spaced points (3/8 rule on
/// the last three intervals when the interval count is odd).
inline std::vector<double> simpson_weights(std::size_t n, double h) {
    std::vector<double> w(n, 0.0);
    const std::size_t intervals = n - 1;
    const std::size_t simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if (simpson_end != intervals) {
        const std::size_t s = simpson_end;
        w[s] += 3.0 * h / 8.0;
        w[s + 1] += 9.0 * h / 8.0;
        w[s + 2] += 9.0 * h / 8.0;
        w[s + 3] += 3.0 * h / 8.0;
    }
    return w;
}

}  // namespace detail

/// Composite Simpson integral of uniformly spaced values.
inline double simpson(const std::vector<double>& values, double h) {
    if (values.size() < 4) throw Error(ErrorKind::InvalidInput, "line", "Simpson needs at least 4 samples");
    const std::vector<double> w = detail::simpson_weights(values.size(), h);
    CompensatedSum acc;
    for (std::size_t i = 0; i < values.size(); ++i) acc += w[i] * values[i];
    return acc.value();
}

inline SampledLineSignal sample_on_grid(const std::function<cplx(double)>& fn, double x_min, double x_max,
                                        double dx) {
    if (!(dx > 0.0) || !(x_max > x_min)) throw Error(ErrorKind::InvalidInput, "line", "bad sampling grid");
    const auto n = static_cast<std::size_t>(std::llround((x_max - x_min) / dx)) + 1;
    SampledLineSignal s{x_min, dx, {}};
    s.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.samples[i] = fn(s.x(i));
    return s;
}

inline LineUCReport uc_line_sampled(const SampledLineSignal& f) {
    const std::size_t n = f.samples.size();
    if (n < 16) throw Error(ErrorKind::InvalidInput, "line", "at least 16 samples are required");
    if (!(f.dx > 0.0)) throw Error(ErrorKind::InvalidInput, "line", "dx must be positive");

    double peak = 0.0;
    for (const cplx& v : f.samples) peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0)) throw Error(ErrorKind::ZeroSignal, "line", "all samples are zero");
    if (std::abs(f.samples.front()) > 1e-10 * peak || std::abs(f.samples.back()) > 1e-10 * peak) {
        throw Error(ErrorKind::TailNotCaptured, "line", "signal does not decay below 1e-10 of its peak at the grid ends");
    }

    const std::vector<double> w = detail::simpson_weights(n, f.dx);
    CompensatedSum m0;
    CompensatedSum m1;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = w[i] * std::norm(f.samples[i]);
        m0 += d;
        m1 += f.x(i) * d;
    }
    LineUCReport r;
    const double energy = m0.value();
    r.norm_sq = energy / (2.0 * std::numbers::pi);
    r.time_centre = m1.value() / energy;
    CompensatedSum m2;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = f.x(i) - r.time_centre;
        m2 += d * d * w[i] * std::norm(f.samples[i]);
    }
    r.time_var = m2.value() / energy;

    // |f^(xi_m)| is proportional to |F_m| with xi_m = 2 pi m / (n dx).
    const std::vector<cplx> spec = detail::dft(f.samples);
    const double dxi = 2.0 * std::numbers::pi / (static_cast<double>(n) * f.dx);
    std::vector<std::pair<double, double>> bins;  // (xi, weight)
    bins.reserve(n + 1);
    for (std::size_t m = 0; m < n; ++m) {
        const double p = std::norm(spec[m]);
        if (n % 2 == 0 && m == n / 2) {
            const double xi = dxi * static_cast<double>(m);
            bins.emplace_back(xi, 0.5 * p);
            bins.emplace_back(-xi, 0.5 * p);
            continue;
        }
        const auto signed_m = (m <= n / 2) ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
        bins.emplace_back(dxi * signed_m, p);
    }
    CompensatedSum s0;
    CompensatedSum s1;
    for (const auto& [xi, p] : bins) {
        s0 += p;
        s1 += xi * p;
    }
    r.freq_centre = s1.value() / s0.value();
    CompensatedSum s2;
    for (const auto& [xi, p] : bins) {
        const double d = xi - r.freq_centre;
        s2 += d * d * p;
    }
    r.freq_var = s2.value() / s0.value();
    r.uc = std::sqrt(r.time_var * r.freq_var);
    return r;
}

/// Continuous piecewise-linear spectrum with node k at xi = k/q + offset,
/// node values nodes[k - k0], linear in between and zero outside the nodes'
/// span (ramping to zero over one spacing on each side).
struct PiecewiseLinearSpectrum {
    double q = 1.0;
    double offset = 0.0;
    int k0 = 0;
    std::vector<cplx> nodes;

    [[nodiscard]] int k_end() const noexcept { return k0 + static_cast<int>(nodes.size()); }

    [[nodiscard]] cplx node(int k) const noexcept {
        if (k < k0 || k >= k_end()) return {0.0, 0.0};
        return nodes[static_cast<std::size_t>(k - k0)];
    }

    [[nodiscard]] double position(int k) const noexcept { return static_cast<double>(k) / q + offset; }

    friend bool operator==(const PiecewiseLinearSpectrum&, const PiecewiseLinearSpectrum&) = default;
};

inline cplx spectrum_value(const PiecewiseLinearSpectrum& s, double xi) {
    const double t = (xi - s.offset) * s.q;
    const double fl = std::floor(t);
    if (fl < static_cast<double>(s.k0) - 1.0 || fl >= static_cast<double>(s.k_end())) return {0.0, 0.0};
    const int k = static_cast<int>(fl);
    const double frac = t - fl;
    return s.node(k) * (1.0 - frac) + s.node(k + 1) * frac;
}

/// Shifts the represented spectrum left by c: result(xi) = s(xi + c).
inline PiecewiseLinearSpectrum recenter_spectrum(const PiecewiseLinearSpectrum& s, double c) {
    PiecewiseLinearSpectrum out = s;
    out.offset -= c;
    return out;
}

/// Raw closed-form moments of a piecewise-linear spectrum.
struct SpectrumMoments {
    double norm_sq = 0.0;      // int |f^|^2           = ||f||^2
    double time_first = 0.0;   // (x f, f)             = Re i int (f^)' conj(f^)
    double time_second = 0.0;  // ||x f||^2            = int |(f^)'|^2
    double freq_first = 0.0;   // int xi |f^|^2
    double freq_second = 0.0;  // int xi^2 |f^|^2
    double freq_centre = 0.0;
    double freq_var = 0.0;     // int (xi - centre)^2 |f^|^2 / ||f||^2
};

// On a segment of length h carrying g(t) = a(1-t) + b t, t in [0, 1]:
//   int_0^1 |g|^2     = (|a|^2 +  |b|^2 +   Re a conj b) / 3
//   int_0^1 t |g|^2   = (|a|^2 + 3|b|^2 + 2 Re a conj b) / 12
//   int_0^1 t^2 |g|^2 = (|a|^2 + 6|b|^2 + 3 Re a conj b) / 30
inline SpectrumMoments spectrum_moments(const PiecewiseLinearSpectrum& s) {
    if (!(s.q > 0.0)) throw Error(ErrorKind::InvalidInput, "line", "grid density q must be positive");
    const double h = 1.0 / s.q;
    SpectrumMoments m;
    CompensatedSum n0;
    CompensatedSum f1;
    CompensatedSum t1;
    CompensatedSum t2;
    // Frequency moments are accumulated relative to the first node to keep the
    // linear term small, then shifted back.
    const double ref = s.position(s.k0);
    for (int k = s.k0; k <= s.k_end(); ++k) {
        const cplx a = s.node(k - 1);
        const cplx b = s.node(k);
        const double aa = std::norm(a);
        const double bb = std::norm(b);
        const double ab = (a * std::conj(b)).real();
        const double i0 = (aa + bb + ab) / 3.0;
        const double i1 = (aa + 3.0 * bb + 2.0 * ab) / 12.0;
        const double u = s.position(k - 1) - ref;
        n0 += h * i0;
        f1 += h * (u * i0 + h * i1);
        const cplx d = b - a;
        t2 += std::norm(d) / h;
        t1 += (cplx{0.0, 1.0} * d * std::conj(a + b)).real() * 0.5;
    }
    m.norm_sq = n0.value();
    if (!(m.norm_sq > 0.0)) throw Error(ErrorKind::ZeroSignal, "line", "spectrum is identically zero");
    m.time_first = t1.value();
    m.time_second = t2.value();
    const double centre_rel = f1.value() / m.norm_sq;
    m.freq_centre = centre_rel + ref;
    m.freq_first = m.freq_centre * m.norm_sq;

    CompensatedSum var;
    for (int k = s.k0; k <= s.k_end(); ++k) {
        const cplx a = s.node(k - 1);
        const cplx b = s.node(k);
        const double aa = std::norm(a);
        const double bb = std::norm(b);
        const double ab = (a * std::conj(b)).real();
        const double i0 = (aa + bb + ab) / 3.0;
        const double i1 = (aa + 3.0 * bb + 2.0 * ab) / 12.0;
        const double i2 = (aa + 6.0 * bb + 3.0 * ab) / 30.0;
        const double u = s.position(k - 1) - m.freq_centre;
        var += h * (u * u * i0 + 2.0 * u * h * i1 + h * h * i2);
    }
    m.freq_var = var.value() / m.norm_sq;
    m.freq_second = (m.freq_var + m.freq_centre * m.freq_centre) * m.norm_sq;
    return m;
}

inline LineUCReport uc_line_spectrum(const PiecewiseLinearSpectrum& s) {
    const SpectrumMoments m = spectrum_moments(s);
    LineUCReport r;
    r.norm_sq = m.norm_sq;
    r.time_centre = m.time_first / m.norm_sq;
    r.time_var = std::max(0.0, m.time_second / m.norm_sq - r.time_centre * r.time_centre);
    r.freq_centre = m.freq_centre;
    r.freq_var = m.freq_var;
    r.uc = std::sqrt(r.time_var * r.freq_var);
    return r;
}

}  // namespace uclab
