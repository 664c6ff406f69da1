#pragma once

// Hermite functions
//   phi_n(x) = (2^n n! / (2 sqrt(pi)))^{-1/2} (-1)^n e^{x^2/2} d^n/dx^n e^{-x^2}
// normalized so that (2pi)^{-1} int |phi_n|^2 = 1, i.e. phi_n = sqrt(2 pi) h_n
// with h_n the L2-orthonormal Hermite functions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "uclab/error.hpp"
#include "uclab/line.hpp"

namespace uclab {

inline constexpr int kMaxHermiteIndex = 60;

namespace detail {

inline void check_hermite_index(int n) {
    if (n < 0) throw Error(ErrorKind::InvalidInput, "minimizer", "Hermite index must be >= 0");
    if (n > kMaxHermiteIndex) {
        throw Error(ErrorKind::IndexTooLarge, "minimizer", "Hermite index above the supported range (60)");
    }
}

}  // namespace detail

/// phi_0(x) .. phi_nmax(x) by the three-term recurrence
///   h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1},
/// run on a rescaled copy so that e^{-x^2/2} never underflows prematurely.
/// Valid for any nmax; hermite_eval restricts the public index range.
inline std::vector<double> hermite_table(double x, int nmax) {
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    const double lead = 0.5 * std::log(2.0 * std::numbers::pi) - 0.25 * std::log(std::numbers::pi);
    double log_scale = lead - 0.5 * x * x;
    double prev = 0.0;
    double cur = 1.0;
    auto emit = [&](int n, double v) {
        if (v == 0.0) return;
        out[static_cast<std::size_t>(n)] = std::copysign(std::exp(std::log(std::abs(v)) + log_scale), v);
    };
    emit(0, cur);
    for (int n = 0; n < nmax; ++n) {
        const double next = std::sqrt(2.0 / (n + 1.0)) * x * cur - std::sqrt(n / (n + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > 1e150) {
            cur *= 1e-150;
            prev *= 1e-150;
            log_scale += 150.0 * std::log(10.0);
        }
        emit(n + 1, cur);
    }
    return out;
}

inline double hermite_eval(int n, double x) {
    detail::check_hermite_index(n);
    return hermite_table(x, n).back();
}

/// int_R phi_n: 0 for odd n, 2 pi^{3/4} sqrt((2k)!) / (2^k k!) for n = 2k.
inline double hermite_integral(int n) {
    detail::check_hermite_index(n);
    if (n % 2 == 1) return 0.0;
    double v = 2.0 * std::pow(std::numbers::pi, 0.75);
    for (int k = 1; k <= n / 2; ++k) v *= std::sqrt((2.0 * k - 1.0) / (2.0 * k));
    return v;
}

/// UC_H(phi_n) = (2n + 1) / 2.
inline double hermite_uc(int n) {
    detail::check_hermite_index(n);
    return (2.0 * n + 1.0) / 2.0;
}

inline SampledLineSignal hermite_sampled(int n, double half_width = 12.0, double dx = 0.01) {
    detail::check_hermite_index(n);
    return sample_on_grid([n](double x) { return cplx{hermite_table(x, n).back(), 0.0}; }, -half_width,
                          half_width, dx);
}

/// UC_H(phi_n) measured by quadrature of sampled phi_n.
inline LineUCReport hermite_uc_quadrature(int n, double half_width = 12.0, double dx = 0.01) {
    return uc_line_sampled(hermite_sampled(n, half_width, dx));
}

inline double hermite_integral_quadrature(int n, double half_width = 14.0, double dx = 0.005) {
    const SampledLineSignal s = hermite_sampled(n, half_width, dx);
    std::vector<double> v(s.samples.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s.samples[i].real();
    return simpson(v, dx);
}

/// (phi_m, phi_n) = (2pi)^{-1} int phi_m phi_n by Simpson quadrature.
inline double hermite_inner_quadrature(int m, int n, double half_width = 14.0, double dx = 0.005) {
    detail::check_hermite_index(m);
    detail::check_hermite_index(n);
    const auto count = static_cast<std::size_t>(std::llround(2.0 * half_width / dx)) + 1;
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::vector<double> t = hermite_table(-half_width + static_cast<double>(i) * dx, std::max(m, n));
        v[i] = t[static_cast<std::size_t>(m)] * t[static_cast<std::size_t>(n)];
    }
    return simpson(v, dx) / (2.0 * std::numbers::pi);
}

/// a = (||x phi_n|| / ||phi_n'||)^{1/2} by quadrature, with
/// phi_n' = sqrt(n/2) phi_{n-1} - sqrt((n+1)/2) phi_{n+1}.
inline double hermite_scale_ratio(int n, double half_width = 14.0, double dx = 0.005) {
    detail::check_hermite_index(n);
    const auto count = static_cast<std::size_t>(std::llround(2.0 * half_width / dx)) + 1;
    std::vector<double> xf(count);
    std::vector<double> df(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = -half_width + static_cast<double>(i) * dx;
        const std::vector<double> t = hermite_table(x, n + 1);
        const double below = n > 0 ? t[static_cast<std::size_t>(n) - 1] : 0.0;
        const double d = std::sqrt(n / 2.0) * below - std::sqrt((n + 1.0) / 2.0) * t[static_cast<std::size_t>(n) + 1];
        xf[i] = x * x * t[static_cast<std::size_t>(n)] * t[static_cast<std::size_t>(n)];
        df[i] = d * d;
    }
    return std::sqrt(std::sqrt(simpson(xf, dx) / simpson(df, dx)));
}

}  // namespace uclab
