#pragma once

// Periodic Parseval wavelet frames from a scaling mask (unitary extension
// principle).
//
// Given nu(j, k), 2^j-periodic in k:
//   xi^_j(k)   = prod_{r > j} nu(r, k)
//   phi^_j(k)  = 2^{-j/2} xi^_j(k)
//   mu^j_k     = sqrt(2) nu(j, k)
//   lambda^j_k = e^{2 pi i 2^{-j} k} conj(mu^j_{k + 2^{j-1}})
//   psi^_j(k)  = lambda^{j+1}_k phi^_{j+1}(k)
// Translates psi_{j,k} = psi_j(. - 2 pi 2^{-j} k) are never stored; inner
// products use (f, g(. - s)) = sum c_m conj(d_m) e^{i m s}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "uclab/error.hpp"
#include "uclab/parallel.hpp"
#include "uclab/periodic.hpp"
#include "uclab/summation.hpp"

namespace uclab {

using MaskFn = std::function<cplx(int j, long long k)>;

struct MaskSpec {
    MaskFn nu;
    int max_depth = 64;
    double conv_tol = 1e-14;
};

/// nu(r, k) = e^{-pi i k 2^{-r}} cos(pi k 2^{-r}).
inline MaskSpec haar_mask() {
    MaskSpec m;
    m.nu = [](int r, long long k) {
        const double theta = std::numbers::pi * std::ldexp(static_cast<double>(k), -r);
        return std::polar(std::cos(theta), -theta);
    };
    return m;
}

/// Checks nu(j, k) == nu(j, k + 2^j) on j = 1..max_level, k in [-span, span].
inline double mask_periodicity_defect(const MaskSpec& m, int max_level, long long span) {
    double worst = 0.0;
    for (int j = 1; j <= max_level; ++j) {
        const long long period = 1LL << j;
        for (long long k = -span; k <= span; ++k) {
            worst = std::max(worst, std::abs(m.nu(j, k) - m.nu(j, k + period)));
        }
    }
    return worst;
}

/// Partial product prod_{r=j+1}^{j+R} nu(r, k), stopping once a factor is within
/// conv_tol of 1 (or the product hits zero). A factor equal to 1 only counts as
/// convergence once k lies in the central half-period, 2^r > 2|k|; periodic
/// masks can return 1 at coarse levels before a later factor vanishes.
inline cplx xi_product(const MaskSpec& m, int j, long long k) {
    cplx prod{1.0, 0.0};
    for (int step = 1; step <= m.max_depth; ++step) {
        const cplx factor = m.nu(j + step, k);
        prod *= factor;
        if (prod == cplx{0.0, 0.0}) return prod;
        const int r = j + step;
        const bool central = r >= 62 || (std::abs(k) < (1LL << (r - 1)));
        if (central && std::abs(factor - 1.0) < m.conv_tol) return prod;
        if (step == m.max_depth && std::abs(factor - 1.0) > 1e-8) {
            throw Error(ErrorKind::ProductNotConverged, "frames",
                        "infinite product at (j=" + std::to_string(j) + ", k=" + std::to_string(k) +
                            ") still far from converged at max_depth");
        }
    }
    return prod;
}

struct WaveletFrameLevels {
    int J = 0;
    int support_radius = 0;
    std::vector<PeriodicSignal> phi;          // phi_0 .. phi_J on [-R, R]
    std::vector<PeriodicSignal> psi;          // psi_0 .. psi_{J-1} on [-R, R]
    std::vector<std::vector<cplx>> mu;        // mu[j][k], k in [0, 2^j), j = 0..J (mu[0] unused)
    std::vector<std::vector<cplx>> lambda;    // same layout

    [[nodiscard]] cplx mu_at(int j, long long k) const {
        const long long p = 1LL << j;
        return mu[static_cast<std::size_t>(j)][static_cast<std::size_t>(((k % p) + p) % p)];
    }
    [[nodiscard]] cplx lambda_at(int j, long long k) const {
        const long long p = 1LL << j;
        return lambda[static_cast<std::size_t>(j)][static_cast<std::size_t>(((k % p) + p) % p)];
    }
};

inline WaveletFrameLevels build_frame(const MaskSpec& m, int J, int support_radius = -1, unsigned workers = 0) {
    if (J < 1 || J > 24) throw Error(ErrorKind::InvalidInput, "frames", "J must be in [1, 24]");
    if (support_radius < 0) support_radius = 1 << (J + 2);
    const int R = support_radius;
    const std::size_t width = 2 * static_cast<std::size_t>(R) + 1;

    WaveletFrameLevels fr;
    fr.J = J;
    fr.support_radius = R;
    fr.phi.resize(static_cast<std::size_t>(J) + 1);
    parallel_for(static_cast<std::size_t>(J) + 1, workers, [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        const double amp = 1.0 / std::sqrt(std::ldexp(1.0, j));
        std::vector<cplx> c(width);
        for (int k = -R; k <= R; ++k) c[static_cast<std::size_t>(k + R)] = amp * xi_product(m, j, k);
        fr.phi[jj] = PeriodicSignal(-R, std::move(c));
    });

    fr.mu.resize(static_cast<std::size_t>(J) + 1);
    fr.lambda.resize(static_cast<std::size_t>(J) + 1);
    for (int j = 1; j <= J; ++j) {
        const long long p = 1LL << j;
        const long long half = p / 2;
        auto& mu = fr.mu[static_cast<std::size_t>(j)];
        auto& la = fr.lambda[static_cast<std::size_t>(j)];
        mu.resize(static_cast<std::size_t>(p));
        la.resize(static_cast<std::size_t>(p));
        for (long long k = 0; k < p; ++k) mu[static_cast<std::size_t>(k)] = std::sqrt(2.0) * m.nu(j, k);
        for (long long k = 0; k < p; ++k) {
            const double angle = 2.0 * std::numbers::pi * std::ldexp(static_cast<double>(k), -j);
            la[static_cast<std::size_t>(k)] =
                std::polar(1.0, angle) * std::conj(mu[static_cast<std::size_t>((k + half) % p)]);
        }
    }

    fr.psi.resize(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) {
        std::vector<cplx> c(width);
        const PeriodicSignal& next = fr.phi[static_cast<std::size_t>(j) + 1];
        for (int k = -R; k <= R; ++k) c[static_cast<std::size_t>(k + R)] = fr.lambda_at(j + 1, k) * next.at(k);
        fr.psi[static_cast<std::size_t>(j)] = PeriodicSignal(-R, std::move(c));
    }
    return fr;
}

/// max_k ||M(k) M(k)^* - 2I||_max over k = 0..2^{j-1}-1, with
/// M(k) = [[mu_k, mu_{k+h}], [lambda_k, lambda_{k+h}]], h = 2^{j-1}.
inline double uep_matrix_deviation(const WaveletFrameLevels& fr, int j, long long k) {
    const long long half = 1LL << (j - 1);
    const cplx a = fr.mu_at(j, k);
    const cplx b = fr.mu_at(j, k + half);
    const cplx c = fr.lambda_at(j, k);
    const cplx d = fr.lambda_at(j, k + half);
    const cplx g00 = a * std::conj(a) + b * std::conj(b);
    const cplx g01 = a * std::conj(c) + b * std::conj(d);
    const cplx g11 = c * std::conj(c) + d * std::conj(d);
    return std::max({std::abs(g00 - 2.0), std::abs(g01), std::abs(g11 - 2.0)});
}

inline double uep_matrix_check(const WaveletFrameLevels& fr, int j) {
    if (j < 1 || j > fr.J) throw Error(ErrorKind::InvalidInput, "frames", "level out of range");
    double worst = 0.0;
    for (long long k = 0; k < (1LL << (j - 1)); ++k) worst = std::max(worst, uep_matrix_deviation(fr, j, k));
    return worst;
}

/// max |phi^_j(k) - mu^{j+1}_k phi^_{j+1}(k)| over the stored support.
inline double refinement_residual(const WaveletFrameLevels& fr, int j) {
    double worst = 0.0;
    const PeriodicSignal& a = fr.phi[static_cast<std::size_t>(j)];
    const PeriodicSignal& b = fr.phi[static_cast<std::size_t>(j) + 1];
    for (int k = -fr.support_radius; k <= fr.support_radius; ++k) {
        worst = std::max(worst, std::abs(a.at(k) - fr.mu_at(j + 1, k) * b.at(k)));
    }
    return worst;
}

/// max_{|k| <= window} |2^{j/2} phi^_j(k) - 1|.
inline double scaling_limit_defect(const WaveletFrameLevels& fr, int j, int window = 4) {
    double worst = 0.0;
    const double amp = std::sqrt(std::ldexp(1.0, j));
    for (int k = -window; k <= window; ++k) {
        worst = std::max(worst, std::abs(amp * fr.phi[static_cast<std::size_t>(j)].at(k) - 1.0));
    }
    return worst;
}

/// sum_{k < 2^j} |(f, g(. - 2 pi 2^{-j} k))|^2.
inline double translate_energy(const PeriodicSignal& f, const PeriodicSignal& g, int j) {
    std::vector<std::pair<double, cplx>> terms;
    for (int m = f.k0(); m < f.k_end(); ++m) {
        const cplx t = f.at(m) * std::conj(g.at(m));
        if (t != cplx{0.0, 0.0}) terms.emplace_back(static_cast<double>(m), t);
    }
    const long long count = 1LL << j;
    CompensatedSum total;
    for (long long k = 0; k < count; ++k) {
        const double s = 2.0 * std::numbers::pi * std::ldexp(static_cast<double>(k), -j);
        CompensatedComplexSum acc;
        for (const auto& [m, t] : terms) acc += t * std::polar(1.0, m * s);
        total += std::norm(acc.value());
    }
    return total.value();
}

namespace detail {

inline void require_in_band(const WaveletFrameLevels& fr, const PeriodicSignal& f) {
    for (int k = f.k0(); k < f.k_end(); ++k) {
        if (std::abs(k) > fr.support_radius && f.at(k) != cplx{0.0, 0.0}) {
            throw Error(ErrorKind::BandExceeded, "frames",
                        "test function has energy beyond the resolved band |k| <= " +
                            std::to_string(fr.support_radius));
        }
    }
}

}  // namespace detail

/// |(f, phi_0)|^2 + sum_{j<J} sum_{k<2^j} |(f, psi_{j,k})|^2 - ||f||^2.
inline double parseval_residual(const WaveletFrameLevels& fr, const PeriodicSignal& f) {
    detail::require_in_band(fr, f);
    CompensatedSum acc;
    acc += std::norm(inner(f, fr.phi[0]));
    for (int j = 0; j < fr.J; ++j) acc += translate_energy(f, fr.psi[static_cast<std::size_t>(j)], j);
    acc += -norm_sq(f);
    return acc.value();
}

/// Finite-depth form of the frame identity:
/// |(f, phi_0)|^2 + sum_{j<J} sum_k |(f, psi_{j,k})|^2 - sum_{k<2^J} |(f, phi_{J,k})|^2.
/// Vanishes exactly under the mask matrix condition, independent of how close
/// 2^{J/2} phi^_J is to 1 on the support of f.
inline double telescoped_residual(const WaveletFrameLevels& fr, const PeriodicSignal& f) {
    detail::require_in_band(fr, f);
    CompensatedSum acc;
    acc += std::norm(inner(f, fr.phi[0]));
    for (int j = 0; j < fr.J; ++j) acc += translate_energy(f, fr.psi[static_cast<std::size_t>(j)], j);
    acc += -translate_energy(f, fr.phi[static_cast<std::size_t>(fr.J)], fr.J);
    return acc.value();
}

struct BernsteinResult {
    bool pass = false;
    double ratio = 0.0;  // ||psi'|| / (degree_bound ||psi||)
};

inline BernsteinResult bernstein_check(const PeriodicSignal& psi, double degree_bound) {
    const double n = norm_sq(psi);
    if (!(n > 0.0)) throw Error(ErrorKind::ZeroSignal, "frames", "Bernstein check on a zero signal");
    const double d = frequency_moments(psi).second;
    BernsteinResult r;
    r.ratio = std::sqrt(d) / (degree_bound * std::sqrt(n));
    r.pass = r.ratio <= 1.0 + 1e-12;
    return r;
}

}  // namespace uclab
