#pragma once

// Constrained Heisenberg minimization: the Gamma-ratio function
//   F(x) = Gamma(1/2) Gamma(1/4 - x/4) / Gamma(3/4 - x/4),
// the Hermite series it sums, and the reduced two-equation system
//   -beta F(alpha + beta eps) = pi^{-3/2} eps,
//    beta^2 F'(alpha + beta eps) = 2 pi^{-1/2}.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <vector>

#include "uclab/error.hpp"
#include "uclab/hermite.hpp"
#include "uclab/line.hpp"
#include "uclab/parallel.hpp"
#include "uclab/special.hpp"
#include "uclab/summation.hpp"

namespace uclab {

inline constexpr double kDefaultPoleTol = 1e-10;

namespace detail {

/// Poles of F sit where 1/4 - x/4 is a non-positive integer: x = 1, 5, 9, ...
inline bool near_f_pole(double x, double pole_tol) {
    if (x < 1.0 - pole_tol) return false;
    const double m = std::nearbyint((x - 1.0) / 4.0);
    return std::abs(x - (1.0 + 4.0 * m)) < pole_tol;
}

inline void require_off_pole(double x, double pole_tol) {
    if (near_f_pole(x, pole_tol)) {
        throw Error(ErrorKind::AtPole, "minimizer", "F evaluated within pole_tol of a pole (x = 1 + 4m)");
    }
}

}  // namespace detail

inline double gamma_ratio_F(double x, double pole_tol = kDefaultPoleTol) {
    detail::require_off_pole(x, pole_tol);
    const double a = 0.25 - 0.25 * x;
    const double b = 0.75 - 0.25 * x;
    return std::sqrt(std::numbers::pi) * special::gamma(a) * special::rgamma(b);
}

/// F'(x) = (F(x)/4)(psi(3/4 - x/4) - psi(1/4 - x/4)), evaluated through the
/// entire function 1/Gamma so that the zeros of F (x = 3, 7, ...) are regular.
inline double gamma_ratio_F_prime(double x, double pole_tol = kDefaultPoleTol) {
    detail::require_off_pole(x, pole_tol);
    const double a = 0.25 - 0.25 * x;
    const double b = 0.75 - 0.25 * x;
    const double ga = special::gamma(a);
    return -0.25 * std::sqrt(std::numbers::pi) * ga *
           (special::digamma(a) * special::rgamma(b) + special::rgamma_derivative(b));
}

struct SeriesValue {
    double value = 0.0;       // partial sum through n_terms
    double half_width = 0.0;  // bound on |limit - value|
};

/// 2 sum_{n=0}^{N} (2n)!/(2^n n!)^2 / (2n + 1/2 - s/2), which tends to F(s).
inline SeriesValue series_lhs(double s, long long n_terms, double pole_tol = kDefaultPoleTol) {
    if (n_terms < 10) throw Error(ErrorKind::InvalidInput, "minimizer", "series needs n_terms >= 10");
    detail::require_off_pole(s, pole_tol);
    CompensatedSum acc;
    double central = 1.0;  // C(2n, n) / 4^n
    for (long long n = 0; n <= n_terms; ++n) {
        if (n > 0) central *= (2.0 * static_cast<double>(n) - 1.0) / (2.0 * static_cast<double>(n));
        acc += 2.0 * central / (2.0 * static_cast<double>(n) + 0.5 - 0.5 * s);
    }
    SeriesValue out;
    out.value = acc.value();
    // C(2n,n)/4^n <= 1/sqrt(pi n); for n > N the denominators exceed 2n - d.
    const double d = std::max(0.0, 0.5 * s - 0.5);
    const double nn = static_cast<double>(n_terms);
    out.half_width = (d < nn) ? 2.0 / (std::sqrt(std::numbers::pi * nn) * (1.0 - d / (2.0 * nn)))
                              : std::numeric_limits<double>::infinity();
    return out;
}

struct SystemResidual {
    double alpha = 0.0;
    double beta = 0.0;
    double eps = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;

    [[nodiscard]] double norm() const { return std::hypot(r1, r2); }
};

inline SystemResidual system_residual(double alpha, double beta, double eps, double pole_tol = kDefaultPoleTol) {
    const double x = alpha + beta * eps;
    SystemResidual r{alpha, beta, eps, 0.0, 0.0};
    r.r1 = -beta * gamma_ratio_F(x, pole_tol) - std::pow(std::numbers::pi, -1.5) * eps;
    r.r2 = beta * beta * gamma_ratio_F_prime(x, pole_tol) - 2.0 / std::sqrt(std::numbers::pi);
    return r;
}

/// The eps = 0 solution alpha = 3, beta^2 = 2 pi^{-1/2} / F'(3).
inline SystemResidual zero_eps_solution() {
    const double beta = std::sqrt(2.0 / std::sqrt(std::numbers::pi) / gamma_ratio_F_prime(3.0));
    return system_residual(3.0, beta, 0.0);
}

/// Damped Newton polish of the reduced system from (alpha, beta); the
/// Jacobian uses F' analytically and F'' by central differences of F'.
inline SystemResidual polish_system(double alpha, double beta, double eps, int max_iter = 60) {
    SystemResidual best = system_residual(alpha, beta, eps);
    for (int it = 0; it < max_iter && best.norm() > 1e-15; ++it) {
        const double x = best.alpha + best.beta * eps;
        const double f = gamma_ratio_F(x);
        const double fp = gamma_ratio_F_prime(x);
        const double h = 1e-5 * std::max(1.0, std::abs(x));
        const double fpp = (gamma_ratio_F_prime(x + h) - gamma_ratio_F_prime(x - h)) / (2.0 * h);
        const double b = best.beta;
        const double j11 = -b * fp;
        const double j12 = -f - b * eps * fp;
        const double j21 = b * b * fpp;
        const double j22 = 2.0 * b * fp + b * b * eps * fpp;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double da = (best.r1 * j22 - best.r2 * j12) / det;
        const double db = (j11 * best.r2 - j21 * best.r1) / det;
        double step = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
            try {
                const SystemResidual trial = system_residual(best.alpha - step * da, best.beta - step * db, eps);
                if (std::isfinite(trial.norm()) && trial.norm() < best.norm()) {
                    best = trial;
                    improved = true;
                    break;
                }
            } catch (const Error&) {
            }
        }
        if (!improved) break;
    }
    return best;
}

struct ScanRange {
    double lo = 0.0;
    double hi = 1.0;
};

struct ScanOptions {
    unsigned workers = 0;
    double pole_tol = 1e-6;
    /// Called for every evaluated grid point (possibly from several threads,
    /// serialized by the scan).
    std::function<void(const SystemResidual&)> sink;
};

struct ScanResult {
    double min_residual = std::numeric_limits<double>::infinity();
    SystemResidual argmin;
    long long evaluated = 0;
    long long skipped = 0;  // grid points within pole_tol of a pole of F
};

inline ScanResult scan_no_solution(double eps, ScanRange alpha_range, ScanRange beta_range, int grid_n,
                                   const ScanOptions& opt = {}) {
    if (grid_n < 2) throw Error(ErrorKind::InvalidInput, "minimizer", "grid must have at least 2 points per axis");
    if (!(alpha_range.hi > alpha_range.lo) || !(beta_range.hi > beta_range.lo)) {
        throw Error(ErrorKind::InvalidInput, "minimizer", "empty scan range");
    }
    struct Partial {
        ScanResult r;
    };
    const auto rows = static_cast<std::size_t>(grid_n);
    std::vector<Partial> partial(rows);
    std::mutex sink_mutex;
    const double da = (alpha_range.hi - alpha_range.lo) / (grid_n - 1);
    const double db = (beta_range.hi - beta_range.lo) / (grid_n - 1);
    parallel_for(rows, opt.workers, [&](std::size_t i) {
        ScanResult& r = partial[i].r;
        const double alpha = alpha_range.lo + static_cast<double>(i) * da;
        for (int jb = 0; jb < grid_n; ++jb) {
            const double beta = beta_range.lo + jb * db;
            if (detail::near_f_pole(alpha + beta * eps, opt.pole_tol)) {
                ++r.skipped;
                continue;
            }
            const SystemResidual s = system_residual(alpha, beta, eps, opt.pole_tol);
            ++r.evaluated;
            if (opt.sink) {
                std::lock_guard lock(sink_mutex);
                opt.sink(s);
            }
            if (s.norm() < r.min_residual) {
                r.min_residual = s.norm();
                r.argmin = s;
            }
        }
    });
    ScanResult out;
    for (const Partial& p : partial) {
        out.evaluated += p.r.evaluated;
        out.skipped += p.r.skipped;
        if (p.r.min_residual < out.min_residual) {
            out.min_residual = p.r.min_residual;
            out.argmin = p.r.argmin;
        }
    }
    return out;
}

struct HermiteBranch {
    int n = 0;
    double integral = 0.0;
    double uc = 0.0;
};

/// The kappa = 0 branch: an even Hermite function phi_{2k} with int phi_{2k} = eps.
inline std::optional<HermiteBranch> hermite_branch(double eps, double rel_tol = 1e-12) {
    for (int n = 0; n <= kMaxHermiteIndex; n += 2) {
        const double v = hermite_integral(n);
        if (std::abs(v - eps) <= rel_tol * std::abs(v)) return HermiteBranch{n, v, hermite_uc(n)};
    }
    return std::nullopt;
}

struct SeriesGrid {
    double half_width = 40.0;
    double dx = 0.01;
};

namespace detail {

/// 2n + 1/2 - (alpha + kappa eps / alpha) / 2 for n = 0..n_terms.
inline std::vector<double> candidate_denominators(double alpha, double kappa, double eps, int n_terms) {
    if (alpha == 0.0) throw Error(ErrorKind::InvalidInput, "minimizer", "alpha must be nonzero");
    const double shift = 0.5 * (alpha + kappa * eps / alpha);
    std::vector<double> den(static_cast<std::size_t>(n_terms) + 1);
    for (int n = 0; n <= n_terms; ++n) {
        den[static_cast<std::size_t>(n)] = 2.0 * n + 0.5 - shift;
        if (std::abs(den[static_cast<std::size_t>(n)]) < 1e-12) {
            throw Error(ErrorKind::AtPole, "minimizer", "a series denominator vanishes");
        }
    }
    return den;
}

}  // namespace detail

/// Coefficients of f_0 = sum_n c_n phi_{2n}:
/// c_n = -pi^{3/4} (kappa/alpha) sqrt((2n)!)/(2^n n!) / (2n + 1/2 - (alpha + kappa eps/alpha)/2).
inline std::vector<double> candidate_coefficients(double alpha, double kappa, double eps, int n_terms) {
    const std::vector<double> den = detail::candidate_denominators(alpha, kappa, eps, n_terms);
    std::vector<double> c(den.size());
    double w = 1.0;  // sqrt((2n)!)/(2^n n!)
    const double pre = -std::pow(std::numbers::pi, 0.75) * kappa / alpha;
    for (int n = 0; n <= n_terms; ++n) {
        if (n > 0) w *= std::sqrt((2.0 * n - 1.0) / (2.0 * n));
        c[static_cast<std::size_t>(n)] = pre * w / den[static_cast<std::size_t>(n)];
    }
    return c;
}

/// Evaluates sum_n coeffs[n] phi_{2n} on a symmetric grid.
inline SampledLineSignal even_hermite_series(const std::vector<double>& coeffs, const SeriesGrid& grid = {}) {
    const int nmax = 2 * (static_cast<int>(coeffs.size()) - 1);
    return sample_on_grid(
        [&](double x) {
            const std::vector<double> t = hermite_table(x, nmax);
            CompensatedSum acc;
            for (std::size_t n = 0; n < coeffs.size(); ++n) acc += coeffs[n] * t[2 * n];
            return cplx{acc.value(), 0.0};
        },
        -grid.half_width, grid.half_width, grid.dx);
}

inline SampledLineSignal candidate_series(double alpha, double kappa, double eps, int n_terms,
                                          const SeriesGrid& grid = {}) {
    return even_hermite_series(candidate_coefficients(alpha, kappa, eps, n_terms), grid);
}

/// The two constraint series evaluated directly:
///   eps  = -2 pi^{3/2} (kappa/alpha) sum b_n / den_n
///   norm =    pi^{3/2} (kappa/alpha)^2 sum b_n / den_n^2,   b_n = (2n)!/(2^n n!)^2.
struct ConstraintSeries {
    double integral = 0.0;
    double norm_sq = 0.0;
};

inline ConstraintSeries candidate_constraints(double alpha, double kappa, double eps, int n_terms) {
    const std::vector<double> den = detail::candidate_denominators(alpha, kappa, eps, n_terms);
    CompensatedSum s1;
    CompensatedSum s2;
    double b = 1.0;
    for (int n = 0; n <= n_terms; ++n) {
        if (n > 0) b *= (2.0 * n - 1.0) / (2.0 * n);
        const double d = den[static_cast<std::size_t>(n)];
        s1 += b / d;
        s2 += b / (d * d);
    }
    const double p32 = std::pow(std::numbers::pi, 1.5);
    const double beta = kappa / alpha;
    return {-2.0 * p32 * beta * s1.value(), p32 * beta * beta * s2.value()};
}

/// int f and (2pi)^{-1} int |f|^2 of a sampled signal by Simpson.
inline ConstraintSeries measured_constraints(const SampledLineSignal& f) {
    std::vector<double> re(f.samples.size());
    std::vector<double> sq(f.samples.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
        re[i] = f.samples[i].real();
        sq[i] = std::norm(f.samples[i]);
    }
    return {simpson(re, f.dx), simpson(sq, f.dx) / (2.0 * std::numbers::pi)};
}

/// (alpha/2)(x^2 f - f'') + lambda f + constant, with f'' by an 8th-order
/// central difference; the four samples at each end are left at zero.
inline std::vector<double> euler_lagrange_residual(const SampledLineSignal& f, double alpha, double lambda,
                                                   double constant) {
    static constexpr std::array<double, 5> w{-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
    const std::size_t n = f.samples.size();
    std::vector<double> out(n, 0.0);
    const double h2 = f.dx * f.dx;
    for (std::size_t i = 4; i + 4 < n; ++i) {
        double d2 = w[0] * f.samples[i].real();
        for (std::size_t m = 1; m <= 4; ++m) d2 += w[m] * (f.samples[i - m].real() + f.samples[i + m].real());
        d2 /= h2;
        const double x = f.x(i);
        const double v = f.samples[i].real();
        out[i] = 0.5 * alpha * (x * x * v - d2) + lambda * v + constant;
    }
    return out;
}

/// (g, phi_n) = (2pi)^{-1} int g phi_n for samples g on the grid of `like`.
inline double project_on_hermite(const std::vector<double>& g, const SampledLineSignal& like, int n) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = g[i] * hermite_table(like.x(i), n).back();
    return simpson(v, like.dx) / (2.0 * std::numbers::pi);
}

}  // namespace uclab
