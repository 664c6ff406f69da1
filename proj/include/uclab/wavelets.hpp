#pragma once

// Built-in real-line spectra and the level sequences derived from them.

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "uclab/bridge.hpp"
#include "uclab/error.hpp"
#include "uclab/line.hpp"
#include "uclab/parallel.hpp"

namespace uclab {

/// "gauss-deriv":   xi e^{-xi^2}
/// "mexican-gauss": xi^2 e^{-xi^2/2}
/// "gaussian":      e^{-xi^2/2}   (not admissible)
inline SpectrumFn builtin_wavelet(std::string_view name) {
    if (name == "gauss-deriv") return [](double xi) { return cplx{xi * std::exp(-xi * xi), 0.0}; };
    if (name == "mexican-gauss") return [](double xi) { return cplx{xi * xi * std::exp(-0.5 * xi * xi), 0.0}; };
    if (name == "gaussian") return [](double xi) { return cplx{std::exp(-0.5 * xi * xi), 0.0}; };
    throw Error(ErrorKind::UnknownName, "cli", "unknown wavelet '" + std::string(name) + "'");
}

inline std::vector<std::string> builtin_wavelet_names() { return {"gauss-deriv", "mexican-gauss", "gaussian"}; }

/// UC_H of the function whose spectrum is psi0_hat. The Heisenberg product is
/// symmetric in the two domains, so the spectrum samples are fed to the
/// sampled-line estimator directly.
inline LineUCReport heisenberg_reference(const SpectrumFn& psi0_hat, double half_width = 12.0, double dx = 0.005) {
    return uc_line_sampled(sample_on_grid(psi0_hat, -half_width, half_width, dx));
}

/// Periodized levels j_lo..j_hi with q_j = q_base^j.
inline std::vector<Level> periodized_levels(const SpectrumFn& psi0_hat, int j_lo, int j_hi, double q_base = 2.0,
                                            unsigned workers = 0) {
    if (j_lo < 0 || j_hi < j_lo) throw Error(ErrorKind::InvalidInput, "bridge", "level range must satisfy 0 <= a <= b");
    if (!(q_base > 1.0)) throw Error(ErrorKind::InvalidInput, "bridge", "q base must exceed 1");
    std::vector<Level> out(static_cast<std::size_t>(j_hi - j_lo + 1));
    parallel_for(out.size(), workers, [&](std::size_t i) {
        const int j = j_lo + static_cast<int>(i);
        out[i] = Level{j, std::pow(q_base, j), periodize(psi0_hat, j)};
    });
    return out;
}

}  // namespace uclab
