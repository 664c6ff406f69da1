#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "uclab/periodic.hpp"

namespace uclab::testing {

/// Seed for randomized property suites; UCLAB_SEED overrides the default.
inline std::uint64_t suite_seed() {
    if (const char* env = std::getenv("UCLAB_SEED"); env != nullptr && *env != '\0') {
        return std::stoull(env);
    }
    return 1729;
}

inline std::mt19937_64 make_rng(std::uint64_t salt = 0) { return std::mt19937_64(suite_seed() + salt); }

/// Complex Gaussian coefficients on a random block of length 1..max_len
/// starting in [-max_len, max_len].
inline PeriodicSignal random_signal(std::mt19937_64& rng, int max_len = 64) {
    std::uniform_int_distribution<int> len(1, max_len);
    std::uniform_int_distribution<int> start(-max_len, max_len);
    std::normal_distribution<double> g;
    std::vector<cplx> c(static_cast<std::size_t>(len(rng)));
    for (auto& v : c) v = {g(rng), g(rng)};
    return {start(rng), std::move(c)};
}

/// Random trig polynomial with all coefficients in [-degree, degree].
inline PeriodicSignal random_trig_poly(std::mt19937_64& rng, int degree) {
    std::normal_distribution<double> g;
    std::vector<cplx> c(2 * static_cast<std::size_t>(degree) + 1);
    for (auto& v : c) v = {g(rng), g(rng)};
    return {-degree, std::move(c)};
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace uclab::testing
