#pragma once

// Gamma-family helpers that stay finite across the poles of Gamma.
//
// Positive arguments go to Boost.Math; negative arguments use the reflection
// formula with the sign carried separately. 1/Gamma is entire and is
// evaluated without ever forming Gamma at a pole.

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/math/special_functions/cos_pi.hpp>

#include "uclab/error.hpp"

namespace uclab::special {

struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;

    [[nodiscard]] double value() const { return sign * std::exp(log_abs); }
};

/// Distance from z to the nearest non-positive integer (inf for z > 0.5).
inline double distance_to_pole(double z) {
    if (z > 0.5) return std::numeric_limits<double>::infinity();
    return std::abs(z - std::nearbyint(z));
}

inline SignedLog log_gamma(double z) {
    if (z > 0.0) return {boost::math::lgamma(z), 1};
    if (z == std::nearbyint(z)) throw Error(ErrorKind::AtPole, "special", "Gamma has a pole at a non-positive integer");
    // Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
    const double s = boost::math::sin_pi(z);
    return {std::log(std::numbers::pi) - std::log(std::abs(s)) - boost::math::lgamma(1.0 - z), s > 0.0 ? 1 : -1};
}

inline double gamma(double z) { return log_gamma(z).value(); }

/// 1/Gamma(z); exactly zero at non-positive integers.
inline double rgamma(double z) {
    if (z > 0.0) return std::exp(-boost::math::lgamma(z));
    return boost::math::sin_pi(z) * std::exp(boost::math::lgamma(1.0 - z)) / std::numbers::pi;
}

/// d/dz (1/Gamma(z)) = -psi(z)/Gamma(z), finite everywhere.
inline double rgamma_derivative(double z) {
    if (z > 0.0) return -boost::math::digamma(z) * rgamma(z);
    const double g = std::exp(boost::math::lgamma(1.0 - z));
    return g * (boost::math::cos_pi(z) - boost::math::sin_pi(z) * boost::math::digamma(1.0 - z) / std::numbers::pi);
}

inline double digamma(double z) {
    if (z > 0.0) return boost::math::digamma(z);
    if (z == std::nearbyint(z)) throw Error(ErrorKind::AtPole, "special", "digamma has a pole at a non-positive integer");
    // psi(z) = psi(1 - z) - pi cot(pi z)
    return boost::math::digamma(1.0 - z) -
           std::numbers::pi * boost::math::cos_pi(z) / boost::math::sin_pi(z);
}

}  // namespace uclab::special
