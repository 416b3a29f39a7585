#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace holodyn {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Point on the circle of the given radius at node `k` of `n` equally spaced angles.
inline cplx circle_node(double radius, std::size_t k, std::size_t n) {
    return std::polar(radius, kTwoPi * static_cast<double>(k) / static_cast<double>(n));
}

/// Integer power without the branch-cut games of std::pow for complex bases.
inline cplx ipow(cplx z, int e) {
    if (e < 0) return 1.0 / ipow(z, -e);
    cplx result{1.0, 0.0};
    cplx base = z;
    unsigned u = static_cast<unsigned>(e);
    while (u) {
        if (u & 1U) result *= base;
        base *= base;
        u >>= 1U;
    }
    return result;
}

}  // namespace holodyn
