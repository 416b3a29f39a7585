#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "holodyn/core/complex.hpp"
#include "holodyn/core/error.hpp"
#include "holodyn/core/fft.hpp"
#include "holodyn/laurent/series.hpp"
#include "holodyn/operators/multiplier.hpp"

namespace holodyn {

/// Positively oriented circle |z| = radius about the origin, sampled at `nodes` points.
struct CircleContour {
    double radius = 1.0;
    std::size_t nodes = 4096;
};

struct WindingResult {
    int k = 0;
    double raw = 0.0;          // (1/2pi) * total argument increment
    double distance = 0.0;     // |raw - k|
    double min_modulus = 0.0;  // smallest sampled |omega|
    std::size_t nodes = 0;     // nodes actually used after refinement
};

namespace detail {

struct TrackedArgument {
    std::vector<cplx> values;
    std::vector<double> arg;  // continuous argument, principal branch at angle 0
    double min_modulus = kInf;
    double max_modulus = 0.0;
};

// Samples F on the circle, doubling the node count until every per-step argument jump is
// below pi/2 so the continuous branch is unambiguous.
template <PointFunction F>
TrackedArgument track_argument(const F& omega, double radius, std::size_t nodes) {
    constexpr std::size_t kMaxNodes = std::size_t{1} << 20;
    for (;; nodes *= 2) {
        TrackedArgument t;
        t.values.resize(nodes);
        for (std::size_t i = 0; i < nodes; ++i) {
            t.values[i] = omega(circle_node(radius, i, nodes));
            const double m = std::abs(t.values[i]);
            t.min_modulus = std::min(t.min_modulus, m);
            t.max_modulus = std::max(t.max_modulus, m);
        }
        require(t.min_modulus > 1e-13 * std::max(1.0, t.max_modulus) && std::isfinite(t.max_modulus),
                Reason::Numerical, "multiplier is (numerically) zero or non-finite on the contour");
        t.arg.resize(nodes + 1);
        t.arg[0] = std::arg(t.values[0]);
        double worst = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) {
            const double step = std::arg(t.values[(i + 1) % nodes] / t.values[i]);
            worst = std::max(worst, std::abs(step));
            t.arg[i + 1] = t.arg[i] + step;
        }
        if (worst < 0.5 * std::numbers::pi || nodes >= kMaxNodes) return t;
    }
}

}  // namespace detail

/// Winding number about 0 of omega along the contour.
template <PointFunction F>
WindingResult winding_number(const F& omega, const CircleContour& gamma) {
    require(gamma.radius > 0.0 && gamma.nodes >= 8, Reason::Precondition, "contour needs positive radius and nodes");
    const auto t = detail::track_argument(omega, gamma.radius, gamma.nodes);
    WindingResult r;
    r.raw = (t.arg.back() - t.arg.front()) / kTwoPi;
    r.k = static_cast<int>(std::lround(r.raw));
    r.distance = std::abs(r.raw - r.k);
    r.min_modulus = t.min_modulus;
    r.nodes = t.values.size();
    if (r.distance > 0.1) {
        std::ostringstream msg;
        msg << "winding value " << r.raw << " is not near an integer (under-sampled contour)";
        fail(Reason::Numerical, msg.str());
    }
    return r;
}

inline WindingResult winding_number(const LaurentSeries& omega, const CircleContour& gamma) {
    require(omega.r_in() < gamma.radius && gamma.radius < omega.r_out(), Reason::Domain,
            "contour is not inside the multiplier annulus");
    return winding_number([&](cplx z) { return omega.evaluate_unchecked(z); }, gamma);
}

inline WindingResult winding_number(const SymbolicMultiplier& omega, const CircleContour& gamma) {
    require(omega.r_in() < gamma.radius && gamma.radius < omega.r_out(), Reason::Domain,
            "contour is not inside the multiplier annulus");
    return winding_number([&](cplx z) { return omega(z); }, gamma);
}

inline WindingResult winding_number(const Multiplier& omega, const CircleContour& gamma) {
    return std::visit([&](const auto& m) { return winding_number(m, gamma); }, omega);
}

struct RadstromOptions {
    Window window{};
    double spread = 1.25;  // W's j >= 0 part from radius*spread, j < 0 part from radius/spread
    double r_in = 0.0;     // annulus of validity of the input
    double r_out = kInf;
    std::optional<CompactAnnulus> test;  // residual compact; defaults to [radius/2, 2 radius] clipped
    double tolerance = 1e-6;             // on the relative residual
};

struct RadstromResult {
    SymbolicMultiplier decomposition;
    WindingResult winding;
    double residual = 0.0;           // sup |omega - z^k e^W| on the test compact
    double relative_residual = 0.0;  // residual / sup |omega|
};

/// omega = z^k e^W with k the winding number and W the continuous logarithm of omega z^-k,
/// re-expanded by discrete Fourier coefficients.
template <PointFunction F>
RadstromResult radstrom_decompose(const F& omega, const CircleContour& gamma, const RadstromOptions& opt = {}) {
    RadstromResult out;
    out.winding = winding_number(omega, gamma);
    const int k = out.winding.k;

    auto clip = [&](double r) { return std::clamp(r, std::nextafter(opt.r_in, kInf), std::nextafter(opt.r_out, 0.0)); };
    const double outer = opt.r_out == kInf ? gamma.radius * opt.spread
                                           : std::min(gamma.radius * opt.spread, 0.5 * (gamma.radius + opt.r_out));
    const double inner = std::max(gamma.radius / opt.spread, 0.5 * (gamma.radius + opt.r_in));

    auto log_coefficients = [&](double radius) {
        auto reduced = [&](cplx z) { return omega(z) * ipow(z, -k); };
        const auto t = detail::track_argument(reduced, clip(radius), std::max<std::size_t>(gamma.nodes, opt.window.width()));
        std::vector<cplx> logs(t.values.size());
        for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = {std::log(std::abs(t.values[i])), t.arg[i]};
        return fft::circle_coefficients(std::move(logs), clip(radius), opt.window.lo, opt.window.hi, 1.0);
    };
    const auto from_outer = log_coefficients(outer);
    const auto from_inner = log_coefficients(inner);
    std::vector<cplx> c(static_cast<std::size_t>(opt.window.width()));
    for (int j = opt.window.lo; j <= opt.window.hi; ++j) {
        const auto idx = static_cast<std::size_t>(j - opt.window.lo);
        c[idx] = j >= 0 ? from_outer[idx] : from_inner[idx];
    }
    out.decomposition = SymbolicMultiplier{k, LaurentSeries(opt.window.lo, std::move(c), opt.r_in, opt.r_out).trimmed()};

    CompactAnnulus test = opt.test.value_or(CompactAnnulus(clip(gamma.radius / 2), clip(gamma.radius * 2)));
    double sup_omega = 0.0;
    for (double radius : {test.inner, std::sqrt(test.inner * test.outer), test.outer}) {
        constexpr std::size_t n = 1024;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx z = circle_node(radius, i, n);
            const cplx v = omega(z);
            sup_omega = std::max(sup_omega, std::abs(v));
            out.residual = std::max(out.residual, std::abs(v - out.decomposition(z)));
        }
    }
    out.relative_residual = sup_omega > 0.0 ? out.residual / sup_omega : out.residual;
    if (out.relative_residual > opt.tolerance) {
        std::ostringstream msg;
        msg << "decomposition residual " << out.relative_residual << " above tolerance " << opt.tolerance;
        fail(Reason::Numerical, msg.str());
    }
    return out;
}

inline RadstromResult radstrom_decompose(const LaurentSeries& omega, const CircleContour& gamma,
                                         RadstromOptions opt = {}) {
    require(omega.r_in() < gamma.radius && gamma.radius < omega.r_out(), Reason::Domain,
            "contour is not inside the multiplier annulus");
    opt.r_in = std::max(opt.r_in, omega.r_in());
    opt.r_out = std::min(opt.r_out, omega.r_out());
    return radstrom_decompose([&](cplx z) { return omega.evaluate_unchecked(z); }, gamma, opt);
}

inline RadstromResult radstrom_decompose(const SymbolicMultiplier& omega, const CircleContour& gamma,
                                         RadstromOptions opt = {}) {
    opt.r_in = std::max(opt.r_in, omega.r_in());
    opt.r_out = std::min(opt.r_out, omega.r_out());
    return radstrom_decompose([&](cplx z) { return omega(z); }, gamma, opt);
}

}  // namespace holodyn
