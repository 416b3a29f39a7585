#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "holodyn/core/complex.hpp"
#include "holodyn/core/error.hpp"
#include "holodyn/laurent/series.hpp"
#include "holodyn/operators/multiplier.hpp"
#include "holodyn/operators/symbol.hpp"

namespace holodyn {

struct EigenOptions {
    SeriesConfig series{};
    double radius = 1.0;  // sampling circle; also the outer radius of the test compact
    double inner = 0.0;   // test compact inner radius (0 means radius / 4)
};

struct EigenResult {
    LaurentSeries h;
    cplx eigenvalue;                // omega(0)
    double residual = 0.0;          // sup |omega(z) h(az) - omega(0) h(z)| on the test compact
    std::vector<double> residuals;  // residual at J-4..J
};

namespace detail {

template <PointFunction F>
LaurentSeries partial_product(const F& omega, cplx w0, cplx a, int J, const EigenOptions& opt) {
    const Window taylor{0, opt.series.window.hi};
    const std::size_t nodes = std::max<std::size_t>(opt.series.nodes, taylor.width());
    auto h = [&](cplx z) {
        cplx p{1.0};
        cplx s = z;
        for (int j = 0; j < J; ++j, s *= a) p *= omega(s) / w0;
        return p;
    };
    return expand_on_circle(h, opt.radius, taylor, nodes, 0.0, kInf).trimmed();
}

template <PointFunction F>
double eigen_residual(const F& omega, cplx w0, cplx a, const LaurentSeries& h, const EigenOptions& opt) {
    const double inner = opt.inner > 0.0 ? opt.inner : opt.radius / 4;
    double worst = 0.0;
    for (double r : {inner, opt.radius}) {
        constexpr std::size_t n = 512;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx z = std::polar(r, kTwoPi * (i + 0.5) / n);
            worst = std::max(worst, std::abs(omega(z) * h.evaluate_unchecked(a * z) - w0 * h.evaluate_unchecked(z)));
        }
    }
    return worst;
}

}  // namespace detail

/// Partial product h_J(z) = prod_{j<J} omega(a^j z) / omega(0), a zero-free solution of
/// omega(z) h(az) = omega(0) h(z). The result carries h on the disc |z| < infinity truncated
/// to Taylor exponents of the configured window.
template <PointFunction F>
EigenResult eigenfunction(const F& omega, cplx a, int J, const EigenOptions& opt = {}) {
    require(std::abs(a) > 0.0 && std::abs(a) < 1.0, Reason::Precondition, "eigenfunction needs 0 < |a| < 1");
    require(J >= 1, Reason::Precondition, "eigenfunction needs J >= 1");
    const cplx w0 = omega(cplx{});
    require(std::abs(w0) > 1e-12, Reason::Precondition, "multiplier vanishes at the origin");

    EigenResult out;
    out.eigenvalue = w0;
    for (int j = std::max(1, J - 4); j <= J; ++j) {
        out.h = detail::partial_product(omega, w0, a, j, opt);
        out.residuals.push_back(detail::eigen_residual(omega, w0, a, out.h, opt));
    }
    out.residual = out.residuals.back();
    const bool growing = out.residuals.size() == 5 &&
                         std::adjacent_find(out.residuals.begin(), out.residuals.end(), std::greater_equal<>()) ==
                             out.residuals.end() &&
                         out.residual > 1e-8;
    if (growing) fail(Reason::Numerical, "partial products diverge: residual grows over the last 5 factors");
    return out;
}

/// Eigenfunction for a multiplier that is holomorphic at 0 (no principal part, k >= 0).
inline EigenResult eigenfunction(const Multiplier& omega, cplx a, int J, const EigenOptions& opt = {}) {
    if (const auto* s = std::get_if<LaurentSeries>(&omega)) {
        const LaurentSeries t = s->trimmed();
        require(t.n_min() >= 0 && t.r_in() == 0.0, Reason::Precondition, "multiplier is not holomorphic at the origin");
        require(opt.radius < t.r_out(), Reason::Domain, "sampling circle outside the multiplier disc");
        return eigenfunction([&](cplx z) { return t.evaluate_unchecked(z); }, a, J, opt);
    }
    const auto& m = std::get<SymbolicMultiplier>(omega);
    const LaurentSeries W = m.W.trimmed();
    require(m.k >= 0 && W.n_min() >= 0 && W.r_in() == 0.0, Reason::Precondition,
            "multiplier is not holomorphic at the origin");
    require(opt.radius < W.r_out(), Reason::Domain, "sampling circle outside the multiplier disc");
    return eigenfunction([&](cplx z) { return ipow(z, m.k) * std::exp(W.evaluate_unchecked(z)); }, a, J, opt);
}

struct KoenigsOptions {
    SeriesConfig series{};
    double radius = 0.3;    // test circle
    double spread = 1.25;   // sampling circle = radius * spread
    double tol = 1e-12;     // stop when successive normalized iterates differ by less
    double accept = 1e-6;   // final step must at least reach this
};

struct KoenigsResult {
    cplx a;
    LaurentSeries sigma;
    double residual = 0.0;  // sup |sigma(psi(z)) - a sigma(z)| on the test circle
    int iterations = 0;
    double last_step = 0.0;
};

/// Koenigs linearization sigma = lim psi_n / a^n for psi(0) = 0, 0 < |psi'(0)| < 1.
inline KoenigsResult koenigs_map(const Symbol& psi_in, int J, const KoenigsOptions& opt = {}) {
    require(J >= 1, Reason::Precondition, "Koenigs iteration needs J >= 1");
    const Symbol psi = psi_in.normalized();
    const auto at0 = value_at_origin(psi);
    require(at0.has_value() && std::abs(*at0) < 1e-12, Reason::Precondition, "symbol does not fix the origin");

    KoenigsResult out;
    out.a = derivative_at_origin(psi);
    if (const auto* l = psi.as<Linear>()) out.a = l->a;
    const double m = std::abs(out.a);
    require(m > 1e-12 && m < 1.0, Reason::Precondition, "Koenigs map needs 0 < |psi'(0)| < 1");

    auto step = [&](cplx z) {
        if (const auto* s = psi.as<SeriesSymbol>()) return s->s.evaluate_unchecked(z);
        return psi(z);
    };
    const double rho = opt.radius * opt.spread;
    const Window taylor{1, opt.series.window.hi};
    const std::size_t nodes = std::max<std::size_t>(opt.series.nodes, taylor.width());
    std::vector<cplx> w(nodes), u(nodes);
    for (std::size_t i = 0; i < nodes; ++i) w[i] = u[i] = circle_node(rho, i, nodes);

    cplx scale{1.0};
    double prev = kInf;
    int increases = 0;
    for (int n = 1; n <= J; ++n) {
        scale /= out.a;
        double diff = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) {
            w[i] = step(w[i]);
            const cplx next = w[i] * scale;
            diff = std::max(diff, std::abs(next - u[i]));
            u[i] = next;
        }
        require(std::isfinite(diff), Reason::Numerical, "normalized iterates overflow");
        out.iterations = n;
        out.last_step = diff;
        if (diff < opt.tol) break;
        increases = diff > prev ? increases + 1 : 0;
        if (increases >= 5) fail(Reason::Numerical, "normalized iterates diverge (5 consecutive increases)");
        prev = diff;
    }
    if (out.last_step > opt.accept) {
        std::ostringstream msg;
        msg << "normalized iterates did not settle: last step " << out.last_step;
        fail(Reason::Numerical, msg.str());
    }

    std::vector<cplx> c = fft::circle_coefficients(std::move(u), rho, taylor.lo, taylor.hi);
    out.sigma = LaurentSeries(1, std::move(c), 0.0, rho).trimmed();
    constexpr std::size_t n = 512;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx z = std::polar(opt.radius, kTwoPi * (i + 0.5) / n);
        out.residual = std::max(out.residual,
                                std::abs(out.sigma.evaluate_unchecked(step(z)) - out.a * out.sigma.evaluate_unchecked(z)));
    }
    return out;
}

}  // namespace holodyn
