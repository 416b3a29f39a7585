#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <variant>

#include "holodyn/core/complex.hpp"
#include "holodyn/core/error.hpp"
#include "holodyn/laurent/series.hpp"

namespace holodyn {

/// omega(z) = z^k exp(W(z)); exact in k, W truncated.
struct SymbolicMultiplier {
    int k = 0;
    LaurentSeries W = LaurentSeries::zero();

    cplx operator()(cplx z) const { return ipow(z, k) * std::exp(W.evaluate(z)); }
    double r_in() const { return W.r_in(); }
    double r_out() const { return W.r_out(); }
};

using Multiplier = std::variant<LaurentSeries, SymbolicMultiplier>;

inline cplx evaluate(const Multiplier& m, cplx z) {
    return std::visit([z](const auto& v) { return cplx(v(z)); }, m);
}

inline std::pair<double, double> annulus_of(const Multiplier& m) {
    return std::visit([](const auto& v) { return std::pair{v.r_in(), v.r_out()}; }, m);
}

/// Radius of a representative circle inside (r_in, r_out).
inline double middle_radius(double r_in, double r_out) {
    if (r_in <= 0.0 && !std::isfinite(r_out)) return 1.0;
    if (r_in <= 0.0) return 0.5 * r_out;
    if (!std::isfinite(r_out)) return 2.0 * r_in;
    return std::sqrt(r_in * r_out);
}

/// c z^k when the multiplier is exactly a monomial.
inline std::optional<std::pair<cplx, int>> as_monomial(const Multiplier& m) {
    if (const auto* s = std::get_if<LaurentSeries>(&m)) {
        const LaurentSeries t = s->trimmed();
        if (t.coeffs().size() == 1 && t.coeffs()[0] != cplx{}) return std::pair{t.coeffs()[0], t.n_min()};
        return std::nullopt;
    }
    const auto& sym = std::get<SymbolicMultiplier>(m);
    const LaurentSeries w = sym.W.trimmed();
    if (w.is_zero()) return std::pair{cplx{1.0}, sym.k};
    if (w.coeffs().size() == 1 && w.n_min() == 0) return std::pair{std::exp(w.coeffs()[0]), sym.k};
    return std::nullopt;
}

/// exp(W) truncated to `window`, as the product of the exact expansions of exp(c_j z^j).
inline LaurentSeries exp_series(const LaurentSeries& W, Window window) {
    const LaurentSeries t = W.trimmed();
    LaurentSeries acc = LaurentSeries::constant(std::exp(t.coeff(0)), W.r_in(), W.r_out());
    for (int j = t.n_min(); j <= t.n_max(); ++j) {
        const cplx c = t.coeff(j);
        if (j == 0 || c == cplx{}) continue;
        const int terms = (j > 0 ? window.hi / j : window.lo / j) + 1;
        if (terms <= 1) continue;
        const int step = std::abs(j);
        std::vector<cplx> e(static_cast<std::size_t>((terms - 1) * step + 1));
        cplx term{1.0};
        for (int n = 0; n < terms; ++n) {
            if (n > 0) term *= c / static_cast<double>(n);
            e[static_cast<std::size_t>(j > 0 ? n * step : (terms - 1 - n) * step)] = term;
        }
        const LaurentSeries factor(j > 0 ? 0 : (terms - 1) * j, std::move(e), W.r_in(), W.r_out());
        acc = multiply(acc, factor, window);
    }
    return acc;
}

/// Laurent series of the multiplier on the global window.
inline LaurentSeries materialize(const Multiplier& m, const SeriesConfig& cfg = {}) {
    if (const auto* s = std::get_if<LaurentSeries>(&m)) return *s;
    const auto& sym = std::get<SymbolicMultiplier>(m);
    const Window shifted{cfg.window.lo - sym.k, cfg.window.hi - sym.k};
    return exp_series(sym.W, shifted).shifted(sym.k);
}

}  // namespace holodyn
