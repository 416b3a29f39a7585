#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "holodyn/core/complex.hpp"
#include "holodyn/core/error.hpp"
#include "holodyn/geometry/domain.hpp"
#include "holodyn/laurent/series.hpp"
#include "holodyn/operators/multiplier.hpp"
#include "holodyn/operators/symbol.hpp"

namespace holodyn {

struct OperatorConfig {
    SeriesConfig series{};
    double reexpansion_tol = 1e-8;  // relative, at off-node probes
};

/// C_{omega,psi} f = omega * (f o psi).
class WeightedCompositionOp {
public:
    WeightedCompositionOp(Multiplier multiplier, Symbol symbol, DomainSpec domain = {}, OperatorConfig cfg = {})
        : multiplier_(std::move(multiplier)),
          symbol_(std::move(symbol)),
          domain_(std::move(domain)),
          cfg_(cfg),
          series_(materialize(multiplier_, cfg_.series)) {}

    const Multiplier& multiplier() const { return multiplier_; }
    const Symbol& symbol() const { return symbol_; }
    const DomainSpec& domain() const { return domain_; }
    const OperatorConfig& config() const { return cfg_; }

    /// Truncated Laurent form of the multiplier used by apply().
    const LaurentSeries& multiplier_series() const { return series_; }

    cplx multiplier_at(cplx z) const { return evaluate(multiplier_, z); }

private:
    Multiplier multiplier_;
    Symbol symbol_;
    DomainSpec domain_;
    OperatorConfig cfg_;
    LaurentSeries series_;
};

namespace detail {

inline void check_maps_into(const LaurentSeries& f, double img_in, double img_out) {
    // psi maps (r_in, r_out) onto (img_in, img_out); the image must stay inside.
    const bool ok = img_in >= f.r_in() * (1.0 - 1e-15) && img_out <= f.r_out() * (1.0 + 1e-15);
    if (!ok) {
        std::ostringstream msg;
        msg << "symbol maps the annulus (" << f.r_in() << ", " << f.r_out() << ") outside itself (image (" << img_in
            << ", " << img_out << "))";
        fail(Reason::Domain, msg.str());
    }
}

}  // namespace detail

/// f o psi as a Laurent series on f's annulus.
inline LaurentSeries compose_series(const LaurentSeries& f, const Symbol& psi, const OperatorConfig& cfg = {}) {
    if (const auto* l = psi.as<Linear>()) {
        const double s = std::abs(l->a);
        detail::check_maps_into(f, s * f.r_in(), s * f.r_out());
        std::vector<cplx> c(f.coeffs().begin(), f.coeffs().end());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] *= ipow(l->a, f.n_min() + static_cast<int>(i));
        return LaurentSeries(f.n_min(), std::move(c), f.r_in(), f.r_out());
    }
    if (const auto* inv = psi.as<Inversion>()) {
        const double s = std::abs(inv->a);
        detail::check_maps_into(f, f.r_out() == kInf ? 0.0 : s / f.r_out(), f.r_in() == 0.0 ? kInf : s / f.r_in());
        // f(a/z) = sum d_j a^j z^{-j}
        const auto src = f.coeffs();
        std::vector<cplx> c(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) {
            const int j = f.n_min() + static_cast<int>(i);
            c[src.size() - 1 - i] = src[i] * ipow(inv->a, j);
        }
        return LaurentSeries(-f.n_max(), std::move(c), f.r_in(), f.r_out());
    }

    // Moebius and series symbols: sample on a circle and re-expand.
    const double radius = middle_radius(f.r_in(), f.r_out());
    const std::size_t nodes = std::max<std::size_t>(cfg.series.nodes, cfg.series.window.width());
    auto composite = [&](cplx z) {
        require(psi.defined_at(z), Reason::Domain, "symbol undefined on the sampling circle");
        const cplx w = psi(z);
        require(f.in_annulus(w), Reason::Domain, "symbol maps the sampling circle outside the series annulus");
        return f.evaluate_unchecked(w);
    };
    for (double probe : {0.5 * radius, 2.0 * radius}) {
        if (!(f.r_in() < probe && probe < f.r_out())) continue;
        for (std::size_t k = 0; k < 64; ++k) (void)composite(circle_node(probe, k, 64));
    }
    LaurentSeries g = expand_on_circle(composite, radius, cfg.series.window, nodes, f.r_in(), f.r_out());
    double worst = 0.0;
    double scale = 1.0;
    for (std::size_t k = 0; k < 256; ++k) {
        const cplx z = std::polar(radius, kTwoPi * (k + 0.5) / 256.0);
        const cplx exact = composite(z);
        scale = std::max(scale, std::abs(exact));
        worst = std::max(worst, std::abs(exact - g.evaluate_unchecked(z)));
    }
    if (worst > cfg.reexpansion_tol * scale) {
        std::ostringstream msg;
        msg << "re-expansion residual " << worst / scale << " above tolerance " << cfg.reexpansion_tol;
        fail(Reason::Numerical, msg.str());
    }
    return g;
}

/// T f = omega (f o psi), truncated to the operator's window.
inline LaurentSeries apply(const WeightedCompositionOp& T, const LaurentSeries& f) {
    const LaurentSeries g = compose_series(f, T.symbol(), T.config());
    return multiply(T.multiplier_series(), g, T.config().series.window);
}

/// T^n f; n = 0 returns f.
inline LaurentSeries iterate(const WeightedCompositionOp& T, const LaurentSeries& f, int n) {
    require(n >= 0, Reason::Precondition, "iterate needs n >= 0");
    LaurentSeries g = f;
    for (int i = 0; i < n; ++i) g = apply(T, g);
    return g;
}

struct OrbitEntry {
    int n = 0;
    LaurentSeries value;
    double f_norm = 0.0;
};

/// Orbit entries n = 0..N. With `normalize`, each iterate is divided by its sup norm on
/// `reference` (projective orbit); normalization is forced once that norm exceeds 1e300.
inline std::vector<OrbitEntry> orbit(const WeightedCompositionOp& T, const LaurentSeries& f, int N, bool normalize,
                                     const Exhaustion& E, int M, const CompactAnnulus& reference) {
    require(N >= 1, Reason::Precondition, "orbit needs N >= 1");
    std::vector<OrbitEntry> out;
    out.reserve(static_cast<std::size_t>(N) + 1);
    // the next application grows the sup norm by roughly the weight's sup norm
    const double growth = std::max(1.0, sup_norm(T.multiplier_series(), reference, T.config().series.nodes));
    LaurentSeries g = f;
    for (int n = 0; n <= N; ++n) {
        if (n > 0) g = apply(T, g);
        const double s = sup_norm(g, reference, T.config().series.nodes);
        require(std::isfinite(s), Reason::Numerical, "orbit overflowed before normalization");
        if ((normalize || s > 1e300 / growth) && s > 0.0) g = (1.0 / s) * g;
        out.push_back({n, g, f_norm(g, E, M, T.config().series.nodes)});
    }
    return out;
}

/// Operator product outer * inner = C_{omega_o (omega_i o psi_o), psi_i o psi_o}.
inline WeightedCompositionOp product(const WeightedCompositionOp& outer, const WeightedCompositionOp& inner) {
    const LaurentSeries w = multiply(outer.multiplier_series(),
                                     compose_series(inner.multiplier_series(), outer.symbol(), outer.config()),
                                     outer.config().series.window);
    return WeightedCompositionOp(w, compose(inner.symbol(), outer.symbol()), outer.domain(), outer.config());
}

/// T^{-1} = C_{1/(omega o psi^{-1}), psi^{-1}} for invertible closed-form symbols.
inline WeightedCompositionOp inverse(const WeightedCompositionOp& T) {
    const Symbol psi = T.symbol().normalized();
    const Symbol psi_inv = inverse_symbol(psi);
    const OperatorConfig& cfg = T.config();

    if (const auto* sym = std::get_if<SymbolicMultiplier>(&T.multiplier())) {
        const LaurentSeries& W = sym->W;
        if (const auto* l = psi.as<Linear>()) {
            // 1/omega(z/a) = a^k z^-k exp(-W(z/a))
            const cplx a = l->a;
            std::vector<cplx> c(W.coeffs().size());
            for (std::size_t i = 0; i < c.size(); ++i) c[i] = -W.coeffs()[i] * ipow(a, -(W.n_min() + static_cast<int>(i)));
            LaurentSeries Wn(W.n_min(), std::move(c), std::abs(a) * W.r_in(), std::abs(a) * W.r_out());
            Wn = Wn + LaurentSeries::constant(static_cast<double>(sym->k) * std::log(a), Wn.r_in(), Wn.r_out());
            return WeightedCompositionOp(SymbolicMultiplier{-sym->k, Wn}, psi_inv, T.domain(), cfg);
        }
        if (const auto* inv = psi.as<Inversion>()) {
            // 1/omega(a/z) = a^-k z^k exp(-W(a/z))
            const cplx a = inv->a;
            const LaurentSeries flipped = compose_series(W.with_annulus(0.0, kInf), Symbol::inversion(a), cfg);
            const double s = std::abs(a);
            LaurentSeries Wn = (-1.0 * flipped).with_annulus(W.r_out() == kInf ? 0.0 : s / W.r_out(),
                                                             W.r_in() == 0.0 ? kInf : s / W.r_in());
            Wn = Wn + LaurentSeries::constant(-static_cast<double>(sym->k) * std::log(a), Wn.r_in(), Wn.r_out());
            return WeightedCompositionOp(SymbolicMultiplier{sym->k, Wn}, psi_inv, T.domain(), cfg);
        }
    }

    if (auto mono = as_monomial(T.multiplier())) {
        const auto [c, k] = *mono;
        const auto [r_in, r_out] = annulus_of(T.multiplier());
        if (const auto* l = psi.as<Linear>())
            return WeightedCompositionOp(LaurentSeries::monomial(ipow(l->a, k) / c, -k, r_in, r_out), psi_inv,
                                         T.domain(), cfg);
        if (const auto* inv = psi.as<Inversion>())
            return WeightedCompositionOp(LaurentSeries::monomial(1.0 / (c * ipow(inv->a, k)), k, r_in, r_out), psi_inv,
                                         T.domain(), cfg);
    }

    // General multiplier: sample 1/omega(psi^{-1}(z)) and re-expand.
    const LaurentSeries& w = T.multiplier_series();
    const double radius = middle_radius(w.r_in(), w.r_out());
    const std::size_t nodes = std::max<std::size_t>(cfg.series.nodes, cfg.series.window.width());
    double min_mod = kInf;
    auto recip = [&](cplx z) {
        const cplx v = evaluate(T.multiplier(), psi_inv(z));
        min_mod = std::min(min_mod, std::abs(v));
        return 1.0 / v;
    };
    LaurentSeries m = expand_on_circle(recip, radius, cfg.series.window, nodes, w.r_in(), w.r_out());
    require(min_mod > 1e-12, Reason::Numerical, "multiplier vanishes on the sampling circle; operator not invertible");
    return WeightedCompositionOp(m, psi_inv, T.domain(), cfg);
}

/// C_{1/z} T C_{1/z} = C_{omega(1/z), 1/psi(1/z)}, used to verify the inversion symmetry on C*.
inline WeightedCompositionOp conjugate_by_inversion(const WeightedCompositionOp& T) {
    const Symbol one_over = Symbol::inversion(cplx{1.0});
    const Symbol psi = compose(one_over, compose(T.symbol(), one_over));
    auto flip = [&](const LaurentSeries& s) {
        return compose_series(s.with_annulus(0.0, kInf), one_over, T.config())
            .with_annulus(s.r_out() == kInf ? 0.0 : 1.0 / s.r_out(), s.r_in() == 0.0 ? kInf : 1.0 / s.r_in());
    };
    if (const auto* sym = std::get_if<SymbolicMultiplier>(&T.multiplier()))
        return WeightedCompositionOp(SymbolicMultiplier{-sym->k, flip(sym->W)}, psi, T.domain(), T.config());
    return WeightedCompositionOp(flip(std::get<LaurentSeries>(T.multiplier())), psi, T.domain(), T.config());
}

}  // namespace holodyn
