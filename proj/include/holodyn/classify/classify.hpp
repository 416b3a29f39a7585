#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "holodyn/classify/report.hpp"
#include "holodyn/core/complex.hpp"
#include "holodyn/core/error.hpp"
#include "holodyn/geometry/checks.hpp"
#include "holodyn/operators/operator.hpp"
#include "holodyn/operators/radstrom.hpp"

namespace holodyn {

struct ClassifyOptions {
    int resolution = 5;           // grid level for geometric checks
    int horizon = 50;             // run-away horizon
    std::size_t nodes = 4096;     // winding contour nodes
    double unit_tolerance = 1e-12;  // |a| within this of 1 counts as 1
};

namespace rules {

inline std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

struct ZeroScreen {
    std::optional<int> k;  // common winding number when the screen passes
    bool zero = false;     // a zero was detected
    std::string reason;    // why the screen is inconclusive
};

// Winding numbers on several circles inside (lo, hi); a change between radii or a
// vanishing sample on a circle means a zero of omega in the domain.
inline ZeroScreen zero_screen(const Multiplier& omega, const std::vector<double>& radii, double main_radius,
                              std::size_t nodes) {
    ZeroScreen out;
    // z^k e^W never vanishes off 0 and winds k times.
    if (const auto* sym = std::get_if<SymbolicMultiplier>(&omega)) {
        const auto [lo, hi] = annulus_of(omega);
        if (lo < main_radius && main_radius < hi)
            out.k = sym->k;
        else
            out.reason = "main contour radius " + fmt(main_radius) + " is outside the multiplier annulus";
        return out;
    }
    const auto [r_in, r_out] = annulus_of(omega);
    std::optional<int> main_k;
    std::vector<int> ks;
    for (double r : radii) {
        if (!(r_in < r && r < r_out)) continue;
        try {
            const int k = winding_number(omega, CircleContour{r, nodes}).k;
            ks.push_back(k);
            if (r == main_radius) main_k = k;
        } catch (const Error& e) {
            if (std::string(e.what()).find("zero") != std::string::npos) {
                out.zero = true;
                return out;
            }
            out.reason = e.what();
            return out;
        }
    }
    if (!main_k) {
        out.reason = "main contour radius " + fmt(main_radius) + " is outside the multiplier annulus";
        return out;
    }
    for (int k : ks)
        if (k != *main_k) {
            out.zero = true;
            return out;
        }
    out.k = main_k;
    return out;
}

// Size of the principal part of W on the circle |z| = r, relative to 1 + sup |W|.
inline bool has_principal_part(const Multiplier& omega, double r, std::size_t nodes) {
    LaurentSeries W;
    if (const auto* sym = std::get_if<SymbolicMultiplier>(&omega)) {
        W = sym->W;
    } else {
        RadstromOptions opt;
        opt.tolerance = 1e-4;
        W = radstrom_decompose(std::get<LaurentSeries>(omega), CircleContour{r, nodes}, opt).decomposition.W;
    }
    double principal = 0.0;
    double total = 0.0;
    for (int j = W.n_min(); j <= W.n_max(); ++j) {
        const double m = std::abs(W.coeff(j)) * std::pow(r, j);
        total += m;
        if (j < 0) principal += m;
    }
    return principal > 1e-8 * (1.0 + total);
}

inline void all_no(ClassificationReport& r, std::string rule, std::string condition) {
    r.set_all(Verdict::No);
    r.note(std::move(rule), std::move(condition), false);
}

inline void all_unknown(ClassificationReport& r, std::string rule, const std::string& why) {
    r.set_all(Verdict::Unknown);
    r.note(std::move(rule), why, false);
    r.unknown(why);
}

// Every Yes for the hypercyclic branch; FHC carries the rest by closure.
inline void all_yes(ClassificationReport& r) { r.set_all(Verdict::Yes); }

}  // namespace rules

/// Punctured plane: closed-form symbols az and a/z only.
inline ClassificationReport classify_cstar(const WeightedCompositionOp& T, const ClassifyOptions& opt = {}) {
    ClassificationReport r;
    require(T.domain().as<PuncturedPlane>() != nullptr, Reason::Precondition, "classify_cstar needs the punctured plane");
    const Symbol psi = T.symbol().normalized();

    if (psi.as<Inversion>()) {
        rules::all_no(r, "cstar.inversion", "psi(z) = a/z has a fixed point in the domain");
        apply_closure(r);
        return r;
    }
    const auto* lin = psi.as<Linear>();
    if (!lin) {
        rules::all_unknown(r, "cstar.symbol_class",
                            "symbol is not of the form az or a/z, so it is not a univalent self-map of the domain");
        apply_closure(r);
        return r;
    }
    const double abs_a = std::abs(lin->a);
    r.quantities["abs_a"] = abs_a;
    if (std::abs(abs_a - 1.0) <= opt.unit_tolerance) {
        rules::all_no(r, "cstar.unimodular", "|a| = 1: orbits of compact sets stay bounded away from 0 and infinity");
        apply_closure(r);
        return r;
    }

    const auto screen = rules::zero_screen(T.multiplier(), {0.25, 0.5, 1.0, 2.0, 4.0}, 1.0, opt.nodes);
    if (screen.zero) {
        rules::all_no(r, "necessary.zero_free", "multiplier has a zero in the domain");
        apply_closure(r);
        return r;
    }
    r.note("necessary.zero_free", "multiplier zero-free on sampled circles", screen.k.has_value());
    if (!screen.k) {
        rules::all_unknown(r, "cstar.winding", "winding number unavailable: " + screen.reason);
        apply_closure(r);
        return r;
    }
    const int k = *screen.k;
    r.quantities["k"] = k;
    const bool contracting = abs_a < 1.0 && k >= 1;
    const bool expanding = abs_a > 1.0 && k <= -1;
    if (contracting || expanding) {
        rules::all_yes(r);
        r.note(contracting ? "cstar.contracting" : "cstar.expanding",
               contracting ? "omega = z^n e^W with n = " + std::to_string(k) + " >= 1 and psi = az, 0 < |a| < 1"
                           : "omega = z^-n e^W with n = " + std::to_string(-k) + " >= 1 and psi = z/a, 0 < |a| < 1",
               true);
    } else {
        rules::all_no(r, "cstar.winding_sign",
                       "winding number k = " + std::to_string(k) + " has the wrong sign for |a| = " +
                           rules::fmt(abs_a));
    }
    apply_closure(r);
    return r;
}

/// Punctured disc r D* (puncture at 0), or a punctured grid base with a linear symbol.
inline ClassificationReport classify_dstar(const WeightedCompositionOp& T, const ClassifyOptions& opt = {}) {
    using namespace geometry;
    ClassificationReport r;
    const auto* d = T.domain().as<PuncturedSimplyConnected>();
    require(d != nullptr, Reason::Precondition, "classify_dstar needs a punctured simply connected domain");
    if (d->puncture != cplx{}) {
        rules::all_unknown(r, "dstar.puncture", "only punctures at the origin are supported; translate the domain first");
        apply_closure(r);
        return r;
    }
    const Symbol psi = T.symbol().normalized();
    const double h = cell_side(opt.resolution);

    // Radius of a disc about 0 inside the domain.
    double rho = d->radius;
    if (d->base) {
        if (!psi.as<Linear>()) {
            rules::all_unknown(r, "dstar.grid_base", "grid bases are supported for linear symbols only");
            apply_closure(r);
            return r;
        }
        rho = kInf;
        const double hb = d->base->side();
        for (const GridSet& hole : holes(*d->base))
            for (const Cell& c : hole.cells()) rho = std::min(rho, geometry::detail::square_distance(c, d->base->resolution(), 0.0));
        const BBox b = d->base->bbox();
        rho = std::min({rho, -b.x0 * hb, (b.x1 + 1) * hb, -b.y0 * hb, (b.y1 + 1) * hb});
        if (!(rho > 0.0)) {
            rules::all_unknown(r, "dstar.grid_base", "the grid base does not contain a disc about the puncture");
            apply_closure(r);
            return r;
        }
    }
    r.quantities["inner_radius"] = rho;

    // Symbol: injective self-map, not surjective, psi(0) = 0.
    bool surjective = false;
    if (const auto* l = psi.as<Linear>()) {
        const double abs_a = std::abs(l->a);
        r.quantities["abs_a"] = abs_a;
        if (std::abs(abs_a - 1.0) <= opt.unit_tolerance) {
            surjective = true;
        } else if (abs_a > 1.0) {
            rules::all_unknown(r, "dstar.self_map", "psi = az with |a| > 1 does not map the domain into itself");
            apply_closure(r);
            return r;
        } else if (d->base) {
            try {
                const GridSet K = grid_compact(T.domain(), opt.resolution);
                (void)image(psi, K, opt.resolution, 1, &T.domain());
            } catch (const Error& e) {
                rules::all_unknown(r, "dstar.self_map", std::string("a psi-image leaves the grid base: ") + e.what());
                apply_closure(r);
                return r;
            }
        }
    } else if (psi.as<Inversion>()) {
        rules::all_unknown(r, "dstar.self_map", "psi = a/z does not map the domain into itself");
        apply_closure(r);
        return r;
    } else {
        const double R = d->radius;
        const auto origin = value_at_origin(psi);
        if (!origin) {
            rules::all_unknown(r, "dstar.self_map", "psi is unbounded near the puncture");
            apply_closure(r);
            return r;
        }
        if (std::abs(*origin) > 1e-12 * std::max(1.0, R)) {
            rules::all_no(r, "dstar.limit_at_origin", "psi(z) does not tend to 0 as z tends to 0");
            apply_closure(r);
            return r;
        }
        if (const auto* m = psi.as<Moebius>(); m && m->c != cplx{} && std::abs(m->d / m->c) <= R * (1.0 + 1e-12)) {
            rules::all_unknown(r, "dstar.self_map", "Moebius symbol has a pole in the closed disc");
            apply_closure(r);
            return r;
        }
        const double ring = psi.as<SeriesSymbol>() ? std::min(R, psi.as<SeriesSymbol>()->s.r_out()) * (1.0 - 1e-9)
                                                   : R;
        double max_mod = 0.0, min_mod = kInf;
        for (std::size_t i = 0; i < 2048; ++i) {
            const cplx z = circle_node(ring, i, 2048);
            const cplx w = psi.as<SeriesSymbol>() ? psi.as<SeriesSymbol>()->s.evaluate_unchecked(z) : psi(z);
            max_mod = std::max(max_mod, std::abs(w));
            min_mod = std::min(min_mod, std::abs(w));
        }
        r.quantities["boundary_margin"] = R - max_mod;
        if (max_mod > R * (1.0 + 1e-9)) {
            rules::all_unknown(r, "dstar.self_map", "psi maps part of the domain outside it");
            apply_closure(r);
            return r;
        }
        if (psi.as<Moebius>()) {
            surjective = min_mod >= R * (1.0 - 1e-9);
        } else {
            const GridSet K = grid_compact(T.domain(), opt.resolution);
            if (is_injective_on(psi, K) == Tri::False) {
                rules::all_no(r, "necessary.injective", "symbol is not injective on the grid");
                apply_closure(r);
                return r;
            }
            if (R - max_mod <= 2.0 * h) {
                rules::all_unknown(r, "dstar.surjectivity",
                                    "symbol image reaches within 2 grid cells of the boundary; surjectivity undecided");
                apply_closure(r);
                return r;
            }
        }
    }
    if (surjective) {
        rules::all_no(r, "dstar.automorphism", "psi is a surjective self-map (a rotation up to conjugacy)");
        apply_closure(r);
        return r;
    }
    r.note("dstar.symbol", "psi injective, not surjective, psi(z) -> 0 as z -> 0", true);

    const double main = 0.5 * rho;
    const auto screen = rules::zero_screen(
        T.multiplier(), {0.125 * rho, 0.25 * rho, main, 0.75 * rho, 0.875 * rho}, main, opt.nodes);
    if (screen.zero) {
        rules::all_no(r, "necessary.zero_free", "multiplier has a zero in the domain");
        apply_closure(r);
        return r;
    }
    if (!screen.k) {
        rules::all_unknown(r, "dstar.winding", "winding number unavailable: " + screen.reason);
        apply_closure(r);
        return r;
    }
    r.note("necessary.zero_free", "multiplier zero-free on sampled circles", true);
    const int k = *screen.k;
    r.quantities["k"] = k;
    if (k >= 1) {
        rules::all_yes(r);
        r.note("dstar.positive_winding", "omega = z^n e^W with n = " + std::to_string(k) + " >= 1", true);
        apply_closure(r);
        return r;
    }
    for (Property p : kProperties) r.status[p] = Verdict::No;
    r.note("dstar.positive_winding", "winding number k = " + std::to_string(k) + " is not positive", false);
    bool principal = true;
    try {
        principal = rules::has_principal_part(T.multiplier(), main, opt.nodes);
    } catch (const Error& e) {
        r.unknown(std::string("principal part undecided: ") + e.what());
    }
    if (principal) {
        r.status[Property::Supercyclic] = Verdict::Unknown;
        r.note("dstar.open_case", "omega = z^k e^{F(1/z)}-type with k <= 0: supercyclicity is an open question", true);
        r.unknown("supercyclicity with a principal part and k <= 0 is unresolved");
    } else {
        r.note("dstar.monomial_class", "omega conjugate to c z^k with k <= 0, which is not supercyclic", true);
    }
    apply_closure(r);
    return r;
}

/// Infinitely connected domains: geometric battery on grid compacts.
inline ClassificationReport classify_infinite(const WeightedCompositionOp& T, const ClassifyOptions& opt = {}) {
    using namespace geometry;
    ClassificationReport r;
    const auto* inf = T.domain().as<InfinitelyConnected>();
    require(inf != nullptr, Reason::Precondition, "classify_infinite needs an infinitely connected domain");
    const DomainSpec& D = T.domain();
    const Symbol psi = T.symbol().normalized();
    const int k = opt.resolution;

    // Battery of clip windows around one, two and four holes.
    std::vector<Rect> windows;
    if (inf->lattice) {
        const double s = inf->lattice->spacing;
        windows = {Rect{-0.5 * s, -0.5 * s, 0.5 * s, 0.5 * s}, Rect{-0.5 * s, -0.5 * s, 1.5 * s, 0.5 * s},
                   Rect{-0.5 * s, -0.5 * s, 1.5 * s, 1.5 * s}};
    } else {
        const BBox b = inf->grid->bbox();
        const double hb = inf->grid->side();
        const double cx = 0.5 * (b.x0 + b.x1 + 1) * hb, cy = 0.5 * (b.y0 + b.y1 + 1) * hb;
        const double wx = 0.5 * (b.x1 + 1 - b.x0) * hb, wy = 0.5 * (b.y1 + 1 - b.y0) * hb;
        windows = {Rect{cx - 0.5 * wx, cy - 0.5 * wy, cx + 0.5 * wx, cy + 0.5 * wy},
                   Rect{cx - wx, cy - wy, cx + wx, cy + wy}};
    }
    std::vector<GridSet> battery;
    for (const Rect& w : windows) {
        try {
            GridSet K = grid_compact(D, k, w);
            for (GridSet& part : components(K))
                if (is_omega_convex(part, D) == Tri::True && hole_count(part) >= 1) battery.push_back(std::move(part));
        } catch (const Error&) {
        }
    }
    if (battery.empty()) {
        rules::all_unknown(r, "infinite.battery", "no Omega-convex grid compact at this resolution");
        apply_closure(r);
        return r;
    }
    r.quantities["battery_size"] = static_cast<double>(battery.size());

    // Zero-free multiplier on the battery.
    double max_mod = 0.0, min_mod = kInf;
    try {
        for (const GridSet& K : battery)
            for (const Cell& c : K.cells()) {
                const double m = std::abs(evaluate(T.multiplier(), cell_center(c, k)));
                max_mod = std::max(max_mod, m);
                min_mod = std::min(min_mod, m);
            }
    } catch (const Error& e) {
        rules::all_unknown(r, "necessary.zero_free", std::string("multiplier not evaluable on the grid: ") + e.what());
        apply_closure(r);
        return r;
    }
    if (!(min_mod > 1e-12 * std::max(1.0, max_mod))) {
        rules::all_no(r, "necessary.zero_free", "multiplier has a sampled zero in the domain");
        apply_closure(r);
        return r;
    }
    r.note("necessary.zero_free", "multiplier zero-free on the grid battery", true);

    // Fixed points and injectivity.
    for (const GridSet& K : battery) {
        if (const auto z = fixed_point_near(psi, K, D)) {
            rules::all_no(r, "necessary.fixed_point", "psi has a fixed point in the domain at " + rules::fmt(z->real()) +
                                                           (z->imag() < 0 ? "" : "+") + rules::fmt(z->imag()) + "i");
            apply_closure(r);
            return r;
        }
        if (is_injective_on(psi, K) == Tri::False) {
            rules::all_no(r, "necessary.injective", "symbol is not injective on the grid");
            apply_closure(r);
            return r;
        }
    }
    r.note("necessary.fixed_point", "no fixed point of psi found in the domain", true);

    bool inconclusive = false;
    // Omega-convexity of images.
    for (const GridSet& K : battery) {
        Tri t = Tri::Indeterminate;
        try {
            t = is_omega_convex(image(psi, K, k, 1, &D, 64, false), D);
        } catch (const Error& e) {
            if (e.reason() == Reason::Domain && inf->lattice) {
                rules::all_unknown(r, "infinite.self_map", std::string("psi-image leaves the domain: ") + e.what());
                apply_closure(r);
                return r;
            }
            inconclusive = true;
            r.unknown(std::string("image check failed: ") + e.what());
            continue;
        }
        if (t == Tri::False) {
            rules::all_no(r, "necessary.omega_convex", "psi maps an Omega-convex compact to a non-Omega-convex set");
            apply_closure(r);
            return r;
        }
        if (t == Tri::Indeterminate) {
            inconclusive = true;
            r.unknown("Omega-convexity of an image is indeterminate at this resolution");
        }
    }
    // Strong run-away.
    int worst_first = 0;
    for (const GridSet& K : battery) {
        const RunAwayResult ra = run_away_index(psi, K, opt.horizon);
        if (ra.status == RunAwayStatus::Bounded) {
            rules::all_no(r, "necessary.run_away", "psi-orbit of a compact set does not leave it");
            apply_closure(r);
            return r;
        }
        if (ra.status == RunAwayStatus::Indeterminate || !ra.strong) {
            inconclusive = true;
            r.unknown("strong run-away not established within the horizon");
            continue;
        }
        worst_first = std::max(worst_first, *ra.first);
    }
    if (inconclusive) {
        r.note("infinite.battery", "geometric checks inconclusive", false);
        apply_closure(r);
        return r;
    }
    r.quantities["separation_index"] = worst_first;
    r.note("infinite.battery",
           "omega zero-free; psi univalent, Omega-convex and strongly run-away on the grid battery", true);
    r.status[Property::Supercyclic] = Verdict::Yes;
    r.status[Property::Mixing] = Verdict::Yes;
    apply_closure(r);
    return r;
}

/// Dispatches on the domain class, then applies the closure rules.
inline ClassificationReport classify(const WeightedCompositionOp& T, const ClassifyOptions& opt = {}) {
    ClassificationReport r;
    const DomainSpec& D = T.domain();
    try {
        if (D.as<PuncturedPlane>()) return classify_cstar(T, opt);
        if (D.as<PuncturedSimplyConnected>()) return classify_dstar(T, opt);
        if (D.as<InfinitelyConnected>()) return classify_infinite(T, opt);
        if (const auto* a = D.as<AnnulusDomain>()) {
            rules::all_no(r, "annulus.no_supercyclic", "domain is the annulus 1 < |z| < " + rules::fmt(a->r));
        } else if (const auto* f = D.as<FinitelyConnected>()) {
            rules::all_no(r, "finite.no_supercyclic", "domain has " + std::to_string(f->holes) + " >= 2 holes");
        }
    } catch (const Error& e) {
        r = ClassificationReport{};
        rules::all_unknown(r, "classify.error", std::string(to_string(e.reason())) + ": " + e.what());
    }
    apply_closure(r);
    return r;
}

}  // namespace holodyn
