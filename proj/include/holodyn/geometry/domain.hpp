#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "holodyn/core/complex.hpp"
#include "holodyn/core/error.hpp"
#include "holodyn/geometry/grid.hpp"

namespace holodyn {

/// C \ {0}.
struct PuncturedPlane {};

/// A simply connected base minus one point: a disc of `radius` about the puncture, or a
/// grid-approximated base.
struct PuncturedSimplyConnected {
    double radius = 1.0;
    cplx puncture{};
    std::optional<geometry::GridSet> base;
};

/// A(r) = {1 < |z| < r}.
struct AnnulusDomain {
    double r = 2.0;
};

/// Domain with finitely many (>= 2) holes, given as a grid of its cells.
struct FinitelyConnected {
    int holes = 2;
    geometry::GridSet grid;
};

/// C minus closed discs of `radius` centred on the lattice spacing * (Z + iZ).
struct LatticeOfDiscs {
    double spacing = 1.0;
    double radius = 0.25;
};

/// Domain with infinitely many holes: a closed-form lattice preset or a grid window of one.
struct InfinitelyConnected {
    std::optional<LatticeOfDiscs> lattice;
    std::optional<geometry::GridSet> grid;
    bool declared = true;
};

class DomainSpec {
public:
    using Variant = std::variant<PuncturedPlane, PuncturedSimplyConnected, AnnulusDomain, FinitelyConnected,
                                 InfinitelyConnected>;

    DomainSpec() : v_(PuncturedPlane{}) {}
    DomainSpec(Variant v) : v_(std::move(v)) { validate(); }

    static DomainSpec punctured_plane() { return DomainSpec(PuncturedPlane{}); }
    static DomainSpec punctured_disc(double radius = 1.0) {
        return DomainSpec(PuncturedSimplyConnected{radius, cplx{}, std::nullopt});
    }
    static DomainSpec annulus(double r) { return DomainSpec(AnnulusDomain{r}); }

    const Variant& variant() const { return v_; }

    template <typename T>
    const T* as() const {
        return std::get_if<T>(&v_);
    }

    std::string name() const {
        struct V {
            std::string operator()(const PuncturedPlane&) const { return "punctured_plane"; }
            std::string operator()(const PuncturedSimplyConnected&) const { return "punctured_simply_connected"; }
            std::string operator()(const AnnulusDomain&) const { return "annulus"; }
            std::string operator()(const FinitelyConnected&) const { return "finitely_connected"; }
            std::string operator()(const InfinitelyConnected&) const { return "infinitely_connected"; }
        };
        return std::visit(V{}, v_);
    }

    /// Membership predicate for z in the domain.
    bool contains(cplx z) const {
        struct V {
            cplx z;
            bool operator()(const PuncturedPlane&) const { return z != cplx{}; }
            bool operator()(const PuncturedSimplyConnected& d) const {
                if (z == d.puncture) return false;
                if (d.base) return d.base->covers_closed(z);
                return std::abs(z - d.puncture) < d.radius;
            }
            bool operator()(const AnnulusDomain& d) const {
                const double r = std::abs(z);
                return 1.0 < r && r < d.r;
            }
            bool operator()(const FinitelyConnected& d) const { return d.grid.covers_closed(z); }
            bool operator()(const InfinitelyConnected& d) const {
                if (d.lattice) {
                    const double s = d.lattice->spacing;
                    const cplx nearest{std::round(z.real() / s) * s, std::round(z.imag() / s) * s};
                    if (std::abs(z - nearest) <= d.lattice->radius) return false;
                    return !d.grid || d.grid->covers_closed(z);
                }
                return d.grid->covers_closed(z);
            }
        };
        return std::visit(V{z}, v_);
    }

    /// Isolated complement points that sampling would never hit.
    std::vector<cplx> punctures() const {
        if (as<PuncturedPlane>()) return {cplx{}};
        if (const auto* d = as<PuncturedSimplyConnected>()) return {d->puncture};
        return {};
    }

private:
    void validate() const {
        if (const auto* a = as<AnnulusDomain>())
            require(a->r > 1.0, Reason::Validation, "annulus domain needs r > 1");
        if (const auto* f = as<FinitelyConnected>()) {
            require(f->holes >= 2, Reason::Validation, "finitely connected domain needs at least 2 holes");
            require(!f->grid.empty(), Reason::Validation, "finitely connected domain needs a grid");
            require(geometry::hole_count(f->grid) == static_cast<std::size_t>(f->holes), Reason::Validation,
                    "grid hole count does not match the declared number of holes");
        }
        if (const auto* p = as<PuncturedSimplyConnected>())
            require(p->base.has_value() || p->radius > 0.0, Reason::Validation, "punctured base needs a radius or grid");
        if (const auto* i = as<InfinitelyConnected>()) {
            require(i->lattice.has_value() || i->grid.has_value(), Reason::Validation,
                    "infinitely connected domain needs a lattice preset or a grid");
            if (i->lattice)
                require(i->lattice->spacing > 0.0 && i->lattice->radius > 0.0 &&
                            2.0 * i->lattice->radius < i->lattice->spacing,
                        Reason::Validation, "lattice discs must be disjoint");
        }
    }

    Variant v_;
};

}  // namespace holodyn
