#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "holodyn/core/complex.hpp"
#include "holodyn/core/error.hpp"
#include "holodyn/laurent/series.hpp"

namespace holodyn {

/// psi(z) = a z.
struct Linear {
    cplx a{1.0};
};

/// psi(z) = a / z.
struct Inversion {
    cplx a{1.0};
};

/// psi(z) = (a z + b) / (c z + d), ad - bc != 0.
struct Moebius {
    cplx a{1.0}, b{}, c{}, d{1.0};

    cplx det() const { return a * d - b * c; }
};

/// psi given by a Laurent series on its annulus.
struct SeriesSymbol {
    LaurentSeries s;
};

/// Symbol of a weighted composition operator, restricted to the implemented classes.
class Symbol {
public:
    using Variant = std::variant<Linear, Inversion, Moebius, SeriesSymbol>;

    Symbol() : v_(Linear{}) {}
    Symbol(Variant v) : v_(std::move(v)) { validate(); }

    static Symbol linear(cplx a) { return Symbol(Linear{a}); }
    static Symbol inversion(cplx a) { return Symbol(Inversion{a}); }
    static Symbol moebius(cplx a, cplx b, cplx c, cplx d) { return Symbol(Moebius{a, b, c, d}); }
    static Symbol series(LaurentSeries s) { return Symbol(SeriesSymbol{std::move(s)}); }

    const Variant& variant() const { return v_; }

    template <typename T>
    const T* as() const {
        return std::get_if<T>(&v_);
    }

    std::string kind() const {
        switch (v_.index()) {
            case 0: return "linear";
            case 1: return "inversion";
            case 2: return "moebius";
            default: return "series";
        }
    }

    /// Whether psi is defined (finite, inside its series annulus) at z.
    bool defined_at(cplx z) const {
        if (as<Linear>()) return true;
        if (as<Inversion>()) return z != cplx{};
        if (const auto* m = as<Moebius>()) return m->c * z + m->d != cplx{};
        return as<SeriesSymbol>()->s.in_annulus(z);
    }

    cplx operator()(cplx z) const {
        struct V {
            cplx z;
            cplx operator()(const Linear& l) const { return l.a * z; }
            cplx operator()(const Inversion& i) const {
                require(z != cplx{}, Reason::Domain, "inversion symbol evaluated at 0");
                return i.a / z;
            }
            cplx operator()(const Moebius& m) const {
                const cplx den = m.c * z + m.d;
                require(den != cplx{}, Reason::Domain, "Moebius symbol evaluated at its pole");
                return (m.a * z + m.b) / den;
            }
            cplx operator()(const SeriesSymbol& s) const { return s.s.evaluate(z); }
        };
        return std::visit(V{z}, v_);
    }

    /// n-fold iterate at a point.
    cplx iterate(cplx z, int n) const {
        for (int i = 0; i < n; ++i) z = (*this)(z);
        return z;
    }

    /// Rewrites Moebius maps that fix {0, inf} into the Linear / Inversion classes and
    /// one-term series into the matching closed forms.
    Symbol normalized() const {
        if (const auto* m = as<Moebius>()) {
            if (m->b == cplx{} && m->c == cplx{}) return linear(m->a / m->d);
            if (m->a == cplx{} && m->d == cplx{}) return inversion(m->b / m->c);
            return *this;
        }
        if (const auto* s = as<SeriesSymbol>()) {
            const LaurentSeries t = s->s.trimmed();
            if (t.coeffs().size() == 1 && t.n_min() == 1) return linear(t.coeff(1));
            if (t.coeffs().size() == 1 && t.n_min() == -1) return inversion(t.coeff(-1));
        }
        return *this;
    }

    /// Moebius matrix for the closed-form classes.
    std::optional<Moebius> as_moebius() const {
        if (const auto* l = as<Linear>()) return Moebius{l->a, {}, {}, cplx{1.0}};
        if (const auto* i = as<Inversion>()) return Moebius{{}, i->a, cplx{1.0}, {}};
        if (const auto* m = as<Moebius>()) return *m;
        return std::nullopt;
    }

private:
    void validate() const {
        if (const auto* l = as<Linear>()) require(l->a != cplx{}, Reason::Validation, "linear symbol needs a != 0");
        if (const auto* i = as<Inversion>())
            require(i->a != cplx{}, Reason::Validation, "inversion symbol needs a != 0");
        if (const auto* m = as<Moebius>())
            require(std::abs(m->det()) > 0.0, Reason::Validation, "Moebius symbol needs ad - bc != 0");
    }

    Variant v_;
};

/// Symbol from a Moebius matrix, normalized into the simplest class.
inline Symbol from_moebius(const Moebius& m) { return Symbol(m).normalized(); }

/// outer o inner for the closed-form classes; series symbols are not composed formally.
inline Symbol compose(const Symbol& outer, const Symbol& inner) {
    const auto p = outer.as_moebius();
    const auto q = inner.as_moebius();
    require(p.has_value() && q.has_value(), Reason::Precondition,
            "formal composition is only available for linear, inversion and Moebius symbols");
    return from_moebius(Moebius{p->a * q->a + p->b * q->c, p->a * q->b + p->b * q->d, p->c * q->a + p->d * q->c,
                                p->c * q->b + p->d * q->d});
}

/// psi^{-1} for the invertible closed-form classes.
inline Symbol inverse_symbol(const Symbol& psi) {
    const auto m = psi.as_moebius();
    require(m.has_value(), Reason::Precondition, "series symbols are not invertible in closed form");
    return from_moebius(Moebius{m->d, -m->b, -m->c, m->a});
}

/// psi(0) when psi extends holomorphically to the origin.
inline std::optional<cplx> value_at_origin(const Symbol& psi) {
    if (psi.as<Linear>()) return cplx{};
    if (psi.as<Inversion>()) return std::nullopt;
    if (const auto* m = psi.as<Moebius>()) {
        if (m->d == cplx{}) return std::nullopt;
        return m->b / m->d;
    }
    const LaurentSeries t = psi.as<SeriesSymbol>()->s.trimmed();
    if (t.n_min() < 0) return std::nullopt;
    return t.coeff(0);
}

/// psi'(0) by the fourth-order central stencil with step h.
inline cplx derivative_at_origin(const Symbol& psi, double h = 1e-3) {
    auto at = [&](double x) {
        const cplx z{x, 0.0};
        if (const auto* s = psi.as<SeriesSymbol>()) return s->s.evaluate_unchecked(z);
        return psi(z);
    };
    return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
}

}  // namespace holodyn
