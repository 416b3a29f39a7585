#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "holodyn/core/complex.hpp"
#include "holodyn/core/error.hpp"
#include "holodyn/core/fft.hpp"

namespace holodyn {

/// Inclusive exponent range that products and operator applications truncate back to.
struct Window {
    int lo = -64;
    int hi = 64;

    int width() const { return hi - lo + 1; }
    bool contains(int j) const { return lo <= j && j <= hi; }
};

/// Numeric knobs shared by the series engine.
struct SeriesConfig {
    Window window{};
    std::size_t nodes = 4096;  // boundary samples per circle
};

/// Closed annulus {inner <= |z| <= outer}, 0 < inner <= outer.
struct CompactAnnulus {
    double inner = 1.0;
    double outer = 1.0;

    CompactAnnulus() = default;
    CompactAnnulus(double in, double out) : inner(in), outer(out) {
        require(inner > 0.0 && inner <= outer && std::isfinite(outer), Reason::Validation,
                "compact annulus needs 0 < inner <= outer < inf");
    }
};

/// Truncated bilateral power series sum_{j=n_min}^{n_max} c_j z^j, valid on the open
/// annulus r_in < |z| < r_out.
class LaurentSeries {
public:
    LaurentSeries() : LaurentSeries(0, {cplx{}}) {}

    LaurentSeries(int n_min, std::vector<cplx> coeffs, double r_in = 0.0, double r_out = kInf)
        : n_min_(n_min), coeffs_(std::move(coeffs)), r_in_(r_in), r_out_(r_out) {
        require(!coeffs_.empty(), Reason::Validation, "Laurent series needs at least one coefficient");
        require(r_in_ >= 0.0 && r_in_ < r_out_, Reason::Validation,
                "Laurent series annulus needs 0 <= r_in < r_out");
    }

    static LaurentSeries constant(cplx c, double r_in = 0.0, double r_out = kInf) {
        return LaurentSeries(0, {c}, r_in, r_out);
    }

    static LaurentSeries monomial(cplx c, int k, double r_in = 0.0, double r_out = kInf) {
        return LaurentSeries(k, {c}, r_in, r_out);
    }

    static LaurentSeries zero(double r_in = 0.0, double r_out = kInf) {
        return constant(cplx{}, r_in, r_out);
    }

    int n_min() const { return n_min_; }
    int n_max() const { return n_min_ + static_cast<int>(coeffs_.size()) - 1; }
    std::span<const cplx> coeffs() const { return coeffs_; }
    double r_in() const { return r_in_; }
    double r_out() const { return r_out_; }

    cplx coeff(int j) const {
        if (j < n_min() || j > n_max()) return {};
        return coeffs_[static_cast<std::size_t>(j - n_min_)];
    }

    bool in_annulus(cplx z) const {
        const double r = std::abs(z);
        return r_in_ < r && r < r_out_;
    }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{}; });
    }

    /// Same function with exact-zero end coefficients dropped.
    LaurentSeries trimmed() const {
        auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c != cplx{}; });
        if (first == coeffs_.end()) return zero(r_in_, r_out_);
        auto last = std::find_if(coeffs_.rbegin(), coeffs_.rend(), [](cplx c) { return c != cplx{}; });
        const int lo = n_min_ + static_cast<int>(first - coeffs_.begin());
        return LaurentSeries(lo, std::vector<cplx>(first, last.base()), r_in_, r_out_);
    }

    /// Exponents outside `w` dropped.
    LaurentSeries truncated(Window w) const {
        const int lo = std::max(n_min(), w.lo);
        const int hi = std::min(n_max(), w.hi);
        if (lo > hi) return zero(r_in_, r_out_);
        std::vector<cplx> c(coeffs_.begin() + (lo - n_min_), coeffs_.begin() + (hi - n_min_ + 1));
        return LaurentSeries(lo, std::move(c), r_in_, r_out_);
    }

    LaurentSeries with_annulus(double r_in, double r_out) const {
        return LaurentSeries(n_min_, coeffs_, r_in, r_out);
    }

    /// Index shift: z^s * f.
    LaurentSeries shifted(int s) const { return LaurentSeries(n_min_ + s, coeffs_, r_in_, r_out_); }

    /// Two-sided Horner without the annulus check.
    cplx evaluate_unchecked(cplx z) const {
        cplx total{};
        const int hi = n_max();
        if (hi >= 0) {
            const int start = std::max(n_min_, 0);
            cplx acc{};
            for (int j = hi; j >= start; --j) acc = acc * z + coeff(j);
            total += start == 0 ? acc : acc * ipow(z, start);
        }
        if (n_min_ < 0) {
            const int top = std::min(hi, -1);
            const cplx w = 1.0 / z;
            cplx acc{};
            for (int j = n_min_; j <= top; ++j) acc = acc * w + coeff(j);
            total += acc * ipow(w, -top);
        }
        return total;
    }

    cplx evaluate(cplx z) const {
        if (!in_annulus(z)) {
            std::ostringstream msg;
            msg << "evaluation at |z| = " << std::abs(z) << " outside annulus (" << r_in_ << ", "
                << r_out_ << ")";
            fail(Reason::Domain, msg.str());
        }
        return evaluate_unchecked(z);
    }

    cplx operator()(cplx z) const { return evaluate(z); }

    /// Value at 0 for series with no negative exponents.
    cplx value_at_origin() const {
        require(n_min_ >= 0 || trimmed().n_min() >= 0, Reason::Domain,
                "series has a principal part and no value at the origin");
        return coeff(0);
    }

    /// Values at `nodes` equally spaced points of |z| = radius (no annulus check).
    std::vector<cplx> sample_circle(double radius, std::size_t nodes) const {
        return fft::sample_circle(n_min_, coeffs_, radius, nodes);
    }

    friend LaurentSeries operator+(const LaurentSeries& f, const LaurentSeries& g) {
        return combine(f, g, cplx{1.0}, cplx{1.0});
    }
    friend LaurentSeries operator-(const LaurentSeries& f, const LaurentSeries& g) {
        return combine(f, g, cplx{1.0}, cplx{-1.0});
    }
    friend LaurentSeries operator*(cplx s, const LaurentSeries& f) {
        std::vector<cplx> c(f.coeffs_);
        for (auto& v : c) v *= s;
        return LaurentSeries(f.n_min_, std::move(c), f.r_in_, f.r_out_);
    }

    /// alpha*f + beta*g on the intersected annulus.
    static LaurentSeries combine(const LaurentSeries& f, const LaurentSeries& g, cplx alpha, cplx beta) {
        const double r_in = std::max(f.r_in_, g.r_in_);
        const double r_out = std::min(f.r_out_, g.r_out_);
        require(r_in < r_out, Reason::Domain, "series annuli do not overlap");
        const int lo = std::min(f.n_min(), g.n_min());
        const int hi = std::max(f.n_max(), g.n_max());
        std::vector<cplx> c(static_cast<std::size_t>(hi - lo + 1));
        for (int j = lo; j <= hi; ++j) c[static_cast<std::size_t>(j - lo)] = alpha * f.coeff(j) + beta * g.coeff(j);
        return LaurentSeries(lo, std::move(c), r_in, r_out);
    }

private:
    int n_min_;
    std::vector<cplx> coeffs_;
    double r_in_;
    double r_out_;
};

inline cplx evaluate(const LaurentSeries& f, cplx z) { return f.evaluate(z); }

/// Cauchy product truncated back to `window`; annulus is the intersection.
inline LaurentSeries multiply(const LaurentSeries& f, const LaurentSeries& g, Window window = {}) {
    const double r_in = std::max(f.r_in(), g.r_in());
    const double r_out = std::min(f.r_out(), g.r_out());
    require(r_in < r_out, Reason::Domain, "cannot multiply series with disjoint annuli");
    const LaurentSeries a = f.trimmed();
    const LaurentSeries b = g.trimmed();
    const int lo = std::max(a.n_min() + b.n_min(), window.lo);
    const int hi = std::min(a.n_max() + b.n_max(), window.hi);
    if (lo > hi) return LaurentSeries::zero(r_in, r_out);
    std::vector<cplx> c(static_cast<std::size_t>(hi - lo + 1));
    const auto ac = a.coeffs();
    const auto bc = b.coeffs();
    for (std::size_t i = 0; i < ac.size(); ++i) {
        if (ac[i] == cplx{}) continue;
        const int ei = a.n_min() + static_cast<int>(i);
        for (std::size_t k = 0; k < bc.size(); ++k) {
            const int e = ei + b.n_min() + static_cast<int>(k);
            if (e < lo || e > hi) continue;
            c[static_cast<std::size_t>(e - lo)] += ac[i] * bc[k];
        }
    }
    return LaurentSeries(lo, std::move(c), r_in, r_out);
}

/// Anything that can be sampled pointwise as a holomorphic function.
template <typename F>
concept PointFunction = requires(const F& f, cplx z) {
    { f(z) } -> std::convertible_to<cplx>;
};

/// Laurent coefficients of `g` in `window` from its samples on |z| = radius.
template <PointFunction F>
LaurentSeries expand_on_circle(const F& g, double radius, Window window, std::size_t nodes,
                               double r_in, double r_out) {
    require(static_cast<std::size_t>(window.width()) <= nodes, Reason::Precondition,
            "re-expansion needs at least as many nodes as exponents");
    std::vector<cplx> samples(nodes);
    for (std::size_t k = 0; k < nodes; ++k) samples[k] = g(circle_node(radius, k, nodes));
    return LaurentSeries(window.lo, fft::circle_coefficients(std::move(samples), radius, window.lo, window.hi),
                         r_in, r_out);
}

/// max |f| over the two boundary circles of K (maximum principle).
inline double sup_norm(const LaurentSeries& f, const CompactAnnulus& K, std::size_t nodes = 4096) {
    require(f.r_in() < K.inner && K.outer < f.r_out(), Reason::Domain,
            "compact annulus is not inside the series annulus");
    const LaurentSeries t = f.trimmed();
    if (t.is_zero()) return 0.0;
    // A monomial has constant modulus on each circle.
    const std::size_t n = t.coeffs().size() == 1 ? 1 : std::max(nodes, t.coeffs().size());
    double best = 0.0;
    for (double radius : {K.inner, K.outer}) {
        for (const cplx& v : t.sample_circle(radius, n)) best = std::max(best, std::abs(v));
        if (K.inner == K.outer) break;
    }
    return best;
}

/// Compact exhaustion indexed m = 1..M_max; degenerate members are kept as empty slots.
struct Exhaustion {
    std::vector<std::optional<CompactAnnulus>> members;
    std::string tag;

    int max_index() const { return static_cast<int>(members.size()); }

    const std::optional<CompactAnnulus>& member(int m) const {
        return members.at(static_cast<std::size_t>(m - 1));
    }

    /// K_m = {r/m <= |z| <= r(1 - 1/m)} on r D*.
    static Exhaustion punctured_disc(double r, int m_max = 30) {
        require(r > 0.0 && std::isfinite(r), Reason::Validation, "punctured disc radius must be positive");
        Exhaustion e{{}, "punctured_disc"};
        for (int m = 1; m <= m_max; ++m) {
            const double in = r / m;
            const double out = r * (1.0 - 1.0 / m);
            if (in > out)
                e.members.emplace_back(std::nullopt);
            else
                e.members.emplace_back(CompactAnnulus(in, out));
        }
        return e;
    }

    /// K_m = {1/m <= |z| <= m} on C*.
    static Exhaustion punctured_plane(int m_max = 30) {
        Exhaustion e{{}, "punctured_plane"};
        for (int m = 1; m <= m_max; ++m) e.members.emplace_back(CompactAnnulus(1.0 / m, static_cast<double>(m)));
        return e;
    }
};

/// sum_{m<=M} 2^-m min{1, exp(log_scale) * rho_m(f)}. The scale is carried as a logarithm
/// so weights like products of sixty powers of 1/2 stay representable.
inline double scaled_f_norm(const LaurentSeries& f, double log_scale, const Exhaustion& E, int M,
                            std::size_t nodes = 4096) {
    require(M >= 1 && M <= E.max_index(), Reason::Precondition, "F-norm truncation outside exhaustion");
    double total = 0.0;
    double weight = 1.0;
    for (int m = 1; m <= M; ++m) {
        weight *= 0.5;
        const auto& K = E.member(m);
        if (!K) continue;
        const double rho = sup_norm(f, *K, nodes);
        if (rho == 0.0) continue;
        const double log_term = log_scale + std::log(rho);
        total += weight * (log_term >= 0.0 ? 1.0 : std::exp(log_term));
    }
    return total;
}

/// sum_{m<=M} 2^-m min{1, rho_m(f)}.
inline double f_norm(const LaurentSeries& f, const Exhaustion& E, int M = 30, std::size_t nodes = 4096) {
    return scaled_f_norm(f, 0.0, E, M, nodes);
}

}  // namespace holodyn
