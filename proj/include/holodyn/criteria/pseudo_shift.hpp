#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "holodyn/core/complex.hpp"
#include "holodyn/core/error.hpp"
#include "holodyn/laurent/series.hpp"
#include "holodyn/operators/operator.hpp"

namespace holodyn {

/// Weighted pseudo-shift (T x)_j = b_j x_{phi(j)} with phi(j) = j + p on a finite index
/// window. The index inverse psi(i) = i - p exists on phi(window); outside it the weight and
/// the unit vector are taken as zero.
struct PseudoShift {
    Window window{};
    std::vector<cplx> b;  // b_j for j in window
    int p = 0;

    PseudoShift() = default;
    PseudoShift(Window w, std::vector<cplx> weights, int shift) : window(w), b(std::move(weights)), p(shift) {
        require(window.lo <= window.hi, Reason::Validation, "pseudo-shift window is empty");
        require(b.size() == static_cast<std::size_t>(window.width()), Reason::Validation,
                "pseudo-shift needs one weight per index");
        for (const cplx& v : b) require(v != cplx{}, Reason::Validation, "pseudo-shift weights must be nonzero");
    }

    int phi(int j) const { return j + p; }
    int psi(int i) const { return i - p; }
    bool in_window(int j) const { return window.contains(j); }
    /// psi(i) is defined iff i lies in phi(window).
    bool in_image(int i) const { return in_window(psi(i)); }

    cplx weight(int j) const { return in_window(j) ? b[static_cast<std::size_t>(j - window.lo)] : cplx{}; }
};

/// C_{c z^k, a z} as the pseudo-shift b_j = c a^{j-k}, phi(j) = j - k.
inline PseudoShift to_pseudo_shift(const WeightedCompositionOp& T, Window window) {
    const Symbol psi = T.symbol().normalized();
    const auto* l = psi.as<Linear>();
    require(l != nullptr, Reason::Precondition, "pseudo-shift form needs a linear symbol");
    const auto mono = as_monomial(T.multiplier());
    require(mono.has_value(), Reason::Precondition, "pseudo-shift form needs a monomial multiplier");
    const auto [c, k] = *mono;
    std::vector<cplx> b(static_cast<std::size_t>(window.width()));
    for (int j = window.lo; j <= window.hi; ++j) b[static_cast<std::size_t>(j - window.lo)] = c * ipow(l->a, j - k);
    return PseudoShift(window, std::move(b), -k);
}

/// Coefficientwise application; the result lives on the shift's window.
inline LaurentSeries apply(const PseudoShift& S, const LaurentSeries& f) {
    std::vector<cplx> y(static_cast<std::size_t>(S.window.width()));
    for (int j = S.window.lo; j <= S.window.hi; ++j)
        y[static_cast<std::size_t>(j - S.window.lo)] = S.weight(j) * f.coeff(S.phi(j));
    return LaurentSeries(S.window.lo, std::move(y), f.r_in(), f.r_out()).trimmed();
}

inline LaurentSeries iterate(const PseudoShift& S, const LaurentSeries& f, int n) {
    require(n >= 0, Reason::Precondition, "iterate needs n >= 0");
    LaurentSeries g = f;
    for (int i = 0; i < n; ++i) g = apply(S, g);
    return g;
}

/// Factors of the supercyclicity quantity, kept in log-magnitude form.
struct LiangZhouTerms {
    bool defined = false;  // false when any index leaves the window
    double log_p = 0.0;    // log |prod_{v<n} b_{phi^v(j)}|
    double log_q = 0.0;    // log |prod_{v=1..n} b_{psi^v(i)}|
    int phi_n_j = 0;
    int psi_n_i = 0;
};

inline LiangZhouTerms liang_zhou_terms(const PseudoShift& S, int i, int j, int n) {
    require(n >= 1, Reason::Precondition, "quantity needs n >= 1");
    LiangZhouTerms t;
    int idx = j;
    for (int v = 0; v < n; ++v) {
        if (!S.in_window(idx)) return t;
        t.log_p += std::log(std::abs(S.weight(idx)));
        idx = S.phi(idx);
    }
    if (!S.in_window(idx)) return t;
    t.phi_n_j = idx;
    idx = i;
    for (int v = 1; v <= n; ++v) {
        if (!S.in_image(idx)) return t;
        idx = S.psi(idx);
        t.log_q += std::log(std::abs(S.weight(idx)));
    }
    t.psi_n_i = idx;
    t.defined = true;
    return t;
}

/// ||p_n^{-1} e_{phi^n(j)}|| * ||q_n e_{psi^n(i)}|| in the F-norm of E; exactly 0 when an
/// index leaves the window.
inline double liang_zhou_quantity(const PseudoShift& S, int i, int j, int n, const Exhaustion& E, int M,
                                  std::size_t nodes = 4096) {
    const LiangZhouTerms t = liang_zhou_terms(S, i, j, n);
    if (!t.defined) return 0.0;
    const double first = scaled_f_norm(LaurentSeries::monomial(1.0, t.phi_n_j), -t.log_p, E, M, nodes);
    const double second = scaled_f_norm(LaurentSeries::monomial(1.0, t.psi_n_i), t.log_q, E, M, nodes);
    return first * second;
}

/// Strictly increasing positive integers n_1 < n_2 < ...
class Schedule {
public:
    Schedule() = default;
    explicit Schedule(std::vector<int> n) : n_(std::move(n)) {
        for (std::size_t k = 0; k < n_.size(); ++k) {
            require(n_[k] >= 1, Reason::Validation, "schedule entries must be positive");
            require(k == 0 || n_[k] > n_[k - 1], Reason::Validation, "schedule must be strictly increasing");
        }
    }

    /// n_k = k for k = first..last.
    static Schedule range(int first, int last) {
        std::vector<int> n;
        for (int k = first; k <= last; ++k) n.push_back(k);
        return Schedule(std::move(n));
    }

    const std::vector<int>& values() const { return n_; }
    std::size_t size() const { return n_.size(); }

private:
    std::vector<int> n_;
};

enum class LiangZhouKind { DecaysToZero, BoundedBelow, Inconclusive };

inline std::string to_string(LiangZhouKind k) {
    switch (k) {
        case LiangZhouKind::DecaysToZero: return "DecaysToZero";
        case LiangZhouKind::BoundedBelow: return "BoundedBelow";
        default: return "Inconclusive";
    }
}

struct LiangZhouThresholds {
    double decay = 1e-5;
    double lower = 1e-3;
    std::size_t tail = 5;
};

struct LiangZhouVerdict {
    LiangZhouKind kind = LiangZhouKind::Inconclusive;
    double bound = 0.0;            // c for BoundedBelow
    std::vector<int> n;            // schedule
    std::vector<double> max_value; // max over (i, j) at each n
    std::vector<double> min_value; // min over (i, j) at each n
};

inline LiangZhouVerdict liang_zhou_verdict(const PseudoShift& S, const std::vector<int>& i_set,
                                           const std::vector<int>& j_set, const Schedule& schedule,
                                           const Exhaustion& E, int M, const LiangZhouThresholds& th = {}) {
    LiangZhouVerdict v;
    v.n = schedule.values();
    if (i_set.empty() || j_set.empty() || schedule.size() < th.tail) return v;
    for (int n : v.n) {
        double hi = 0.0;
        double lo = kInf;
        for (int i : i_set)
            for (int j : j_set) {
                const double q = liang_zhou_quantity(S, i, j, n, E, M);
                hi = std::max(hi, q);
                lo = std::min(lo, q);
            }
        v.max_value.push_back(hi);
        v.min_value.push_back(lo);
    }
    const auto first = v.n.size() - th.tail;
    bool small = true;
    bool non_increasing = true;
    double floor = kInf;
    for (std::size_t k = first; k < v.n.size(); ++k) {
        small = small && v.max_value[k] < th.decay;
        if (k > first) non_increasing = non_increasing && v.max_value[k] <= v.max_value[k - 1];
        floor = std::min(floor, v.min_value[k]);
    }
    if (small && non_increasing) {
        v.kind = LiangZhouKind::DecaysToZero;
    } else if (floor > th.lower) {
        v.kind = LiangZhouKind::BoundedBelow;
        v.bound = floor;
    }
    return v;
}

struct PeriodicOptions {
    double blowup = 1e8;      // relative to the largest seed coefficient
    double tolerance = 1e-8;  // on the F-norm residual
    double r_in = 0.0;
    double r_out = kInf;
};

struct PeriodicResult {
    LaurentSeries f;
    double residual = 0.0;     // f_norm(S^r f - f)
    double max_coeff = 0.0;
    bool blown_up = false;
    bool success = false;
};

/// Period-r point of S: seeds on `seed` are propagated by x_{phi^r(j)} = x_j / prod b and
/// the reverse relation across the window.
inline PeriodicResult periodic_point(const PseudoShift& S, int r, Window seed, const Exhaustion& E, int M,
                                     const std::vector<cplx>& seed_values = {}, const PeriodicOptions& opt = {}) {
    require(r >= 0, Reason::Precondition, "period must be nonnegative");
    require(seed.lo <= seed.hi && S.in_window(seed.lo) && S.in_window(seed.hi), Reason::Precondition,
            "seed block must lie in the shift window");
    require(seed_values.empty() || seed_values.size() == static_cast<std::size_t>(seed.width()), Reason::Precondition,
            "one seed value per seed index");

    std::vector<cplx> x(static_cast<std::size_t>(S.window.width()));
    auto at = [&](int j) -> cplx& { return x[static_cast<std::size_t>(j - S.window.lo)]; };
    double seed_max = 0.0;
    for (int j = seed.lo; j <= seed.hi; ++j) {
        at(j) = seed_values.empty() ? cplx{1.0} : seed_values[static_cast<std::size_t>(j - seed.lo)];
        seed_max = std::max(seed_max, std::abs(at(j)));
    }

    PeriodicResult out;
    if (r > 0) {
        require(S.p != 0, Reason::Precondition, "periodic points need a proper shift (p != 0)");
        const int step = r * std::abs(S.p);
        require(seed.width() == step, Reason::Precondition, "seed block width must equal r |p|");
        require(S.window.width() >= 3 * step, Reason::Precondition, "window too small for the period");
        auto block_product = [&](int j) {
            cplx prod{1.0};
            for (int v = 0, idx = j; v < r; ++v, idx = S.phi(idx)) prod *= S.weight(idx);
            return prod;
        };
        auto shift_r = [&](int j) { return j + r * S.p; };
        auto in_range = [&](int j) {
            for (int v = 0, idx = j; v <= r; ++v, idx = S.phi(idx))
                if (!S.in_window(idx)) return false;
            return true;
        };
        // forward along phi^r from the seed, then backward along psi^r
        const int dir = S.p > 0 ? 1 : -1;
        for (int j = dir > 0 ? seed.lo : seed.hi; in_range(j); j += dir) {
            at(shift_r(j)) = at(j) / block_product(j);
        }
        for (int i = dir > 0 ? seed.hi : seed.lo; S.in_window(i - r * S.p); i -= dir) {
            const int j = i - r * S.p;
            if (seed.contains(j) || !in_range(j)) continue;
            at(j) = at(i) * block_product(j);
        }
    }
    for (const cplx& v : x) out.max_coeff = std::max(out.max_coeff, std::abs(v));
    out.blown_up = !std::isfinite(out.max_coeff) || out.max_coeff > opt.blowup * seed_max;
    out.f = LaurentSeries(S.window.lo, std::move(x), opt.r_in, opt.r_out).trimmed();
    out.residual = out.blown_up ? kInf : f_norm(iterate(S, out.f, r) - out.f, E, M);
    out.success = !out.blown_up && out.residual < opt.tolerance;
    return out;
}

}  // namespace holodyn
