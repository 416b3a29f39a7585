#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "holodyn/core/complex.hpp"
#include "holodyn/core/error.hpp"
#include "holodyn/core/parallel.hpp"
#include "holodyn/geometry/domain.hpp"
#include "holodyn/geometry/grid.hpp"
#include "holodyn/operators/symbol.hpp"

namespace holodyn::geometry {

/// Three-valued answer; Indeterminate means the resolution or horizon was too coarse.
enum class Tri { False, True, Indeterminate };

inline std::string_view to_string(Tri t) {
    switch (t) {
        case Tri::False: return "false";
        case Tri::True: return "true";
        case Tri::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

/// Axis-aligned clip rectangle in the plane.
struct Rect {
    double x0, y0, x1, y1;
    bool contains(cplx z) const { return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1; }
};

namespace detail {

inline bool square_contains(Cell c, int k, cplx p) {
    const double h = cell_side(k);
    return p.real() >= c.x * h && p.real() <= (c.x + 1) * h && p.imag() >= c.y * h && p.imag() <= (c.y + 1) * h;
}

inline double square_distance(Cell c, int k, cplx p) {
    const double h = cell_side(k);
    const double dx = std::max({c.x * h - p.real(), 0.0, p.real() - (c.x + 1) * h});
    const double dy = std::max({c.y * h - p.imag(), 0.0, p.imag() - (c.y + 1) * h});
    return std::hypot(dx, dy);
}

/// Lattice points within `reach` of the closed cell.
inline std::vector<cplx> lattice_points_near(const LatticeOfDiscs& L, Cell c, int k, double reach) {
    const double h = cell_side(k);
    const double s = L.spacing;
    std::vector<cplx> out;
    for (long i = static_cast<long>(std::floor((c.x * h - reach) / s)); i * s <= (c.x + 1) * h + reach; ++i)
        for (long j = static_cast<long>(std::floor((c.y * h - reach) / s)); j * s <= (c.y + 1) * h + reach; ++j)
            out.push_back({static_cast<double>(i) * s, static_cast<double>(j) * s});
    return out;
}

/// Whether the closed cell meets an isolated complement point or a lattice disc that
/// corner and centre sampling can miss.
inline bool cell_meets_complement(const DomainSpec& domain, Cell c, int k) {
    for (cplx p : domain.punctures())
        if (square_contains(c, k, p)) return true;
    if (const auto* inf = domain.as<InfinitelyConnected>(); inf && inf->lattice)
        for (cplx p : lattice_points_near(*inf->lattice, c, k, inf->lattice->radius))
            if (square_distance(c, k, p) <= inf->lattice->radius) return true;
    return false;
}

inline double domain_extent(const DomainSpec& domain, double cap) {
    auto grid_extent = [](const GridSet& g) {
        const BBox b = g.bbox();
        const double h = g.side();
        return std::max({std::abs(b.x0 * h), std::abs((b.x1 + 1) * h), std::abs(b.y0 * h), std::abs((b.y1 + 1) * h)}) *
               std::sqrt(2.0);
    };
    if (const auto* p = domain.as<PuncturedSimplyConnected>())
        return std::min(cap, p->base ? grid_extent(*p->base) : std::abs(p->puncture) + p->radius);
    if (const auto* a = domain.as<AnnulusDomain>()) return std::min(cap, a->r);
    if (const auto* f = domain.as<FinitelyConnected>()) return std::min(cap, grid_extent(f->grid));
    if (const auto* i = domain.as<InfinitelyConnected>(); i && i->grid) return std::min(cap, grid_extent(*i->grid));
    return cap;
}

/// Cells whose closed square contains p.
inline void closed_cells_of(cplx p, int k, std::vector<Cell>& out) {
    const double h = cell_side(k);
    const double u = p.real() / h;
    const double v = p.imag() / h;
    const double tol = 1e-9;
    const int fx = static_cast<int>(std::floor(u));
    const int fy = static_cast<int>(std::floor(v));
    const bool ex = u - fx < tol;
    const bool ey = v - fy < tol;
    const bool ex1 = fx + 1 - u < tol;
    const bool ey1 = fy + 1 - v < tol;
    for (int x : {fx - 1, fx, fx + 1}) {
        if ((x == fx - 1 && !ex) || (x == fx + 1 && !ex1)) continue;
        for (int y : {fy - 1, fy, fy + 1}) {
            if ((y == fy - 1 && !ey) || (y == fy + 1 && !ey1)) continue;
            out.push_back({x, y});
        }
    }
}

/// psi_n at z, or nullopt when an iterate leaves the symbol's domain of definition.
inline std::optional<cplx> iterate_point(const Symbol& psi, cplx z, int n) {
    for (int i = 0; i < n; ++i) {
        if (!psi.defined_at(z)) return std::nullopt;
        z = psi(z);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
    }
    return z;
}

/// Per-cell sample count along each side (even, so corners, edge midpoints and the
/// centre are always included), scaled to the local stretch of psi_n.
inline int samples_per_side(const Symbol& psi, Cell c, int k_in, int k_out, int n, int cap) {
    const double h = cell_side(k_in);
    const cplx z = cell_center(c, k_in);
    const auto a = iterate_point(psi, z, n);
    const auto b = iterate_point(psi, z + cplx(0.5 * h, 0.0), n);
    const auto d = iterate_point(psi, z + cplx(0.0, 0.5 * h), n);
    if (!a || !b || !d) return 2;
    const double stretch = std::max(std::abs(*b - *a), std::abs(*d - *a)) / (0.5 * h);
    const double want = 2.0 * stretch * h / cell_side(k_out);
    int s = 2;
    while (s < want && s < cap) s *= 2;
    return s;
}

}  // namespace detail

/// All closed cells at resolution k whose corners and centre lie in the domain and in
/// the disc |z| < k, optionally restricted to a clip rectangle.
inline GridSet grid_compact(const DomainSpec& domain, int k, std::optional<Rect> clip = std::nullopt) {
    require(k >= 1 && k <= 30, Reason::Precondition, "grid resolution must be in 1..30");
    const double h = cell_side(k);
    double extent = detail::domain_extent(domain, static_cast<double>(k));
    int x0 = static_cast<int>(std::floor(-extent / h)) - 1;
    int x1 = static_cast<int>(std::ceil(extent / h)) + 1;
    int y0 = x0;
    int y1 = x1;
    if (clip) {
        x0 = std::max(x0, static_cast<int>(std::floor(clip->x0 / h)));
        x1 = std::min(x1, static_cast<int>(std::ceil(clip->x1 / h)));
        y0 = std::max(y0, static_cast<int>(std::floor(clip->y0 / h)));
        y1 = std::min(y1, static_cast<int>(std::ceil(clip->y1 / h)));
    }
    const double bound = static_cast<double>(k);
    auto inside = [&](cplx p) { return std::abs(p) < bound && domain.contains(p) && (!clip || clip->contains(p)); };
    const std::size_t rows = static_cast<std::size_t>(std::max(0, y1 - y0 + 1));
    std::vector<std::vector<Cell>> per_row(rows);
    parallel_for(rows, [&](std::size_t r) {
        const int y = y0 + static_cast<int>(r);
        for (int x = x0; x <= x1; ++x) {
            const Cell c{x, y};
            if (!inside(cell_center(c, k))) continue;
            bool ok = true;
            for (cplx p : cell_corners(c, k)) ok = ok && inside(p);
            if (ok && !detail::cell_meets_complement(domain, c, k)) per_row[r].push_back(c);
        }
    });
    std::vector<Cell> cells;
    for (auto& row : per_row) cells.insert(cells.end(), row.begin(), row.end());
    require(!cells.empty(), Reason::Precondition, "no grid cell of this resolution fits in the domain");
    return GridSet(k, std::move(cells));
}

/// Whether every hole of K contains a point outside the domain. Holes of fewer than 2
/// cells without such a point are Indeterminate rather than False.
inline Tri is_omega_convex(const GridSet& K, const DomainSpec& domain) {
    require(!K.empty(), Reason::Precondition, "empty compact");
    const int k = K.resolution();
    for (const Cell& c : K.cells())
        require(domain.contains(cell_center(c, k)) && !detail::cell_meets_complement(domain, c, k),
                Reason::Precondition, "compact is not inside the domain");
    Tri out = Tri::True;
    for (const GridSet& hole : holes(K)) {
        bool witness = false;
        for (const Cell& c : hole.cells()) {
            if (!domain.contains(cell_center(c, k)) || detail::cell_meets_complement(domain, c, k)) {
                witness = true;
                break;
            }
            for (cplx p : cell_corners(c, k))
                if (!domain.contains(p)) witness = true;
            if (witness) break;
        }
        if (witness) continue;
        if (hole.size() < 2)
            out = Tri::Indeterminate;
        else
            return Tri::False;
    }
    return out;
}

/// Rasterized image psi_n(K) at resolution k_out, closed by one cell. If `codomain` is
/// given, every sample must land in it and the result is clipped to it. With `touching` off, samples are nudged into
/// the cell interior and assigned to one cell each, so images that only share an edge
/// with another set do not overlap it.
inline GridSet image(const Symbol& psi, const GridSet& K, int k_out, int n = 1,
                     const DomainSpec* codomain = nullptr, int max_samples = 64, bool touching = true) {
    require(!K.empty(), Reason::Precondition, "empty compact");
    require(n >= 0, Reason::Precondition, "iterate index must be nonnegative");
    const int k = K.resolution();
    const double h = K.side();
    std::vector<std::vector<Cell>> hits(K.size());
    parallel_for(K.size(), [&](std::size_t i) {
        const Cell c = K.cells()[i];
        const int s = detail::samples_per_side(psi, c, k, k_out, n, max_samples);
        auto& out = hits[i];
        for (int a = 0; a <= s; ++a)
            for (int b = 0; b <= s; ++b) {
                const double nudge = touching ? 0.0 : 1e-7;
                const double u = std::clamp(static_cast<double>(a) / s, nudge, 1.0 - nudge);
                const double v = std::clamp(static_cast<double>(b) / s, nudge, 1.0 - nudge);
                const cplx z{(c.x + u) * h, (c.y + v) * h};
                const auto w = detail::iterate_point(psi, z, n);
                require(w.has_value(), Reason::Domain, "sample escapes the codomain");
                if (codomain)
                    require(codomain->contains(*w), Reason::Domain, "sample escapes the codomain");
                if (touching)
                    detail::closed_cells_of(*w, k_out, out);
                else
                    out.push_back(cell_of(*w, k_out));
            }
    });
    std::vector<Cell> cells;
    for (auto& v : hits) cells.insert(cells.end(), v.begin(), v.end());
    GridSet closed = closing(GridSet(k_out, std::move(cells)));
    if (!codomain) return closed;
    // Closing can fill notches next to the complement; keep only cells inside the codomain.
    std::vector<Cell> kept;
    for (const Cell& c : closed.cells())
        if (codomain->contains(cell_center(c, k_out)) && !detail::cell_meets_complement(*codomain, c, k_out))
            kept.push_back(c);
    return GridSet(k_out, std::move(kept));
}

/// Sampled injectivity of psi on K: False when two cell centres more than two cells apart
/// map within a hundredth of a cell of each other. Closed-form symbols are injective.
inline Tri is_injective_on(const Symbol& psi, const GridSet& K) {
    if (psi.as_moebius()) return Tri::True;
    const int k = K.resolution();
    const double h = K.side();
    const int fine = std::min(30, k + 7);
    struct Hit {
        Cell key;
        cplx src, img;
    };
    std::vector<Hit> hits;
    hits.reserve(K.size());
    for (const Cell& c : K.cells()) {
        const cplx z = cell_center(c, k);
        if (!psi.defined_at(z)) return Tri::Indeterminate;
        const cplx w = psi(z);
        hits.push_back({cell_of(w, fine), z, w});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.key < b.key; });
    const double tol = 0.01 * h;
    for (std::size_t i = 0; i < hits.size(); ++i)
        for (std::size_t j = i + 1; j < hits.size() && hits[j].key.x <= hits[i].key.x + 1; ++j)
            if (std::abs(hits[j].img - hits[i].img) < tol && std::abs(hits[j].src - hits[i].src) > 2.0 * h)
                return Tri::False;
    return Tri::True;
}

/// A fixed point of psi in the domain near K, found in closed form for Moebius-type
/// symbols and by Newton refinement from the best grid sample otherwise.
inline std::optional<cplx> fixed_point_near(const Symbol& psi, const GridSet& K, const DomainSpec& domain) {
    if (const auto m = psi.as_moebius()) {
        std::vector<cplx> roots;
        const cplx qa = m->c, qb = m->d - m->a, qc = -m->b;
        if (qa == cplx{}) {
            if (qb != cplx{}) roots.push_back(-qc / qb);
        } else {
            const cplx disc = std::sqrt(qb * qb - 4.0 * qa * qc);
            roots.push_back((-qb + disc) / (2.0 * qa));
            roots.push_back((-qb - disc) / (2.0 * qa));
        }
        if (qa == cplx{} && qb == cplx{} && qc == cplx{}) return cell_center(K.cells().front(), K.resolution());
        for (cplx z : roots)
            if (psi.defined_at(z) && domain.contains(z)) return z;
        return std::nullopt;
    }
    const int k = K.resolution();
    const double h = K.side();
    double best = kInf;
    cplx z0{};
    for (const Cell& c : K.cells()) {
        const cplx z = cell_center(c, k);
        if (!psi.defined_at(z)) continue;
        const double d = std::abs(psi(z) - z);
        if (d < best) {
            best = d;
            z0 = z;
        }
    }
    if (!(best < 4.0 * h)) return std::nullopt;
    cplx z = z0;
    for (int it = 0; it < 50; ++it) {
        if (!psi.defined_at(z)) return std::nullopt;
        const double e = 1e-7 * std::max(1.0, std::abs(z));
        if (!psi.defined_at(z + e)) return std::nullopt;
        const cplx g = psi(z) - z;
        const cplx dg = (psi(z + e) - psi(z)) / e - 1.0;
        if (dg == cplx{}) return std::nullopt;
        z -= g / dg;
        if (std::abs(g) < 1e-13 * std::max(1.0, std::abs(z))) break;
    }
    if (psi.defined_at(z) && std::abs(psi(z) - z) < 1e-10 * std::max(1.0, std::abs(z)) && domain.contains(z)) return z;
    return std::nullopt;
}

enum class RunAwayStatus { Separated, Bounded, Indeterminate };

inline std::string_view to_string(RunAwayStatus s) {
    switch (s) {
        case RunAwayStatus::Separated: return "separated";
        case RunAwayStatus::Bounded: return "bounded";
        case RunAwayStatus::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

struct RunAwayResult {
    std::optional<int> first;    // first n with psi_n(K) disjoint from K
    bool strong = false;         // disjoint for every n in [first, N]
    RunAwayStatus status = RunAwayStatus::Indeterminate;
    std::vector<bool> disjoint;  // entry n-1 for n = 1..N
};

/// First separation index of psi_n(K) from K up to horizon N. Without separation the
/// orbit is reported Bounded if a sample of K is fixed or every image stays within
/// the doubled bounding box of K, else Indeterminate.
inline RunAwayResult run_away_index(const Symbol& psi, const GridSet& K, int N) {
    require(!K.empty(), Reason::Precondition, "empty compact");
    require(N >= 1, Reason::Precondition, "horizon must be positive");
    const int k = K.resolution();
    const double h = K.side();
    const BBox kb = K.bbox();
    const double cx = 0.5 * (kb.x0 + kb.x1 + 1) * h;
    const double cy = 0.5 * (kb.y0 + kb.y1 + 1) * h;
    const double rx = (kb.x1 + 1 - kb.x0) * h;
    const double ry = (kb.y1 + 1 - kb.y0) * h;

    RunAwayResult out;
    bool stays_near = true;
    for (int n = 1; n <= N; ++n) {
        // Cheap rejection on the sampled bounding box before rasterizing.
        double lo_x = kInf, lo_y = kInf, hi_x = -kInf, hi_y = -kInf;
        bool defined = true;
        for (const Cell& c : K.cells()) {
            const auto w = detail::iterate_point(psi, cell_center(c, k), n);
            if (!w) {
                defined = false;
                break;
            }
            lo_x = std::min(lo_x, w->real());
            hi_x = std::max(hi_x, w->real());
            lo_y = std::min(lo_y, w->imag());
            hi_y = std::max(hi_y, w->imag());
        }
        require(defined, Reason::Domain, "iterate leaves the symbol's domain");
        if (lo_x < cx - rx || hi_x > cx + rx || lo_y < cy - ry || hi_y > cy + ry) stays_near = false;
        const double margin = 2.0 * h + 0.5 * std::max(hi_x - lo_x, hi_y - lo_y) / std::sqrt(double(K.size()));
        const bool far = hi_x + margin < kb.x0 * h || lo_x - margin > (kb.x1 + 1) * h ||
                         hi_y + margin < kb.y0 * h || lo_y - margin > (kb.y1 + 1) * h;
        const bool disjoint = far || !image(psi, K, k, n, nullptr, 16).intersects(K);
        out.disjoint.push_back(disjoint);
        if (disjoint && !out.first) out.first = n;
    }
    if (out.first) {
        out.status = RunAwayStatus::Separated;
        out.strong = std::all_of(out.disjoint.begin() + (*out.first - 1), out.disjoint.end(), [](bool b) { return b; });
        return out;
    }
    bool fixed = false;
    for (const Cell& c : K.cells()) {
        const cplx z = cell_center(c, k);
        if (psi.defined_at(z) && std::abs(psi(z) - z) < 1e-12 * std::max(1.0, std::abs(z))) fixed = true;
    }
    out.status = fixed || stays_near ? RunAwayStatus::Bounded : RunAwayStatus::Indeterminate;
    return out;
}

/// Omega-convexity of psi_n(K) union K for n in [N0, N]; K must be connected with at
/// least 2 holes.
inline std::vector<Tri> union_convexity_check(const Symbol& psi, const GridSet& K, int N0, int N,
                                              const DomainSpec& domain) {
    require(is_connected(K) && hole_count(K) >= 2, Reason::Precondition,
            "union check needs a connected compact with at least 2 holes");
    require(0 <= N0 && N0 <= N, Reason::Precondition, "need 0 <= N0 <= N");
    std::vector<Tri> out;
    for (int n = N0; n <= N; ++n) {
        if (n == 0) {
            out.push_back(is_omega_convex(K, domain));
            continue;
        }
        out.push_back(is_omega_convex(set_union(image(psi, K, K.resolution(), n, &domain, 64, false), K), domain));
    }
    return out;
}

}  // namespace holodyn::geometry
