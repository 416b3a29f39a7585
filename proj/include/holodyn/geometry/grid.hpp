#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <vector>

#include "holodyn/core/complex.hpp"
#include "holodyn/core/error.hpp"

namespace holodyn::geometry {

/// Closed square [x h, (x+1) h] x [y h, (y+1) h] with h = 2^-k.
struct Cell {
    int x = 0;
    int y = 0;
    auto operator<=>(const Cell&) const = default;
};

inline double cell_side(int k) { return std::ldexp(1.0, -k); }

inline cplx cell_center(Cell c, int k) {
    const double h = cell_side(k);
    return {(c.x + 0.5) * h, (c.y + 0.5) * h};
}

inline std::array<cplx, 4> cell_corners(Cell c, int k) {
    const double h = cell_side(k);
    return {cplx{c.x * h, c.y * h}, cplx{(c.x + 1) * h, c.y * h}, cplx{c.x * h, (c.y + 1) * h},
            cplx{(c.x + 1) * h, (c.y + 1) * h}};
}

/// Cell of resolution k containing z (half-open assignment).
inline Cell cell_of(cplx z, int k) {
    const double h = cell_side(k);
    return {static_cast<int>(std::floor(z.real() / h)), static_cast<int>(std::floor(z.imag() / h))};
}

struct BBox {
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive cell ranges
    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
    bool empty() const { return x1 < x0 || y1 < y0; }
};

/// Dense occupancy bitmap over a bounding box of cells.
class Raster {
public:
    Raster(BBox box) : box_(box), bits_(static_cast<std::size_t>(std::max(0, box.width()) * std::max(0, box.height())), 0) {}

    const BBox& box() const { return box_; }
    bool inside(int x, int y) const { return x >= box_.x0 && x <= box_.x1 && y >= box_.y0 && y <= box_.y1; }
    bool get(int x, int y) const { return inside(x, y) && bits_[index(x, y)] != 0; }
    void set(int x, int y, bool v = true) {
        if (inside(x, y)) bits_[index(x, y)] = v ? 1 : 0;
    }
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y - box_.y0) * static_cast<std::size_t>(box_.width()) +
               static_cast<std::size_t>(x - box_.x0);
    }

private:
    BBox box_;
    std::vector<std::uint8_t> bits_;
};

/// Finite union of closed dyadic squares at one resolution.
class GridSet {
public:
    GridSet() = default;
    GridSet(int k, std::vector<Cell> cells) : k_(k), cells_(std::move(cells)) {
        require(k_ >= 0 && k_ <= 30, Reason::Validation, "grid resolution out of range");
        std::sort(cells_.begin(), cells_.end());
        cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    }

    int resolution() const { return k_; }
    double side() const { return cell_side(k_); }
    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }

    bool contains(Cell c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }

    /// True if z lies in the cell assigned to it at this resolution.
    bool covers(cplx z) const { return contains(cell_of(z, k_)); }

    /// Whether z lies in the closed union of the cells.
    bool covers_closed(cplx z) const {
        const double h = side();
        const double u = z.real() / h;
        const double v = z.imag() / h;
        for (int x : {static_cast<int>(std::floor(u)), static_cast<int>(std::ceil(u)) - 1})
            for (int y : {static_cast<int>(std::floor(v)), static_cast<int>(std::ceil(v)) - 1})
                if (contains({x, y})) return true;
        return false;
    }

    BBox bbox() const {
        BBox b{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
               std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};
        for (const Cell& c : cells_) {
            b.x0 = std::min(b.x0, c.x);
            b.y0 = std::min(b.y0, c.y);
            b.x1 = std::max(b.x1, c.x);
            b.y1 = std::max(b.y1, c.y);
        }
        if (cells_.empty()) return {};
        return b;
    }

    Raster raster(int pad = 0) const {
        BBox b = bbox();
        b.x0 -= pad;
        b.y0 -= pad;
        b.x1 += pad;
        b.y1 += pad;
        Raster r(b);
        for (const Cell& c : cells_) r.set(c.x, c.y);
        return r;
    }

    static GridSet from_raster(int k, const Raster& r) {
        std::vector<Cell> cells;
        const BBox& b = r.box();
        for (int y = b.y0; y <= b.y1; ++y)
            for (int x = b.x0; x <= b.x1; ++x)
                if (r.get(x, y)) cells.push_back({x, y});
        return GridSet(k, std::move(cells));
    }

    friend GridSet set_union(const GridSet& a, const GridSet& b) {
        require(a.k_ == b.k_ || a.empty() || b.empty(), Reason::Precondition, "union of grids at different resolutions");
        std::vector<Cell> cells;
        std::set_union(a.cells_.begin(), a.cells_.end(), b.cells_.begin(), b.cells_.end(), std::back_inserter(cells));
        return GridSet(a.empty() ? b.k_ : a.k_, std::move(cells));
    }

    bool intersects(const GridSet& other) const {
        require(k_ == other.k_, Reason::Precondition, "intersection of grids at different resolutions");
        auto i = cells_.begin();
        auto j = other.cells_.begin();
        while (i != cells_.end() && j != other.cells_.end()) {
            if (*i == *j) return true;
            if (*i < *j)
                ++i;
            else
                ++j;
        }
        return false;
    }

    bool subset_of(const GridSet& other) const {
        return std::includes(other.cells_.begin(), other.cells_.end(), cells_.begin(), cells_.end());
    }

private:
    int k_ = 0;
    std::vector<Cell> cells_;
};

/// Morphological dilation by the 3x3 square.
inline GridSet dilate(const GridSet& g) {
    if (g.empty()) return g;
    Raster src = g.raster(1);
    Raster dst(src.box());
    const BBox& b = src.box();
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = b.x0; x <= b.x1; ++x) {
            bool hit = false;
            for (int dy = -1; dy <= 1 && !hit; ++dy)
                for (int dx = -1; dx <= 1 && !hit; ++dx) hit = src.get(x + dx, y + dy);
            dst.set(x, y, hit);
        }
    return GridSet::from_raster(g.resolution(), dst);
}

/// Morphological erosion by the 3x3 square.
inline GridSet erode(const GridSet& g) {
    if (g.empty()) return g;
    Raster src = g.raster(1);
    Raster dst(src.box());
    const BBox& b = src.box();
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = b.x0; x <= b.x1; ++x) {
            bool all = src.get(x, y);
            for (int dy = -1; dy <= 1 && all; ++dy)
                for (int dx = -1; dx <= 1 && all; ++dx) all = src.get(x + dx, y + dy);
            dst.set(x, y, all);
        }
    return GridSet::from_raster(g.resolution(), dst);
}

inline GridSet closing(const GridSet& g) { return erode(dilate(g)); }

/// Connected components of `r` cells with value `value`; 8-neighbour if `eight`, else 4.
/// Returns one label per raster slot (-1 for other cells) and the component count.
inline std::pair<std::vector<int>, int> label_components(const Raster& r, bool value, bool eight) {
    const BBox& b = r.box();
    std::vector<int> label(static_cast<std::size_t>(std::max(0, b.width() * b.height())), -1);
    int count = 0;
    std::vector<Cell> stack;
    for (int y = b.y0; y <= b.y1; ++y) {
        for (int x = b.x0; x <= b.x1; ++x) {
            if (r.get(x, y) != value || label[r.index(x, y)] >= 0) continue;
            label[r.index(x, y)] = count;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const Cell c = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if ((dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0)) continue;
                        const int nx = c.x + dx;
                        const int ny = c.y + dy;
                        if (!r.inside(nx, ny) || r.get(nx, ny) != value) continue;
                        auto& l = label[r.index(nx, ny)];
                        if (l >= 0) continue;
                        l = count;
                        stack.push_back({nx, ny});
                    }
                }
            }
            ++count;
        }
    }
    return {std::move(label), count};
}

/// 8-connected components of the set.
inline std::vector<GridSet> components(const GridSet& g) {
    if (g.empty()) return {};
    const Raster r = g.raster();
    auto [label, count] = label_components(r, true, true);
    std::vector<std::vector<Cell>> parts(static_cast<std::size_t>(count));
    for (const Cell& c : g.cells()) parts[static_cast<std::size_t>(label[r.index(c.x, c.y)])].push_back(c);
    std::vector<GridSet> out;
    for (auto& p : parts) out.emplace_back(g.resolution(), std::move(p));
    return out;
}

inline bool is_connected(const GridSet& g) { return components(g).size() == 1; }

/// Bounded 4-connected components of the complement, as cell sets.
inline std::vector<GridSet> holes(const GridSet& g) {
    if (g.empty()) return {};
    const Raster r = g.raster(1);
    auto [label, count] = label_components(r, false, false);
    // The padded frame belongs to the unbounded component.
    const int outer = label[r.index(r.box().x0, r.box().y0)];
    std::vector<std::vector<Cell>> parts(static_cast<std::size_t>(count));
    const BBox& b = r.box();
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = b.x0; x <= b.x1; ++x) {
            const int l = label[r.index(x, y)];
            if (l >= 0 && l != outer) parts[static_cast<std::size_t>(l)].push_back({x, y});
        }
    std::vector<GridSet> out;
    for (auto& p : parts)
        if (!p.empty()) out.emplace_back(g.resolution(), std::move(p));
    return out;
}

inline std::size_t hole_count(const GridSet& g) { return holes(g).size(); }

/// Re-expresses a grid at a finer resolution (each cell split into 4^(k_new-k) cells).
inline GridSet refine(const GridSet& g, int k_new) {
    require(k_new >= g.resolution(), Reason::Precondition, "refine needs a finer resolution");
    const int f = 1 << (k_new - g.resolution());
    std::vector<Cell> cells;
    cells.reserve(g.size() * static_cast<std::size_t>(f * f));
    for (const Cell& c : g.cells())
        for (int dy = 0; dy < f; ++dy)
            for (int dx = 0; dx < f; ++dx) cells.push_back({c.x * f + dx, c.y * f + dy});
    return GridSet(k_new, std::move(cells));
}

}  // namespace holodyn::geometry
