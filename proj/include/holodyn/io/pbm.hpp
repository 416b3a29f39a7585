#pragma once

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "holodyn/core/error.hpp"
#include "holodyn/geometry/grid.hpp"

namespace holodyn::io {

namespace detail {

inline void skip_pbm_space(std::istream& in) {
    for (int c = in.peek(); c != EOF; c = in.peek()) {
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
}

inline int read_pbm_int(std::istream& in) {
    skip_pbm_space(in);
    int v = -1;
    if (!(in >> v) || v <= 0) fail(Reason::Validation, "pbm: bad header");
    return v;
}

}  // namespace detail

/// Reads a P1 or P4 bitmap. Black pixels are cells; pixel (col, row) maps to cell
/// (ox + col, oy + height - 1 - row) so the image reads with y pointing up.
inline geometry::GridSet read_pbm(std::istream& in, int k, int ox = 0, int oy = 0) {
    std::string magic(2, '\0');
    in.read(magic.data(), 2);
    if (!in || (magic != "P1" && magic != "P4")) fail(Reason::Validation, "pbm: expected P1 or P4");
    const int w = detail::read_pbm_int(in);
    const int h = detail::read_pbm_int(in);
    std::vector<geometry::Cell> cells;
    auto put = [&](int col, int row) { cells.push_back({ox + col, oy + h - 1 - row}); };
    if (magic == "P1") {
        for (int row = 0; row < h; ++row)
            for (int col = 0; col < w; ++col) {
                detail::skip_pbm_space(in);
                const int c = in.get();
                if (c == '1')
                    put(col, row);
                else if (c != '0')
                    fail(Reason::Validation, "pbm: truncated or bad pixel data");
            }
    } else {
        in.get();  // single whitespace before the raster
        const int stride = (w + 7) / 8;
        std::vector<unsigned char> row_bits(static_cast<std::size_t>(stride));
        for (int row = 0; row < h; ++row) {
            in.read(reinterpret_cast<char*>(row_bits.data()), stride);
            if (!in) fail(Reason::Validation, "pbm: truncated raster");
            for (int col = 0; col < w; ++col)
                if (row_bits[static_cast<std::size_t>(col / 8)] & (0x80U >> (col % 8))) put(col, row);
        }
    }
    return geometry::GridSet(k, std::move(cells));
}

inline geometry::GridSet read_pbm_file(const std::string& path, int k, int ox = 0, int oy = 0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Reason::Validation, "cannot open " + path);
    return read_pbm(in, k, ox, oy);
}

}  // namespace holodyn::io
