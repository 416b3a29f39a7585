#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "holodyn/classify/report.hpp"
#include "holodyn/core/error.hpp"
#include "holodyn/geometry/domain.hpp"
#include "holodyn/geometry/grid.hpp"
#include "holodyn/io/pbm.hpp"
#include "holodyn/laurent/series.hpp"
#include "holodyn/operators/multiplier.hpp"
#include "holodyn/operators/symbol.hpp"

namespace holodyn::io {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void bad(const std::string& what) { fail(Reason::Validation, what); }

inline const json& field(const json& j, const char* key, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) bad(ctx + ": missing field '" + key + "'");
    return j.at(key);
}

inline double real_of(const json& j, const std::string& ctx) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return kInf;
    }
    bad(ctx + ": expected a number or \"inf\"");
}

inline int int_of(const json& j, const std::string& ctx) {
    if (!j.is_number_integer()) bad(ctx + ": expected an integer");
    return j.get<int>();
}

}  // namespace detail

/// [re, im] or a bare real.
inline cplx parse_complex(const json& j, const std::string& ctx = "complex") {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    detail::bad(ctx + ": expected [re, im] or a number");
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json real_to_json(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    if (std::isnan(v)) return json(nullptr);
    return json(v);
}

/// { "n_min": int, "coeffs": [[re,im],...], "annulus": [r_in, r_out|"inf"] }
inline LaurentSeries parse_series(const json& j, const std::string& ctx = "series") {
    if (!j.is_object()) detail::bad(ctx + ": expected a series object");
    const int n_min = detail::int_of(detail::field(j, "n_min", ctx), ctx + ".n_min");
    const json& cs = detail::field(j, "coeffs", ctx);
    if (!cs.is_array() || cs.empty()) detail::bad(ctx + ".coeffs: expected a nonempty array");
    std::vector<cplx> c;
    c.reserve(cs.size());
    for (const json& v : cs) c.push_back(parse_complex(v, ctx + ".coeffs"));
    double r_in = 0.0, r_out = kInf;
    if (j.contains("annulus")) {
        const json& a = j.at("annulus");
        if (!a.is_array() || a.size() != 2) detail::bad(ctx + ".annulus: expected [r_in, r_out]");
        r_in = detail::real_of(a[0], ctx + ".annulus");
        r_out = detail::real_of(a[1], ctx + ".annulus");
    }
    for (const auto& it : j.items())
        if (it.key() != "n_min" && it.key() != "coeffs" && it.key() != "annulus")
            detail::bad(ctx + ": unknown field '" + it.key() + "'");
    return LaurentSeries(n_min, std::move(c), r_in, r_out);
}

inline json to_json(const LaurentSeries& s) {
    json cs = json::array();
    for (const cplx& c : s.coeffs()) cs.push_back(to_json(c));
    return json{{"n_min", s.n_min()}, {"coeffs", cs}, {"annulus", json::array({real_to_json(s.r_in()), real_to_json(s.r_out())})}};
}

/// A series, or { "k": int, "W": series } for z^k e^W.
inline Multiplier parse_multiplier(const json& j, const std::string& ctx = "omega") {
    if (j.is_object() && j.contains("W"))
        return SymbolicMultiplier{j.contains("k") ? detail::int_of(j.at("k"), ctx + ".k") : 0,
                                  parse_series(j.at("W"), ctx + ".W")};
    return parse_series(j, ctx);
}

inline json to_json(const Multiplier& m) {
    if (const auto* s = std::get_if<SymbolicMultiplier>(&m)) return json{{"k", s->k}, {"W", to_json(s->W)}};
    return to_json(std::get<LaurentSeries>(m));
}

/// {"linear": c} | {"inversion": c} | {"moebius": [a, b, c, d]} | {"series": series}
inline Symbol parse_symbol(const json& j, const std::string& ctx = "symbol") {
    if (!j.is_object() || j.size() != 1) detail::bad(ctx + ": expected an object with one symbol class");
    if (j.contains("linear")) return Symbol::linear(parse_complex(j.at("linear"), ctx + ".linear"));
    if (j.contains("inversion")) return Symbol::inversion(parse_complex(j.at("inversion"), ctx + ".inversion"));
    if (j.contains("moebius")) {
        const json& m = j.at("moebius");
        if (!m.is_array() || m.size() != 4) detail::bad(ctx + ".moebius: expected [a, b, c, d]");
        return Symbol::moebius(parse_complex(m[0]), parse_complex(m[1]), parse_complex(m[2]), parse_complex(m[3]));
    }
    if (j.contains("series")) return Symbol::series(parse_series(j.at("series"), ctx + ".series"));
    detail::bad(ctx + ": unknown symbol class");
}

inline json to_json(const Symbol& s) {
    if (const auto* l = s.as<Linear>()) return json{{"linear", to_json(l->a)}};
    if (const auto* i = s.as<Inversion>()) return json{{"inversion", to_json(i->a)}};
    if (const auto* m = s.as<Moebius>())
        return json{{"moebius", json::array({to_json(m->a), to_json(m->b), to_json(m->c), to_json(m->d)})}};
    return json{{"series", to_json(s.as<SeriesSymbol>()->s)}};
}

/// { "k": int, "cells": [[ix, iy], ...] } or { "pbm": path, "k": int, "origin": [ix, iy] }.
inline geometry::GridSet parse_grid(const json& j, const std::string& base_dir = ".", const std::string& ctx = "grid") {
    const int k = detail::int_of(detail::field(j, "k", ctx), ctx + ".k");
    if (k < 0 || k > 10) detail::bad(ctx + ".k: resolution must be in 0..10");
    if (j.contains("pbm")) {
        std::string path = j.at("pbm").get<std::string>();
        if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
        int ox = 0, oy = 0;
        if (j.contains("origin")) {
            const json& o = j.at("origin");
            if (!o.is_array() || o.size() != 2) detail::bad(ctx + ".origin: expected [ix, iy]");
            ox = detail::int_of(o[0], ctx + ".origin");
            oy = detail::int_of(o[1], ctx + ".origin");
        }
        return read_pbm_file(path, k, ox, oy);
    }
    const json& cs = detail::field(j, "cells", ctx);
    if (!cs.is_array()) detail::bad(ctx + ".cells: expected an array");
    std::vector<geometry::Cell> cells;
    for (const json& c : cs) {
        if (!c.is_array() || c.size() != 2) detail::bad(ctx + ".cells: expected [ix, iy]");
        cells.push_back({detail::int_of(c[0], ctx + ".cells"), detail::int_of(c[1], ctx + ".cells")});
    }
    return geometry::GridSet(k, std::move(cells));
}

inline json to_json(const geometry::GridSet& g) {
    json cs = json::array();
    for (const auto& c : g.cells()) cs.push_back(json::array({c.x, c.y}));
    return json{{"k", g.resolution()}, {"cells", cs}};
}

/// Domain literal: a name ("C*", "D*", "punctured_plane", "punctured_disc") or an object
/// with "type" in punctured_plane | punctured_disc | annulus | finitely_connected |
/// infinitely_connected.
inline DomainSpec parse_domain(const json& j, const std::string& base_dir = ".", const std::string& ctx = "domain") {
    std::string type;
    if (j.is_string())
        type = j.get<std::string>();
    else
        type = detail::field(j, "type", ctx).get<std::string>();
    if (type == "C*") type = "punctured_plane";
    if (type == "D*") type = "punctured_disc";
    auto num = [&](const char* key, double fallback) {
        return j.is_object() && j.contains(key) ? detail::real_of(j.at(key), ctx + "." + key) : fallback;
    };
    if (type == "punctured_plane") return DomainSpec::punctured_plane();
    if (type == "punctured_disc") {
        PuncturedSimplyConnected d;
        d.radius = num("radius", 1.0);
        if (j.is_object() && j.contains("puncture")) d.puncture = parse_complex(j.at("puncture"), ctx + ".puncture");
        if (j.is_object() && j.contains("base")) d.base = parse_grid(j.at("base"), base_dir, ctx + ".base");
        if (!(d.radius > 0.0)) detail::bad(ctx + ".radius: must be positive");
        return DomainSpec(d);
    }
    if (type == "annulus") return DomainSpec::annulus(num("r", 2.0));
    if (type == "finitely_connected") {
        FinitelyConnected f;
        f.holes = j.contains("holes") ? detail::int_of(j.at("holes"), ctx + ".holes") : 2;
        f.grid = parse_grid(detail::field(j, "grid", ctx), base_dir, ctx + ".grid");
        return DomainSpec(f);
    }
    if (type == "infinitely_connected") {
        InfinitelyConnected d;
        if (j.contains("lattice")) {
            const json& l = j.at("lattice");
            d.lattice = LatticeOfDiscs{detail::real_of(detail::field(l, "spacing", ctx), ctx + ".lattice.spacing"),
                                       detail::real_of(detail::field(l, "radius", ctx), ctx + ".lattice.radius")};
        }
        if (j.contains("grid")) d.grid = parse_grid(j.at("grid"), base_dir, ctx + ".grid");
        return DomainSpec(d);
    }
    detail::bad(ctx + ": unknown domain type '" + type + "'");
}

inline json to_json(const DomainSpec& D) {
    json out{{"type", D.name()}};
    if (const auto* d = D.as<PuncturedSimplyConnected>()) {
        out["radius"] = d->radius;
        out["puncture"] = to_json(d->puncture);
        if (d->base) out["base"] = to_json(*d->base);
    } else if (const auto* a = D.as<AnnulusDomain>()) {
        out["r"] = a->r;
    } else if (const auto* f = D.as<FinitelyConnected>()) {
        out["holes"] = f->holes;
        out["grid"] = to_json(f->grid);
    } else if (const auto* i = D.as<InfinitelyConnected>()) {
        if (i->lattice) out["lattice"] = json{{"spacing", i->lattice->spacing}, {"radius", i->lattice->radius}};
        if (i->grid) out["grid"] = to_json(*i->grid);
    }
    return out;
}

inline json to_json(const ClassificationReport& r) {
    json status = json::object();
    for (const auto& [p, v] : r.status) status[std::string(to_string(p))] = std::string(to_string(v));
    json just = json::array();
    for (const auto& j : r.justification) just.push_back(json{{"rule", j.rule}, {"condition", j.condition}, {"met", j.met}});
    json q = json::object();
    for (const auto& [k, v] : r.quantities) q[k] = real_to_json(v);
    return json{{"status", status},  {"justification", just}, {"quantities", q},
                {"witnesses", r.witnesses}, {"audit", r.audit},    {"reason", r.reason}};
}

/// Reads a JSON file; syntax errors become validation errors.
inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) detail::bad("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        detail::bad(path + ": " + e.what());
    }
}

inline json parse_literal(const std::string& text, const std::string& ctx) {
    try {
        return json::parse(text);
    } catch (const json::exception&) {
        // bare names such as C* are accepted as strings
        if (!text.empty() && text.front() != '{' && text.front() != '[') return json(text);
        detail::bad(ctx + ": malformed JSON literal");
    }
}

}  // namespace holodyn::io
