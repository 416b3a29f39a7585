#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holodyn/classify/classify.hpp"
#include "holodyn/criteria/fhc.hpp"
#include "holodyn/criteria/mixing.hpp"
#include "holodyn/criteria/pseudo_shift.hpp"
#include "holodyn/geometry/checks.hpp"
#include "holodyn/io/json_io.hpp"
#include "holodyn/operators/linearization.hpp"
#include "holodyn/operators/operator.hpp"

namespace holodyn::io {

inline const std::vector<std::string> kTasks = {"classify",       "orbit",    "eigenfunction", "pseudoshift",
                                                "mixing-witness", "geometry", "fhc"};

struct Overrides {
    int window = 64;  // exponent window [-window, window]
    int M = 30;
    int resolution = 5;
    int horizon = 50;
    std::size_t nodes = 4096;
    std::uint64_t seed = 0;
    LiangZhouThresholds liang_zhou{};
    double fhc_tolerance = 1e-8;
    double mixing_eps = 0.1;
    double unit_tolerance = 1e-12;
};

struct RunConfig {
    Multiplier omega;
    Symbol psi;
    DomainSpec domain;
    std::vector<std::string> tasks;
    Overrides overrides;
    json params = json::object();  // per-task parameters keyed by task name
    json echo = json::object();    // operator and domain as given
    std::string out_dir = ".";
    std::string base_dir = ".";    // relative PBM paths resolve against this
};

struct RunResult {
    int exit_code = 0;
    std::string reason = "ok";
    std::string message;
    json report = json::object();
};

inline int exit_code_for(Reason r) {
    switch (r) {
        case Reason::Validation:
        case Reason::Precondition:
        case Reason::Domain: return 2;
        case Reason::Numerical:
        case Reason::Indeterminate: return 3;
    }
    return 3;
}

namespace detail {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        bad(std::string("bad value for '") + key + "'");
    }
}

inline Overrides parse_overrides(const json& j) {
    Overrides o;
    if (j.is_null()) return o;
    if (!j.is_object()) bad("overrides: expected an object");
    o.window = get_or(j, "window", o.window);
    o.M = get_or(j, "M", o.M);
    o.resolution = get_or(j, "resolution", o.resolution);
    o.horizon = get_or(j, "horizon", o.horizon);
    o.nodes = get_or(j, "nodes", o.nodes);
    o.seed = get_or(j, "seed", o.seed);
    if (j.contains("thresholds")) {
        const json& t = j.at("thresholds");
        o.liang_zhou.decay = get_or(t, "decay", o.liang_zhou.decay);
        o.liang_zhou.lower = get_or(t, "lower", o.liang_zhou.lower);
        o.liang_zhou.tail = get_or(t, "tail", o.liang_zhou.tail);
        o.fhc_tolerance = get_or(t, "fhc", o.fhc_tolerance);
        o.mixing_eps = get_or(t, "mixing_eps", o.mixing_eps);
        o.unit_tolerance = get_or(t, "unit", o.unit_tolerance);
    }
    if (o.window < 1 || o.window > 512) bad("overrides.window must be in 1..512");
    if (o.resolution < 1 || o.resolution > 10) bad("overrides.resolution must be in 1..10");
    if (o.M < 1 || o.M > 60) bad("overrides.M must be in 1..60");
    if (o.horizon < 1 || o.horizon > 10000) bad("overrides.horizon must be in 1..10000");
    if (o.nodes < 16 || o.nodes > (1U << 20)) bad("overrides.nodes must be in 16..2^20");
    if (!(o.mixing_eps > 0.0) || !(o.fhc_tolerance > 0.0)) bad("overrides.thresholds must be positive");
    return o;
}

inline Exhaustion exhaustion_for(const DomainSpec& D, int M) {
    if (D.as<PuncturedPlane>()) return Exhaustion::punctured_plane(M);
    if (const auto* d = D.as<PuncturedSimplyConnected>())
        if (!d->base && d->puncture == cplx{}) return Exhaustion::punctured_disc(d->radius, M);
    fail(Reason::Precondition, "series tasks need the punctured plane or a disc punctured at 0");
}

inline CompactAnnulus default_compact(const DomainSpec& D) {
    if (const auto* d = D.as<PuncturedSimplyConnected>()) return CompactAnnulus(d->radius / 4.0, d->radius / 2.0);
    return CompactAnnulus(0.5, 2.0);
}

inline CompactAnnulus parse_compact(const json& j, const DomainSpec& D) {
    if (j.is_null()) return default_compact(D);
    if (!j.is_array() || j.size() != 2) bad("compact annulus: expected [inner, outer]");
    return CompactAnnulus(real_of(j[0], "compact"), real_of(j[1], "compact"));
}

inline LaurentSeries series_or(const json& p, const char* key, LaurentSeries fallback) {
    return p.is_object() && p.contains(key) ? parse_series(p.at(key), key) : fallback;
}

inline std::vector<int> ints_or(const json& p, const char* key, std::vector<int> fallback) {
    if (!p.is_object() || !p.contains(key)) return fallback;
    const json& a = p.at(key);
    if (!a.is_array() || a.empty()) bad(std::string(key) + ": expected a nonempty integer array");
    std::vector<int> out;
    for (const json& v : a) out.push_back(int_of(v, key));
    return out;
}

inline json real_list(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(real_to_json(x));
    return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Reason::Validation, "cannot write " + path.string());
    out << text;
}

struct Context {
    const RunConfig& cfg;
    const WeightedCompositionOp& T;
    std::filesystem::path out;
    ClassificationReport report;
    bool classified = false;
    json witness = json::object();
    std::map<std::string, double> quantities;

    json params(const std::string& task) const {
        return cfg.params.contains(task) ? cfg.params.at(task) : json::object();
    }
};

inline void task_classify(Context& c) {
    const Overrides& o = c.cfg.overrides;
    c.report = classify(c.T, ClassifyOptions{o.resolution, o.horizon, o.nodes, o.unit_tolerance});
    c.classified = true;
    for (const auto& [k, v] : c.report.quantities) c.quantities["classify." + k] = v;
}

inline void task_orbit(Context& c) {
    const json p = c.params("orbit");
    const Overrides& o = c.cfg.overrides;
    const Exhaustion E = exhaustion_for(c.cfg.domain, o.M);
    const LaurentSeries f = series_or(p, "f", LaurentSeries::constant(1.0));
    const int N = get_or(p, "N", 20);
    const bool normalize = get_or(p, "normalize", false);
    const CompactAnnulus ref = parse_compact(p.value("reference", json()), c.cfg.domain);
    const auto entries = orbit(c.T, f, N, normalize, E, o.M, ref);
    std::string csv = "n,f_norm,sup_reference\n";
    for (const auto& e : entries) {
        csv += std::to_string(e.n) + "," + json(e.f_norm).dump() + "," +
               json(sup_norm(e.value, ref, o.nodes)).dump() + "\n";
    }
    write_text(c.out / "orbit.csv", csv);
    c.quantities["orbit.f_norm_last"] = entries.back().f_norm;
    c.report.witnesses.push_back("orbit.csv");
}

inline void task_eigenfunction(Context& c) {
    const json p = c.params("eigenfunction");
    const Symbol psi = c.T.symbol().normalized();
    const auto* lin = psi.as<Linear>();
    require(lin != nullptr, Reason::Precondition, "eigenfunction needs a linear symbol");
    EigenOptions opt;
    opt.series = c.T.config().series;
    opt.radius = get_or(p, "radius", 1.0);
    const EigenResult e = eigenfunction(c.T.multiplier(), lin->a, get_or(p, "J", 40), opt);
    c.witness["eigenfunction"] = json{{"eigenvalue", to_json(e.eigenvalue)},
                                      {"residual", real_to_json(e.residual)},
                                      {"residuals", real_list(e.residuals)},
                                      {"h", to_json(e.h)}};
    c.quantities["eigenfunction.residual"] = e.residual;
}

inline void task_pseudoshift(Context& c) {
    const json p = c.params("pseudoshift");
    const Overrides& o = c.cfg.overrides;
    const Exhaustion E = exhaustion_for(c.cfg.domain, o.M);
    const PseudoShift S = to_pseudo_shift(c.T, c.T.config().series.window);
    const auto i_set = ints_or(p, "i", {0});
    const auto j_set = ints_or(p, "j", {0});
    const Schedule sched = Schedule::range(get_or(p, "first", 40), get_or(p, "last", 60));
    const LiangZhouVerdict v = liang_zhou_verdict(S, i_set, j_set, sched, E, o.M, o.liang_zhou);
    c.witness["pseudoshift"] = json{{"verdict", to_string(v.kind)}, {"bound", real_to_json(v.bound)},
                                    {"p", S.p},                      {"n", v.n},
                                    {"max_value", real_list(v.max_value)}, {"min_value", real_list(v.min_value)}};
    if (!v.n.empty() && !v.max_value.empty()) {
        c.quantities["pseudoshift.max_last"] = v.max_value.back();
        c.quantities["pseudoshift.min_last"] = v.min_value.back();
    }
}

inline void task_mixing(Context& c) {
    const json p = c.params("mixing-witness");
    const LaurentSeries f = series_or(p, "f", LaurentSeries::constant(1.0));
    const LaurentSeries g = series_or(p, "g", LaurentSeries::constant(1.0));
    const CompactAnnulus K = parse_compact(p.value("K", json()), c.cfg.domain);
    const double eps = get_or(p, "eps", c.cfg.overrides.mixing_eps);
    const MixingWitness w = mixing_witness(c.T, f, g, K, eps, get_or(p, "n", 8));
    json attempts = json::array();
    for (const auto& a : w.attempts)
        attempts.push_back(json{{"half_width", a.half_width}, {"res_U", real_to_json(a.res_U)}, {"res_V", real_to_json(a.res_V)}});
    c.witness["mixing"] = json{{"success", w.success}, {"res_U", real_to_json(w.res_U)}, {"res_V", real_to_json(w.res_V)},
                               {"half_width", w.half_width}, {"attempts", attempts}, {"h", to_json(w.h)}};
    c.quantities["mixing.res_U"] = w.res_U;
    c.quantities["mixing.res_V"] = w.res_V;
}

inline void task_fhc(Context& c) {
    const json p = c.params("fhc");
    const Overrides& o = c.cfg.overrides;
    const Exhaustion E = exhaustion_for(c.cfg.domain, o.M);
    std::vector<LaurentSeries> probes;
    if (p.contains("probes")) {
        for (const json& s : p.at("probes")) probes.push_back(parse_series(s, "fhc.probes"));
    } else {
        for (int k = -3; k <= 3; ++k) probes.push_back(LaurentSeries::monomial(1.0, k));
    }
    const int N = get_or(p, "N", 60);
    const int trials = get_or(p, "trials", 32);
    FhcOptions opt;
    opt.tolerance = o.fhc_tolerance;
    opt.M = o.M;
    json runs = json::array();
    bool all = true;
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const FhcReport r = fhc_series_check(c.T, probes[k], N, trials, o.seed + k, E, opt);
        auto ev = [](const SeriesEvidence& e) {
            return json{{"tail", real_to_json(e.tail)},
                        {"early_block", real_to_json(e.early_block)},
                        {"permutation", real_to_json(e.permutation)},
                        {"subseries", real_to_json(e.subseries)},
                        {"diverged", e.diverged}};
        };
        runs.push_back(json{{"probe", to_json(probes[k])},
                            {"passed", r.passed},
                            {"right_inverse_residual", real_to_json(r.right_inverse_residual)},
                            {"forward", ev(r.forward)},
                            {"backward", ev(r.backward)}});
        all = all && r.passed;
    }
    c.witness["fhc"] = json{{"passed", all}, {"runs", runs}};
    c.quantities["fhc.passed"] = all ? 1.0 : 0.0;
}

inline void task_geometry(Context& c) {
    using namespace geometry;
    const json p = c.params("geometry");
    const Overrides& o = c.cfg.overrides;
    GridSet K;
    if (p.contains("compact")) {
        K = parse_grid(p.at("compact"), c.cfg.base_dir, "geometry.compact");
    } else {
        std::optional<Rect> clip;
        if (p.contains("clip")) {
            const json& r = p.at("clip");
            if (!r.is_array() || r.size() != 4) bad("geometry.clip: expected [x0, y0, x1, y1]");
            clip = Rect{r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()};
        }
        K = grid_compact(c.cfg.domain, o.resolution, clip);
    }
    const Symbol psi = c.T.symbol();
    const RunAwayResult ra = run_away_index(psi, K, get_or(p, "N", o.horizon));
    json g{{"cells", K.size()},
           {"resolution", K.resolution()},
           {"holes", hole_count(K)},
           {"connected", is_connected(K)},
           {"omega_convex", std::string(to_string(is_omega_convex(K, c.cfg.domain)))},
           {"run_away", json{{"first", ra.first ? json(*ra.first) : json(nullptr)},
                             {"strong", ra.strong},
                             {"status", std::string(to_string(ra.status))}}}};
    if (is_connected(K) && hole_count(K) >= 2) {
        json u = json::array();
        for (Tri t : union_convexity_check(psi, K, get_or(p, "N0", 0), get_or(p, "N1", 3), c.cfg.domain))
            u.push_back(std::string(to_string(t)));
        g["union_convexity"] = u;
    }
    c.witness["geometry"] = g;
    c.quantities["geometry.holes"] = static_cast<double>(hole_count(K));
    if (ra.first) c.quantities["geometry.run_away_first"] = *ra.first;
}

inline json report_json(const Context& c, const RunResult& res) {
    json r = to_json(c.report);
    r["classified"] = c.classified;
    r["operator"] = c.cfg.echo.value("operator", json());
    r["domain"] = c.cfg.echo.value("domain", json());
    r["tasks"] = c.cfg.tasks;
    r["seed"] = c.cfg.overrides.seed;
    json exit{{"code", res.exit_code}, {"reason", res.reason}};
    if (!res.message.empty()) exit["message"] = res.message;
    r["exit"] = exit;
    return r;
}

}  // namespace detail

/// Parses and validates a run configuration. Relative paths resolve against `base_dir`.
inline RunConfig parse_run_config(const json& j, const std::string& base_dir = ".") {
    using detail::bad;
    if (!j.is_object()) bad("config: expected an object");
    RunConfig cfg;
    cfg.base_dir = base_dir;
    const json& op = detail::field(j, "operator", "config");
    cfg.omega = parse_multiplier(detail::field(op, "omega", "operator"), "operator.omega");
    cfg.psi = parse_symbol(detail::field(op, "symbol", "operator"), "operator.symbol");
    cfg.domain = parse_domain(detail::field(j, "domain", "config"), base_dir);
    cfg.echo = json{{"operator", op}, {"domain", j.at("domain")}};
    const json& tasks = detail::field(j, "tasks", "config");
    if (!tasks.is_array() || tasks.empty()) bad("config.tasks: expected a nonempty array");
    for (const json& t : tasks) {
        if (!t.is_string()) bad("config.tasks: expected task names");
        const auto name = t.get<std::string>();
        if (std::find(kTasks.begin(), kTasks.end(), name) == kTasks.end()) bad("config.tasks: unknown task '" + name + "'");
        cfg.tasks.push_back(name);
    }
    cfg.overrides = detail::parse_overrides(j.value("overrides", json()));
    if (j.contains("params")) {
        if (!j.at("params").is_object()) bad("config.params: expected an object");
        cfg.params = j.at("params");
    }
    if (j.contains("output")) cfg.out_dir = j.at("output").get<std::string>();
    return cfg;
}

/// Runs the tasks in order and writes report.json plus the artifacts they produce.
inline RunResult run(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    RunResult res;
    const fs::path out(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        res.exit_code = 2;
        res.reason = "validation";
        res.message = "cannot create output directory " + cfg.out_dir;
        return res;
    }

    OperatorConfig oc;
    oc.series.window = Window{-cfg.overrides.window, cfg.overrides.window};
    oc.series.nodes = cfg.overrides.nodes;
    std::optional<WeightedCompositionOp> T;
    std::optional<detail::Context> ctx;
    try {
        T.emplace(cfg.omega, cfg.psi, cfg.domain, oc);
        ctx.emplace(detail::Context{cfg, *T, out, {}, false, json::object(), {}});
        for (const std::string& task : cfg.tasks) {
            if (task == "classify") detail::task_classify(*ctx);
            else if (task == "orbit") detail::task_orbit(*ctx);
            else if (task == "eigenfunction") detail::task_eigenfunction(*ctx);
            else if (task == "pseudoshift") detail::task_pseudoshift(*ctx);
            else if (task == "mixing-witness") detail::task_mixing(*ctx);
            else if (task == "fhc") detail::task_fhc(*ctx);
            else if (task == "geometry") detail::task_geometry(*ctx);
        }
    } catch (const Error& e) {
        res.exit_code = exit_code_for(e.reason());
        res.reason = std::string(to_string(e.reason()));
        res.message = e.what();
    } catch (const std::exception& e) {
        res.exit_code = 3;
        res.reason = "numerical";
        res.message = e.what();
    }

    if (!ctx) {
        res.report = json{{"exit", json{{"code", res.exit_code}, {"reason", res.reason}, {"message", res.message}}}};
        detail::write_text(out / "report.json", res.report.dump(2) + "\n");
        return res;
    }
    detail::Context& c = *ctx;
    if (!c.witness.empty()) {
        detail::write_text(out / "witness.json", c.witness.dump(2) + "\n");
        c.report.witnesses.push_back("witness.json");
    }
    if (!c.quantities.empty()) {
        std::string csv = "name,value\n";
        for (const auto& [k, v] : c.quantities) csv += k + "," + real_to_json(v).dump() + "\n";
        detail::write_text(out / "quantities.csv", csv);
        c.report.witnesses.push_back("quantities.csv");
    }
    std::sort(c.report.witnesses.begin(), c.report.witnesses.end());
    res.report = detail::report_json(c, res);
    detail::write_text(out / "report.json", res.report.dump(2) + "\n");
    return res;
}

/// Machine-readable one-line error record.
inline std::string error_line(int code, const std::string& reason, const std::string& message) {
    return json{{"error", json{{"code", code}, {"reason", reason}, {"message", message}}}}.dump();
}

/// Loads `path`, applies the command-line overrides and runs it. Parse failures map to
/// exit 2 without artifacts.
inline RunResult run_file(const std::string& path, const std::optional<std::string>& out_dir,
                          const std::optional<std::uint64_t>& seed) {
    RunResult res;
    try {
        const json j = read_json_file(path);
        const std::filesystem::path p(path);
        RunConfig cfg = parse_run_config(j, p.has_parent_path() ? p.parent_path().string() : std::string("."));
        if (out_dir) cfg.out_dir = *out_dir;
        if (seed) cfg.overrides.seed = *seed;
        return run(cfg);
    } catch (const Error& e) {
        res.exit_code = exit_code_for(e.reason());
        res.reason = std::string(to_string(e.reason()));
        res.message = e.what();
    } catch (const json::exception& e) {
        res.exit_code = 2;
        res.reason = "validation";
        res.message = e.what();
    }
    return res;
}

}  // namespace holodyn::io
