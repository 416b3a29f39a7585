#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "holodyn/holodyn.hpp"

using namespace holodyn;
using io::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("holodyn_io_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Cli {
    int code = -1;
    std::string out;
    std::string err;
};

Cli run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd =
        std::string(HOLODYN_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Cli c;
    c.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    c.out = slurp(out);
    c.err = slurp(err);
    return c;
}

std::string sample(const std::string& name) { return std::string(HOLODYN_SAMPLES_DIR) + "/" + name; }

Reason reason_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.reason();
    }
    ADD_FAILURE() << "expected an Error";
    return Reason::Indeterminate;
}

json base_config() {
    return json::parse(R"({
        "operator": {"omega": {"n_min": 1, "coeffs": [1]}, "symbol": {"linear": 0.5}},
        "domain": "C*",
        "tasks": ["classify"]
    })");
}

}  // namespace

TEST(Parse, ComplexForms) {
    EXPECT_EQ(io::parse_complex(json(2.5)), cplx(2.5, 0.0));
    EXPECT_EQ(io::parse_complex(json::parse("[1, -2]")), cplx(1.0, -2.0));
    EXPECT_EQ(reason_of([] { io::parse_complex(json::parse("[1, 2, 3]")); }), Reason::Validation);
    EXPECT_EQ(reason_of([] { io::parse_complex(json("i")); }), Reason::Validation);
}

TEST(Parse, SeriesLiteral) {
    const auto s = io::parse_series(json::parse(R"({"n_min": -1, "coeffs": [[1,0], 2, [0,3]], "annulus": [0.5, "inf"]})"));
    EXPECT_EQ(s.n_min(), -1);
    ASSERT_EQ(s.coeffs().size(), 3U);
    EXPECT_EQ(s.coeff(1), cplx(0.0, 3.0));
    EXPECT_EQ(s.r_in(), 0.5);
    EXPECT_TRUE(std::isinf(s.r_out()));
    const cplx z{0.7, 0.4};
    EXPECT_NEAR(std::abs(s.evaluate(z) - (1.0 / z + 2.0 + cplx(0, 3) * z)), 0.0, 1e-14);
}

TEST(Parse, MalformedSeriesIsValidation) {
    for (const char* text : {R"({"coeffs": [1]})", R"({"n_min": 0, "coeffs": []})", R"({"n_min": 0.5, "coeffs": [1]})",
                             R"({"n_min": 0, "coeffs": [1], "annulus": [1]})", R"({"n_min": 0, "coeffs": [1], "extra": 1})",
                             R"([1, 2])"})
        EXPECT_EQ(reason_of([&] { io::parse_series(json::parse(text)); }), Reason::Validation) << text;
}

TEST(Parse, MultiplierForms) {
    const Multiplier a = io::parse_multiplier(json::parse(R"({"n_min": 2, "coeffs": [3]})"));
    EXPECT_TRUE(std::holds_alternative<LaurentSeries>(a));
    const Multiplier b = io::parse_multiplier(json::parse(R"({"k": -2, "W": {"n_min": 1, "coeffs": [1]}})"));
    ASSERT_TRUE(std::holds_alternative<SymbolicMultiplier>(b));
    EXPECT_EQ(std::get<SymbolicMultiplier>(b).k, -2);
    const cplx z{0.3, 1.1};
    EXPECT_NEAR(std::abs(evaluate(b, z) - std::exp(z) / (z * z)), 0.0, 1e-13);
}

TEST(Parse, SymbolClasses) {
    EXPECT_EQ(io::parse_symbol(json::parse(R"({"linear": [0, 1]})")).kind(), "linear");
    EXPECT_EQ(io::parse_symbol(json::parse(R"({"inversion": 2})")).kind(), "inversion");
    EXPECT_EQ(io::parse_symbol(json::parse(R"({"moebius": [1, 1, 0, 1]})")).kind(), "moebius");
    EXPECT_EQ(io::parse_symbol(json::parse(R"({"series": {"n_min": 1, "coeffs": [0.5, 0.1]}})")).kind(), "series");
    EXPECT_EQ(reason_of([] { io::parse_symbol(json::parse(R"({"shift": 1})")); }), Reason::Validation);
    EXPECT_EQ(reason_of([] { io::parse_symbol(json::parse(R"({"linear": 1, "inversion": 1})")); }), Reason::Validation);
}

TEST(Parse, DomainNamesAndObjects) {
    EXPECT_TRUE(io::parse_domain(json("C*")).as<PuncturedPlane>());
    const DomainSpec d = io::parse_domain(json::parse(R"({"type": "punctured_disc", "radius": 0.5})"));
    ASSERT_TRUE(d.as<PuncturedSimplyConnected>());
    EXPECT_EQ(d.as<PuncturedSimplyConnected>()->radius, 0.5);
    EXPECT_TRUE(io::parse_domain(json::parse(R"({"type": "annulus", "r": 3})")).as<AnnulusDomain>());
    const DomainSpec l =
        io::parse_domain(json::parse(R"({"type": "infinitely_connected", "lattice": {"spacing": 1, "radius": 0.25}})"));
    EXPECT_FALSE(l.contains({1.0, 1.0}));
    EXPECT_TRUE(l.contains({0.5, 0.5}));
    EXPECT_EQ(reason_of([] { io::parse_domain(json("torus")); }), Reason::Validation);
    EXPECT_EQ(reason_of([] { io::parse_domain(json::parse(R"({"type": "annulus", "r": 0.5})")); }), Reason::Validation);
}

TEST(Parse, RoundTripThroughJson) {
    const json series = json::parse(R"({"n_min": -2, "coeffs": [[1,0.5],[0,0],[-3,0]], "annulus": [0.25, 4.0]})");
    EXPECT_EQ(io::to_json(io::parse_series(series)), series);
    const json sym = json::parse(R"({"moebius": [[1,0],[2,0],[0,0],[1,0]]})");
    EXPECT_EQ(io::to_json(io::parse_symbol(sym)), sym);
    const json mult = json::parse(R"({"k": 3, "W": {"n_min": -1, "coeffs": [[1,0]], "annulus": [0.0, "inf"]}})");
    EXPECT_EQ(io::to_json(io::parse_multiplier(mult)), mult);
    const json grid = json::parse(R"({"k": 2, "cells": [[-1,0],[0,0],[3,4]]})");
    EXPECT_EQ(io::to_json(io::parse_grid(grid)), grid);
}

TEST(Pbm, PlainAndRawAgree) {
    std::istringstream plain("P1\n# comment\n4 3\n1 1 1 1\n1 0 0 1\n1 1 1 1\n");
    const auto a = io::read_pbm(plain, 3);
    EXPECT_EQ(a.size(), 10U);
    EXPECT_EQ(geometry::hole_count(a), 1U);
    EXPECT_TRUE(a.contains({0, 2}));   // top-left pixel is the highest row
    EXPECT_FALSE(a.contains({1, 1}));

    std::string raw = "P4\n4 3\n";
    raw += static_cast<char>(0xF0);
    raw += static_cast<char>(0x90);
    raw += static_cast<char>(0xF0);
    std::istringstream bin(raw);
    const auto b = io::read_pbm(bin, 3);
    EXPECT_EQ(a.cells(), b.cells());

    std::istringstream shifted("P1 2 1 1 1");
    const auto c = io::read_pbm(shifted, 1, -5, 7);
    EXPECT_TRUE(c.contains({-5, 7}));
    EXPECT_TRUE(c.contains({-4, 7}));
}

TEST(Pbm, BadInputIsValidation) {
    std::istringstream magic("P2\n1 1\n1\n");
    EXPECT_EQ(reason_of([&] { io::read_pbm(magic, 1); }), Reason::Validation);
    std::istringstream short_data("P1\n3 3\n1 1 1\n1 0");
    EXPECT_EQ(reason_of([&] { io::read_pbm(short_data, 1); }), Reason::Validation);
    std::istringstream short_raw("P4\n16 2\n\xff");
    EXPECT_EQ(reason_of([&] { io::read_pbm(short_raw, 1); }), Reason::Validation);
}

TEST(Config, TasksAndBounds) {
    json j = base_config();
    EXPECT_EQ(io::parse_run_config(j).tasks, std::vector<std::string>{"classify"});

    j["tasks"] = json::array();
    EXPECT_EQ(reason_of([&] { io::parse_run_config(j); }), Reason::Validation);
    j["tasks"] = json::array({"classify", "dance"});
    EXPECT_EQ(reason_of([&] { io::parse_run_config(j); }), Reason::Validation);

    j = base_config();
    j["overrides"] = json{{"window", 513}};
    EXPECT_EQ(reason_of([&] { io::parse_run_config(j); }), Reason::Validation);
    j["overrides"] = json{{"window", 512}, {"resolution", 10}};
    EXPECT_EQ(io::parse_run_config(j).overrides.window, 512);
    j["overrides"] = json{{"resolution", 11}};
    EXPECT_EQ(reason_of([&] { io::parse_run_config(j); }), Reason::Validation);
    j["overrides"] = json{{"thresholds", json{{"decay", 1e-7}, {"mixing_eps", 0.05}}}, {"seed", 99}};
    const auto cfg = io::parse_run_config(j);
    EXPECT_EQ(cfg.overrides.liang_zhou.decay, 1e-7);
    EXPECT_EQ(cfg.overrides.mixing_eps, 0.05);
    EXPECT_EQ(cfg.overrides.seed, 99U);
}

TEST(Config, ExitCodeMapping) {
    EXPECT_EQ(io::exit_code_for(Reason::Validation), 2);
    EXPECT_EQ(io::exit_code_for(Reason::Precondition), 2);
    EXPECT_EQ(io::exit_code_for(Reason::Domain), 2);
    EXPECT_EQ(io::exit_code_for(Reason::Numerical), 3);
    EXPECT_EQ(io::exit_code_for(Reason::Indeterminate), 3);
}

TEST(Run, ReportHasSortedKeysAndInfStrings) {
    const fs::path dir = scratch("inf");
    json j = base_config();
    j["operator"]["omega"] = json::parse(R"({"n_min": 1, "coeffs": [1], "annulus": [0, "inf"]})");
    auto cfg = io::parse_run_config(j);
    cfg.out_dir = dir.string();
    const auto res = io::run(cfg);
    EXPECT_EQ(res.exit_code, 0);
    const std::string text = slurp(dir / "report.json");
    EXPECT_NE(text.find("\"inf\""), std::string::npos);
    const json r = json::parse(text);
    EXPECT_EQ(r.at("status").at("satisfies_FHC"), "Yes");
    std::string prev;
    for (const auto& it : r.items()) {
        EXPECT_LT(prev, it.key());
        prev = it.key();
    }
}

TEST(Run, DeterministicArtifacts) {
    for (const char* name : {"cstar_fhc.json", "dstar_witnesses.json", "lattice_geometry.json"}) {
        const fs::path a = scratch(std::string("det_a_") + name);
        const fs::path b = scratch(std::string("det_b_") + name);
        ASSERT_EQ(io::run_file(sample(name), a.string(), std::uint64_t{5}).exit_code, 0) << name;
        ASSERT_EQ(io::run_file(sample(name), b.string(), std::uint64_t{5}).exit_code, 0) << name;
        for (const char* file : {"report.json", "witness.json", "quantities.csv", "orbit.csv"}) {
            EXPECT_EQ(fs::exists(a / file), fs::exists(b / file));
            if (fs::exists(a / file)) {
                EXPECT_EQ(slurp(a / file), slurp(b / file)) << name << " " << file;
            }
        }
    }
}

TEST(Run, NumericalFailureExitsThree) {
    const fs::path dir = scratch("numerical");
    json j = base_config();
    j["operator"]["omega"] = json::parse(R"({"n_min": 0, "coeffs": [-2, 1]})");
    j["tasks"] = json::array({"classify", "fhc"});
    auto cfg = io::parse_run_config(j);
    cfg.out_dir = dir.string();
    const auto res = io::run(cfg);
    EXPECT_EQ(res.exit_code, 3);
    EXPECT_EQ(res.reason, "numerical");
    const json r = json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(r.at("exit").at("code"), 3);
    EXPECT_EQ(r.at("exit").at("reason"), "numerical");
}

TEST(Run, PreconditionExitsTwo) {
    const fs::path dir = scratch("precondition");
    json j = base_config();
    j["tasks"] = json::array({"eigenfunction"});
    auto cfg = io::parse_run_config(j);
    cfg.out_dir = dir.string();
    const auto res = io::run(cfg);
    EXPECT_EQ(res.exit_code, 2);
    EXPECT_EQ(res.reason, "precondition");
}

TEST(Cli, CstarFhcConfig) {
    const fs::path dir = scratch("cli_fhc");
    const Cli c = run_cli("run --config " + sample("cstar_fhc.json") + " --out " + dir.string(), dir);
    EXPECT_EQ(c.code, 0) << c.err;
    const json r = json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(r.at("status").at("satisfies_FHC"), "Yes");
    EXPECT_EQ(r.at("status").at("frequently_hypercyclic"), "Yes");
    EXPECT_TRUE(r.at("audit").empty());
    EXPECT_TRUE(fs::exists(dir / "orbit.csv"));
}

TEST(Cli, AnnulusAllNo) {
    const fs::path dir = scratch("cli_annulus");
    const Cli c = run_cli("run --config " + sample("annulus.json") + " --out " + dir.string(), dir);
    EXPECT_EQ(c.code, 0) << c.err;
    const json r = json::parse(slurp(dir / "report.json"));
    for (const auto& [p, v] : r.at("status").items()) EXPECT_EQ(v, "No") << p;
}

TEST(Cli, MalformedSeriesExitsTwo) {
    const fs::path dir = scratch("cli_malformed");
    const Cli c = run_cli("run --config " + sample("malformed.json") + " --out " + dir.string(), dir);
    EXPECT_EQ(c.code, 2);
    const json e = json::parse(c.err);
    EXPECT_EQ(e.at("error").at("reason"), "validation");
}

TEST(Cli, UnparsableJsonExitsTwo) {
    const fs::path dir = scratch("cli_syntax");
    std::ofstream(dir / "bad.json") << "{\"operator\": ";
    const Cli c = run_cli("run --config " + (dir / "bad.json").string() + " --out " + dir.string(), dir);
    EXPECT_EQ(c.code, 2);
    EXPECT_NE(c.err.find("\"reason\":\"validation\""), std::string::npos);
}

TEST(Cli, SeedOverrideIsRecorded) {
    const fs::path dir = scratch("cli_seed");
    const Cli c = run_cli("run --config " + sample("cstar_witnesses.json") + " --out " + dir.string() + " --seed 123", dir);
    EXPECT_EQ(c.code, 0) << c.err;
    const json r = json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(r.at("seed"), 123);
    const json w = json::parse(slurp(dir / "witness.json"));
    EXPECT_TRUE(w.at("fhc").at("passed").get<bool>());
    EXPECT_TRUE(w.at("mixing").at("success").get<bool>());
}

TEST(Cli, ClassifyShorthand) {
    const fs::path dir = scratch("cli_shorthand");
    const Cli c = run_cli(R"(classify --omega '{"k":1,"W":{"n_min":-1,"coeffs":[1]}}' --symbol '{"linear":0.5}' --domain 'C*')",
                          dir);
    EXPECT_EQ(c.code, 0) << c.err;
    const json r = json::parse(c.out);
    EXPECT_EQ(r.at("status").at("satisfies_FHC"), "Yes");

    const Cli bad = run_cli(R"(classify --omega '{"n_min":0,"coeffs":' --symbol '{"linear":0.5}' --domain 'C*')", dir);
    EXPECT_EQ(bad.code, 2);

    const Cli conj = run_cli(R"(classify --omega '{"k":0,"W":{"n_min":-1,"coeffs":[1]}}' --symbol '{"linear":0.5}' --domain 'D*')",
                             dir);
    EXPECT_EQ(conj.code, 0) << conj.err;
    EXPECT_EQ(json::parse(conj.out).at("status").at("supercyclic"), "Unknown");
}

TEST(Cli, PbmDomainSample) {
    const fs::path dir = scratch("cli_pbm");
    const Cli c = run_cli("run --config " + sample("two_holes_pbm.json") + " --out " + dir.string(), dir);
    EXPECT_EQ(c.code, 0) << c.err;
    const json r = json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(r.at("status").at("supercyclic"), "No");
}

TEST(Cli, MissingSubcommandOrOptionExitsTwo) {
    const fs::path dir = scratch("cli_usage");
    EXPECT_EQ(run_cli("", dir).code, 2);
    EXPECT_EQ(run_cli("classify --omega 1", dir).code, 2);
}
