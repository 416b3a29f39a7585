// holodyn: batch front end for the classifier and witness pipelines.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "holodyn/holodyn.hpp"

namespace {

using namespace holodyn;
using io::json;

int classify_shorthand(const std::string& omega, const std::string& symbol, const std::string& domain,
                       const std::optional<std::string>& out) {
    try {
        json cfg{{"operator", json{{"omega", io::parse_literal(omega, "--omega")},
                                   {"symbol", io::parse_literal(symbol, "--symbol")}}},
                 {"domain", io::parse_literal(domain, "--domain")},
                 {"tasks", json::array({"classify"})}};
        io::RunConfig rc = io::parse_run_config(cfg);
        if (out) {
            rc.out_dir = *out;
            const io::RunResult r = io::run(rc);
            std::cout << r.report.dump(2) << "\n";
            if (r.exit_code != 0) std::cerr << io::error_line(r.exit_code, r.reason, r.message) << "\n";
            return r.exit_code;
        }
        OperatorConfig oc;
        oc.series.window = Window{-rc.overrides.window, rc.overrides.window};
        const WeightedCompositionOp T(rc.omega, rc.psi, rc.domain, oc);
        json report = io::to_json(classify(T));
        report["operator"] = cfg["operator"];
        report["domain"] = cfg["domain"];
        std::cout << report.dump(2) << "\n";
        return 0;
    } catch (const Error& e) {
        const int code = io::exit_code_for(e.reason());
        std::cerr << io::error_line(code, std::string(to_string(e.reason())), e.what()) << "\n";
        return code;
    } catch (const json::exception& e) {
        std::cerr << io::error_line(2, "validation", e.what()) << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted composition operator classifier"};
    app.require_subcommand(1);

    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "Run the tasks of a JSON config");
    run->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "Output directory (overrides the config)");
    run->add_option("--seed", seed, "Random seed (overrides the config)");

    std::string omega, symbol, domain;
    std::optional<std::string> cls_out;
    auto* cls = app.add_subcommand("classify", "Classify one operator and print the report");
    cls->add_option("--omega", omega, "Multiplier literal (series JSON or {\"k\",\"W\"})")->required();
    cls->add_option("--symbol", symbol, "Symbol literal, e.g. {\"linear\":0.5}")->required();
    cls->add_option("--domain", domain, "Domain literal or name (C*, D*)")->required();
    cls->add_option("--out", cls_out, "Also write report.json here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (*run) {
        const io::RunResult r = io::run_file(config, out, seed);
        if (r.exit_code != 0) std::cerr << io::error_line(r.exit_code, r.reason, r.message) << "\n";
        return r.exit_code;
    }
    return classify_shorthand(omega, symbol, domain, cls_out);
}
