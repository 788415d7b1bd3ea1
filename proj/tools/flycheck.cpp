#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "flycheck/bench.hpp"
#include "flycheck/errors.hpp"

using namespace flycheck;

int main(int argc, char** argv) {
    // PRISM spells the override flag with a single dash.
    std::vector<std::string> args(argv, argv + argc);
    for (auto& a : args) {
        if (a == "-const") a = "--const";
        if (a.rfind("-const=", 0) == 0) a = "-" + a;
    }

    CLI::App app{"flycheck: on-the-fly PCTL model checking of DTMCs"};
    app.require_subcommand(1);

    bench::RunConfig cfg;
    std::string engine = "onthefly";
    std::string format = "text";
    std::string consts;
    std::string props_path;
    bool keep_going = false;

    auto* check = app.add_subcommand("check", "check PCTL properties against a model");
    check->add_option("model", cfg.model_path, "model file")->required();
    check->add_option("--props", props_path, "property file");
    check->add_option("--prop", cfg.inline_props, "inline property (repeatable)");
    check->add_option("--const", consts, "constant overrides name=value,...");
    check->add_option("--epsilon", cfg.epsilon, "accuracy of unbounded until")->capture_default_str();
    check->add_option("--engine", engine, "onthefly or global")
        ->check(CLI::IsMember({"onthefly", "global"}))
        ->capture_default_str();
    check->add_flag("--converge-initial-only", cfg.converge_initial_only,
                    "stop iterating once the initial state has converged");
    check->add_option("--state-cap", cfg.state_cap, "maximum number of records or states")->capture_default_str();
    check->add_flag("--stats", cfg.stats, "print engine counters");
    check->add_option("--format", format, "text or jsonl")->check(CLI::IsMember({"text", "jsonl"}))->capture_default_str();
    check->add_option("--bound-tolerance", cfg.bound_tolerance, "widen P-bound comparisons")->capture_default_str();
    check->add_flag("--no-fail-on-false", keep_going, "exit 0 even if a property is false");

    unsigned herman_n = 0;
    auto* gen = app.add_subcommand("gen-herman", "print Herman's ring model for N processes");
    gen->add_option("N", herman_n, "odd ring size >= 3")->required();

    try {
        std::vector<const char*> cargv;
        for (const auto& a : args) cargv.push_back(a.c_str());
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*gen) {
        try {
            std::cout << bench::generate_herman(herman_n);
            return 0;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }

    try {
        if (!props_path.empty()) cfg.props_path = props_path;
        if (!consts.empty()) cfg.overrides = prism::parse_overrides(consts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    cfg.engine = engine == "global" ? bench::EngineKind::global : bench::EngineKind::onthefly;
    cfg.format = format == "jsonl" ? bench::OutputFormat::jsonl : bench::OutputFormat::text;
    cfg.fail_on_false = !keep_going;
    return bench::run(cfg, std::cout, std::cerr).exit_code;
}
