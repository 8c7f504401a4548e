// hqsolve: solve, validate, inspect and export Hessian-quotient curvature
// problems described by an INI config.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hq/errors.hpp"
#include "hq/run.hpp"
#include "hq/selftest.hpp"

namespace {

std::optional<hq::RunConfig> load(const std::string& path, int& code) {
    try {
        return hq::load_config(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = hq::exit_code_for(e);
        return std::nullopt;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prescribed Hessian-quotient curvature solver for star-shaped hypersurfaces"};
    app.require_subcommand(1);
    app.footer(
        "Exit codes: 0 ok, 2 config/prescription, 3 validation, 4 cone violation, 5 stalled, 6 I/O.\n"
        "Set HQ_OUTPUT_DIR to override output.directory.");

    std::string config, csv;
    auto* solve = app.add_subcommand("solve", "validate the prescription and run the continuation");
    solve->add_option("config", config, "config file")->required();
    auto* validate = app.add_subcommand("validate", "check the structural assumptions on f");
    validate->add_option("config", config, "config file")->required();
    auto* selftest = app.add_subcommand("selftest", "run the built-in property suites");
    selftest->add_option("config", config, "optional config for the fixed-point suite");
    auto* exporter = app.add_subcommand("export", "write mesh.obj for a stored rho.csv");
    exporter->add_option("config", config, "config file")->required();
    exporter->add_option("rho_csv", csv, "field written by solve")->required();
    auto* geometry = app.add_subcommand("geometry", "print the bounds snapshot of a stored rho.csv");
    geometry->add_option("config", config, "config file")->required();
    geometry->add_option("rho_csv", csv, "field written by solve")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : hq::kExitConfig;
    }

    int code = hq::kExitConfig;
    if (*selftest) {
        if (config.empty()) return hq::run_selftest(nullptr, std::cout);
        const auto cfg = load(config, code);
        return cfg ? hq::run_selftest(&*cfg, std::cout) : code;
    }
    const auto cfg = load(config, code);
    if (!cfg) return code;
    if (*solve) return hq::run_solve(*cfg, std::cout);
    if (*validate) return hq::run_validate(*cfg, std::cout);
    if (*exporter) return hq::run_export(*cfg, csv, std::cout);
    return hq::run_geometry(*cfg, csv, std::cout);
}
