// torsion: command-line front end for the analytic torsion workbench.

#include <cstdlib>
#include <iostream>
#include <unistd.h>

#include <CLI11.hpp>

#include "torsion/workbench.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Torsion workbench: Reidemeister, twisted and T-dual torsion of finite models"};
    app.set_version_flag("--version", "torsion 1.0.0");

    std::string command;
    std::string model;
    std::string format = "text";
    torsion::RunOptions options;
    std::string flux;
    double tol = 0.0, radius = 0.0;
    std::uint64_t seed = 0;

    app.add_option("command", command, "reidemeister | twisted | bundle-torsion | t-dual | verify-duality | deform | suite")
        ->required()
        ->check(CLI::IsMember(torsion::commands()));
    app.add_option("model", model, "model file (complex.v1 or bundle.v1) or builder expression such as cycle(3)");
    auto* flux_opt = app.add_option("--flux", flux, "twisted flux: zero, top(c), or a cochain json file");
    auto* radius_opt = app.add_option("--radius", radius, "override the fibre radius")->check(CLI::PositiveNumber);
    auto* tol_opt = app.add_option("--tol", tol, "relative kernel tolerance (exploratory commands only)")
                        ->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "seed for a bare random model");
    app.add_option("--steps", options.steps, "deformation samples")->check(CLI::PositiveNumber);
    app.add_option("--path", options.path, "deformation path")
        ->check(CLI::IsMember({"constant", "gram", "flux", "curvature"}));
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));

    CLI11_PARSE(app, argc, argv);

    if (*flux_opt)
        options.flux = flux;
    if (*radius_opt)
        options.radius = radius;
    if (*tol_opt)
        options.tol = tol;
    if (*seed_opt)
        options.seed = seed;
    if (command != "suite" && model.empty()) {
        std::cerr << "error: " << command << " needs a model\n";
        return 2;
    }

    try {
        const torsion::Report report = torsion::run(command, model, options);
        const bool color = format == "text" && std::getenv("TORSION_NO_COLOR") == nullptr && isatty(STDOUT_FILENO);
        std::cout << torsion::emit(report, format == "json" ? torsion::Format::Json : torsion::Format::Text, color);
        if (const auto* suite = std::get_if<torsion::SuiteSummary>(&report.result))
            return suite->all_passed() ? 0 : 1;
        return 0;
    } catch (const torsion::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
