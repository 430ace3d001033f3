#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "teich/cli.hpp"

int main(int argc, char** argv)
{
    using teich::cli::Command;
    using teich::cli::Format;

    CLI::App app{"Teichmueller and Thurston metrics on the flat and once-punctured torus"};
    app.require_subcommand(1);

    teich::cli::RunConfig cfg;
    std::string format = "json";

    const std::map<std::string, std::string> help{
        {"dist-teich", "Teichmueller distance between two flat tori (Kerckhoff sup over slopes)"},
        {"dist-thurston", "directed Thurston distance between two punctured tori"},
        {"norm-teich", "Teichmueller Finsler norm of a tangent vector on the flat torus"},
        {"norm-thurston", "Thurston Finsler norm of a chart tangent vector on the punctured torus"},
        {"dual-sphere", "sample the dual sphere of extremal-length differentials"},
        {"converge-boundary", "normalized length functional along Dehn twists (CSV)"},
        {"converge-gm", "normalized extremal-length functional along torus twists (CSV)"},
        {"gardiner-check", "compare the first variation of extremal length with its gradient"},
    };

    std::map<CLI::App*, Command> subs;
    for (const auto& [name, cmd] : teich::cli::command_names()) {
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        subs[sub] = cmd;
        sub->add_option("--from", cfg.from, "start point");
        sub->add_option("--to", cfg.to, "end point");
        sub->add_option("--at", cfg.at, "base point");
        sub->add_option("--vec", cfg.vec, "tangent vector vx,vy (chart velocity for the punctured torus)");
        sub->add_option("--slope", cfg.slope, "slope p/q");
        sub->add_option("--weight", cfg.weight, "transverse weight");
        sub->add_option("--twist", cfg.twist, "twisting curve 1/0, 0/1 or 1/1");
        sub->add_option("--slopes", cfg.slopes, "slopes to tabulate")->delimiter(',');
        sub->add_option("--ks", cfg.ks, "twist counts")->delimiter(',');
        sub->add_option("--samples", cfg.samples, "number of dual-sphere samples");
        sub->add_option("--tol", cfg.tol, "absolute tolerance on the supremum");
        sub->add_option("--max-depth", cfg.max_depth, "Stern-Brocot depth limit")->check(CLI::PositiveNumber);
        sub->add_option("--output,-o", cfg.output_path, "output file (default stdout)");
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_flag("--require-certified", cfg.require_certified, "exit 3 when the result is not certified");
    }

    CLI11_PARSE(app, argc, argv);

    for (const auto& [sub, cmd] : subs) {
        if (sub->parsed()) {
            cfg.command = cmd;
        }
    }
    cfg.format = format == "csv" ? Format::csv : Format::json;
    if (cfg.tol < 0.0) {
        std::cerr << "error: --tol must be positive\n";
        return 2;
    }
    return teich::cli::run(cfg, std::cout, std::cerr);
}
