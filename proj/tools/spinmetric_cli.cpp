// Command-line front end: evolve, sweep, lattice, gravity-check, convergence.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spinmetric/commands.hpp"
#include "spinmetric/config.hpp"
#include "spinmetric/errors.hpp"

int main(int argc, char** argv) {
    using namespace spinmetric;

    CLI::App app{"Spin coupled to two bosonic metric-fluctuation modes"};
    app.require_subcommand(1);

    struct Options {
        std::string config;
        std::string out;
        std::vector<std::string> overrides;
        int workers = 0;
    };
    Options opts;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"evolve", "Evolve one spin preparation and write trace.csv"},
        {"sweep", "Sweep G and write heatmap.csv and diagnostics.csv"},
        {"lattice", "Brick-wall band structure, Fermi points and Dirac coefficients"},
        {"gravity-check", "Bogoliubov parameters and quadratic-spectrum spacing"},
        {"convergence", "Fock-cutoff convergence of the observables"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config, "key=value config file");
        sub->add_option("--out", opts.out, "output directory");
        sub->add_option("--set", opts.overrides, "key=value override (repeatable)");
        if (name == "sweep") sub->add_option("--workers", opts.workers, "concurrent grid points");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : commands::kConfigError;
    }
    const std::string name = app.get_subcommands().front()->get_name();

    RunConfig config;
    try {
        if (!opts.config.empty()) config = RunConfig::from_file(opts.config);
        for (const auto& kv : opts.overrides) config.apply(kv);
        if (!opts.out.empty()) config.set("out", opts.out);
    } catch (const ConfigError& e) {
        std::cerr << "config error [" << e.key() << "]: " << e.what() << '\n';
        return commands::kConfigError;
    }
    return commands::run(name, config, opts.workers, std::cerr);
}
