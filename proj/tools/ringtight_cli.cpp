// Command-line front end: one-pass tightening plans for ring-type flange
// joints against the virtual bench. See README for config format.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ringtight/commands.hpp"
#include "ringtight/config.hpp"
#include "ringtight/errors.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::optional<std::string> output_dir;
    std::optional<std::string> loads_file;
};

void add_common(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("-c,--config", opts.config_path, "run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("-o,--output", opts.output_dir, "override output.dir");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-pass bolt tightening plans for ring type joints"};
    app.require_subcommand(1);

    CliOptions opts;
    const char* names[] = {"coefficients", "matrix", "optimize", "simulate", "validate", "sweep"};
    const char* briefs[] = {
        "run the two-load-step protocol and report the four interaction coefficients",
        "emit the interaction matrix [A] as CSV",
        "solve for the initial loads that reach a uniform target",
        "run an initial-loads CSV through the bench",
        "optimize, then re-simulate and report the deviation from target",
        "run every listed coefficient set x pattern combination"};
    for (int i = 0; i < 6; ++i) {
        CLI::App* cmd = app.add_subcommand(names[i], briefs[i]);
        add_common(cmd, opts);
        if (std::string(names[i]) == "simulate")
            cmd->add_option("--loads", opts.loads_file, "initial loads CSV (overrides run.loads_file)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // bad arguments are validation errors
    }

    try {
        ringtight::RunConfig cfg = ringtight::parse_config(opts.config_path);
        if (opts.output_dir) cfg.output_dir = *opts.output_dir;
        if (opts.loads_file) cfg.loads_file = *opts.loads_file;
        ringtight::Command command =
            ringtight::command_from_string(app.get_subcommands().front()->get_name());
        ringtight::CommandOutcome outcome = ringtight::run_command(command, cfg);
        std::cout << outcome.report;
        return 0;
    } catch (const ringtight::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ringtight::ComputationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
