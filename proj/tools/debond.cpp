#include <iostream>

#include "CLI11.hpp"
#include "debond/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Dynamic debonding: simulation, reachability checks and control synthesis"};
    app.set_help_flag("--help", "Print this help message and exit");
    debond::CommandOptions opts;
    std::string out;
    double h = 0.0;
    std::string policy;

    app.add_option("command", opts.command, "Command to run")
        ->required()
        ->check(CLI::IsMember({"simulate", "initial-branch", "final-branch", "check-admissible", "synthesize",
                               "verify"}));
    app.add_option("--config", opts.config, "Scenario file (JSON)")->required();
    auto* out_opt = app.add_option("--out", out, "Output directory (overrides the config)");
    auto* h_opt = app.add_option("--h", h, "Step size (overrides the config)");
    auto* policy_opt = app.add_option("--policy", policy, "Final-branch policy")
                           ->check(CLI::IsMember({"prefer_static", "prefer_moving"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (*out_opt) {
        opts.out = out;
    }
    if (*h_opt) {
        opts.h = h;
    }
    if (*policy_opt) {
        opts.policy = policy;
    }
    return debond::run_command(opts, std::cout, std::cerr);
}
