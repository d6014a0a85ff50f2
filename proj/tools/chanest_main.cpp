// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Massive-MIMO uplink channel estimation with ensemble square-root and particle filters"};
    app.require_subcommand(1);

    chanest::CliInvocation inv;
    if (const char* env = std::getenv("CHANEST_SEED"))
        inv.env_seed = env;

    struct Command {
        const char* name;
        const char* help;
        chanest::Subcommand kind;
    };
    const Command commands[] = {
        {"track", "Monte Carlo tracking study over transmission blocks", chanest::Subcommand::track},
        {"converge", "Within-block convergence study on the first block", chanest::Subcommand::converge},
        {"oracle", "Compare every filter with the exact Kalman posterior", chanest::Subcommand::oracle},
        {"selftest", "Run the built-in invariant checks", chanest::Subcommand::selftest},
    };

    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->callback([&inv, kind = c.kind] { inv.subcommand = kind; });
        if (c.kind == chanest::Subcommand::selftest)
            continue;
        sub->add_option_function<std::string>("--config", [&inv](const std::string& p) { inv.config_path = p; },
                                              "Flat key = value config file");
        sub->add_option("--out", inv.output_dir, "Output directory for CSV files")->capture_default_str();
        sub->add_option_function<std::uint64_t>("--seed", [&inv](std::uint64_t s) { inv.seed_override = s; },
                                                "Master seed (overrides file and --set)");
        sub->add_option("--set", inv.overrides, "key=value override, repeatable")->allow_extra_args(false);
        sub->add_option("--threads", inv.n_threads, "Worker threads (0 = hardware count)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : chanest::kExitConfigError;
    }
    return chanest::run_cli(inv, std::cout, std::cerr);
}
