// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/cli.hpp"

#include "chanest/config.hpp"
#include "chanest/csv.hpp"
#include "chanest/errors.hpp"
#include "chanest/experiments.hpp"
#include "chanest/model.hpp"
#include "chanest/selftest.hpp"

#include <iomanip>
#include <ostream>

namespace chanest {

namespace {

SystemConfig resolve_config(const CliInvocation& inv)
{
    SystemConfig base;
    if (inv.env_seed)
        apply_setting(base, "master_seed", *inv.env_seed);
    std::vector<std::string> overrides = inv.overrides;
    if (inv.seed_override)
        overrides.push_back("master_seed=" + std::to_string(*inv.seed_override));
    if (inv.config_path)
        return load_config(*inv.config_path, overrides, base);
    return parse_config("", overrides, base);
}

void print_header(const char* study, const SystemConfig& c, std::ostream& out)
{
    out << study << ": n_rx=" << c.n_rx << " n_tx=" << c.n_tx << " blocks=" << c.n_blocks
        << " inner=" << c.n_inner_iters << " ensemble=" << c.n_ensemble << " particles=" << c.n_particles
        << " runs=" << c.n_mc_runs << " seed=" << c.master_seed << "\n";
    out << "config digest " << config_digest(c) << ", alpha " << std::setprecision(6) << channel_alpha(c) << "\n";
}

void print_series_summary(const std::vector<MetricsSeries>& series, const char* axis, std::ostream& out)
{
    out << "  algorithm   mean rmse      mean sample variance  (over " << axis << ")\n";
    for (const auto& s : series) {
        out << "  " << std::left << std::setw(10) << s.algorithm << std::right << "  " << std::setw(12)
            << format_fixed9(series_mean(s.rmse)) << "  " << std::setw(12) << format_fixed9(series_mean(s.sample_variance))
            << "\n";
    }
}

int run_selftest_command(std::ostream& out)
{
    int failures = 0;
    for (const auto& c : run_selftest()) {
        out << (c.passed ? "PASS  " : "FAIL  ") << c.name;
        if (!c.passed) {
            out << " (" << c.detail << ")";
            ++failures;
        }
        out << "\n";
    }
    out << (failures ? std::to_string(failures) + " check(s) failed\n" : std::string("all checks passed\n"));
    return failures ? kExitSelftestFailure : kExitOk;
}

} // namespace

int run_cli(const CliInvocation& inv, std::ostream& out, std::ostream& err)
{
    if (inv.subcommand == Subcommand::selftest)
        return run_selftest_command(out);

    SystemConfig config;
    try {
        config = resolve_config(inv);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        const RunOptions options{inv.n_threads};
        switch (inv.subcommand) {
        case Subcommand::track: {
            print_header("track", config, out);
            const TrackingResult r = run_tracking_experiment(config, options);
            for (const auto& p : emit_csv(r, inv.output_dir))
                out << "wrote " << p.string() << "\n";
            out << "coefficient g(" << config.track_rx << "," << config.track_tx << "), real part\n";
            print_series_summary(r.block_series, "blocks", out);
            break;
        }
        case Subcommand::converge: {
            print_header("converge", config, out);
            const ConvergenceResult r = run_convergence_experiment(config, options);
            for (const auto& p : emit_csv(r, inv.output_dir))
                out << "wrote " << p.string() << "\n";
            out << "coefficient g(" << r.coeff_rx << "," << r.coeff_tx << ") = " << std::fixed << std::setprecision(4)
                << r.sample_truth << std::defaultfloat << " in run 0, real part\n";
            print_series_summary(r.series, "iterations", out);
            break;
        }
        case Subcommand::oracle: {
            print_header("oracle", config, out);
            const OracleReport r = run_oracle_comparison(config, options);
            out << "wrote " << write_text_file(inv.output_dir, "oracle.csv", oracle_csv(r)).string() << "\n";
            out << "  algorithm   rms deviation / oracle std\n";
            for (const auto& s : r.series)
                out << "  " << std::left << std::setw(10) << s.algorithm << std::right << "  "
                    << format_fixed9(s.overall_normalized_rms) << "\n";
            out << "  shared-forecast mean gap " << r.shared_forecast_max_gap << "\n";
            break;
        }
        case Subcommand::selftest:
            break;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitOk;
}

} // namespace chanest
