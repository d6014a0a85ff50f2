// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace chanest {

enum class Subcommand { track, converge, oracle, selftest };

struct CliInvocation {
    Subcommand subcommand = Subcommand::track;
    std::optional<std::string> config_path;
    std::vector<std::string> overrides; ///< key=value, applied in order after the file
    std::string output_dir = ".";
    std::optional<std::uint64_t> seed_override;     ///< --seed, highest precedence
    std::optional<std::string> env_seed;            ///< CHANEST_SEED, lowest precedence
    unsigned n_threads = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;
inline constexpr int kExitSelftestFailure = 3;

/// Executes one invocation, writing the summary to `out` and diagnostics to
/// `err`. Returns the process exit code.
int run_cli(const CliInvocation& invocation, std::ostream& out, std::ostream& err);

} // namespace chanest
