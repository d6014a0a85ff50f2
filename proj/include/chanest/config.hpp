// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chanest {

/// Every physical and algorithmic parameter of one experiment. Defaults are
/// the full-scale uplink scenario: 512 BS antennas, 128 users, 5 dB pilots,
/// 2 GHz carrier at 20 km/h, 2 ms blocks, 8 dB shadowing, pathloss 3.8.
struct SystemConfig {
    int n_rx = 512;
    int n_tx = 128;
    double uplink_power_db = 5.0;
    double noise_var = 1.0;

    double carrier_hz = 2e9;
    double velocity_mps = 20.0 / 3.6;
    double block_duration_s = 0.002;
    /// When set, replaces the Jakes-derived temporal correlation.
    std::optional<double> alpha;

    double shadow_std_db = 8.0;
    double pathloss_exp = 3.8;
    double ref_distance_m = 100.0;
    double min_distance_m = 100.0;
    double max_distance_m = 1000.0;

    int n_blocks = 50;
    int n_inner_iters = 128;
    int n_ensemble = 128;
    int n_particles = 128;
    int n_mc_runs = 50;

    double pseudo_noise_scale = 0.01;
    double anneal_factor = 0.97;
    /// Inflate the measurement noise by n_inner_iters in every inner-loop
    /// analysis, so repeated updates with one block's measurement add up to
    /// a single assimilation of it. When false, each inner iteration uses
    /// the raw noise variance and the loop drifts toward the LS estimate.
    bool temper_inner_updates = true;

    std::uint64_t master_seed = 1;

    // 1-based (antenna, user) of the coefficient reported by each study.
    int track_rx = 2;
    int track_tx = 2;
    int conv_rx = 4;
    int conv_tx = 1;

    /// Reuse run 0's channel trajectory in every Monte Carlo run, so runs
    /// differ only in noise and filter randomness.
    bool shared_trajectory = false;
};

/// Throws ConfigError naming the first offending key.
void validate(const SystemConfig& config);

/// Applies one `key=value` (whitespace around either side allowed).
/// Unknown keys and unparsable values throw ConfigError.
void apply_setting(SystemConfig& config, std::string_view key, std::string_view value);

/// Parses a flat `key = value` document (`#` starts a comment) on top of
/// `base`, then applies `overrides` in order, then validates.
SystemConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {},
                          SystemConfig base = {});

/// Reads and parses a config file; I/O failures surface as ConfigError.
SystemConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {},
                         SystemConfig base = {});

/// Canonical `key = value` listing of every field, parseable by parse_config.
std::string to_text(const SystemConfig& config);

/// 64-bit FNV-1a over to_text(config), as 16 hex digits.
std::string config_digest(const SystemConfig& config);

/// The reduced-size configuration used for everyday runs: 32 antennas,
/// 8 users, 50 runs of 50 blocks, 32 inner iterations.
SystemConfig desk_config();

} // namespace chanest
