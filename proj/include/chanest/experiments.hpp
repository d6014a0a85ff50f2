// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#pragma once

#include "chanest/config.hpp"
#include "chanest/metrics.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace chanest {

enum class Algorithm { sir, ensrf, puensrf, oracle, ls };

/// Lowercase label used in CSV files: sir, ensrf, puensrf, oracle, ls.
std::string algorithm_label(Algorithm a);

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::sir, Algorithm::ensrf, Algorithm::puensrf,
                                               Algorithm::oracle, Algorithm::ls};

struct RunOptions {
    /// Worker threads for Monte Carlo runs; 0 picks the hardware count.
    /// Results do not depend on this value.
    unsigned n_threads = 0;
};

/// One Monte Carlo run's estimates of the tracked coefficient, one vector per
/// algorithm in kAllAlgorithms order.
struct RunRecord {
    int run_index = 0;
    std::uint64_t seed = 0;
    std::vector<double> truth;
    std::vector<std::vector<double>> estimates;
};

struct TraceRow {
    int block = 0;
    double truth_real = 0.0;
    double est_sir = 0.0;
    double est_ensrf = 0.0;
    double est_puensrf = 0.0;
};

struct TrackingResult {
    std::vector<MetricsSeries> block_series;     ///< one per algorithm, indexed by block (1-based)
    std::vector<MetricsSeries> iteration_series; ///< block 1, indexed by inner iteration (0 = prior)
    std::vector<TraceRow> trace;                 ///< run 0, truth vs estimates per block
    double alpha = 0.0;
};

/// Monte Carlo tracking study over all blocks. Run m uses seed
/// master_seed + m. Only the tracked user's column is filtered; the per-user
/// problems are independent under unitary pilots.
TrackingResult run_tracking_experiment(const SystemConfig& config, const RunOptions& options = {});

struct ConvergenceResult {
    std::vector<MetricsSeries> series; ///< indexed by inner iteration 0..n_inner_iters
    double sample_truth = 0.0;         ///< run 0's true coefficient (real part)
    int coeff_rx = 1;
    int coeff_tx = 1;
};

/// Within-block convergence study on the first block, tracking
/// (conv_rx, conv_tx).
ConvergenceResult run_convergence_experiment(const SystemConfig& config, const RunOptions& options = {});

struct OracleSeries {
    std::string algorithm;
    std::vector<double> rms_deviation;      ///< per block, absolute, over runs and components
    std::vector<double> normalized_rms;     ///< per block, deviation / oracle posterior std
    std::vector<double> spread_ratio;       ///< per block, mean filter variance / mean oracle variance
    double overall_normalized_rms = 0.0;    ///< over all blocks, runs and components
};

struct OracleReport {
    std::vector<OracleSeries> series; ///< sir, ensrf, puensrf, ls
    /// Largest |mean(PUEnSRF update) - EnSRF mean| when both updates are
    /// applied to the same forecast ensemble.
    double shared_forecast_max_gap = 0.0;
    double mean_oracle_std = 0.0;
};

/// Compares every filter against the exact Kalman posterior of the tracked
/// user. Forces one analysis per block and no pseudo-dynamic jitter, so
/// each filter targets the same Bayes posterior as the oracle.
OracleReport run_oracle_comparison(const SystemConfig& config, const RunOptions& options = {});

/// Index of the first entry of a centred moving average (window `window`,
/// truncated at the ends) that is below factor * its last entry.
int first_drop_index(const std::vector<double>& series, double factor, int window = 5);

const MetricsSeries& find_series(const std::vector<MetricsSeries>& set, const std::string& algorithm);

} // namespace chanest
