// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace chanest {

enum class Axis { block, iteration };
enum class Part { real, imag };

/// RMSE and cross-run sample variance of one algorithm's estimates of one
/// coefficient, indexed by block or by inner iteration.
struct MetricsSeries {
    std::string algorithm;
    Axis axis = Axis::block;
    std::vector<int> index;
    std::vector<double> rmse;
    std::vector<double> sample_variance;
    int coeff_rx = 1; ///< 1-based antenna
    int coeff_tx = 1; ///< 1-based user
    Part part = Part::real;
};

/// Per column: sqrt(mean_m (truth(m, k) - est(m, k))^2). Rows are Monte Carlo
/// runs. Sums are taken over sorted terms so the result does not depend on
/// the row order.
std::vector<double> rmse_series(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimates);

/// Per column: unbiased sample variance of the estimates across runs.
/// Needs at least two runs.
std::vector<double> sample_variance_series(const Eigen::MatrixXd& estimates);

/// Mean of a series, used for block-averaged summaries.
double series_mean(const std::vector<double>& values);

} // namespace chanest
