// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#pragma once

#include "chanest/experiments.hpp"
#include "chanest/metrics.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace chanest {

/// Fixed-point, nine digits after the decimal point, locale-independent.
std::string format_fixed9(double value);

/// `algorithm,<block|iteration>,rmse,sample_variance` rows sorted by
/// (algorithm, index), newline-terminated. All series must share one axis.
std::string metrics_csv(const std::vector<MetricsSeries>& series);

/// `block,truth_real,est_sir,est_ensrf,est_puensrf`.
std::string trace_csv(const std::vector<TraceRow>& rows);

/// `algorithm,block,rms_deviation,normalized_rms,spread_ratio`.
std::string oracle_csv(const OracleReport& report);

/// Parses metrics_csv output back into series (axis from the header).
std::vector<MetricsSeries> parse_metrics_csv(const std::string& text);

/// Writes text to dir/name, creating dir. Failures throw std::runtime_error.
std::filesystem::path write_text_file(const std::filesystem::path& dir, const std::string& name,
                                      const std::string& text);

/// tracking.csv, convergence.csv (block-1 iterations) and trace.csv.
std::vector<std::filesystem::path> emit_csv(const TrackingResult& result, const std::filesystem::path& output_dir);

/// convergence.csv only.
std::vector<std::filesystem::path> emit_csv(const ConvergenceResult& result, const std::filesystem::path& output_dir);

} // namespace chanest
